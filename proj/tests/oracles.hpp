#pragma once
#include <optional>
#include <utility>
#include <vector>

#include "mobandit/linalg.hpp"
#include "mobandit/lp.hpp"
#include "mobandit/pareto.hpp"
#include "mobandit/policies.hpp"
#include "mobandit/rng.hpp"

// Independent reference computations for the test suites. Everything here
// deliberately avoids the production solve paths: plain Gaussian
// elimination instead of Cholesky, explicit vertex enumeration instead of
// the simplex method, grids instead of LPs.
namespace oracle {

using mob::Mat;
using mob::Vec;

// Gaussian elimination with partial pivoting; empty result when singular.
std::optional<Vec> gauss_solve(Mat a, Vec b);

// Ridge solve (lambda I + sum x x^T) theta = sum x r from raw history.
Vec dense_ridge_solve(const std::vector<Vec>& contexts, const std::vector<double>& rewards, double lambda);

// Brute-force LP oracle: enumerates basic solutions (active-set vertices)
// of max c.x subject to the constraints and x >= 0. The feasible region
// must be bounded. Returns nullopt when infeasible.
std::optional<std::pair<double, Vec>> vertex_enum_lp(const mob::DenseLp& lp);

// Exact maximin over the simplex via vertex enumeration.
double exact_maximin(const Mat& payoff);

// Exact dominance margin via vertex enumeration; nullopt = infeasible.
std::optional<double> exact_margin(const Mat& payoff, const Vec& target);

// Effective-front membership decided by the exact margin at mob::kDomTol.
bool exact_effective_member(const mob::RewardTable& table, int arm);

// Exact effective gap: clamped maximin of row differences over all arms.
double exact_effective_gap(const mob::RewardTable& table, int arm);

// Grid over the (K-1)-simplex with the given step (K <= 3); lower bound
// of the true maximin.
double grid_maximin(const Mat& payoff, double step);

// Grid over weight vectors (L <= 3); upper bound of the true maximin by
// minimax duality, computed for every arm of the table at once.
std::vector<double> dual_grid_gaps(const mob::RewardTable& table, double step);

// Reference single-objective policies sharing the Rng draw contract of
// the production steps (d normals, then one index draw).
struct RefLinearTs {
  int dim;
  mob::PolicyConfig config;
  Mat gram;
  Vec moment;
  long rounds = 0;

  RefLinearTs(int dim, const mob::PolicyConfig& config);
  int step(const Mat& contexts, mob::Rng& rng);
  void update(std::span<const double> context, double reward);
};

struct RefLinearUcb {
  int dim;
  mob::PolicyConfig config;
  Mat gram;
  Vec moment;
  long rounds = 0;

  RefLinearUcb(int dim, const mob::PolicyConfig& config);
  int step(const Mat& contexts, mob::Rng& rng);
  void update(std::span<const double> context, double reward);
};

// Uniform table entries in [-1, 1].
mob::RewardTable random_table(mob::Rng& rng, int num_arms, int num_objectives);

// Uniform point on the weight simplex.
Vec random_simplex_point(mob::Rng& rng, int dim);

// P(standard normal >= z)
double normal_tail(double z);

}  // namespace oracle
