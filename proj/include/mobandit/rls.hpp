#pragma once
#include <span>
#include <vector>

#include "mobandit/linalg.hpp"
#include "mobandit/rng.hpp"

namespace mob {

// Full refactorization of gram_inv every this many rank-1 updates keeps
// floating-point drift below 1e-8 over 1e4-round runs.
inline constexpr long kInverseRefreshPeriod = 512;

// Ridge-regression sufficient statistics shared by all objectives: one
// Gram matrix, per-objective moment vectors and estimates.
struct RlsState {
  int dim = 0;
  int num_objectives = 0;
  double regularizer = 1.0;
  Mat gram;                     // lambda*I + sum of context outer products
  Mat gram_inv;                 // maintained by rank-1 inverse updates
  std::vector<Vec> moments;     // per objective: sum of context * reward
  std::vector<Vec> estimates;   // per objective: gram_inv * moments
  long rounds_seen = 0;
};

RlsState rls_init(int dim, int num_objectives, double regularizer);

// Absorb one (context, reward vector) observation.
void rls_update(RlsState& state, std::span<const double> context, std::span<const double> rewards);

// One posterior sample per (objective, sample) slot, drawn objective-major:
// estimate + scale * chol(gram_inv) * g.
struct SampleBlock {
  int num_samples = 0;
  int num_objectives = 0;
  int dim = 0;
  std::vector<Vec> samples;  // indexed objective * num_samples + sample

  const Vec& sample(int objective, int m) const { return samples[static_cast<size_t>(objective) * num_samples + m]; }
};

SampleBlock sample_block(const RlsState& state, double scale, int num_samples, Rng& rng);

// sqrt(x^T gram_inv x)
double mahalanobis_norm(const RlsState& state, std::span<const double> context);

}  // namespace mob
