#pragma once
#include <optional>
#include <span>
#include <vector>

#include "mobandit/linalg.hpp"
#include "mobandit/lp.hpp"

namespace mob {

// One mean reward vector per arm (rows = arms, columns = objectives).
struct RewardTable {
  Mat values;

  RewardTable() = default;
  explicit RewardTable(Mat m) : values(std::move(m)) {}

  int num_arms() const { return values.rows; }
  int num_objectives() const { return values.cols; }
  std::span<const double> row(int arm) const { return values.row(arm); }
};

enum class FrontKind { Pareto, Effective };

// Arm indices in ascending order.
struct FrontSet {
  std::vector<int> members;
  FrontKind kind = FrontKind::Pareto;

  bool contains(int arm) const;
};

// True iff v is dominated by u: v <= u everywhere and v < u somewhere.
// Exact comparisons; the front computations below use kDomTol instead.
bool dominates(std::span<const double> u, std::span<const double> v);

// Arms not dominated by any single other arm.
FrontSet pareto_front(const RewardTable& table);

// Arms not strictly dominated by any convex combination of arms' rows.
// Always a subset of pareto_front(table).
FrontSet effective_front(const RewardTable& table);

// Smallest uniform boost making the arm non-dominated by every arm:
//   max over the Pareto front of min over objectives of the row difference.
// Zero for Pareto-optimal arms.
double pareto_gap(const RewardTable& table, int arm);

// Smallest uniform boost making the arm non-dominated by every convex
// combination: the clamped maximin of row differences over the simplex.
// Zero for effective-Pareto-optimal arms; never below pareto_gap.
double effective_gap(const RewardTable& table, int arm);

// All arms at once; shares the Pareto front across arms.
std::vector<double> effective_gaps(const RewardTable& table);

// Every maximizer of weights . row(arm), ascending. Ties within kLpOptTol.
std::vector<int> scalarized_argmax(const RewardTable& table, const Vec& weights);

// A simplex weight vector under which the arm attains the scalarized
// maximum, when one exists.
std::optional<Vec> weight_for_arm(const RewardTable& table, int arm);

}  // namespace mob
