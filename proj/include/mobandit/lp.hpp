#pragma once
#include <vector>

#include "mobandit/linalg.hpp"

namespace mob {

inline constexpr double kLpFeasTol = 1e-9;
inline constexpr double kLpOptTol = 1e-9;
inline constexpr long kLpMaxIter = 100000;

// Dominance decisions treat margin values in (-kDomTol, kDomTol] as zero,
// separating geometry from floating-point noise at unit reward scale.
inline constexpr double kDomTol = 1e-7;

enum class LpStatus { Optimal, Infeasible };

enum class Relation { LessEq, GreaterEq, Equal };

struct LpConstraint {
  Vec coeffs;
  Relation rel = Relation::LessEq;
  double rhs = 0.0;
};

// maximize objective . x  subject to the constraints and x >= 0
struct DenseLp {
  Vec objective;
  std::vector<LpConstraint> constraints;
};

struct DenseLpResult {
  LpStatus status = LpStatus::Optimal;
  double value = 0.0;
  Vec x;
};

// Two-phase dense simplex with Bland's anti-cycling rule. Throws
// NumericError on unbounded problems or when the iteration cap trips.
DenseLpResult solve_dense_lp(const DenseLp& lp);

// Solution of a simplex-constrained program: the optimal mixing weights
// over payoff columns and the achieved objective.
struct LpSolution {
  double value = 0.0;    // NaN when Infeasible
  Vec weights;           // on the unit simplex; empty when Infeasible
  LpStatus status = LpStatus::Optimal;
};

// max over the unit simplex of the worst payoff row:
//   max_{beta in simplex} min_row (payoff . beta)
// Always Optimal. payoff is rows x columns; beta ranges over columns.
LpSolution maximin_over_simplex(const Mat& payoff);

// Strict convex-combination dominance test:
//   maximize sum_row (payoff . beta - target)  s.t.  payoff . beta >= target,
//   beta in simplex.
// Infeasible when nothing in the column hull covers target; a positive
// value certifies strict dominance, zero only coincidence with a hull point.
LpSolution dominance_margin(const Mat& payoff, const Vec& target);

}  // namespace mob
