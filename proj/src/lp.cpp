#include "mobandit/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mobandit/errors.hpp"

namespace mob {

namespace {

constexpr int kMaxLpSize = 1024;  // desk scale; guards accidental misuse
constexpr double kPivotTol = 1e-9;

void check_finite(const Vec& v, const char* where) {
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(where) + ": non-finite entry");
}

// Tableau with explicit basis, rhs in the last column, reduced-cost row
// maintained by the pivots themselves.
struct Tableau {
  int m;                           // constraint rows
  int n;                           // columns excluding rhs
  std::vector<Vec> rows;           // m rows of length n+1
  Vec cost;                        // length n+1; cost[n] = -objective value
  std::vector<int> basis;          // m entries
  long iterations = 0;

  void pivot(int r, int c) {
    Vec& prow = rows[r];
    const double inv = 1.0 / prow[c];
    for (double& v : prow) v *= inv;
    prow[c] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      const double f = rows[i][c];
      if (f == 0.0) continue;
      for (int j = 0; j <= n; ++j) rows[i][j] -= f * prow[j];
      rows[i][c] = 0.0;
    }
    const double f = cost[c];
    if (f != 0.0) {
      for (int j = 0; j <= n; ++j) cost[j] -= f * prow[j];
      cost[c] = 0.0;
    }
    basis[r] = c;
  }

  // Minimize cost with Bland's rule: entering = lowest eligible column,
  // leaving = min ratio with lowest basis index on ties.
  // Returns false when unbounded.
  bool run(const std::vector<bool>& allowed) {
    for (;;) {
      if (++iterations > kLpMaxIter) throw NumericError("simplex: iteration cap exceeded");
      int enter = -1;
      for (int j = 0; j < n; ++j) {
        if (allowed[j] && cost[j] < -kLpOptTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double a = rows[i][enter];
        if (a <= kPivotTol) continue;
        const double ratio = rows[i][n] / a;
        if (ratio < best - kPivotTol || (ratio < best + kPivotTol && (leave < 0 || basis[i] < basis[leave]))) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

DenseLpResult solve_dense_lp(const DenseLp& lp) {
  const int nvars = static_cast<int>(lp.objective.size());
  const int ncons = static_cast<int>(lp.constraints.size());
  if (nvars < 1) throw std::invalid_argument("solve_dense_lp: empty objective");
  if (nvars > kMaxLpSize || ncons > kMaxLpSize) throw std::invalid_argument("solve_dense_lp: problem too large");
  check_finite(lp.objective, "solve_dense_lp");
  for (const auto& c : lp.constraints) {
    if (static_cast<int>(c.coeffs.size()) != nvars)
      throw std::invalid_argument("solve_dense_lp: constraint length mismatch");
    check_finite(c.coeffs, "solve_dense_lp");
    if (!std::isfinite(c.rhs)) throw std::invalid_argument("solve_dense_lp: non-finite rhs");
  }

  // Normalized rows: rhs >= 0.
  std::vector<Vec> coeffs(ncons);
  std::vector<Relation> rel(ncons);
  Vec rhs(ncons);
  for (int i = 0; i < ncons; ++i) {
    coeffs[i] = lp.constraints[i].coeffs;
    rel[i] = lp.constraints[i].rel;
    rhs[i] = lp.constraints[i].rhs;
    if (rhs[i] < 0.0) {
      for (double& v : coeffs[i]) v = -v;
      rhs[i] = -rhs[i];
      if (rel[i] == Relation::LessEq)
        rel[i] = Relation::GreaterEq;
      else if (rel[i] == Relation::GreaterEq)
        rel[i] = Relation::LessEq;
    }
  }

  int nslack = 0, nart = 0;
  for (int i = 0; i < ncons; ++i) {
    if (rel[i] != Relation::Equal) ++nslack;
    if (rel[i] != Relation::LessEq) ++nart;
  }

  Tableau t;
  t.m = ncons;
  t.n = nvars + nslack + nart;
  t.rows.assign(ncons, Vec(t.n + 1, 0.0));
  t.basis.assign(ncons, -1);
  const int slack0 = nvars;
  const int art0 = nvars + nslack;
  std::vector<bool> artificial(t.n, false);
  {
    int si = 0, ai = 0;
    for (int i = 0; i < ncons; ++i) {
      Vec& row = t.rows[i];
      std::copy(coeffs[i].begin(), coeffs[i].end(), row.begin());
      row[t.n] = rhs[i];
      if (rel[i] == Relation::LessEq) {
        row[slack0 + si] = 1.0;
        t.basis[i] = slack0 + si;
        ++si;
      } else {
        if (rel[i] == Relation::GreaterEq) {
          row[slack0 + si] = -1.0;
          ++si;
        }
        row[art0 + ai] = 1.0;
        t.basis[i] = art0 + ai;
        artificial[art0 + ai] = true;
        ++ai;
      }
    }
  }

  std::vector<bool> allow_all(t.n, true);
  if (nart > 0) {
    // Phase 1: minimize the artificial total.
    t.cost.assign(t.n + 1, 0.0);
    for (int j = art0; j < t.n; ++j) t.cost[j] = 1.0;
    for (int i = 0; i < ncons; ++i)
      if (artificial[t.basis[i]])
        for (int j = 0; j <= t.n; ++j) t.cost[j] -= t.rows[i][j];
    if (!t.run(allow_all)) throw NumericError("simplex: phase 1 unbounded");
    if (-t.cost[t.n] > kLpFeasTol) return {LpStatus::Infeasible, 0.0, {}};

    // Remove lingering artificials from the basis; drop redundant rows.
    for (int i = 0; i < t.m;) {
      if (!artificial[t.basis[i]]) {
        ++i;
        continue;
      }
      int col = -1;
      for (int j = 0; j < art0; ++j)
        if (std::fabs(t.rows[i][j]) > kPivotTol) {
          col = j;
          break;
        }
      if (col >= 0) {
        t.pivot(i, col);
        ++i;
      } else {
        t.rows.erase(t.rows.begin() + i);
        t.basis.erase(t.basis.begin() + i);
        --t.m;
      }
    }
  }

  // Phase 2 on the real objective (minimize its negation).
  t.cost.assign(t.n + 1, 0.0);
  for (int j = 0; j < nvars; ++j) t.cost[j] = -lp.objective[j];
  for (int i = 0; i < t.m; ++i) {
    const double f = t.cost[t.basis[i]];
    if (f != 0.0)
      for (int j = 0; j <= t.n; ++j) t.cost[j] -= f * t.rows[i][j];
  }
  std::vector<bool> allowed(t.n, true);
  for (int j = 0; j < t.n; ++j)
    if (artificial[j]) allowed[j] = false;
  if (!t.run(allowed)) throw NumericError("simplex: unbounded objective");

  Vec x(nvars, 0.0);
  for (int i = 0; i < t.m; ++i)
    if (t.basis[i] < nvars) x[t.basis[i]] = t.rows[i][t.n];
  double value = 0.0;
  for (int j = 0; j < nvars; ++j) value += lp.objective[j] * x[j];
  return {LpStatus::Optimal, value, std::move(x)};
}

namespace {

void check_payoff(const Mat& payoff, const char* where) {
  if (payoff.rows < 1 || payoff.cols < 1) throw std::invalid_argument(std::string(where) + ": empty payoff");
  for (double v : payoff.data)
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(where) + ": non-finite payoff entry");
}

// Clip pivot noise off the returned simplex weights.
Vec cleaned_weights(Vec beta) {
  double sum = 0.0;
  for (double& b : beta) {
    if (b < 0.0) {
      if (b < -kLpFeasTol) throw NumericError("simplex weights went negative");
      b = 0.0;
    }
    sum += b;
  }
  if (std::fabs(sum - 1.0) > 1e-6) throw NumericError("simplex weights do not sum to one");
  for (double& b : beta) b /= sum;
  return beta;
}

}  // namespace

LpSolution maximin_over_simplex(const Mat& payoff) {
  check_payoff(payoff, "maximin_over_simplex");
  const int nrows = payoff.rows;
  const int ncols = payoff.cols;

  // Shift all entries so the auxiliary level variable stays positive at
  // the optimum; the maximin value shifts back by the same constant.
  double lo = payoff.data[0];
  for (double v : payoff.data) lo = std::min(lo, v);
  const double shift = 1.0 - lo;

  DenseLp lp;
  lp.objective.assign(ncols + 1, 0.0);
  lp.objective[ncols] = 1.0;
  for (int r = 0; r < nrows; ++r) {
    LpConstraint c;
    c.coeffs.assign(ncols + 1, 0.0);
    for (int j = 0; j < ncols; ++j) c.coeffs[j] = payoff(r, j) + shift;
    c.coeffs[ncols] = -1.0;
    c.rel = Relation::GreaterEq;
    c.rhs = 0.0;
    lp.constraints.push_back(std::move(c));
  }
  LpConstraint sum;
  sum.coeffs.assign(ncols + 1, 0.0);
  for (int j = 0; j < ncols; ++j) sum.coeffs[j] = 1.0;
  sum.rel = Relation::Equal;
  sum.rhs = 1.0;
  lp.constraints.push_back(std::move(sum));

  DenseLpResult res = solve_dense_lp(lp);
  if (res.status != LpStatus::Optimal) throw NumericError("maximin_over_simplex: LP reported infeasible");

  LpSolution sol;
  sol.status = LpStatus::Optimal;
  sol.weights = cleaned_weights(Vec(res.x.begin(), res.x.begin() + ncols));
  double worst = std::numeric_limits<double>::infinity();
  for (int r = 0; r < nrows; ++r) {
    double v = 0.0;
    for (int j = 0; j < ncols; ++j) v += payoff(r, j) * sol.weights[j];
    worst = std::min(worst, v);
  }
  sol.value = worst;
  return sol;
}

LpSolution dominance_margin(const Mat& payoff, const Vec& target) {
  check_payoff(payoff, "dominance_margin");
  if (static_cast<int>(target.size()) != payoff.rows)
    throw std::invalid_argument("dominance_margin: target length mismatch");
  check_finite(target, "dominance_margin");
  const int nrows = payoff.rows;
  const int ncols = payoff.cols;

  DenseLp lp;
  lp.objective.assign(ncols, 0.0);
  for (int j = 0; j < ncols; ++j)
    for (int r = 0; r < nrows; ++r) lp.objective[j] += payoff(r, j);
  for (int r = 0; r < nrows; ++r) {
    LpConstraint c;
    c.coeffs.assign(ncols, 0.0);
    for (int j = 0; j < ncols; ++j) c.coeffs[j] = payoff(r, j);
    c.rel = Relation::GreaterEq;
    c.rhs = target[r];
    lp.constraints.push_back(std::move(c));
  }
  LpConstraint sum;
  sum.coeffs.assign(ncols, 1.0);
  sum.rel = Relation::Equal;
  sum.rhs = 1.0;
  lp.constraints.push_back(std::move(sum));

  DenseLpResult res = solve_dense_lp(lp);
  LpSolution sol;
  if (res.status == LpStatus::Infeasible) {
    sol.status = LpStatus::Infeasible;
    sol.value = std::numeric_limits<double>::quiet_NaN();
    return sol;
  }
  sol.status = LpStatus::Optimal;
  sol.weights = cleaned_weights(std::move(res.x));
  double surplus = 0.0;
  for (int r = 0; r < nrows; ++r) {
    double v = -target[r];
    for (int j = 0; j < ncols; ++j) v += payoff(r, j) * sol.weights[j];
    surplus += v;
  }
  sol.value = surplus;
  return sol;
}

}  // namespace mob
