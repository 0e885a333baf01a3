#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracle {

namespace {
constexpr double kFeasTol = 1e-9;
constexpr double kSingularTol = 1e-10;
}  // namespace

std::optional<Vec> gauss_solve(Mat a, Vec b) {
  const int n = a.rows;
  if (a.cols != n || static_cast<int>(b.size()) != n) throw std::invalid_argument("gauss_solve: shape mismatch");
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(pivot, col))) pivot = r;
    if (std::fabs(a(pivot, col)) <= kSingularTol) return std::nullopt;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
      std::swap(b[col], b[pivot]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }
  Vec x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

Vec dense_ridge_solve(const std::vector<Vec>& contexts, const std::vector<double>& rewards, double lambda) {
  if (contexts.size() != rewards.size()) throw std::invalid_argument("dense_ridge_solve: history mismatch");
  const int d = static_cast<int>(contexts.front().size());
  Mat a = Mat::identity(d, lambda);
  Vec b(d, 0.0);
  for (size_t s = 0; s < contexts.size(); ++s) {
    for (int i = 0; i < d; ++i) {
      b[i] += contexts[s][i] * rewards[s];
      for (int j = 0; j < d; ++j) a(i, j) += contexts[s][i] * contexts[s][j];
    }
  }
  auto x = gauss_solve(std::move(a), std::move(b));
  if (!x) throw std::runtime_error("dense_ridge_solve: singular system");
  return *x;
}

namespace {

struct Row {
  Vec coeffs;
  mob::Relation rel;
  double rhs;
};

bool feasible_point(const std::vector<Row>& rows, const Vec& x) {
  for (double v : x)
    if (v < -kFeasTol) return false;
  for (const auto& row : rows) {
    double lhs = 0.0;
    for (size_t j = 0; j < x.size(); ++j) lhs += row.coeffs[j] * x[j];
    switch (row.rel) {
      case mob::Relation::LessEq:
        if (lhs > row.rhs + kFeasTol) return false;
        break;
      case mob::Relation::GreaterEq:
        if (lhs < row.rhs - kFeasTol) return false;
        break;
      case mob::Relation::Equal:
        if (std::fabs(lhs - row.rhs) > kFeasTol) return false;
        break;
    }
  }
  return true;
}

}  // namespace

std::optional<std::pair<double, Vec>> vertex_enum_lp(const mob::DenseLp& lp) {
  const int n = static_cast<int>(lp.objective.size());
  std::vector<Row> rows;
  for (const auto& c : lp.constraints) rows.push_back({c.coeffs, c.rel, c.rhs});

  // Candidate active rows: every constraint plus each nonnegativity bound.
  std::vector<int> equalities, inequalities;
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    if (rows[i].rel == mob::Relation::Equal)
      equalities.push_back(i);
    else
      inequalities.push_back(i);
  }
  const int nbounds = n;
  const int pick = n - static_cast<int>(equalities.size());
  if (pick < 0) throw std::invalid_argument("vertex_enum_lp: too many equalities");
  const int pool = static_cast<int>(inequalities.size()) + nbounds;

  std::optional<std::pair<double, Vec>> best;
  std::vector<int> comb(pick);
  for (int i = 0; i < pick; ++i) comb[i] = i;

  auto try_active_set = [&]() {
    Mat a(n, n, 0.0);
    Vec b(n, 0.0);
    int r = 0;
    for (int idx : equalities) {
      for (int j = 0; j < n; ++j) a(r, j) = rows[idx].coeffs[j];
      b[r] = rows[idx].rhs;
      ++r;
    }
    for (int pos = 0; pos < pick; ++pos) {
      const int c = comb[pos];
      if (c < static_cast<int>(inequalities.size())) {
        const Row& row = rows[inequalities[c]];
        for (int j = 0; j < n; ++j) a(r, j) = row.coeffs[j];
        b[r] = row.rhs;
      } else {
        a(r, c - static_cast<int>(inequalities.size())) = 1.0;
        b[r] = 0.0;
      }
      ++r;
    }
    const auto x = gauss_solve(std::move(a), std::move(b));
    if (!x || !feasible_point(rows, *x)) return;
    double value = 0.0;
    for (int j = 0; j < n; ++j) value += lp.objective[j] * (*x)[j];
    if (!best || value > best->first) best = {value, *x};
  };

  if (pick == 0) {
    try_active_set();
    return best;
  }
  for (;;) {
    try_active_set();
    int i = pick - 1;
    while (i >= 0 && comb[i] == pool - pick + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < pick; ++j) comb[j] = comb[j - 1] + 1;
  }
  return best;
}

double exact_maximin(const Mat& payoff) {
  const int nrows = payoff.rows;
  const int ncols = payoff.cols;
  double lo = payoff.data[0];
  for (double v : payoff.data) lo = std::min(lo, v);
  const double shift = 1.0 - lo;

  mob::DenseLp lp;
  lp.objective.assign(ncols + 1, 0.0);
  lp.objective[ncols] = 1.0;
  for (int r = 0; r < nrows; ++r) {
    mob::LpConstraint c;
    c.coeffs.assign(ncols + 1, 0.0);
    for (int j = 0; j < ncols; ++j) c.coeffs[j] = payoff(r, j) + shift;
    c.coeffs[ncols] = -1.0;
    c.rel = mob::Relation::GreaterEq;
    c.rhs = 0.0;
    lp.constraints.push_back(std::move(c));
  }
  mob::LpConstraint sum;
  sum.coeffs.assign(ncols + 1, 0.0);
  for (int j = 0; j < ncols; ++j) sum.coeffs[j] = 1.0;
  sum.rel = mob::Relation::Equal;
  sum.rhs = 1.0;
  lp.constraints.push_back(std::move(sum));

  const auto res = vertex_enum_lp(lp);
  if (!res) throw std::runtime_error("exact_maximin: enumeration found no vertex");
  return res->first - shift;
}

std::optional<double> exact_margin(const Mat& payoff, const Vec& target) {
  const int nrows = payoff.rows;
  const int ncols = payoff.cols;
  mob::DenseLp lp;
  lp.objective.assign(ncols, 0.0);
  for (int j = 0; j < ncols; ++j)
    for (int r = 0; r < nrows; ++r) lp.objective[j] += payoff(r, j);
  for (int r = 0; r < nrows; ++r) {
    mob::LpConstraint c;
    c.coeffs.assign(ncols, 0.0);
    for (int j = 0; j < ncols; ++j) c.coeffs[j] = payoff(r, j);
    c.rel = mob::Relation::GreaterEq;
    c.rhs = target[r];
    lp.constraints.push_back(std::move(c));
  }
  mob::LpConstraint sum;
  sum.coeffs.assign(ncols, 1.0);
  sum.rel = mob::Relation::Equal;
  sum.rhs = 1.0;
  lp.constraints.push_back(std::move(sum));

  const auto res = vertex_enum_lp(lp);
  if (!res) return std::nullopt;
  double total = res->first;
  for (int r = 0; r < nrows; ++r) total -= target[r];
  return total;
}

bool exact_effective_member(const mob::RewardTable& table, int arm) {
  const int k = table.num_arms();
  const int l = table.num_objectives();
  Mat payoff(l, k);
  for (int a = 0; a < k; ++a)
    for (int ell = 0; ell < l; ++ell) payoff(ell, a) = table.values(a, ell);
  const Vec target(table.row(arm).begin(), table.row(arm).end());
  const auto margin = exact_margin(payoff, target);
  return !margin || *margin <= mob::kDomTol;
}

double exact_effective_gap(const mob::RewardTable& table, int arm) {
  const int k = table.num_arms();
  const int l = table.num_objectives();
  Mat payoff(l, k);
  for (int a = 0; a < k; ++a)
    for (int ell = 0; ell < l; ++ell) payoff(ell, a) = table.values(a, ell) - table.values(arm, ell);
  return std::max(0.0, exact_maximin(payoff));
}

double grid_maximin(const Mat& payoff, double step) {
  const int nrows = payoff.rows;
  const int ncols = payoff.cols;
  if (ncols > 3) throw std::invalid_argument("grid_maximin: too many columns for a grid");
  const long n = std::lround(1.0 / step);
  Vec beta(ncols, 0.0);
  double best = -std::numeric_limits<double>::infinity();

  auto eval = [&]() {
    double worst = std::numeric_limits<double>::infinity();
    for (int r = 0; r < nrows; ++r) {
      double v = 0.0;
      for (int j = 0; j < ncols; ++j) v += payoff(r, j) * beta[j];
      worst = std::min(worst, v);
    }
    best = std::max(best, worst);
  };

  if (ncols == 1) {
    beta[0] = 1.0;
    eval();
  } else if (ncols == 2) {
    for (long i = 0; i <= n; ++i) {
      beta[0] = static_cast<double>(i) / n;
      beta[1] = 1.0 - beta[0];
      eval();
    }
  } else {
    for (long i = 0; i <= n; ++i) {
      beta[0] = static_cast<double>(i) / n;
      for (long j = 0; j <= n - i; ++j) {
        beta[1] = static_cast<double>(j) / n;
        beta[2] = 1.0 - beta[0] - beta[1];
        eval();
      }
    }
  }
  return best;
}

std::vector<double> dual_grid_gaps(const mob::RewardTable& table, double step) {
  const int k = table.num_arms();
  const int l = table.num_objectives();
  if (l > 3) throw std::invalid_argument("dual_grid_gaps: too many objectives for a grid");
  const long n = std::lround(1.0 / step);
  std::vector<double> gaps(k, std::numeric_limits<double>::infinity());
  Vec w(l, 0.0);

  auto eval = [&]() {
    double smax = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < k; ++a) smax = std::max(smax, mob::dot(table.row(a), w));
    for (int a = 0; a < k; ++a) gaps[a] = std::min(gaps[a], smax - mob::dot(table.row(a), w));
  };

  if (l == 1) {
    w[0] = 1.0;
    eval();
  } else if (l == 2) {
    for (long i = 0; i <= n; ++i) {
      w[0] = static_cast<double>(i) / n;
      w[1] = 1.0 - w[0];
      eval();
    }
  } else {
    for (long i = 0; i <= n; ++i) {
      w[0] = static_cast<double>(i) / n;
      for (long j = 0; j <= n - i; ++j) {
        w[1] = static_cast<double>(j) / n;
        w[2] = 1.0 - w[0] - w[1];
        eval();
      }
    }
  }
  return gaps;
}

namespace {

// Local Cholesky and inverse, separate from the production routines.
Mat ref_cholesky(const Mat& a) {
  const int n = a.rows;
  Mat l(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j)
        l(i, i) = std::sqrt(s);
      else
        l(i, j) = s / l(j, j);
    }
  return l;
}

Mat ref_inverse(const Mat& a) {
  const int n = a.rows;
  Mat inv(n, n);
  for (int j = 0; j < n; ++j) {
    Vec e(n, 0.0);
    e[j] = 1.0;
    const auto col = gauss_solve(a, e);
    if (!col) throw std::runtime_error("ref_inverse: singular");
    for (int i = 0; i < n; ++i) inv(i, j) = (*col)[i];
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      const double v = 0.5 * (inv(i, j) + inv(j, i));
      inv(i, j) = v;
      inv(j, i) = v;
    }
  return inv;
}

int tolerant_argmax_pick(const Vec& scores, mob::Rng& rng) {
  const double best = *std::max_element(scores.begin(), scores.end());
  std::vector<int> members;
  for (int a = 0; a < static_cast<int>(scores.size()); ++a)
    if (scores[a] >= best - mob::kDomTol) members.push_back(a);
  return members[rng.index(members.size())];
}

}  // namespace

RefLinearTs::RefLinearTs(int dim, const mob::PolicyConfig& config)
    : dim(dim), config(config), gram(Mat::identity(dim, config.regularizer)), moment(dim, 0.0) {}

int RefLinearTs::step(const Mat& contexts, mob::Rng& rng) {
  const long t = rounds + 1;
  const double c = config.scale_mode.time_varying ? mob::confidence_radius(t, config, dim, 1)
                                                  : config.scale_mode.value;
  const Mat inv = ref_inverse(gram);
  const auto theta = gauss_solve(gram, moment);
  const Mat chol = ref_cholesky(inv);
  Vec g(dim);
  for (int i = 0; i < dim; ++i) g[i] = rng.normal();
  Vec sample = *theta;
  for (int i = 0; i < dim; ++i) {
    double acc = 0.0;
    for (int j = 0; j <= i; ++j) acc += chol(i, j) * g[j];
    sample[i] += c * acc;
  }
  Vec scores(contexts.rows);
  for (int a = 0; a < contexts.rows; ++a) scores[a] = mob::dot(contexts.row(a), sample);
  return tolerant_argmax_pick(scores, rng);
}

void RefLinearTs::update(std::span<const double> context, double reward) {
  for (int i = 0; i < dim; ++i) {
    moment[i] += context[i] * reward;
    for (int j = 0; j < dim; ++j) gram(i, j) += context[i] * context[j];
  }
  ++rounds;
}

RefLinearUcb::RefLinearUcb(int dim, const mob::PolicyConfig& config)
    : dim(dim), config(config), gram(Mat::identity(dim, config.regularizer)), moment(dim, 0.0) {}

int RefLinearUcb::step(const Mat& contexts, mob::Rng& rng) {
  const long t = rounds + 1;
  const double c = mob::confidence_radius(t, config, dim, 1);
  const Mat inv = ref_inverse(gram);
  const auto theta = gauss_solve(gram, moment);
  Vec scores(contexts.rows);
  for (int a = 0; a < contexts.rows; ++a) {
    const auto x = contexts.row(a);
    const Vec ix = mob::matvec(inv, x);
    scores[a] = mob::dot(x, *theta) + c * std::sqrt(std::max(0.0, mob::dot(x, ix)));
  }
  return tolerant_argmax_pick(scores, rng);
}

void RefLinearUcb::update(std::span<const double> context, double reward) {
  for (int i = 0; i < dim; ++i) {
    moment[i] += context[i] * reward;
    for (int j = 0; j < dim; ++j) gram(i, j) += context[i] * context[j];
  }
  ++rounds;
}

mob::RewardTable random_table(mob::Rng& rng, int num_arms, int num_objectives) {
  Mat m(num_arms, num_objectives);
  for (double& v : m.data) v = 2.0 * rng.uniform() - 1.0;
  return mob::RewardTable(std::move(m));
}

Vec random_simplex_point(mob::Rng& rng, int dim) {
  Vec w(dim);
  double sum = 0.0;
  for (double& v : w) {
    v = -std::log(1.0 - rng.uniform());
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

double normal_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

}  // namespace oracle
