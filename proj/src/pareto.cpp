#include "mobandit/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mobandit/errors.hpp"

namespace mob {

namespace {

void check_table(const RewardTable& t, const char* where) {
  if (t.num_arms() < 1 || t.num_objectives() < 1) throw std::invalid_argument(std::string(where) + ": empty table");
  for (double v : t.values.data)
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(where) + ": non-finite reward");
}

void check_arm(const RewardTable& t, int arm, const char* where) {
  if (arm < 0 || arm >= t.num_arms()) throw std::invalid_argument(std::string(where) + ": arm index out of range");
}

// big >= small - tol everywhere and big > small + tol somewhere.
bool dominates_tol(std::span<const double> big, std::span<const double> small) {
  bool strict = false;
  for (size_t i = 0; i < big.size(); ++i) {
    if (big[i] < small[i] - kDomTol) return false;
    if (big[i] > small[i] + kDomTol) strict = true;
  }
  return strict;
}

Mat transposed(const Mat& m) {
  Mat t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

// Unclamped max-min row difference over the given front.
double raw_pareto_gap(const RewardTable& t, const FrontSet& front, int arm) {
  double best = -std::numeric_limits<double>::infinity();
  for (int other : front.members) {
    double worst = std::numeric_limits<double>::infinity();
    for (int ell = 0; ell < t.num_objectives(); ++ell)
      worst = std::min(worst, t.values(other, ell) - t.values(arm, ell));
    best = std::max(best, worst);
  }
  return best;
}

double snap(double gap) { return gap <= kDomTol ? 0.0 : gap; }

// Maximin of column differences (row other - row arm) over all arms.
double raw_maximin_gap(const RewardTable& t, int arm) {
  const int k = t.num_arms();
  const int l = t.num_objectives();
  Mat payoff(l, k);
  for (int other = 0; other < k; ++other)
    for (int ell = 0; ell < l; ++ell) payoff(ell, other) = t.values(other, ell) - t.values(arm, ell);
  return maximin_over_simplex(payoff).value;
}

}  // namespace

bool FrontSet::contains(int arm) const { return std::binary_search(members.begin(), members.end(), arm); }

bool dominates(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw std::invalid_argument("dominates: length mismatch");
  bool strict = false;
  for (size_t i = 0; i < u.size(); ++i) {
    if (v[i] > u[i]) return false;
    if (u[i] > v[i]) strict = true;
  }
  return strict;
}

FrontSet pareto_front(const RewardTable& t) {
  check_table(t, "pareto_front");
  FrontSet front;
  front.kind = FrontKind::Pareto;
  const int k = t.num_arms();
  for (int a = 0; a < k; ++a) {
    bool dominated = false;
    for (int b = 0; b < k && !dominated; ++b)
      if (b != a && dominates_tol(t.row(b), t.row(a))) dominated = true;
    if (!dominated) front.members.push_back(a);
  }
  return front;
}

FrontSet effective_front(const RewardTable& t) {
  check_table(t, "effective_front");
  FrontSet front;
  front.kind = FrontKind::Effective;
  const Mat payoff = transposed(t.values);
  const int k = t.num_arms();
  for (int a = 0; a < k; ++a) {
    const Vec target(t.row(a).begin(), t.row(a).end());
    const LpSolution sol = dominance_margin(payoff, target);
    if (sol.status == LpStatus::Infeasible || sol.value <= kDomTol) front.members.push_back(a);
  }
  return front;
}

double pareto_gap(const RewardTable& t, int arm) {
  check_table(t, "pareto_gap");
  check_arm(t, arm, "pareto_gap");
  return snap(raw_pareto_gap(t, pareto_front(t), arm));
}

double effective_gap(const RewardTable& t, int arm) {
  check_table(t, "effective_gap");
  check_arm(t, arm, "effective_gap");
  // The one-hot candidates are exact arithmetic; the LP handles the rest
  // of the hull. The true maximin is an upper bound of both.
  const double floor = raw_pareto_gap(t, pareto_front(t), arm);
  return snap(std::max(0.0, std::max(raw_maximin_gap(t, arm), floor)));
}

std::vector<double> effective_gaps(const RewardTable& t) {
  check_table(t, "effective_gaps");
  const FrontSet front = pareto_front(t);
  std::vector<double> gaps(t.num_arms());
  for (int a = 0; a < t.num_arms(); ++a) {
    const double floor = raw_pareto_gap(t, front, a);
    gaps[a] = snap(std::max(0.0, std::max(raw_maximin_gap(t, a), floor)));
  }
  return gaps;
}

std::vector<int> scalarized_argmax(const RewardTable& t, const Vec& weights) {
  check_table(t, "scalarized_argmax");
  if (static_cast<int>(weights.size()) != t.num_objectives())
    throw std::invalid_argument("scalarized_argmax: weight length mismatch");
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < -kLpOptTol) throw std::invalid_argument("scalarized_argmax: negative weight");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > kLpOptTol) throw std::invalid_argument("scalarized_argmax: weights must sum to one");

  const int k = t.num_arms();
  Vec score(k);
  double best = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < k; ++a) {
    score[a] = dot(t.row(a), weights);
    best = std::max(best, score[a]);
  }
  std::vector<int> arg;
  for (int a = 0; a < k; ++a)
    if (score[a] >= best - kLpOptTol) arg.push_back(a);
  return arg;
}

std::optional<Vec> weight_for_arm(const RewardTable& t, int arm) {
  check_table(t, "weight_for_arm");
  check_arm(t, arm, "weight_for_arm");
  const int k = t.num_arms();
  const int l = t.num_objectives();
  if (k == 1) return Vec(l, 1.0 / l);

  // max over simplex weights of the worst margin against any arm; a
  // nonnegative optimum certifies the scalarized maximum.
  Mat margins(k, l);
  for (int b = 0; b < k; ++b)
    for (int ell = 0; ell < l; ++ell) margins(b, ell) = t.values(arm, ell) - t.values(b, ell);
  const LpSolution sol = maximin_over_simplex(margins);
  if (sol.value < -kLpOptTol) return std::nullopt;
  return sol.weights;
}

}  // namespace mob
