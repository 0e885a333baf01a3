#include "mobandit/policies.hpp"

#include <cmath>
#include <stdexcept>

#include "mobandit/errors.hpp"

namespace mob {

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::MolTs: return "mol-ts";
    case Algorithm::MolUcb: return "mol-ucb";
    case Algorithm::EpsGreedy: return "eps-greedy";
  }
  throw std::invalid_argument("algorithm_name: bad enum");
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "mol-ts") return Algorithm::MolTs;
  if (name == "mol-ucb") return Algorithm::MolUcb;
  if (name == "eps-greedy") return Algorithm::EpsGreedy;
  throw ConfigError("unknown algorithm: " + name);
}

void validate(const PolicyConfig& c) {
  if (!(c.regularizer > 0.0)) throw ConfigError("policy: regularizer must be positive");
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw ConfigError("policy: delta must lie in (0,1)");
  if (!(c.noise_bound > 0.0)) throw ConfigError("policy: noise_bound must be positive");
  if (c.num_samples < 0) throw ConfigError("policy: num_samples must be positive or auto");
  if (!(c.optimism_p > 0.0 && c.optimism_p < 1.0)) throw ConfigError("policy: optimism_p must lie in (0,1)");
  if (!c.scale_mode.time_varying && c.scale_mode.value < 0.0)
    throw ConfigError("policy: constant scale must be nonnegative");
  if (!(c.epsilon >= 0.0 && c.epsilon < 1.0)) throw ConfigError("policy: epsilon must lie in [0,1)");
  if (c.horizon < 1) throw ConfigError("policy: horizon must be positive");
}

int min_optimism_samples(int num_objectives, double p) {
  if (num_objectives < 1) throw std::invalid_argument("min_optimism_samples: num_objectives must be positive");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("min_optimism_samples: p must lie in (0,1)");
  const double raw = 1.0 - std::log(static_cast<double>(num_objectives)) / std::log1p(-p);
  return std::max(1, static_cast<int>(std::ceil(raw)));
}

int resolved_num_samples(const PolicyConfig& c, int num_objectives) {
  return c.num_samples > 0 ? c.num_samples : min_optimism_samples(num_objectives, c.optimism_p);
}

double confidence_radius(long round, const PolicyConfig& c, int dim, int num_objectives) {
  const double t = static_cast<double>(round);
  const double arg = (1.0 + (t - 1.0) / (c.regularizer * dim)) / (c.delta / num_objectives);
  return c.noise_bound * std::sqrt(dim * std::log(arg)) + std::sqrt(c.regularizer);
}

double sampling_radius(long round, const PolicyConfig& c, int dim, int num_objectives) {
  const int m = resolved_num_samples(c, num_objectives);
  const double arg = 2.0 * num_objectives * m * dim * static_cast<double>(c.horizon) / c.delta;
  return confidence_radius(round, c, dim, num_objectives) * std::sqrt(2.0 * dim * std::log(arg));
}

double total_radius(const PolicyConfig& c, int dim, int num_objectives, long horizon) {
  const int m = resolved_num_samples(c, num_objectives);
  const double arg = 2.0 * num_objectives * m * dim * static_cast<double>(horizon) / c.delta;
  return confidence_radius(horizon, c, dim, num_objectives) * (1.0 + std::sqrt(2.0 * dim * std::log(arg)));
}

namespace {

void check_contexts(const RlsState& s, const Mat& contexts, const char* where) {
  if (contexts.rows < 1) throw std::invalid_argument(std::string(where) + ": no arms");
  if (contexts.cols != s.dim) throw std::invalid_argument(std::string(where) + ": context dimension mismatch");
}

Vec all_mahalanobis(const RlsState& s, const Mat& contexts) {
  Vec norms(contexts.rows);
  for (int a = 0; a < contexts.rows; ++a) norms[a] = mahalanobis_norm(s, contexts.row(a));
  return norms;
}

RewardTable plugin_table(const RlsState& s, const Mat& contexts) {
  Mat t(contexts.rows, s.num_objectives);
  for (int a = 0; a < contexts.rows; ++a)
    for (int ell = 0; ell < s.num_objectives; ++ell) t(a, ell) = dot(contexts.row(a), s.estimates[ell]);
  return RewardTable(std::move(t));
}

int draw_from(const std::vector<int>& members, Rng& rng) { return members[rng.index(members.size())]; }

}  // namespace

Decision mol_ts_step(const RlsState& s, const Mat& contexts, const PolicyConfig& c, Rng& rng) {
  check_contexts(s, contexts, "mol_ts_step");
  const long round = s.rounds_seen + 1;
  const double scale =
      c.scale_mode.time_varying ? confidence_radius(round, c, s.dim, s.num_objectives) : c.scale_mode.value;
  const int m = resolved_num_samples(c, s.num_objectives);
  const SampleBlock block = sample_block(s, scale, m, rng);

  Mat table(contexts.rows, s.num_objectives);
  for (int a = 0; a < contexts.rows; ++a) {
    const auto x = contexts.row(a);
    for (int ell = 0; ell < s.num_objectives; ++ell) {
      double best = dot(x, block.sample(ell, 0));
      for (int j = 1; j < m; ++j) best = std::max(best, dot(x, block.sample(ell, j)));
      table(a, ell) = best;
    }
  }

  Decision d;
  d.estimated_rewards = RewardTable(std::move(table));
  d.front = effective_front(d.estimated_rewards);
  d.arm = draw_from(d.front.members, rng);
  d.mahalanobis = all_mahalanobis(s, contexts);
  d.scale_c = scale;
  d.num_samples = m;
  return d;
}

Decision mol_ucb_step(const RlsState& s, const Mat& contexts, const PolicyConfig& c, Rng& rng) {
  check_contexts(s, contexts, "mol_ucb_step");
  const long round = s.rounds_seen + 1;
  const double radius = confidence_radius(round, c, s.dim, s.num_objectives);
  const Vec norms = all_mahalanobis(s, contexts);

  Mat table(contexts.rows, s.num_objectives);
  for (int a = 0; a < contexts.rows; ++a)
    for (int ell = 0; ell < s.num_objectives; ++ell)
      table(a, ell) = dot(contexts.row(a), s.estimates[ell]) + radius * norms[a];

  Decision d;
  d.estimated_rewards = RewardTable(std::move(table));
  d.front = pareto_front(d.estimated_rewards);
  d.arm = draw_from(d.front.members, rng);
  d.mahalanobis = norms;
  d.scale_c = radius;
  return d;
}

Decision eps_greedy_step(const RlsState& s, const Mat& contexts, const PolicyConfig& c, Rng& rng) {
  check_contexts(s, contexts, "eps_greedy_step");
  Decision d;
  d.estimated_rewards = plugin_table(s, contexts);
  d.exploration = rng.uniform() < c.epsilon;
  if (d.exploration) {
    d.front.kind = FrontKind::Pareto;
    d.front.members.resize(contexts.rows);
    for (int a = 0; a < contexts.rows; ++a) d.front.members[a] = a;
  } else {
    d.front = pareto_front(d.estimated_rewards);
  }
  d.arm = draw_from(d.front.members, rng);
  d.mahalanobis = all_mahalanobis(s, contexts);
  return d;
}

Decision policy_step(const RlsState& s, const Mat& contexts, const PolicyConfig& c, Rng& rng) {
  switch (c.algorithm) {
    case Algorithm::MolTs: return mol_ts_step(s, contexts, c, rng);
    case Algorithm::MolUcb: return mol_ucb_step(s, contexts, c, rng);
    case Algorithm::EpsGreedy: return eps_greedy_step(s, contexts, c, rng);
  }
  throw std::invalid_argument("policy_step: bad algorithm");
}

double joint_optimism_frequency(const RlsState& s, const Vec& context, const PolicyConfig& c, long trials,
                                Rng& rng) {
  if (trials < 1) throw std::invalid_argument("joint_optimism_frequency: trials must be positive");
  if (static_cast<int>(context.size()) != s.dim)
    throw std::invalid_argument("joint_optimism_frequency: context dimension mismatch");
  const long round = s.rounds_seen + 1;
  const double radius = confidence_radius(round, c, s.dim, s.num_objectives);
  const double threshold = radius * mahalanobis_norm(s, context);
  const int m = resolved_num_samples(c, s.num_objectives);

  long hits = 0;
  for (long trial = 0; trial < trials; ++trial) {
    const SampleBlock block = sample_block(s, radius, m, rng);
    bool all = true;
    for (int ell = 0; ell < s.num_objectives && all; ++ell) {
      const double base = dot(context, s.estimates[ell]);
      bool any = false;
      for (int j = 0; j < m && !any; ++j)
        if (dot(context, block.sample(ell, j)) - base >= threshold) any = true;
      all = any;
    }
    if (all) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace mob
