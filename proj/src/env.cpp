#include "mobandit/env.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mobandit/errors.hpp"

namespace mob {

std::string context_mode_name(ContextMode mode) {
  return mode == ContextMode::PerRound ? "per_round" : "fixed";
}

ContextMode context_mode_from_name(const std::string& name) {
  if (name == "per_round") return ContextMode::PerRound;
  if (name == "fixed") return ContextMode::Fixed;
  throw ConfigError("unknown context mode: " + name);
}

namespace {

Vec unit_sphere_point(int dim, Rng& rng) {
  Vec v(dim);
  for (;;) {
    double norm2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      v[i] = rng.normal();
      norm2 += v[i] * v[i];
    }
    if (norm2 > 0.0) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (double& x : v) x *= inv;
      return v;
    }
  }
}

// Uniform on the unit ball: normal direction, radius U^(1/d).
void fill_ball_row(Mat& contexts, int row, Rng& rng) {
  const int d = contexts.cols;
  Vec dir = unit_sphere_point(d, rng);
  const double radius = std::pow(rng.uniform(), 1.0 / d);
  for (int j = 0; j < d; ++j) contexts(row, j) = radius * dir[j];
}

RoundOutcome make_outcome(const EnvSpec& env, Rng& rng) {
  RoundOutcome out;
  out.contexts = Mat(env.num_arms, env.dim);
  for (int a = 0; a < env.num_arms; ++a) fill_ball_row(out.contexts, a, rng);
  Mat table(env.num_arms, env.num_objectives);
  for (int a = 0; a < env.num_arms; ++a)
    for (int ell = 0; ell < env.num_objectives; ++ell)
      table(a, ell) = dot(out.contexts.row(a), env.true_params[ell]);
  out.true_table = RewardTable(std::move(table));
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw NumericError("format_double failed");
  return std::string(buf, end);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("bad number: " + s);
  return v;
}

}  // namespace

EnvSpec gen_env(std::uint64_t seed, int num_arms, int dim, int num_objectives, double noise_sigma,
                ContextMode mode) {
  if (num_arms < 1 || dim < 1 || num_objectives < 1) throw ConfigError("gen_env: dimensions must be positive");
  if (noise_sigma < 0.0) throw ConfigError("gen_env: noise_sigma must be nonnegative");
  EnvSpec env;
  env.seed = seed;
  env.num_arms = num_arms;
  env.dim = dim;
  env.num_objectives = num_objectives;
  env.noise_sigma = noise_sigma;
  env.context_mode = mode;
  Rng rng(derive_seed(seed, {stream::kEnv}));
  env.true_params.reserve(num_objectives);
  for (int ell = 0; ell < num_objectives; ++ell) env.true_params.push_back(unit_sphere_point(dim, rng));
  return env;
}

RoundOutcome gen_contexts(const EnvSpec& env, long round, Rng& rng) {
  if (round < 1) throw std::invalid_argument("gen_contexts: round must be positive");
  if (env.context_mode == ContextMode::Fixed) {
    Rng fixed(derive_seed(env.seed, {stream::kContexts}));
    return make_outcome(env, fixed);
  }
  return make_outcome(env, rng);
}

Vec pull(const EnvSpec& env, const RoundOutcome& outcome, int arm, Rng& rng) {
  if (arm < 0 || arm >= env.num_arms) throw std::invalid_argument("pull: arm index out of range");
  Vec reward(env.num_objectives);
  for (int ell = 0; ell < env.num_objectives; ++ell)
    reward[ell] = outcome.true_table.values(arm, ell) + env.noise_sigma * rng.normal();
  return reward;
}

void save_env(const EnvSpec& env, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("save_env: cannot write " + path);
  out << "mobandit-env 1\n";
  out << "seed " << env.seed << "\n";
  out << "num_arms " << env.num_arms << "\n";
  out << "dim " << env.dim << "\n";
  out << "num_objectives " << env.num_objectives << "\n";
  out << "noise_sigma " << format_double(env.noise_sigma) << "\n";
  out << "context_mode " << context_mode_name(env.context_mode) << "\n";
  for (int ell = 0; ell < env.num_objectives; ++ell) {
    out << "theta";
    for (double v : env.true_params[ell]) out << ' ' << format_double(v);
    out << "\n";
  }
  if (!out) throw ConfigError("save_env: write failed for " + path);
}

EnvSpec load_env(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("load_env: cannot read " + path);
  std::string header, version;
  in >> header >> version;
  if (header != "mobandit-env" || version != "1") throw ConfigError("load_env: bad header in " + path);

  EnvSpec env;
  std::string key;
  int thetas = 0;
  while (in >> key) {
    if (key == "seed") {
      in >> env.seed;
    } else if (key == "num_arms") {
      in >> env.num_arms;
    } else if (key == "dim") {
      in >> env.dim;
    } else if (key == "num_objectives") {
      in >> env.num_objectives;
    } else if (key == "noise_sigma") {
      std::string v;
      in >> v;
      env.noise_sigma = parse_double(v);
    } else if (key == "context_mode") {
      std::string v;
      in >> v;
      env.context_mode = context_mode_from_name(v);
    } else if (key == "theta") {
      if (env.dim < 1) throw ConfigError("load_env: theta before dim");
      Vec theta(env.dim);
      for (int i = 0; i < env.dim; ++i) {
        std::string v;
        in >> v;
        theta[i] = parse_double(v);
      }
      env.true_params.push_back(std::move(theta));
      ++thetas;
    } else {
      throw ConfigError("load_env: unknown key " + key);
    }
    if (!in) throw ConfigError("load_env: truncated file " + path);
  }
  if (thetas != env.num_objectives) throw ConfigError("load_env: theta count mismatch");
  return env;
}

}  // namespace mob
