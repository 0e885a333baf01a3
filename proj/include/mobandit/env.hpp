#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "mobandit/linalg.hpp"
#include "mobandit/pareto.hpp"
#include "mobandit/rng.hpp"

namespace mob {

enum class ContextMode { PerRound, Fixed };

std::string context_mode_name(ContextMode mode);
ContextMode context_mode_from_name(const std::string& name);

// A synthetic problem instance: unit-norm hidden parameters per objective,
// Gaussian reward noise, per-round or fixed contexts. Immutable after
// generation; the seed alone determines every context and noise draw.
struct EnvSpec {
  std::uint64_t seed = 0;
  int num_arms = 0;
  int dim = 0;
  int num_objectives = 0;
  std::vector<Vec> true_params;  // L unit vectors of length d
  double noise_sigma = 0.0;
  ContextMode context_mode = ContextMode::PerRound;
};

EnvSpec gen_env(std::uint64_t seed, int num_arms, int dim, int num_objectives, double noise_sigma,
                ContextMode mode);

// One round's contexts (unit-ball rows) and exact mean reward table.
struct RoundOutcome {
  Mat contexts;            // K x d, every row norm <= 1
  RewardTable true_table;  // K x L of context . true_param
};

// PerRound mode consumes from rng; Fixed mode regenerates the round-1
// contexts from the environment seed, bit-identically every round.
RoundOutcome gen_contexts(const EnvSpec& env, long round, Rng& rng);

// True mean vector of the arm plus independent N(0, sigma^2) noise per
// objective, drawn from rng.
Vec pull(const EnvSpec& env, const RoundOutcome& outcome, int arm, Rng& rng);

// Plain-text instance files for replay and cross-language comparison.
void save_env(const EnvSpec& env, const std::string& path);
EnvSpec load_env(const std::string& path);

}  // namespace mob
