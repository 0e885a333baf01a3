#pragma once
#include <string>

#include "mobandit/pareto.hpp"
#include "mobandit/rls.hpp"
#include "mobandit/rng.hpp"

namespace mob {

enum class Algorithm { MolTs, MolUcb, EpsGreedy };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

// How the posterior sampling scale is set: the per-round confidence
// radius (default) or a fixed constant.
struct ScaleMode {
  bool time_varying = true;
  double value = 0.0;
};

struct PolicyConfig {
  Algorithm algorithm = Algorithm::MolTs;
  double regularizer = 1.0;
  double delta = 0.05;
  double noise_bound = 1.0;
  int num_samples = 0;  // 0 = auto, i.e. min_optimism_samples(L, optimism_p)
  double optimism_p = 0.15;
  ScaleMode scale_mode;
  double epsilon = 0.05;
  long horizon = 10000;
};

void validate(const PolicyConfig& config);

// Smallest sample count per objective that keeps the joint-optimism
// probability at least p: ceil(1 - ln(L) / ln(1 - p)), at least 1.
int min_optimism_samples(int num_objectives, double p);

int resolved_num_samples(const PolicyConfig& config, int num_objectives);

// High-probability radius of the estimate around the truth in the Gram
// norm, uniform over objectives:
//   R sqrt(d log((1 + (t-1)/(lambda d)) / (delta / L))) + sqrt(lambda)
double confidence_radius(long round, const PolicyConfig& config, int dim, int num_objectives);

// Concentration radius of the posterior samples around the estimate:
//   confidence_radius * sqrt(2 d log(2 L M d T / delta))
double sampling_radius(long round, const PolicyConfig& config, int dim, int num_objectives);

// Horizon-level radius entering the regret bound:
//   confidence_radius(T) * (1 + sqrt(2 d log(2 L M d T / delta)))
double total_radius(const PolicyConfig& config, int dim, int num_objectives, long horizon);

// One round's choice plus diagnostics.
struct Decision {
  int arm = -1;
  FrontSet front;                // the set the arm was drawn from
  RewardTable estimated_rewards; // sampled / index / plug-in table
  Vec mahalanobis;               // per-arm context norms in gram_inv
  double scale_c = 0.0;
  int num_samples = 1;
  bool exploration = false;      // eps-greedy random branch
};

// Optimistic multi-sample posterior selection: score each arm and
// objective by the best of num_samples projections, then draw uniformly
// from the effective front of the sampled table.
Decision mol_ts_step(const RlsState& state, const Mat& contexts, const PolicyConfig& config, Rng& rng);

// Per-objective optimistic index, uniform draw from its Pareto front.
Decision mol_ucb_step(const RlsState& state, const Mat& contexts, const PolicyConfig& config, Rng& rng);

// With probability epsilon a uniform arm, else a uniform draw from the
// plug-in Pareto front.
Decision eps_greedy_step(const RlsState& state, const Mat& contexts, const PolicyConfig& config, Rng& rng);

Decision policy_step(const RlsState& state, const Mat& contexts, const PolicyConfig& config, Rng& rng);

// Fraction of trials in which, for every objective, at least one of the
// num_samples projections clears the confidence radius along context.
double joint_optimism_frequency(const RlsState& state, const Vec& context, const PolicyConfig& config,
                                long trials, Rng& rng);

}  // namespace mob
