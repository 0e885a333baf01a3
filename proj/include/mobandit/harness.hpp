#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "mobandit/env.hpp"
#include "mobandit/policies.hpp"

namespace mob {

// One algorithm entry in an experiment: CSV label plus its policy.
struct AlgoSpec {
  std::string label;
  PolicyConfig policy;
};

struct ExperimentConfig {
  std::uint64_t master_seed = 1;
  int num_instances = 10;
  long horizon = 10000;
  int num_arms = 50;
  int dim = 5;
  int num_objectives = 4;
  double noise_sigma = 1.0;
  ContextMode context_mode = ContextMode::PerRound;
  std::vector<AlgoSpec> algos;
  std::string out_dir = "out";
  bool emit_plots = false;
  int threads = 0;  // 0 = hardware concurrency
};

void validate(const ExperimentConfig& config);

// Flat key-value config file, one `key = value` per line, '#' comments.
ExperimentConfig load_experiment_config(const std::string& path);

// Algorithm list entry: mol-ts, mol-ucb, eps-greedy, or mol-ts-m1
// (single-sample ablation of mol-ts).
AlgoSpec algo_spec_from_token(const std::string& token, const PolicyConfig& base);

struct RoundRecord {
  long round = 0;
  int arm = -1;
  double pr_gap = 0.0;
  double epr_gap = 0.0;
  double cum_pr = 0.0;
  double cum_epr = 0.0;
  Vec cum_reward;        // per objective
  double ctx_norm2 = 0.0;  // squared gram_inv norm of the played context
  double scale_c = 0.0;
  double bound = 0.0;    // theoretical curve; only meaningful when has_bound
};

struct RegretLedger {
  std::string algo;
  int instance = 0;
  long horizon = 0;
  int num_objectives = 0;
  std::vector<RoundRecord> rows;
  double delta_max = 0.0;      // max true effective gap seen over rounds and arms
  double potential_sum = 0.0;  // sum of ctx_norm2
  bool has_bound = false;
  bool aborted = false;
  std::string abort_reason;
};

// Theorem-style regret curve at a given round:
//   (1 + 2/(p - delta/T)) * total_radius * sqrt(2 t d log(1 + t/lambda))
//   + 2 delta delta_max
double theoretical_bound(const PolicyConfig& config, int dim, int num_objectives, long horizon, long round,
                         double delta_max);

// One full rollout of one algorithm on one instance. Regret is scored
// against the true per-round reward table; the environment streams are
// derived from (master_seed, instance) and the policy stream also from
// the algorithm label, so instances can run in any order.
RegretLedger run_instance(const ExperimentConfig& config, const AlgoSpec& algo, int instance_index);

// Throws NumericError when a ledger violates its invariants
// (nondecreasing cumulatives, gap ordering, elliptical potential,
// bound curve).
void check_ledger(const RegretLedger& ledger, const ExperimentConfig& config);

struct SummarySeries {
  std::string algo;
  std::string metric;  // pr, epr, reward_obj_<l>, bound
  Vec mean;            // indexed by round-1
  Vec stddev;          // population standard deviation across instances
};

struct SummaryTable {
  long horizon = 0;
  std::vector<SummarySeries> series;
};

// Per-round mean and 1-sigma deviation across instances, grouped by
// algorithm label. Aborted ledgers are rejected.
SummaryTable aggregate(const std::vector<RegretLedger>& ledgers);

// CSV schema: header `round,algo,metric,mean,std`, shortest round-trip
// decimal formatting.
void emit_csv(const SummaryTable& summary, const std::string& path);
SummaryTable load_summary_csv(const std::string& path);

// One self-contained SVG per metric: a line per algorithm with a shaded
// +-1 sigma band.
void emit_plots(const SummaryTable& summary, const std::string& dir);

struct ExperimentResult {
  std::vector<RegretLedger> ledgers;  // algo-major, instance-minor
  SummaryTable summary;
  std::vector<std::string> failures;
};

// Runs every (algorithm, instance) pair, in parallel across instances,
// aggregates, and writes summary.csv (and plots) under out_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Reward table text file: one arm per line, objectives space-separated.
RewardTable load_reward_table(const std::string& path);

}  // namespace mob
