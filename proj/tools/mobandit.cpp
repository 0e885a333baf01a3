#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mobandit/errors.hpp"
#include "mobandit/harness.hpp"

namespace {

void print_front(const char* name, const mob::FrontSet& front) {
  std::cout << name << " = {";
  for (size_t i = 0; i < front.members.size(); ++i) std::cout << (i ? ", " : "") << front.members[i];
  std::cout << "}\n";
}

int cmd_run(const std::string& config_path, std::uint64_t* seed, long* rounds, int* instances,
            const std::string& algo, const std::string& out_dir, const std::string& m_value, bool plots) {
  mob::ExperimentConfig cfg = mob::load_experiment_config(config_path);
  if (seed) cfg.master_seed = *seed;
  if (rounds) {
    cfg.horizon = *rounds;
    for (auto& a : cfg.algos) a.policy.horizon = *rounds;
  }
  if (instances) cfg.num_instances = *instances;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (plots) cfg.emit_plots = true;
  if (!algo.empty()) {
    std::vector<mob::AlgoSpec> kept;
    for (const auto& a : cfg.algos)
      if (a.label == algo) kept.push_back(a);
    if (kept.empty()) {
      mob::PolicyConfig base;
      if (!cfg.algos.empty()) base = cfg.algos.front().policy;
      kept.push_back(mob::algo_spec_from_token(algo, base));
    }
    cfg.algos = kept;
  }
  if (!m_value.empty()) {
    const int m = m_value == "auto" ? 0 : std::stoi(m_value);
    for (auto& a : cfg.algos)
      if (a.policy.algorithm == mob::Algorithm::MolTs && a.label != "mol-ts-m1") a.policy.num_samples = m;
  }
  mob::validate(cfg);

  const mob::ExperimentResult result = mob::run_experiment(cfg);
  std::cout << "wrote " << cfg.out_dir << "/summary.csv (" << cfg.algos.size() << " algorithms x "
            << cfg.num_instances << " instances x " << cfg.horizon << " rounds)\n";
  for (const auto& s : result.summary.series)
    if (s.metric == "pr" || s.metric == "epr")
      std::cout << "  " << s.algo << " final mean " << s.metric << " = " << s.mean.back() << "\n";
  if (!result.failures.empty()) {
    for (const auto& f : result.failures) std::cerr << "instance failure: " << f << "\n";
    return 2;
  }
  return 0;
}

int cmd_fronts(const std::string& table_path) {
  const mob::RewardTable table = mob::load_reward_table(table_path);
  print_front("pareto front", mob::pareto_front(table));
  print_front("effective front", mob::effective_front(table));
  std::cout << "arm  pareto_gap  effective_gap\n";
  for (int a = 0; a < table.num_arms(); ++a)
    std::cout << a << "  " << mob::pareto_gap(table, a) << "  " << mob::effective_gap(table, a) << "\n";
  return 0;
}

int cmd_optimism(int num_objectives, int dim, const std::string& m_value, long trials, std::uint64_t seed) {
  mob::PolicyConfig cfg;
  cfg.num_samples = m_value == "auto" ? 0 : std::stoi(m_value);
  mob::validate(cfg);
  const int m = mob::resolved_num_samples(cfg, num_objectives);

  mob::RlsState state = mob::rls_init(dim, num_objectives, cfg.regularizer);
  mob::Rng rng(seed);
  mob::Vec context(dim, 0.0);
  context[0] = 1.0;
  const double freq = mob::joint_optimism_frequency(state, context, cfg, trials, rng);
  const double threshold =
      cfg.optimism_p - 3.0 * std::sqrt(cfg.optimism_p * (1.0 - cfg.optimism_p) / static_cast<double>(trials));
  std::cout << "L = " << num_objectives << ", M = " << m << ", trials = " << trials << "\n";
  std::cout << "joint optimism frequency = " << freq << " (target >= " << threshold << ")\n";
  return freq >= threshold ? 0 : 2;
}

int cmd_bound(int dim, int num_objectives, long rounds, const std::string& m_value, double delta, double lambda,
              double noise_bound, double p, double delta_max) {
  mob::PolicyConfig cfg;
  cfg.delta = delta;
  cfg.regularizer = lambda;
  cfg.noise_bound = noise_bound;
  cfg.optimism_p = p;
  cfg.horizon = rounds;
  cfg.num_samples = m_value == "auto" ? 0 : std::stoi(m_value);
  mob::validate(cfg);

  std::cout << "M = " << mob::resolved_num_samples(cfg, num_objectives) << "\n";
  std::cout << "confidence_radius(T) = " << mob::confidence_radius(rounds, cfg, dim, num_objectives) << "\n";
  std::cout << "total_radius = " << mob::total_radius(cfg, dim, num_objectives, rounds) << "\n";
  std::cout << "round,bound\n";
  for (long t = 1; t <= rounds; t = t < 10 ? t + 1 : t * 10) {
    std::cout << t << "," << mob::theoretical_bound(cfg, dim, num_objectives, rounds, t, delta_max) << "\n";
    if (t < rounds && t * 10 > rounds) {
      std::cout << rounds << "," << mob::theoretical_bound(cfg, dim, num_objectives, rounds, rounds, delta_max)
                << "\n";
      break;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-objective linear bandit simulator"};
  app.require_subcommand(1);

  std::string config_path, algo, out_dir, m_value, table_path;
  std::uint64_t seed = 0;
  long rounds = 0;
  int instances = 0;
  bool plots = false;

  auto* run = app.add_subcommand("run", "run a full experiment from a config file");
  run->add_option("--config", config_path, "experiment config file")->required();
  auto* seed_opt = run->add_option("--seed", seed, "master seed override");
  auto* rounds_opt = run->add_option("--rounds", rounds, "horizon override");
  auto* inst_opt = run->add_option("--instances", instances, "instance count override");
  run->add_option("--algo", algo, "restrict to one algorithm (mol-ts, mol-ucb, eps-greedy, mol-ts-m1)");
  run->add_option("--out", out_dir, "output directory override");
  run->add_option("--m", m_value, "sample count for mol-ts: auto or a positive integer");
  run->add_flag("--plots", plots, "emit SVG plots");

  auto* fronts = app.add_subcommand("fronts", "print both fronts and all gaps of a reward table file");
  fronts->add_option("table", table_path, "text file, one arm per line")->required();

  int opt_L = 4, opt_d = 5;
  long opt_trials = 100000;
  std::uint64_t opt_seed = 1;
  std::string opt_m = "auto";
  auto* optimism = app.add_subcommand("optimism", "Monte-Carlo check of the joint-optimism frequency");
  optimism->add_option("--L", opt_L, "number of objectives");
  optimism->add_option("--d", opt_d, "feature dimension");
  optimism->add_option("--m", opt_m, "sample count: auto or a positive integer");
  optimism->add_option("--trials", opt_trials, "Monte-Carlo trials");
  optimism->add_option("--seed", opt_seed, "rng seed");

  int b_d = 5, b_L = 4;
  long b_rounds = 10000;
  std::string b_m = "auto";
  double b_delta = 0.05, b_lambda = 1.0, b_R = 1.0, b_p = 0.15, b_dmax = 1.0;
  auto* bound = app.add_subcommand("bound", "print the confidence radii and the regret bound curve");
  bound->add_option("--d", b_d, "feature dimension");
  bound->add_option("--L", b_L, "number of objectives");
  bound->add_option("--rounds", b_rounds, "horizon");
  bound->add_option("--m", b_m, "sample count: auto or a positive integer");
  bound->add_option("--delta", b_delta, "confidence parameter");
  bound->add_option("--lambda", b_lambda, "ridge regularizer");
  bound->add_option("--R", b_R, "sub-Gaussian noise bound");
  bound->add_option("--p", b_p, "optimism probability constant");
  bound->add_option("--delta-max", b_dmax, "maximum per-round gap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  try {
    if (run->parsed())
      return cmd_run(config_path, seed_opt->count() ? &seed : nullptr, rounds_opt->count() ? &rounds : nullptr,
                     inst_opt->count() ? &instances : nullptr, algo, out_dir, m_value, plots);
    if (fronts->parsed()) return cmd_fronts(table_path);
    if (optimism->parsed()) return cmd_optimism(opt_L, opt_d, opt_m, opt_trials, opt_seed);
    if (bound->parsed()) return cmd_bound(b_d, b_L, b_rounds, b_m, b_delta, b_lambda, b_R, b_p, b_dmax);
  } catch (const mob::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
