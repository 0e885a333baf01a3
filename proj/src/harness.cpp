#include "mobandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mobandit/errors.hpp"

namespace mob {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw NumericError("format_double failed");
  return std::string(buf, end);
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("bad number for " + what + ": " + s);
  return v;
}

long parse_long(const std::string& s, const std::string& what) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("bad integer for " + what + ": " + s);
  return v;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

void validate(const ExperimentConfig& c) {
  if (c.num_instances < 1) throw ConfigError("experiment: num_instances must be positive");
  if (c.horizon < 1) throw ConfigError("experiment: horizon must be positive");
  if (c.num_arms < 1 || c.dim < 1 || c.num_objectives < 1)
    throw ConfigError("experiment: dimensions must be positive");
  if (c.noise_sigma < 0.0) throw ConfigError("experiment: noise_sigma must be nonnegative");
  if (c.algos.empty()) throw ConfigError("experiment: no algorithms selected");
  if (c.threads < 0) throw ConfigError("experiment: threads must be nonnegative");
  for (const auto& a : c.algos) validate(a.policy);
}

AlgoSpec algo_spec_from_token(const std::string& token, const PolicyConfig& base) {
  AlgoSpec spec;
  spec.policy = base;
  if (token == "mol-ts-m1") {
    spec.policy.algorithm = Algorithm::MolTs;
    spec.policy.num_samples = 1;
    spec.label = token;
  } else {
    spec.policy.algorithm = algorithm_from_name(token);
    spec.label = token;
  }
  return spec;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);

  ExperimentConfig cfg;
  PolicyConfig base;
  std::vector<std::string> algo_tokens = {"mol-ts", "mol-ucb", "eps-greedy"};

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError(path + ": empty value for " + key);

    if (key == "master_seed") {
      cfg.master_seed = static_cast<std::uint64_t>(parse_long(value, key));
    } else if (key == "num_instances") {
      cfg.num_instances = static_cast<int>(parse_long(value, key));
    } else if (key == "horizon") {
      cfg.horizon = parse_long(value, key);
    } else if (key == "num_arms") {
      cfg.num_arms = static_cast<int>(parse_long(value, key));
    } else if (key == "dim") {
      cfg.dim = static_cast<int>(parse_long(value, key));
    } else if (key == "num_objectives") {
      cfg.num_objectives = static_cast<int>(parse_long(value, key));
    } else if (key == "noise_sigma") {
      cfg.noise_sigma = parse_double(value, key);
    } else if (key == "context_mode") {
      cfg.context_mode = context_mode_from_name(value);
    } else if (key == "algorithms") {
      algo_tokens = split_tokens(value);
      if (algo_tokens.empty()) throw ConfigError(path + ": empty algorithm list");
    } else if (key == "out_dir") {
      cfg.out_dir = value;
    } else if (key == "emit_plots") {
      if (value == "true")
        cfg.emit_plots = true;
      else if (value == "false")
        cfg.emit_plots = false;
      else
        throw ConfigError(path + ": emit_plots must be true or false");
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(parse_long(value, key));
    } else if (key == "lambda") {
      base.regularizer = parse_double(value, key);
    } else if (key == "delta") {
      base.delta = parse_double(value, key);
    } else if (key == "noise_bound") {
      base.noise_bound = parse_double(value, key);
    } else if (key == "num_samples") {
      base.num_samples = value == "auto" ? 0 : static_cast<int>(parse_long(value, key));
    } else if (key == "optimism_p") {
      base.optimism_p = parse_double(value, key);
    } else if (key == "scale_mode") {
      if (value == "time_varying") {
        base.scale_mode = {true, 0.0};
      } else if (value.rfind("constant:", 0) == 0) {
        base.scale_mode = {false, parse_double(value.substr(9), key)};
      } else {
        throw ConfigError(path + ": scale_mode must be time_varying or constant:<c>");
      }
    } else if (key == "epsilon") {
      base.epsilon = parse_double(value, key);
    } else {
      throw ConfigError(path + ": unknown key " + key);
    }
  }

  base.horizon = cfg.horizon;
  for (const auto& token : algo_tokens) cfg.algos.push_back(algo_spec_from_token(token, base));
  validate(cfg);
  return cfg;
}

double theoretical_bound(const PolicyConfig& c, int dim, int num_objectives, long horizon, long round,
                         double delta_max) {
  const double p = c.optimism_p;
  const double dt = c.delta / static_cast<double>(horizon);
  if (p <= dt) throw ConfigError("theoretical_bound: optimism_p must exceed delta/horizon");
  const double radius = total_radius(c, dim, num_objectives, horizon);
  const double t = static_cast<double>(round);
  return (1.0 + 2.0 / (p - dt)) * radius * std::sqrt(2.0 * t * dim * std::log(1.0 + t / c.regularizer)) +
         2.0 * c.delta * delta_max;
}

RegretLedger run_instance(const ExperimentConfig& cfg, const AlgoSpec& algo, int instance_index) {
  RegretLedger ledger;
  ledger.algo = algo.label;
  ledger.instance = instance_index;
  ledger.horizon = cfg.horizon;
  ledger.num_objectives = cfg.num_objectives;
  ledger.has_bound = algo.policy.algorithm == Algorithm::MolTs;

  PolicyConfig policy = algo.policy;
  policy.horizon = cfg.horizon;

  const std::uint64_t inst = static_cast<std::uint64_t>(instance_index);
  const EnvSpec env = gen_env(derive_seed(cfg.master_seed, {inst}), cfg.num_arms, cfg.dim,
                              cfg.num_objectives, cfg.noise_sigma, cfg.context_mode);
  Rng rng_ctx(derive_seed(env.seed, {stream::kContexts}));
  Rng rng_noise(derive_seed(env.seed, {stream::kNoise}));
  std::uint64_t label_tag = 0;
  for (char ch : algo.label) label_tag = mix64(label_tag ^ static_cast<std::uint64_t>(ch));
  Rng rng_policy(derive_seed(cfg.master_seed, {inst, stream::kPolicy, label_tag}));

  RlsState state = rls_init(cfg.dim, cfg.num_objectives, policy.regularizer);

  double cum_pr = 0.0, cum_epr = 0.0;
  Vec cum_reward(cfg.num_objectives, 0.0);
  ledger.rows.reserve(cfg.horizon);

  for (long t = 1; t <= cfg.horizon; ++t) {
    const RoundOutcome outcome = gen_contexts(env, t, rng_ctx);
    const Decision decision = policy_step(state, outcome.contexts, policy, rng_policy);
    const int arm = decision.arm;

    RoundRecord rec;
    rec.round = t;
    rec.arm = arm;
    rec.pr_gap = pareto_gap(outcome.true_table, arm);
    if (ledger.has_bound) {
      const std::vector<double> gaps = effective_gaps(outcome.true_table);
      rec.epr_gap = gaps[arm];
      ledger.delta_max = std::max(ledger.delta_max, *std::max_element(gaps.begin(), gaps.end()));
    } else {
      rec.epr_gap = effective_gap(outcome.true_table, arm);
    }
    cum_pr += rec.pr_gap;
    cum_epr += rec.epr_gap;
    rec.cum_pr = cum_pr;
    rec.cum_epr = cum_epr;

    const Vec reward = pull(env, outcome, arm, rng_noise);
    for (int ell = 0; ell < cfg.num_objectives; ++ell) cum_reward[ell] += reward[ell];
    rec.cum_reward = cum_reward;

    const double norm = mahalanobis_norm(state, outcome.contexts.row(arm));
    rec.ctx_norm2 = norm * norm;
    ledger.potential_sum += rec.ctx_norm2;
    rec.scale_c = decision.scale_c;

    rls_update(state, outcome.contexts.row(arm), reward);
    ledger.rows.push_back(std::move(rec));
  }

  if (ledger.has_bound)
    for (auto& rec : ledger.rows)
      rec.bound = theoretical_bound(policy, cfg.dim, cfg.num_objectives, cfg.horizon, rec.round, ledger.delta_max);

  check_ledger(ledger, cfg);
  return ledger;
}

void check_ledger(const RegretLedger& ledger, const ExperimentConfig& cfg) {
  double prev_pr = 0.0, prev_epr = 0.0;
  for (const auto& rec : ledger.rows) {
    if (rec.pr_gap < 0.0 || rec.epr_gap < 0.0) throw NumericError("ledger: negative gap");
    if (rec.pr_gap > rec.epr_gap) throw NumericError("ledger: pareto gap exceeds effective gap");
    if (rec.cum_pr < prev_pr || rec.cum_epr < prev_epr) throw NumericError("ledger: cumulative regret decreased");
    if (ledger.has_bound && rec.cum_epr > rec.bound) throw NumericError("ledger: regret exceeded theoretical bound");
    prev_pr = rec.cum_pr;
    prev_epr = rec.cum_epr;
  }
  if (cfg.algos.empty()) return;
  const double lambda = cfg.algos.front().policy.regularizer;
  if (lambda >= 1.0) {
    const double cap = 2.0 * cfg.dim * std::log(1.0 + static_cast<double>(cfg.horizon) / lambda);
    if (ledger.potential_sum > cap) throw NumericError("ledger: elliptical potential bound violated");
  }
}

SummaryTable aggregate(const std::vector<RegretLedger>& ledgers) {
  if (ledgers.empty()) throw std::invalid_argument("aggregate: no ledgers");
  SummaryTable table;
  table.horizon = ledgers.front().horizon;

  std::vector<std::string> algo_order;
  std::map<std::string, std::vector<const RegretLedger*>> groups;
  for (const auto& ledger : ledgers) {
    if (ledger.aborted) throw std::invalid_argument("aggregate: aborted ledger for " + ledger.algo);
    if (ledger.horizon != table.horizon) throw std::invalid_argument("aggregate: horizon mismatch");
    if (!groups.count(ledger.algo)) algo_order.push_back(ledger.algo);
    groups[ledger.algo].push_back(&ledger);
  }

  const long horizon = table.horizon;
  auto add_series = [&](const std::string& algo, const std::string& metric,
                        const std::vector<const RegretLedger*>& group, auto&& accessor) {
    SummarySeries s;
    s.algo = algo;
    s.metric = metric;
    s.mean.resize(horizon);
    s.stddev.resize(horizon);
    const double n = static_cast<double>(group.size());
    for (long t = 0; t < horizon; ++t) {
      double sum = 0.0;
      for (const auto* g : group) sum += accessor(g->rows[t]);
      const double mean = sum / n;
      double var = 0.0;
      for (const auto* g : group) {
        const double d = accessor(g->rows[t]) - mean;
        var += d * d;
      }
      s.mean[t] = mean;
      s.stddev[t] = std::sqrt(var / n);
    }
    table.series.push_back(std::move(s));
  };

  for (const auto& algo : algo_order) {
    const auto& group = groups[algo];
    const int L = group.front()->num_objectives;
    for (const auto* g : group)
      if (g->num_objectives != L) throw std::invalid_argument("aggregate: objective count mismatch");
    add_series(algo, "pr", group, [](const RoundRecord& r) { return r.cum_pr; });
    add_series(algo, "epr", group, [](const RoundRecord& r) { return r.cum_epr; });
    for (int ell = 0; ell < L; ++ell)
      add_series(algo, "reward_obj_" + std::to_string(ell + 1), group,
                 [ell](const RoundRecord& r) { return r.cum_reward[ell]; });
    const bool bounded = std::all_of(group.begin(), group.end(), [](const auto* g) { return g->has_bound; });
    if (bounded) add_series(algo, "bound", group, [](const RoundRecord& r) { return r.bound; });
  }
  return table;
}

void emit_csv(const SummaryTable& summary, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("emit_csv: cannot write " + path);
  out << "round,algo,metric,mean,std\n";
  for (const auto& s : summary.series)
    for (long t = 0; t < summary.horizon; ++t)
      out << (t + 1) << ',' << s.algo << ',' << s.metric << ',' << format_double(s.mean[t]) << ','
          << format_double(s.stddev[t]) << '\n';
  if (!out) throw ConfigError("emit_csv: write failed for " + path);
}

SummaryTable load_summary_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("load_summary_csv: cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "round,algo,metric,mean,std")
    throw ConfigError("load_summary_csv: bad header in " + path);

  SummaryTable table;
  SummarySeries* cur = nullptr;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string part;
    while (std::getline(ss, part, ',')) f.push_back(part);
    if (f.size() != 5) throw ConfigError("load_summary_csv: bad row: " + line);
    const long round = parse_long(f[0], "round");
    if (cur == nullptr || cur->algo != f[1] || cur->metric != f[2]) {
      table.series.push_back(SummarySeries{f[1], f[2], {}, {}});
      cur = &table.series.back();
    }
    if (round != static_cast<long>(cur->mean.size()) + 1)
      throw ConfigError("load_summary_csv: rounds out of order");
    cur->mean.push_back(parse_double(f[3], "mean"));
    cur->stddev.push_back(parse_double(f[4], "std"));
  }
  table.horizon = table.series.empty() ? 0 : static_cast<long>(table.series.front().mean.size());
  for (const auto& s : table.series)
    if (static_cast<long>(s.mean.size()) != table.horizon)
      throw ConfigError("load_summary_csv: ragged series");
  return table;
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct PlotRange {
  double lo = 0.0, hi = 1.0;
  void expand(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

void write_metric_svg(const SummaryTable& summary, const std::string& metric, const std::string& path) {
  std::vector<const SummarySeries*> lines;
  for (const auto& s : summary.series)
    if (s.metric == metric) lines.push_back(&s);
  if (lines.empty()) return;

  const double width = 860, height = 520;
  const double ml = 70, mr = 20, mt = 30, mb = 45;
  const long horizon = summary.horizon;
  const long step = std::max<long>(1, horizon / 400);

  PlotRange range;
  range.lo = lines.front()->mean[0];
  range.hi = range.lo;
  for (const auto* s : lines)
    for (long t = 0; t < horizon; ++t) {
      range.expand(s->mean[t] - s->stddev[t]);
      range.expand(s->mean[t] + s->stddev[t]);
    }
  if (range.hi <= range.lo) range.hi = range.lo + 1.0;

  auto sx = [&](double t) { return ml + (t - 1.0) / std::max(1.0, horizon - 1.0) * (width - ml - mr); };
  auto sy = [&](double v) { return height - mb - (v - range.lo) / (range.hi - range.lo) * (height - mt - mb); };

  std::ofstream out(path);
  if (!out) throw ConfigError("emit_plots: cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << metric
      << "</text>\n";

  for (int i = 0; i <= 5; ++i) {
    const double v = range.lo + (range.hi - range.lo) * i / 5.0;
    const double y = sy(v);
    out << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << width - mr << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\"/>\n";
    std::ostringstream label;
    label.precision(4);
    label << v;
    out << "<text x=\"" << ml - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
        << label.str() << "</text>\n";
    const double t = 1.0 + (horizon - 1.0) * i / 5.0;
    out << "<text x=\"" << sx(t) << "\" y=\"" << height - mb + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
        << static_cast<long>(t) << "</text>\n";
  }
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\" font-size=\"12\">round</text>\n";

  int color = 0;
  for (const auto* s : lines) {
    const char* c = kPalette[color % 6];
    out << "<polygon fill=\"" << c << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
    for (long t = 0; t < horizon; t += step)
      out << sx(static_cast<double>(t + 1)) << ',' << sy(s->mean[t] + s->stddev[t]) << ' ';
    for (long t = ((horizon - 1) / step) * step; t >= 0; t -= step)
      out << sx(static_cast<double>(t + 1)) << ',' << sy(s->mean[t] - s->stddev[t]) << ' ';
    out << "\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (long t = 0; t < horizon; t += step)
      out << sx(static_cast<double>(t + 1)) << ',' << sy(s->mean[t]) << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 16 * color << "\" font-size=\"12\" fill=\"" << c << "\">"
        << s->algo << "</text>\n";
    ++color;
  }
  out << "</svg>\n";
}

}  // namespace

void emit_plots(const SummaryTable& summary, const std::string& dir) {
  std::vector<std::string> metrics;
  for (const auto& s : summary.series)
    if (std::find(metrics.begin(), metrics.end(), s.metric) == metrics.end()) metrics.push_back(s.metric);
  for (const auto& metric : metrics)
    write_metric_svg(summary, metric, (std::filesystem::path(dir) / (metric + ".svg")).string());
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  std::filesystem::create_directories(cfg.out_dir);

  struct Task {
    int algo_index;
    int instance;
  };
  std::vector<Task> tasks;
  for (int a = 0; a < static_cast<int>(cfg.algos.size()); ++a)
    for (int i = 0; i < cfg.num_instances; ++i) tasks.push_back({a, i});

  ExperimentResult result;
  result.ledgers.resize(tasks.size());

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      const Task& task = tasks[idx];
      try {
        result.ledgers[idx] = run_instance(cfg, cfg.algos[task.algo_index], task.instance);
      } catch (const std::exception& e) {
        RegretLedger bad;
        bad.algo = cfg.algos[task.algo_index].label;
        bad.instance = task.instance;
        bad.horizon = cfg.horizon;
        bad.aborted = true;
        bad.abort_reason = e.what();
        result.ledgers[idx] = std::move(bad);
      }
    }
  };

  int nthreads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min<int>(nthreads, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int i = 0; i < nthreads - 1; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<RegretLedger> good;
  for (const auto& ledger : result.ledgers) {
    if (ledger.aborted)
      result.failures.push_back(ledger.algo + " instance " + std::to_string(ledger.instance) + ": " +
                                ledger.abort_reason);
    else
      good.push_back(ledger);
  }
  if (good.empty()) throw NumericError("run_experiment: every instance aborted");

  result.summary = aggregate(good);
  emit_csv(result.summary, (std::filesystem::path(cfg.out_dir) / "summary.csv").string());
  if (cfg.emit_plots) emit_plots(result.summary, cfg.out_dir);
  return result;
}

RewardTable load_reward_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read reward table: " + path);
  std::vector<Vec> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    Vec row;
    std::stringstream ss(line);
    std::string tok;
    while (ss >> tok) row.push_back(parse_double(tok, "reward"));
    if (!rows.empty() && row.size() != rows.front().size())
      throw ConfigError("reward table rows have unequal lengths");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("reward table is empty: " + path);
  Mat m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
  return RewardTable(std::move(m));
}

}  // namespace mob
