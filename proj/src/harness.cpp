#include "marmab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "marmab/adherence.hpp"
#include "marmab/baselines.hpp"
#include "marmab/domains.hpp"
#include "marmab/instance_io.hpp"
#include "marmab/lambda_q.hpp"
#include "marmab/lpql.hpp"
#include "marmab/oracles.hpp"
#include "marmab/replay.hpp"

namespace marmab {

using nlohmann::json;

namespace {

AlgorithmParams make(double C, double C_prime, long per_dream, long period, std::optional<double> bound, long D,
                     double eps0, int n_lam) {
  AlgorithmParams p;
  p.schedule = ScheduleParams{C, C_prime, D, eps0};
  p.replays_per_dream = per_dream;
  p.replay_period = period;
  p.lambda_bound = bound;
  p.n_lam = n_lam;
  return p;
}

constexpr long kNever = 1000000;

AlgorithmParams two_process_defaults(const std::string& alg) {
  if (alg == "wibql") return make(0.1, 0.2, 0, kNever, 3.0, 500, 0.99, 3000);
  if (alg == "ql0") return make(0.2, 0.2, 1000, 100, std::nullopt, 500, 0.99, 3000);
  if (alg == "maiql") return make(0.1, 0.2, 1000, 10, 3.0, 500, 0.99, 3000);
  if (alg == "maiql_aprx") return make(0.4, 0.2, 1000, 100, 3.0, 500, 0.99, 3000);
  return make(0.4, 0.2, 0, kNever, 3.0, 500, 0.99, 3000);
}

}  // namespace

AlgorithmParams default_params(const std::string& domain, const std::string& alg) {
  if (domain == "random") {
    if (alg == "maiql") return make(0.2, 0.4, 1000, 100, std::nullopt, 500, 0.99, 2000);
    if (alg == "maiql_aprx" || alg == "lpql" || is_oracle(alg) || alg == "random") {
      return make(0.8, 0.2, 0, kNever, std::nullopt, 500, 0.99, 2000);
    }
  }
  if (domain == "adherence") {
    if (alg == "ql0") return make(0.8, 0.2, 1000, 10, std::nullopt, 1000, 0.99, 2000);
    if (alg == "maiql") return make(0.05, 0.1, 1000, 5, std::nullopt, 2000, 0.99, 2000);
    if (alg == "maiql_aprx" || alg == "lpql" || is_oracle(alg) || alg == "random") {
      return make(0.8, 0.2, 1000, 5, std::nullopt, 1000, 0.99, 2000);
    }
  }
  return two_process_defaults(alg);
}

AlgorithmParams apply_overrides(AlgorithmParams p, const json& o) {
  if (o.is_null()) return p;
  if (!o.is_object()) throw std::invalid_argument("params must be an object");
  for (const auto& [key, value] : o.items()) {
    if (key == "C") p.schedule.C = value.get<double>();
    else if (key == "C_prime") p.schedule.C_prime = value.get<double>();
    else if (key == "D") p.schedule.D = value.get<long>();
    else if (key == "epsilon0") p.schedule.epsilon0 = value.get<double>();
    else if (key == "n_lam") p.n_lam = value.get<int>();
    else if (key == "lambda_max") p.lambda_max = value.is_null() ? std::nullopt : std::optional(value.get<double>());
    else if (key == "lambda_bound") p.lambda_bound = value.is_null() ? std::nullopt : std::optional(value.get<double>());
    else if (key == "replays_per_dream") p.replays_per_dream = value.get<long>();
    else if (key == "replay_period") p.replay_period = value.get<long>();
    else if (key == "replay_capacity") {
      p.replay_capacity = value.is_null() ? std::nullopt : std::optional(value.get<std::size_t>());
    } else if (key == "wibql_action") p.wibql_action = value.get<int>();
    else if (key == "mode") {
      const auto m = value.get<std::string>();
      if (m == "discounted") p.mode = MaiqlMode::discounted;
      else if (m == "average_reward") p.mode = MaiqlMode::average_reward;
      else throw std::invalid_argument("unknown mode '" + m + "'");
    } else {
      throw std::invalid_argument("unknown parameter '" + key + "'");
    }
  }
  return p;
}

json params_to_json(const AlgorithmParams& p) {
  json j{{"C", p.schedule.C},
         {"C_prime", p.schedule.C_prime},
         {"D", p.schedule.D},
         {"epsilon0", p.schedule.epsilon0},
         {"n_lam", p.n_lam},
         {"replays_per_dream", p.replays_per_dream},
         {"replay_period", p.replay_period},
         {"wibql_action", p.wibql_action},
         {"mode", p.mode == MaiqlMode::discounted ? "discounted" : "average_reward"}};
  j["lambda_max"] = p.lambda_max ? json(*p.lambda_max) : json(nullptr);
  j["lambda_bound"] = p.lambda_bound ? json(*p.lambda_bound) : json(nullptr);
  j["replay_capacity"] = p.replay_capacity ? json(*p.replay_capacity) : json(nullptr);
  return j;
}

const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> names{"maiql",      "maiql_aprx",     "lpql",
                                              "wibql",      "ql0",            "oracle_lp",
                                              "oracle_lambda0", "oracle_lp_index", "random"};
  return names;
}

bool is_oracle(const std::string& a) { return a == "oracle_lp" || a == "oracle_lambda0" || a == "oracle_lp_index"; }

json RunConfig::to_json() const {
  return json{{"domain", domain},
              {"algorithm", algorithm},
              {"horizon", horizon},
              {"seeds", seeds},
              {"params", params_to_json(params)},
              {"oracle", {{"steps", oracle_steps}, {"settle_window", settle_window}}}};
}

void RunConfig::validate() const {
  std::vector<std::string> problems;
  if (horizon < 1) problems.push_back("horizon must be >= 1");
  if (seeds.empty()) problems.push_back("seed list is empty");
  if (std::find(known_algorithms().begin(), known_algorithms().end(), algorithm) == known_algorithms().end()) {
    problems.push_back("unknown algorithm '" + algorithm + "'");
  }
  if (settle_window < 1 || settle_window > oracle_steps) problems.push_back("oracle settle_window must be in [1, steps]");
  if (params.n_lam < 1) problems.push_back("n_lam must be >= 1");
  if (params.replay_period < 0 || params.replays_per_dream < 0) problems.push_back("replay settings must be >= 0");
  try {
    params.schedule.check();
  } catch (const std::exception& e) {
    problems.push_back(e.what());
  }
  try {
    (void)domain_type(domain);
  } catch (const std::exception& e) {
    problems.push_back(e.what());
  }
  if (!problems.empty()) {
    std::string msg = "invalid run config:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw std::invalid_argument(msg);
  }
}

std::vector<RunConfig> configs_from_json(const json& j) {
  std::vector<std::string> algs;
  if (j.contains("algorithms")) algs = j.at("algorithms").get<std::vector<std::string>>();
  if (j.contains("algorithm")) algs.push_back(j.at("algorithm").get<std::string>());
  if (algs.empty()) throw std::invalid_argument("config names no algorithm");

  std::vector<std::uint64_t> seeds;
  if (j.contains("seeds")) {
    seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  } else {
    const auto n = j.value("n_seeds", 1);
    const auto first = j.value("first_seed", std::uint64_t{0});
    for (int k = 0; k < n; ++k) seeds.push_back(first + static_cast<std::uint64_t>(k));
  }
  const json domain = j.at("domain");
  const std::string dtype = domain_type(domain);

  std::vector<RunConfig> out;
  for (const auto& alg : algs) {
    RunConfig c;
    c.domain = domain;
    c.algorithm = alg;
    c.horizon = j.value("horizon", 50000L);
    c.seeds = seeds;
    c.params = default_params(dtype, alg);
    if (j.contains("params")) c.params = apply_overrides(c.params, j.at("params"));
    if (j.contains("params_by_algorithm") && j.at("params_by_algorithm").contains(alg)) {
      c.params = apply_overrides(c.params, j.at("params_by_algorithm").at(alg));
    }
    if (j.contains("oracle")) {
      c.oracle_steps = j.at("oracle").value("steps", c.oracle_steps);
      c.settle_window = j.at("oracle").value("settle_window", c.settle_window);
    }
    c.output_dir = j.value("output_dir", std::string("out"));
    c.threads = j.value("threads", 0);
    c.validate();
    out.push_back(std::move(c));
  }
  return out;
}

std::string config_hash(const RunConfig& config) {
  const std::string text = config.to_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string domain_type(const json& domain) {
  if (!domain.is_object() || !domain.contains("type")) throw std::invalid_argument("domain needs a 'type'");
  const auto t = domain.at("type").get<std::string>();
  if (t != "two_process" && t != "random" && t != "adherence" && t != "file") {
    throw std::invalid_argument("unknown domain type '" + t + "'");
  }
  return t;
}

namespace {

ProcessType process_from_json(const json& j, ProcessType fallback) {
  if (j.contains("stay_good")) fallback.stay_good = j.at("stay_good").get<std::array<double, 3>>();
  if (j.contains("recover")) fallback.recover = j.at("recover").get<std::array<double, 3>>();
  return fallback;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

RmabInstance make_instance(const json& d, std::uint64_t seed, const std::filesystem::path& base_dir) {
  const std::string type = domain_type(d);
  Engine rng = make_engine(seed, streams::kInstance);
  const double discount = d.value("discount", 0.95);
  if (type == "file") return load_instance(resolve(base_dir, d.at("path").get<std::string>()));
  const int n = d.value("n_arms", 16);
  if (type == "two_process") {
    TwoProcessParams p;
    p.fraction_type_a = d.value("fraction_type_a", p.fraction_type_a);
    p.jitter = d.value("jitter", p.jitter);
    p.shuffle = d.value("shuffle", p.shuffle);
    if (d.contains("type_a")) p.type_a = process_from_json(d.at("type_a"), p.type_a);
    if (d.contains("type_b")) p.type_b = process_from_json(d.at("type_b"), p.type_b);
    return gen_two_process(n, d.value("budget", 8.0), discount, p, rng);
  }
  if (type == "random") {
    const std::string rows = d.value("rows", std::string("normalized_uniform"));
    if (rows != "normalized_uniform" && rows != "dirichlet") throw std::invalid_argument("unknown rows mode '" + rows + "'");
    std::optional<double> budget;
    if (d.contains("budget")) budget = d.at("budget").get<double>();
    return gen_random(n, d.value("n_states", 5), d.value("n_actions", 5), discount, rng,
                      rows == "dirichlet" ? RowSampling::dirichlet : RowSampling::normalized_uniform, budget);
  }
  AdherenceConfig cfg;
  cfg.history_length = d.value("history_length", cfg.history_length);
  cfg.k_clusters = d.value("k_clusters", cfg.k_clusters);
  cfg.kmeans_restarts = d.value("kmeans_restarts", cfg.kmeans_restarts);
  if (d.contains("action_scale")) cfg.action_scale = d.at("action_scale").get<std::array<double, 3>>();
  cfg.smoothing = d.value("smoothing", cfg.smoothing);
  cfg.fraction_type_a = d.value("fraction_type_a", cfg.fraction_type_a);
  std::vector<Trace> traces;
  if (d.contains("traces")) {
    traces = read_traces(resolve(base_dir, d.at("traces").get<std::string>()));
  } else {
    // the trace population is shared across seeds; only arm sampling varies
    Engine trace_rng = make_engine(d.value("trace_seed", std::uint64_t{7}), streams::kTraces);
    traces = gen_synthetic_traces(d.value("n_patients", 200), default_trace_modes(), trace_rng);
  }
  return gen_adherence_instance(traces, n, d.value("budget", 4.0), discount, cfg, rng);
}

std::unique_ptr<Policy> make_policy(const std::string& alg, const RmabInstance& instance, const AlgorithmParams& p) {
  auto bound = [&] { return p.lambda_bound ? *p.lambda_bound : lambda_max_bound(instance); };
  if (alg == "maiql") return std::make_unique<MaiqlLearner>(instance, p.schedule, bound(), p.mode);
  if (alg == "wibql") return std::make_unique<WibqlLearner>(instance, p.schedule, bound(), p.wibql_action);
  if (alg == "lpql") return std::make_unique<LpqlLearner>(instance, p.schedule, p.n_lam, p.lambda_max);
  if (alg == "maiql_aprx") return std::make_unique<MaiqlAprxLearner>(instance, p.schedule, p.n_lam, p.lambda_max);
  if (alg == "ql0") return std::make_unique<Ql0Learner>(instance, p.schedule);
  if (alg == "oracle_lp") return std::make_unique<OracleLpPolicy>(instance, p.n_lam, p.lambda_max);
  if (alg == "oracle_lambda0") return std::make_unique<OracleLambda0Policy>(instance);
  if (alg == "oracle_lp_index") return std::make_unique<OracleLpIndexPolicy>(instance);
  if (alg == "random") return std::make_unique<RandomPolicy>(instance);
  throw std::invalid_argument("unknown algorithm '" + alg + "'");
}

SeedResult simulate(const RmabInstance& instance, Policy& policy, const AlgorithmParams& params, std::uint64_t seed,
                    long steps) {
  SeedResult out;
  out.seed = seed;
  Engine init_rng = make_engine(seed, streams::kInitialState);
  Simulator sim(instance, seed, random_initial_state(instance, init_rng));
  Engine explore = make_engine(seed, streams::kExploration);
  Engine replay_rng = make_engine(seed, streams::kReplay);
  const bool replay = params.replay_period > 0 && params.replays_per_dream > 0 && params.replay_period <= steps;
  ReplayBuffer buffer(params.replay_capacity);

  out.records.reserve(static_cast<std::size_t>(steps));
  double cumulative = 0.0;
  for (long t = 1; t <= steps; ++t) {
    const ActionVector a = policy.select(sim.state(), t, explore);
    if (a.size() != instance.n_arms()) {
      ++out.assignment_violations;
      throw std::logic_error(policy.name() + " returned " + std::to_string(a.size()) + " actions for " +
                             std::to_string(instance.n_arms()) + " arms");
    }
    if (!is_feasible(instance, a)) ++out.budget_violations;
    const StepResult res = sim.advance(a);
    policy.observe(res.experiences, t);
    if (replay) {
      for (const auto& e : res.experiences) buffer.push(e);
      if (t % params.replay_period == 0) {
        const auto batch = buffer.sample(static_cast<std::size_t>(params.replays_per_dream), replay_rng);
        policy.observe(batch, t);
      }
    }
    double instant = 0.0;
    for (double r : res.rewards) instant += r;
    cumulative += instant;
    out.records.push_back({seed, t, instant, cumulative, cumulative / static_cast<double>(t),
                           policy.exploration_rate(t), policy.last_lambda_index()});
  }
  return out;
}

SeedResult run_seed(const RunConfig& config, std::uint64_t seed, const std::filesystem::path& base_dir) {
  const RmabInstance instance = make_instance(config.domain, seed, base_dir);
  auto policy = make_policy(config.algorithm, instance, config.params);
  const long steps = is_oracle(config.algorithm) ? config.oracle_steps : config.horizon;
  return simulate(instance, *policy, config.params, seed, steps);
}

double extrapolate_level(const std::vector<RunRecord>& records, std::size_t settle_window) {
  if (settle_window == 0 || records.size() < settle_window) {
    throw std::invalid_argument("extrapolate_level: record shorter than the settle window");
  }
  double sum = 0.0;
  for (std::size_t k = records.size() - settle_window; k < records.size(); ++k) sum += records[k].instant_reward;
  return sum / static_cast<double>(settle_window);
}

std::vector<RunRecord> extrapolated_series(std::uint64_t seed, double level, long horizon) {
  std::vector<RunRecord> out;
  out.reserve(static_cast<std::size_t>(horizon));
  for (long t = 1; t <= horizon; ++t) out.push_back({seed, t, level, level * static_cast<double>(t), level, 0.0, -1});
  return out;
}

namespace {

void write_aggregates(const std::filesystem::path& dir, const std::vector<std::vector<RunRecord>>& runs,
                      const std::string& hash, std::size_t window, std::vector<std::filesystem::path>& files) {
  std::vector<std::vector<double>> mean_cum;
  std::vector<std::vector<double>> ma;
  for (const auto& r : runs) {
    std::vector<double> mc;
    std::vector<double> inst;
    for (const auto& rec : r) {
      mc.push_back(rec.mean_cumulative_reward);
      inst.push_back(rec.instant_reward);
    }
    mean_cum.push_back(std::move(mc));
    ma.push_back(moving_average(inst, window));
  }
  files.push_back(dir / "aggregate_mean_cumulative.csv");
  write_aggregate_csv(files.back(), aggregate_series(mean_cum), hash);
  files.push_back(dir / "aggregate_moving_average.csv");
  write_aggregate_csv(files.back(), aggregate_series(ma), hash);
}

std::string seed_file(std::uint64_t seed, const char* suffix = "") {
  return "seed_" + std::to_string(seed) + suffix + ".csv";
}

}  // namespace

RunSummary run(const RunConfig& config, const std::filesystem::path& base_dir) {
  config.validate();
  const std::string hash = config_hash(config);
  const std::filesystem::path dir = config.output_dir / config.algorithm;
  std::filesystem::create_directories(dir);

  RunSummary summary;
  summary.seeds.resize(config.seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < config.seeds.size(); k = next++) {
      const std::uint64_t seed = config.seeds[k];
      try {
        summary.seeds[k] = run_seed(config, seed, base_dir);
      } catch (const std::exception& e) {
        summary.seeds[k].seed = seed;
        summary.seeds[k].ok = false;
        summary.seeds[k].error = e.what();
      }
    }
  };
  unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads) : std::thread::hardware_concurrency();
  n_threads = std::clamp<unsigned>(n_threads, 1, static_cast<unsigned>(config.seeds.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned k = 1; k < n_threads; ++k) pool.emplace_back(worker);
    worker();
  }

  std::vector<std::vector<RunRecord>> series;
  for (auto& r : summary.seeds) {
    const bool oracle = is_oracle(config.algorithm);
    if (!r.ok) {
      summary.partial = true;
      summary.files.push_back(dir / seed_file(r.seed));
      write_seed_csv(summary.files.back(), r.records, hash, true);
      continue;
    }
    if (oracle) {
      summary.files.push_back(dir / seed_file(r.seed, "_raw"));
      write_seed_csv(summary.files.back(), r.records, hash);
      const double level = extrapolate_level(r.records, static_cast<std::size_t>(config.settle_window));
      series.push_back(extrapolated_series(r.seed, level, config.horizon));
    } else {
      series.push_back(r.records);
    }
    summary.files.push_back(dir / seed_file(r.seed));
    write_seed_csv(summary.files.back(), series.back(), hash);
  }
  if (summary.partial) {
    summary.files.push_back(dir / "PARTIAL");
    std::ofstream marker(summary.files.back());
    for (const auto& r : summary.seeds) {
      if (!r.ok) marker << "seed " << r.seed << ": " << r.error << '\n';
    }
  } else {
    std::error_code ec;
    std::filesystem::remove(dir / "PARTIAL", ec);
    write_aggregates(dir, series, hash, 100, summary.files);
  }
  return summary;
}

std::vector<std::filesystem::path> aggregate_directory(const std::filesystem::path& dir, std::size_t window) {
  std::vector<std::filesystem::path> inputs;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("seed_", 0) == 0 && name.size() > 4 && name.substr(name.size() - 4) == ".csv" &&
        name.find("_raw") == std::string::npos) {
      inputs.push_back(entry.path());
    }
  }
  if (inputs.empty()) throw std::runtime_error("no per-seed CSVs in " + dir.string());
  std::sort(inputs.begin(), inputs.end());
  std::vector<std::vector<RunRecord>> runs;
  std::string hash;
  for (const auto& path : inputs) {
    bool partial = false;
    runs.push_back(read_seed_csv(path, &partial));
    if (partial) throw std::runtime_error(path.string() + " is marked PARTIAL");
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    const std::string prefix = "# config_hash=";
    if (first.rfind(prefix, 0) == 0) hash = first.substr(prefix.size());
  }
  std::vector<std::filesystem::path> files;
  write_aggregates(dir, runs, hash, window, files);
  return files;
}

}  // namespace marmab
