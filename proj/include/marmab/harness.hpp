#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "marmab/core.hpp"
#include "marmab/csv.hpp"
#include "marmab/learner.hpp"
#include "marmab/maiql.hpp"

namespace marmab {

struct AlgorithmParams {
  ScheduleParams schedule;
  int n_lam = 2000;
  std::optional<double> lambda_max;    // grid upper end; bound from the instance when empty
  std::optional<double> lambda_bound;  // index clip; lambda_max_bound(instance) when empty
  long replays_per_dream = 0;
  long replay_period = 0;  // 0 disables replay
  std::optional<std::size_t> replay_capacity;
  int wibql_action = 1;
  MaiqlMode mode = MaiqlMode::discounted;
};

/// Tuned defaults per (domain type, algorithm). Unknown combinations fall back
/// to the two_process table.
AlgorithmParams default_params(const std::string& domain_type, const std::string& algorithm);

/// Applies the keys present in `overrides` on top of `base`.
AlgorithmParams apply_overrides(AlgorithmParams base, const nlohmann::json& overrides);
nlohmann::json params_to_json(const AlgorithmParams& p);

const std::vector<std::string>& known_algorithms();
bool is_oracle(const std::string& algorithm);

struct RunConfig {
  nlohmann::json domain;
  std::string algorithm;
  long horizon = 50000;
  std::vector<std::uint64_t> seeds;
  AlgorithmParams params;
  long oracle_steps = 1000;
  long settle_window = 500;
  std::filesystem::path output_dir = "out";
  int threads = 0;  // 0: hardware concurrency

  /// Canonical resolved form; the basis of config_hash.
  nlohmann::json to_json() const;
  void validate() const;
};

/// One RunConfig per listed algorithm. Accepts "algorithm" or "algorithms",
/// "seeds" or "n_seeds" (+ optional "first_seed"), "params" for all and
/// "params_by_algorithm" for per-algorithm overrides.
std::vector<RunConfig> configs_from_json(const nlohmann::json& j);

/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string config_hash(const RunConfig& config);

std::string domain_type(const nlohmann::json& domain);
/// Instance for a seed; stochastic domains draw from the seed's instance stream.
RmabInstance make_instance(const nlohmann::json& domain, std::uint64_t seed,
                           const std::filesystem::path& base_dir = {});

std::unique_ptr<Policy> make_policy(const std::string& algorithm, const RmabInstance& instance,
                                    const AlgorithmParams& params);

struct SeedResult {
  std::uint64_t seed = 0;
  std::vector<RunRecord> records;
  long budget_violations = 0;
  long assignment_violations = 0;
  bool ok = true;
  std::string error;
};

/// Runs one seed for `steps` rounds on `instance`.
SeedResult simulate(const RmabInstance& instance, Policy& policy, const AlgorithmParams& params, std::uint64_t seed,
                    long steps);

/// Builds the instance and policy for `seed` and simulates config.horizon steps
/// (oracle_steps for oracles, without extrapolation).
SeedResult run_seed(const RunConfig& config, std::uint64_t seed, const std::filesystem::path& base_dir = {});

/// Mean instant reward over the final settle_window records.
double extrapolate_level(const std::vector<RunRecord>& records, std::size_t settle_window);
/// Flat reference series at `level` for t = 1..horizon.
std::vector<RunRecord> extrapolated_series(std::uint64_t seed, double level, long horizon);

struct RunSummary {
  std::vector<SeedResult> seeds;
  std::vector<std::filesystem::path> files;
  bool partial = false;
};

/// Runs all seeds (thread pool), writes per-seed and aggregate CSVs under
/// output_dir/<algorithm>/.
RunSummary run(const RunConfig& config, const std::filesystem::path& base_dir = {});

/// Recomputes aggregates from per-seed CSVs in `dir`.
std::vector<std::filesystem::path> aggregate_directory(const std::filesystem::path& dir, std::size_t window = 100);

}  // namespace marmab
