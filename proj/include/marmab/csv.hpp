#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace marmab {

struct RunRecord {
  std::uint64_t seed = 0;
  long t = 0;
  double instant_reward = 0.0;
  double cumulative_reward = 0.0;
  double mean_cumulative_reward = 0.0;
  double epsilon = 0.0;
  int lambda_index = -1;
};

struct AggregateRow {
  long t = 0;
  double mean = 0.0;
  double p25 = 0.0;
  double p75 = 0.0;
  std::size_t n_seeds = 0;
};

inline constexpr const char* kSeedHeader = "seed,t,instant_reward,cumulative_reward,mean_cumulative_reward,epsilon,lambda_index";
inline constexpr const char* kAggregateHeader = "t,mean,p25,p75,n_seeds";
inline constexpr const char* kPartialMarker = "# PARTIAL";

/// Shortest round-trip decimal form; locale independent.
std::string format_double(double x);

/// A leading "# config_hash=<hash>" line precedes the header when hash is non-empty.
void write_seed_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records,
                    const std::string& config_hash, bool partial = false);
/// Skips '#' lines. Throws std::runtime_error on a bad header or row.
std::vector<RunRecord> read_seed_csv(const std::filesystem::path& path, bool* partial = nullptr);

void write_aggregate_csv(const std::filesystem::path& path, const std::vector<AggregateRow>& rows,
                         const std::string& config_hash);
std::vector<AggregateRow> read_aggregate_csv(const std::filesystem::path& path);

/// Linear interpolation between order statistics (q in [0, 1]).
double percentile(std::vector<double> values, double q);

/// Per-t mean / p25 / p75 across seeds; series must share a length.
std::vector<AggregateRow> aggregate_series(const std::vector<std::vector<double>>& per_seed);

/// Trailing mean over min(window, t) points.
std::vector<double> moving_average(const std::vector<double>& series, std::size_t window);

}  // namespace marmab
