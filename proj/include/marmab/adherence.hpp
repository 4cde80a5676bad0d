#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "marmab/core.hpp"
#include "marmab/domains.hpp"
#include "marmab/rng.hpp"

namespace marmab {

inline constexpr int kTraceDays = 168;

using Trace = std::vector<int>;

/// One patient per line, kTraceDays comma-separated 0/1 values.
/// Throws std::runtime_error naming the 1-based line on malformed input.
std::vector<Trace> read_traces(const std::filesystem::path& path, int days = kTraceDays);
void write_traces(const std::vector<Trace>& traces, const std::filesystem::path& path);

/// History state of the L days ending at `end` (inclusive); bit 0 is the latest day.
int history_state(const Trace& trace, std::size_t end, int L);
inline int next_history_state(int s, int x, int L) { return ((s << 1) | x) & ((1 << L) - 1); }

/// 2^L x 2^L row-major transition counts. Traces shorter than L + 1 give zeros
/// and append a message to `warnings` when provided.
std::vector<double> transition_counts(const Trace& trace, int L, std::vector<std::string>* warnings = nullptr);

struct KMeansResult {
  std::vector<std::vector<double>> centers;
  std::vector<int> assignment;
  std::vector<std::size_t> sizes;
  double inertia = 0.0;
};

/// Lloyd's algorithm, best of `restarts`, seeded from distinct points only.
/// Empty clusters are dropped (recorded in `warnings`).
KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k, int restarts, Engine& rng,
                    std::vector<std::string>* warnings = nullptr);

struct AdherenceConfig {
  int history_length = 3;
  int k_clusters = 10;
  int kmeans_restarts = 10;
  std::array<double, 3> action_scale{1.0, 1.5, 2.0};
  double smoothing = 1.0;
  double fraction_type_a = 0.25;
  ProcessType type_a = TwoProcessParams{}.type_a;

  void check() const;
};

/// Per-cluster Beta priors: alpha/beta[s] = summed counts toward/away from adherence.
struct ClusterPriors {
  std::vector<std::vector<double>> toward;
  std::vector<std::vector<double>> away;
  std::vector<std::size_t> sizes;
};

ClusterPriors cluster_priors(const std::vector<Trace>& traces, const AdherenceConfig& config, Engine& rng,
                             std::vector<std::string>* warnings = nullptr);

/// Arm sampled from a cluster chosen proportionally to its size.
ArmModel sample_adherence_arm(const ClusterPriors& priors, const AdherenceConfig& config, Engine& rng);

/// Two-state process type lifted to a history-L encoding (current day = bit 0).
ArmModel lift_process_arm(const ProcessType& type, int L);

RmabInstance gen_adherence_instance(const std::vector<Trace>& traces, int n_arms, double budget, double discount,
                                    const AdherenceConfig& config, Engine& rng,
                                    std::vector<std::string>* warnings = nullptr);

struct TraceMode {
  double stay_adherent = 0.9;  // P(1 -> 1)
  double recover = 0.3;        // P(0 -> 1)
  double weight = 1.0;
};

/// Day 0 drawn from the chain's stationary distribution.
std::vector<Trace> gen_synthetic_traces(int n_patients, const std::vector<TraceMode>& modes, Engine& rng,
                                        int days = kTraceDays);

std::vector<TraceMode> default_trace_modes();

}  // namespace marmab
