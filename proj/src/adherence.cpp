#include "marmab/adherence.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace marmab {

std::vector<Trace> read_traces(const std::filesystem::path& path, int days) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file " + path.string());
  std::vector<Trace> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Trace t;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (cell != "0" && cell != "1") {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": non-binary value '" + cell + "'");
      }
      t.push_back(cell == "1");
    }
    if (static_cast<int>(t.size()) != days) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(days) +
                               " values, got " + std::to_string(t.size()));
    }
    out.push_back(std::move(t));
  }
  return out;
}

void write_traces(const std::vector<Trace>& traces, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (const auto& t : traces) {
    for (std::size_t d = 0; d < t.size(); ++d) out << (d ? "," : "") << t[d];
    out << '\n';
  }
}

int history_state(const Trace& trace, std::size_t end, int L) {
  int s = 0;
  for (int k = 0; k < L; ++k) s |= trace[end - static_cast<std::size_t>(k)] << k;
  return s;
}

std::vector<double> transition_counts(const Trace& trace, int L, std::vector<std::string>* warnings) {
  const std::size_t S = std::size_t{1} << L;
  std::vector<double> counts(S * S, 0.0);
  if (trace.size() < static_cast<std::size_t>(L) + 1) {
    if (warnings) warnings->push_back("trace of length " + std::to_string(trace.size()) + " has no full window");
    return counts;
  }
  int s = history_state(trace, static_cast<std::size_t>(L) - 1, L);
  for (std::size_t d = static_cast<std::size_t>(L); d < trace.size(); ++d) {
    const int next = next_history_state(s, trace[d], L);
    counts[static_cast<std::size_t>(s) * S + static_cast<std::size_t>(next)] += 1.0;
    s = next;
  }
  return counts;
}

namespace {
double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d += (a[k] - b[k]) * (a[k] - b[k]);
  return d;
}
}  // namespace

KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k, int restarts, Engine& rng,
                    std::vector<std::string>* warnings) {
  if (points.empty()) throw std::invalid_argument("kmeans: no points");
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  std::vector<std::size_t> distinct;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool seen = false;
    for (std::size_t j : distinct) {
      if (points[j] == points[i]) {
        seen = true;
        break;
      }
    }
    if (!seen) distinct.push_back(i);
  }
  const std::size_t kk = std::min(static_cast<std::size_t>(k), distinct.size());
  const std::size_t dim = points.front().size();

  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, restarts); ++r) {
    std::vector<std::size_t> pool = distinct;
    std::vector<std::vector<double>> centers;
    for (std::size_t c = 0; c < kk; ++c) {
      const std::size_t pick = c + uniform_index(rng, pool.size() - c);
      std::swap(pool[c], pool[pick]);
      centers.push_back(points[pool[c]]);
    }
    std::vector<int> assign(points.size(), -1);
    for (int iter = 0; iter < 300; ++iter) {
      bool changed = false;
      for (std::size_t i = 0; i < points.size(); ++i) {
        int arg = 0;
        double d_best = sq_dist(points[i], centers[0]);
        for (std::size_t c = 1; c < centers.size(); ++c) {
          const double d = sq_dist(points[i], centers[c]);
          if (d < d_best) {
            d_best = d;
            arg = static_cast<int>(c);
          }
        }
        if (assign[i] != arg) {
          assign[i] = arg;
          changed = true;
        }
      }
      std::vector<std::vector<double>> sums(centers.size(), std::vector<double>(dim, 0.0));
      std::vector<std::size_t> n(centers.size(), 0);
      for (std::size_t i = 0; i < points.size(); ++i) {
        auto& acc = sums[static_cast<std::size_t>(assign[i])];
        for (std::size_t d = 0; d < dim; ++d) acc[d] += points[i][d];
        ++n[static_cast<std::size_t>(assign[i])];
      }
      for (std::size_t c = 0; c < centers.size(); ++c) {
        if (n[c] == 0) continue;
        for (std::size_t d = 0; d < dim; ++d) centers[c][d] = sums[c][d] / static_cast<double>(n[c]);
      }
      if (!changed && iter > 0) break;
    }
    double inertia = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) inertia += sq_dist(points[i], centers[static_cast<std::size_t>(assign[i])]);
    if (inertia < best.inertia) {
      best.inertia = inertia;
      best.centers = centers;
      best.assignment = assign;
    }
  }

  // drop empty clusters and renumber
  std::vector<std::size_t> sizes(best.centers.size(), 0);
  for (int a : best.assignment) ++sizes[static_cast<std::size_t>(a)];
  std::vector<int> remap(best.centers.size(), -1);
  KMeansResult out;
  out.inertia = best.inertia;
  for (std::size_t c = 0; c < best.centers.size(); ++c) {
    if (sizes[c] == 0) {
      if (warnings) warnings->push_back("kmeans: dropped empty cluster " + std::to_string(c));
      continue;
    }
    remap[c] = static_cast<int>(out.centers.size());
    out.centers.push_back(best.centers[c]);
    out.sizes.push_back(sizes[c]);
  }
  for (int a : best.assignment) out.assignment.push_back(remap[static_cast<std::size_t>(a)]);
  return out;
}

void AdherenceConfig::check() const {
  if (history_length < 1 || history_length > 6) throw std::invalid_argument("adherence: history_length must be in 1..6");
  if (k_clusters < 1) throw std::invalid_argument("adherence: k_clusters must be >= 1");
  if (action_scale[0] < 1.0 || action_scale[1] < action_scale[0] || action_scale[2] < action_scale[1]) {
    throw std::invalid_argument("adherence: action scales must be >= 1 and non-decreasing");
  }
  if (!(smoothing > 0.0)) throw std::invalid_argument("adherence: smoothing must be positive");
}

ClusterPriors cluster_priors(const std::vector<Trace>& traces, const AdherenceConfig& config, Engine& rng,
                             std::vector<std::string>* warnings) {
  config.check();
  const int L = config.history_length;
  const std::size_t S = std::size_t{1} << L;
  std::vector<std::vector<double>> features;
  for (const auto& t : traces) features.push_back(transition_counts(t, L, warnings));
  const KMeansResult km = kmeans(features, config.k_clusters, config.kmeans_restarts, rng, warnings);

  ClusterPriors pr;
  pr.sizes = km.sizes;
  pr.toward.assign(km.centers.size(), std::vector<double>(S, 0.0));
  pr.away.assign(km.centers.size(), std::vector<double>(S, 0.0));
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto c = static_cast<std::size_t>(km.assignment[i]);
    for (std::size_t s = 0; s < S; ++s) {
      const auto adh = static_cast<std::size_t>(next_history_state(static_cast<int>(s), 1, L));
      const auto non = static_cast<std::size_t>(next_history_state(static_cast<int>(s), 0, L));
      pr.toward[c][s] += features[i][s * S + adh];
      pr.away[c][s] += features[i][s * S + non];
    }
  }
  return pr;
}

ArmModel sample_adherence_arm(const ClusterPriors& priors, const AdherenceConfig& config, Engine& rng) {
  const int L = config.history_length;
  const int S = 1 << L;
  std::vector<double> w(priors.sizes.begin(), priors.sizes.end());
  const auto c = static_cast<std::size_t>(categorical(rng, w.data(), static_cast<int>(w.size())));
  ArmModel arm = ArmModel::zeros(S, 3);
  arm.costs = {0.0, 1.0, 2.0};
  for (int s = 0; s < S; ++s) {
    arm.rewards[static_cast<std::size_t>(s)] = s & 1;
    const double a0 = priors.toward[c][static_cast<std::size_t>(s)];
    const double b0 = priors.away[c][static_cast<std::size_t>(s)];
    for (int a = 0; a < 3; ++a) {
      const double p = beta_sample(rng, a0 * config.action_scale[static_cast<std::size_t>(a)] + config.smoothing,
                                   b0 + config.smoothing);
      double* row = arm.row(s, a);
      row[next_history_state(s, 1, L)] = p;
      row[next_history_state(s, 0, L)] = 1.0 - p;
    }
  }
  return arm;
}

ArmModel lift_process_arm(const ProcessType& type, int L) {
  const int S = 1 << L;
  ArmModel arm = ArmModel::zeros(S, 3);
  arm.costs = {0.0, 1.0, 2.0};
  for (int s = 0; s < S; ++s) {
    arm.rewards[static_cast<std::size_t>(s)] = s & 1;
    for (int a = 0; a < 3; ++a) {
      const double p = (s & 1) ? type.stay_good[static_cast<std::size_t>(a)] : type.recover[static_cast<std::size_t>(a)];
      double* row = arm.row(s, a);
      row[next_history_state(s, 1, L)] = p;
      row[next_history_state(s, 0, L)] = 1.0 - p;
    }
  }
  return arm;
}

RmabInstance gen_adherence_instance(const std::vector<Trace>& traces, int n_arms, double budget, double discount,
                                    const AdherenceConfig& config, Engine& rng, std::vector<std::string>* warnings) {
  if (n_arms < 1) throw std::invalid_argument("gen_adherence_instance: need at least one arm");
  const ClusterPriors priors = cluster_priors(traces, config, rng, warnings);
  const int n_a = static_cast<int>(std::ceil(config.fraction_type_a * n_arms - 1e-9));
  std::vector<char> is_a(static_cast<std::size_t>(n_arms), 0);
  for (int i = 0; i < n_a; ++i) is_a[static_cast<std::size_t>(i)] = 1;
  for (std::size_t i = is_a.size(); i > 1; --i) std::swap(is_a[i - 1], is_a[uniform_index(rng, i)]);
  std::vector<ArmModel> arms;
  for (int i = 0; i < n_arms; ++i) {
    arms.push_back(is_a[static_cast<std::size_t>(i)] ? lift_process_arm(config.type_a, config.history_length)
                                                     : sample_adherence_arm(priors, config, rng));
  }
  return RmabInstance(std::move(arms), budget, discount);
}

std::vector<Trace> gen_synthetic_traces(int n_patients, const std::vector<TraceMode>& modes, Engine& rng, int days) {
  if (modes.empty()) throw std::invalid_argument("gen_synthetic_traces: no modes");
  std::vector<double> w;
  for (const auto& m : modes) w.push_back(m.weight);
  std::vector<Trace> out;
  for (int n = 0; n < n_patients; ++n) {
    const auto& m = modes[static_cast<std::size_t>(categorical(rng, w.data(), static_cast<int>(w.size())))];
    const double denom = m.recover + (1.0 - m.stay_adherent);
    const double pi1 = denom > 0.0 ? m.recover / denom : 1.0;
    Trace t(static_cast<std::size_t>(days));
    int x = uniform01(rng) < pi1;
    for (int d = 0; d < days; ++d) {
      if (d > 0) x = uniform01(rng) < (x ? m.stay_adherent : m.recover);
      t[static_cast<std::size_t>(d)] = x;
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<TraceMode> default_trace_modes() {
  return {{0.95, 0.50, 0.4}, {0.80, 0.20, 0.35}, {0.50, 0.05, 0.25}};
}

}  // namespace marmab
