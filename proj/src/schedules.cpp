#include "marmab/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace marmab {

namespace {
std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }
}  // namespace

void ScheduleParams::check() const {
  if (!(C > 0.0) || !(C_prime > 0.0) || D < 1 || !(epsilon0 > 0.0 && epsilon0 <= 1.0)) {
    throw std::invalid_argument("schedule params: need C, C', D > 0 and epsilon0 in (0, 1]");
  }
}

double alpha(const ScheduleParams& p, std::uint64_t nu) {
  if (nu == 0) throw std::invalid_argument("alpha: nu must be >= 1");
  return p.C / static_cast<double>(ceil_div(nu, static_cast<std::uint64_t>(p.D)));
}

double gamma(const ScheduleParams& p, std::uint64_t nu) {
  if (nu == 0) throw std::invalid_argument("gamma: nu must be >= 1");
  const double x = static_cast<double>(nu) * std::log(static_cast<double>(nu)) / static_cast<double>(p.D);
  return p.C_prime / (1.0 + std::ceil(x));
}

double epsilon(const ScheduleParams& p, long t) {
  if (t < 1) throw std::invalid_argument("epsilon: t must be >= 1");
  const auto k = ceil_div(static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(p.D));
  return std::min(1.0, p.epsilon0 / static_cast<double>(k));
}

VisitCounter::VisitCounter(const RmabInstance& instance) {
  std::size_t total = 0;
  for (const auto& arm : instance.arms()) {
    base_.push_back(total);
    actions_.push_back(static_cast<std::size_t>(arm.n_actions));
    total += static_cast<std::size_t>(arm.n_states) * static_cast<std::size_t>(arm.n_actions);
  }
  counts_.assign(total, 0);
}

std::uint64_t VisitCounter::total() const {
  std::uint64_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

ActionVector random_action(const RmabInstance& instance, Engine& rng) {
  const std::size_t n = instance.n_arms();
  ActionVector out = ActionVector::passive(n);
  std::vector<char> visited(n, 0);
  std::vector<std::size_t> candidates;
  std::vector<double> weights;
  double remaining = instance.budget() + 0.5 * kFeasibilityTolerance;
  for (;;) {
    candidates.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = instance.arm(i).costs;
      if (!visited[i] && c.size() > 1 && c[1] <= remaining) candidates.push_back(i);
    }
    if (candidates.empty()) break;
    const std::size_t i = candidates[uniform_index(rng, candidates.size())];
    visited[i] = 1;
    const auto& c = instance.arm(i).costs;
    weights.assign(c.size(), 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j] <= remaining) weights[j] = 1.0 / (1.0 + c[j]);
    }
    const int a = categorical(rng, weights.data(), static_cast<int>(weights.size()));
    out[i] = a;
    remaining -= c[static_cast<std::size_t>(a)];
  }
  return out;
}

}  // namespace marmab
