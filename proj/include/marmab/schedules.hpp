#pragma once

#include <cstdint>
#include <vector>

#include "marmab/core.hpp"
#include "marmab/rng.hpp"

namespace marmab {

struct ScheduleParams {
  double C = 0.1;        // Q step multiplier
  double C_prime = 0.2;  // index step multiplier
  long D = 500;          // decay divisor
  double epsilon0 = 0.99;

  void check() const;
};

/// C / ceil(nu / D). nu >= 1.
double alpha(const ScheduleParams& p, std::uint64_t nu);
/// C' / (1 + ceil(nu ln nu / D)); gamma(1) == C'.
double gamma(const ScheduleParams& p, std::uint64_t nu);
/// min(1, epsilon0 / ceil(t / D)). t >= 1.
double epsilon(const ScheduleParams& p, long t);

/// Per-(arm, state, action) update counts.
class VisitCounter {
 public:
  VisitCounter() = default;
  explicit VisitCounter(const RmabInstance& instance);

  /// Increments and returns the new count.
  std::uint64_t increment(int arm, int s, int a) { return ++counts_[offset(arm, s, a)]; }
  std::uint64_t get(int arm, int s, int a) const { return counts_[offset(arm, s, a)]; }
  std::uint64_t total() const;

 private:
  std::size_t offset(int arm, int s, int a) const {
    const auto i = static_cast<std::size_t>(arm);
    return base_[i] + static_cast<std::size_t>(s) * actions_[i] + static_cast<std::size_t>(a);
  }
  std::vector<std::size_t> base_;
  std::vector<std::size_t> actions_;
  std::vector<std::uint64_t> counts_;
};

/// Budget-respecting random exploration: repeatedly pick a not-yet-visited arm
/// that still has an affordable non-passive action, then draw one of its
/// affordable actions with probability proportional to 1 / (1 + cost).
ActionVector random_action(const RmabInstance& instance, Engine& rng);

}  // namespace marmab
