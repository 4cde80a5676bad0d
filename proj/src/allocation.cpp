#include "marmab/allocation.hpp"

#include <limits>

namespace marmab {

ActionVector greedy_index_allocation(const RmabInstance& instance, const IndexFn& index) {
  const std::size_t n = instance.n_arms();
  ActionVector out = ActionVector::passive(n);
  double remaining = instance.budget() + 0.5 * kFeasibilityTolerance;
  for (;;) {
    std::size_t best_arm = n;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = instance.arm(i).costs;
      const int next = out[i] + 1;
      if (next >= static_cast<int>(c.size())) continue;
      const double extra = c[static_cast<std::size_t>(next)] - c[static_cast<std::size_t>(out[i])];
      if (extra > remaining) continue;
      const double v = index(i, next);
      if (best_arm == n || v > best) {
        best = v;
        best_arm = i;
      }
    }
    if (best_arm == n) break;
    const auto& c = instance.arm(best_arm).costs;
    remaining -= c[static_cast<std::size_t>(out[best_arm] + 1)] - c[static_cast<std::size_t>(out[best_arm])];
    ++out[best_arm];
  }
  return out;
}

}  // namespace marmab
