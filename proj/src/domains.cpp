#include "marmab/domains.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace marmab {

ArmModel two_process_arm(const ProcessType& type) {
  ArmModel arm = ArmModel::zeros(2, 3);
  arm.costs = {0.0, 1.0, 2.0};
  arm.rewards = {0.0, 1.0};
  for (int a = 0; a < 3; ++a) {
    const double g = type.stay_good[static_cast<std::size_t>(a)];
    const double b = type.recover[static_cast<std::size_t>(a)];
    arm.row(1, a)[1] = g;
    arm.row(1, a)[0] = 1.0 - g;
    arm.row(0, a)[1] = b;
    arm.row(0, a)[0] = 1.0 - b;
  }
  return arm;
}

namespace {
ProcessType perturb(ProcessType t, double jitter, Engine& rng) {
  auto shake = [&](std::array<double, 3>& v) {
    for (auto& x : v) {
      const double u = 2.0 * uniform01(rng) - 1.0;
      if (x > 0.0 && x < 1.0) x = std::clamp(x + jitter * u, 0.0, 1.0);
    }
    for (std::size_t a = 1; a < v.size(); ++a) v[a] = std::max(v[a], v[a - 1]);
  };
  shake(t.stay_good);
  shake(t.recover);
  return t;
}
}  // namespace

RmabInstance gen_two_process(int n_arms, double budget, double discount, const TwoProcessParams& params,
                             Engine& rng) {
  if (n_arms < 1) throw std::invalid_argument("gen_two_process: need at least one arm");
  const int n_a = static_cast<int>(std::ceil(params.fraction_type_a * n_arms - 1e-9));
  std::vector<char> is_a(static_cast<std::size_t>(n_arms), 0);
  for (int i = 0; i < n_a; ++i) is_a[static_cast<std::size_t>(i)] = 1;
  if (params.shuffle) {
    for (std::size_t i = is_a.size(); i > 1; --i) std::swap(is_a[i - 1], is_a[uniform_index(rng, i)]);
  }
  std::vector<ArmModel> arms;
  for (int i = 0; i < n_arms; ++i) {
    const ProcessType& base = is_a[static_cast<std::size_t>(i)] ? params.type_a : params.type_b;
    arms.push_back(two_process_arm(params.jitter > 0.0 ? perturb(base, params.jitter, rng) : base));
  }
  return RmabInstance(std::move(arms), budget, discount);
}

RmabInstance gen_random(int n_arms, int n_states, int n_actions, double discount, Engine& rng, RowSampling rows,
                        std::optional<double> budget) {
  if (n_arms < 1 || n_states < 1 || n_actions < 1) throw std::invalid_argument("gen_random: sizes must be positive");
  std::vector<ArmModel> arms;
  for (int i = 0; i < n_arms; ++i) {
    ArmModel arm = ArmModel::zeros(n_states, n_actions);
    for (auto& r : arm.rewards) r = uniform01(rng);
    double acc = 0.0;
    for (auto& c : arm.costs) {
      acc += uniform01(rng);
      c = acc;
    }
    arm.costs[0] = 0.0;
    for (int s = 0; s < n_states; ++s) {
      for (int a = 0; a < n_actions; ++a) {
        double* row = arm.row(s, a);
        double total = 0.0;
        for (int k = 0; k < n_states; ++k) {
          const double u = uniform01(rng);
          row[k] = rows == RowSampling::dirichlet ? -std::log1p(-u) : u;
          total += row[k];
        }
        if (total <= 0.0) {
          row[0] = 1.0;
          continue;
        }
        for (int k = 0; k < n_states; ++k) row[k] /= total;
      }
    }
    arms.push_back(std::move(arm));
  }
  const double b = budget ? *budget : 0.5 * n_arms * n_actions;
  return RmabInstance(std::move(arms), b, discount);
}

}  // namespace marmab
