#pragma once

#include <array>
#include <optional>

#include "marmab/core.hpp"
#include "marmab/rng.hpp"

namespace marmab {

/// Two states (0 bad, 1 good), actions with costs (0, 1, 2), reward = state.
/// stay_good[a] = P(good -> good | a), recover[a] = P(bad -> good | a).
struct ProcessType {
  std::array<double, 3> stay_good;
  std::array<double, 3> recover;
};

struct TwoProcessParams {
  double fraction_type_a = 0.25;
  /// Needs acting every round; hard to pull back from the bad state.
  ProcessType type_a{{0.05, 0.91, 1.0}, {0.07, 0.07, 0.07}};
  /// Stays good unattended; any action recovers it.
  ProcessType type_b{{0.91, 0.91, 0.91}, {0.30, 0.91, 0.95}};
  /// Per-arm uniform perturbation in [-jitter, jitter] of every probability
  /// strictly inside (0, 1); exact 0 and 1 entries are structural and kept.
  double jitter = 0.01;
  bool shuffle = true;
};

ArmModel two_process_arm(const ProcessType& type);

/// ceil(fraction * N) Type-A arms, the rest Type-B. Jitter keeps every
/// probability inside [0, 1] and non-decreasing in the action.
RmabInstance gen_two_process(int n_arms, double budget, double discount, const TwoProcessParams& params,
                             Engine& rng);

enum class RowSampling { normalized_uniform, dirichlet };

/// Uniform rewards, costs from a cumulative sum of uniforms with c_0 = 0,
/// random transition rows. Budget defaults to N * M / 2.
RmabInstance gen_random(int n_arms, int n_states, int n_actions, double discount, Engine& rng,
                        RowSampling rows = RowSampling::normalized_uniform,
                        std::optional<double> budget = std::nullopt);

}  // namespace marmab
