#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "marmab/core.hpp"
#include "marmab/rng.hpp"

namespace marmab {

struct Experience {
  int arm = 0;
  int s = 0;
  int a = 0;
  double r = 0.0;
  int s_next = 0;
  std::uint64_t use_count = 0;

  bool operator==(const Experience&) const = default;
};

class InfeasibleAction : public std::runtime_error {
 public:
  InfeasibleAction(double cost, double budget);
  double cost;
  double budget;
};

struct StepResult {
  StateVector next;
  std::vector<double> rewards;
  std::vector<Experience> experiences;
};

/// One engine per arm, seeded from (master, arm index).
std::vector<Engine> make_arm_streams(std::size_t n_arms, std::uint64_t master_seed);

/// Applies `a` in state `s`. Arm i draws only from arm_rngs[i].
StepResult step(const RmabInstance& instance, const StateVector& s, const ActionVector& a,
                std::vector<Engine>& arm_rngs);

/// Uniformly random initial state per arm.
StateVector random_initial_state(const RmabInstance& instance, Engine& rng);

struct Trajectory {
  std::vector<StateVector> states;
  std::vector<ActionVector> actions;
  std::vector<std::vector<double>> rewards;

  std::size_t size() const { return actions.size(); }
};

using PolicyFn = std::function<ActionVector(const StateVector&, long t)>;

/// Runs t = 1..horizon. The policy sees the state before each step.
Trajectory run_episode(const RmabInstance& instance, const PolicyFn& policy, long horizon,
                       const StateVector& initial, std::uint64_t seed);

/// Stateful environment used by the harness.
class Simulator {
 public:
  Simulator(const RmabInstance& instance, std::uint64_t seed, StateVector initial);

  const StateVector& state() const { return state_; }
  StepResult advance(const ActionVector& a);

 private:
  const RmabInstance* instance_;
  std::vector<Engine> arm_rngs_;
  StateVector state_;
};

}  // namespace marmab
