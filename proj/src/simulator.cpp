#include "marmab/simulator.hpp"

#include <sstream>

namespace marmab {

namespace {
std::string infeasible_message(double cost, double budget) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "infeasible action vector: cost " << cost << " exceeds budget " << budget;
  return msg.str();
}
}  // namespace

InfeasibleAction::InfeasibleAction(double c, double b)
    : std::runtime_error(infeasible_message(c, b)), cost(c), budget(b) {}

std::vector<Engine> make_arm_streams(std::size_t n_arms, std::uint64_t master_seed) {
  std::vector<Engine> out;
  out.reserve(n_arms);
  for (std::size_t i = 0; i < n_arms; ++i) out.push_back(make_engine(master_seed, i));
  return out;
}

StepResult step(const RmabInstance& instance, const StateVector& s, const ActionVector& a,
                std::vector<Engine>& arm_rngs) {
  check_states(instance, s);
  const double cost = action_cost(instance, a);
  if (cost > instance.budget() + kFeasibilityTolerance) throw InfeasibleAction(cost, instance.budget());
  if (arm_rngs.size() != instance.n_arms()) throw InvalidModel("step: one RNG stream per arm required");

  StepResult out;
  const std::size_t n = instance.n_arms();
  out.next.states.resize(n);
  out.rewards.resize(n);
  out.experiences.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ArmModel& arm = instance.arm(i);
    const int next = categorical(arm_rngs[i], arm.row(s[i], a[i]), arm.n_states);
    const double r = arm.rewards[static_cast<std::size_t>(s[i])];
    out.next[i] = next;
    out.rewards[i] = r;
    out.experiences[i] = Experience{static_cast<int>(i), s[i], a[i], r, next, 0};
  }
  return out;
}

StateVector random_initial_state(const RmabInstance& instance, Engine& rng) {
  StateVector s;
  s.states.reserve(instance.n_arms());
  for (const auto& arm : instance.arms()) {
    s.states.push_back(static_cast<int>(uniform_index(rng, static_cast<std::size_t>(arm.n_states))));
  }
  return s;
}

Trajectory run_episode(const RmabInstance& instance, const PolicyFn& policy, long horizon,
                       const StateVector& initial, std::uint64_t seed) {
  if (horizon < 1) throw std::invalid_argument("run_episode: horizon must be >= 1");
  Simulator sim(instance, seed, initial);
  Trajectory traj;
  traj.states.reserve(static_cast<std::size_t>(horizon));
  traj.actions.reserve(static_cast<std::size_t>(horizon));
  traj.rewards.reserve(static_cast<std::size_t>(horizon));
  for (long t = 1; t <= horizon; ++t) {
    ActionVector a = policy(sim.state(), t);
    traj.states.push_back(sim.state());
    StepResult res = sim.advance(a);
    traj.actions.push_back(std::move(a));
    traj.rewards.push_back(std::move(res.rewards));
  }
  return traj;
}

Simulator::Simulator(const RmabInstance& instance, std::uint64_t seed, StateVector initial)
    : instance_(&instance), arm_rngs_(make_arm_streams(instance.n_arms(), seed)), state_(std::move(initial)) {
  check_states(instance, state_);
}

StepResult Simulator::advance(const ActionVector& a) {
  StepResult res = step(*instance_, state_, a, arm_rngs_);
  state_ = res.next;
  return res;
}

}  // namespace marmab
