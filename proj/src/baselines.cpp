#include "marmab/baselines.hpp"

#include <algorithm>

#include "marmab/knapsack.hpp"

namespace marmab {

Ql0Learner::Ql0Learner(const RmabInstance& instance, ScheduleParams params)
    : EpsilonGreedyLearner(instance, params), counter_(instance) {
  for (const auto& arm : instance.arms()) {
    q_.emplace_back(static_cast<std::size_t>(arm.n_states) * static_cast<std::size_t>(arm.n_actions), 0.0);
  }
}

double Ql0Learner::q(int arm, int s, int a) const {
  const int M = instance_->arm(static_cast<std::size_t>(arm)).n_actions;
  return q_[static_cast<std::size_t>(arm)][static_cast<std::size_t>(s * M + a)];
}

void Ql0Learner::observe(std::span<const Experience> batch, long /*t*/) {
  for (const auto& e : batch) update(e);
}

void Ql0Learner::update(const Experience& e) {
  auto& q = q_[static_cast<std::size_t>(e.arm)];
  const int M = instance_->arm(static_cast<std::size_t>(e.arm)).n_actions;
  const double step = alpha(params_, counter_.increment(e.arm, e.s, e.a));
  const auto next = q.begin() + e.s_next * M;
  const double best = *std::max_element(next, next + M);
  double& cell = q[static_cast<std::size_t>(e.s * M + e.a)];
  cell += step * (e.r + instance_->discount() * best - cell);
}

ActionVector Ql0Learner::greedy(const StateVector& s) {
  KnapsackProblem kp;
  kp.budget = instance_->budget();
  for (std::size_t i = 0; i < instance_->n_arms(); ++i) {
    const auto& arm = instance_->arm(i);
    kp.costs.push_back(arm.costs);
    const auto first = q_[i].begin() + s[i] * arm.n_actions;
    kp.values.emplace_back(first, first + arm.n_actions);
  }
  return solve(kp);
}

ActionVector RandomPolicy::select(const StateVector& /*s*/, long /*t*/, Engine& rng) {
  return random_action(*instance_, rng);
}

}  // namespace marmab
