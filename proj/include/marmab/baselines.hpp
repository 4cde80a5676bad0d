#pragma once

#include <vector>

#include "marmab/learner.hpp"

namespace marmab {

/// Budget-agnostic Q-learning (lambda = 0) with knapsack action selection.
class Ql0Learner : public EpsilonGreedyLearner {
 public:
  Ql0Learner(const RmabInstance& instance, ScheduleParams params);

  std::string name() const override { return "ql0"; }
  void observe(std::span<const Experience> batch, long t) override;
  ActionVector greedy(const StateVector& s) override;

  void update(const Experience& e);
  double q(int arm, int s, int a) const;

 private:
  std::vector<std::vector<double>> q_;  // per arm [s][a]
  VisitCounter counter_;
};

/// Uniform exploration every round (random_action), no learning.
class RandomPolicy : public Policy {
 public:
  explicit RandomPolicy(const RmabInstance& instance) : instance_(&instance) {}
  std::string name() const override { return "random"; }
  ActionVector select(const StateVector& s, long t, Engine& rng) override;
  double exploration_rate(long) const override { return 1.0; }

 private:
  const RmabInstance* instance_;
};

}  // namespace marmab
