#pragma once

#include <memory>
#include <span>
#include <string>

#include "marmab/core.hpp"
#include "marmab/rng.hpp"
#include "marmab/schedules.hpp"
#include "marmab/simulator.hpp"

namespace marmab {

/// Anything that picks an ActionVector each round. Learners also train on
/// experience batches; oracles ignore them.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string name() const = 0;
  /// t is the 1-based environment clock. `rng` is the exploration stream.
  virtual ActionVector select(const StateVector& s, long t, Engine& rng) = 0;
  virtual void observe(std::span<const Experience> /*batch*/, long /*t*/) {}
  virtual double exploration_rate(long /*t*/) const { return 0.0; }
  /// Grid index chosen by the last select(), or -1 when not applicable.
  virtual int last_lambda_index() const { return -1; }
};

/// Shared epsilon-greedy wrapper: one draw per round decides between
/// random_action and the learner's greedy choice.
class EpsilonGreedyLearner : public Policy {
 public:
  EpsilonGreedyLearner(const RmabInstance& instance, ScheduleParams params);

  ActionVector select(const StateVector& s, long t, Engine& rng) final;
  double exploration_rate(long t) const override { return epsilon(params_, t); }
  int last_lambda_index() const override { return last_lambda_index_; }

  const ScheduleParams& params() const { return params_; }
  const RmabInstance& instance() const { return *instance_; }

  virtual ActionVector greedy(const StateVector& s) = 0;

 protected:
  const RmabInstance* instance_;
  ScheduleParams params_;
  int last_lambda_index_ = -1;
};

}  // namespace marmab
