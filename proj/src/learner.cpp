#include "marmab/learner.hpp"

namespace marmab {

EpsilonGreedyLearner::EpsilonGreedyLearner(const RmabInstance& instance, ScheduleParams params)
    : instance_(&instance), params_(params) {
  params_.check();
}

ActionVector EpsilonGreedyLearner::select(const StateVector& s, long t, Engine& rng) {
  if (uniform01(rng) < epsilon(params_, t)) {
    last_lambda_index_ = -1;
    return random_action(*instance_, rng);
  }
  return greedy(s);
}

}  // namespace marmab
