#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "marmab/learner.hpp"

namespace marmab {

enum class MaiqlMode { discounted, average_reward };

/// Two-timescale multi-action index learner. Each arm keeps one |S| x M
/// Q-table per target index (i, j), j >= 1, and an index estimate per target.
class MaiqlLearner : public EpsilonGreedyLearner {
 public:
  MaiqlLearner(const RmabInstance& instance, ScheduleParams params, double lambda_bound,
               MaiqlMode mode = MaiqlMode::discounted);

  std::string name() const override { return "maiql"; }
  void observe(std::span<const Experience> batch, long t) override;
  ActionVector greedy(const StateVector& s) override;

  void update(const Experience& e, long t);

  double lambda(int arm, int s, int j) const;
  void set_lambda(int arm, int s, int j, double v);
  /// Q for target index (i, j) of `arm`, evaluated at (s, a).
  double q(int arm, int i, int j, int s, int a) const;
  double& q(int arm, int i, int j, int s, int a);
  double lambda_bound() const { return lambda_bound_; }
  std::uint64_t refused_index_steps() const { return refused_; }
  const VisitCounter& counter() const { return counter_; }

 private:
  struct ArmState {
    int S = 0;
    int M = 0;
    std::vector<double> q;       // [target][s][a], target = i * (M - 1) + (j - 1)
    std::vector<double> lambda;  // [target]
    std::vector<double> q_sum;   // per target, kept for the average-reward offset
  };
  std::size_t q_offset(const ArmState& st, int target, int s, int a) const {
    return (static_cast<std::size_t>(target) * static_cast<std::size_t>(st.S) + static_cast<std::size_t>(s)) *
               static_cast<std::size_t>(st.M) +
           static_cast<std::size_t>(a);
  }

  double lambda_bound_;
  MaiqlMode mode_;
  std::vector<ArmState> arms_;
  VisitCounter counter_;
  std::uint64_t refused_ = 0;
};

/// Binary baseline: MAIQL restricted to {a_0, a_j}. Experiences with other
/// actions are ignored; exploration and selection stay inside the pair.
class WibqlLearner : public Policy {
 public:
  WibqlLearner(const RmabInstance& instance, ScheduleParams params, double lambda_bound, int action_j);

  std::string name() const override { return "wibql"; }
  ActionVector select(const StateVector& s, long t, Engine& rng) override;
  void observe(std::span<const Experience> batch, long t) override;
  double exploration_rate(long t) const override { return inner_->exploration_rate(t); }

  const MaiqlLearner& inner() const { return *inner_; }

 private:
  const RmabInstance* instance_;
  int action_j_;
  bool any_affordable_;
  std::optional<RmabInstance> restricted_;
  std::optional<MaiqlLearner> inner_;
};

/// Two-action view {a_0, a_j} of every arm.
RmabInstance restrict_to_pair(const RmabInstance& instance, int action_j);

}  // namespace marmab
