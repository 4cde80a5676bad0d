#pragma once

#include <optional>
#include <vector>

#include "marmab/lambda_q.hpp"
#include "marmab/learner.hpp"

namespace marmab {

/// Q-learning of Q(s, a, lambda_p) on a grid, acting through the Lagrange
/// bound scan and a knapsack on the penalized Q-values.
class LpqlLearner : public EpsilonGreedyLearner {
 public:
  /// lambda_max defaults to lambda_max_bound(instance) (1.0 if that is zero).
  LpqlLearner(const RmabInstance& instance, ScheduleParams params, int n_lam,
              std::optional<double> lambda_max = std::nullopt);

  std::string name() const override { return "lpql"; }
  void observe(std::span<const Experience> batch, long t) override;
  ActionVector greedy(const StateVector& s) override;

  void update(const Experience& e);

  const LambdaGrid& grid() const { return grid_; }
  const std::vector<LambdaQTable>& tables() const { return tables_; }
  std::vector<LambdaQTable>& tables() { return tables_; }
  const VisitCounter& counter() const { return counter_; }

 protected:
  LambdaGrid grid_;
  std::vector<LambdaQTable> tables_;
  VisitCounter counter_;
  std::vector<double> lambdas_;
  std::vector<double> scratch_;
};

/// Same tensor and update as LPQL; acts by greedy index allocation over
/// indexes read off the grid where adjacent actions' Q-values cross.
class MaiqlAprxLearner : public LpqlLearner {
 public:
  using LpqlLearner::LpqlLearner;

  std::string name() const override { return "maiql_aprx"; }
  ActionVector greedy(const StateVector& s) override;
};

/// Knapsack over Q(s_i, ., p) of each arm.
ActionVector knapsack_at(const RmabInstance& instance, const std::vector<LambdaQTable>& tables,
                         const StateVector& s, int p);

/// Greedy allocation fed with aprx_index values.
ActionVector aprx_index_allocation(const RmabInstance& instance, const std::vector<LambdaQTable>& tables,
                                   const LambdaGrid& grid, const StateVector& s);

}  // namespace marmab
