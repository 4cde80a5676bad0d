#include "marmab/lpql.hpp"

#include <algorithm>

#include "marmab/allocation.hpp"
#include "marmab/knapsack.hpp"

namespace marmab {

namespace {
LambdaGrid make_grid(const RmabInstance& instance, int n_lam, std::optional<double> lambda_max) {
  double lmax = lambda_max ? *lambda_max : lambda_max_bound(instance);
  if (lmax <= 0.0) lmax = 1.0;
  return LambdaGrid(lmax, n_lam);
}
}  // namespace

LpqlLearner::LpqlLearner(const RmabInstance& instance, ScheduleParams params, int n_lam,
                         std::optional<double> lambda_max)
    : EpsilonGreedyLearner(instance, params), grid_(make_grid(instance, n_lam, lambda_max)), counter_(instance) {
  for (const auto& arm : instance.arms()) tables_.emplace_back(arm.n_states, arm.n_actions, grid_.n_points());
  lambdas_.resize(static_cast<std::size_t>(grid_.n_points()));
  for (int p = 0; p < grid_.n_points(); ++p) lambdas_[static_cast<std::size_t>(p)] = grid_.point(p);
  scratch_.resize(lambdas_.size());
}

void LpqlLearner::observe(std::span<const Experience> batch, long /*t*/) {
  for (const auto& e : batch) update(e);
}

void LpqlLearner::update(const Experience& e) {
  LambdaQTable& q = tables_[static_cast<std::size_t>(e.arm)];
  const double ca = instance_->arm(static_cast<std::size_t>(e.arm)).costs[static_cast<std::size_t>(e.a)];
  const double beta = instance_->discount();
  const double step = alpha(params_, counter_.increment(e.arm, e.s, e.a));
  const int P = grid_.n_points();

  double* best = scratch_.data();
  std::copy_n(q.row(e.s_next, 0), P, best);
  for (int a = 1; a < q.n_actions(); ++a) {
    const double* r = q.row(e.s_next, a);
    for (int p = 0; p < P; ++p) best[p] = std::max(best[p], r[p]);
  }
  double* cell = q.row(e.s, e.a);
  const double* lam = lambdas_.data();
  for (int p = 0; p < P; ++p) {
    const double target = e.r - ca * lam[p] + beta * best[p];
    cell[p] += step * (target - cell[p]);
  }
}

ActionVector knapsack_at(const RmabInstance& instance, const std::vector<LambdaQTable>& tables,
                         const StateVector& s, int p) {
  KnapsackProblem kp;
  kp.budget = instance.budget();
  kp.values.resize(instance.n_arms());
  kp.costs.resize(instance.n_arms());
  for (std::size_t i = 0; i < instance.n_arms(); ++i) {
    const auto& arm = instance.arm(i);
    kp.costs[i] = arm.costs;
    kp.values[i].resize(static_cast<std::size_t>(arm.n_actions));
    for (int a = 0; a < arm.n_actions; ++a) kp.values[i][static_cast<std::size_t>(a)] = tables[i].at(s[i], a, p);
  }
  return solve(kp);
}

ActionVector LpqlLearner::greedy(const StateVector& s) {
  const int p = find_lambda_min(tables_, grid_, s, instance_->budget(), instance_->discount());
  last_lambda_index_ = p;
  return knapsack_at(*instance_, tables_, s, p);
}

ActionVector aprx_index_allocation(const RmabInstance& instance, const std::vector<LambdaQTable>& tables,
                                   const LambdaGrid& grid, const StateVector& s) {
  return greedy_index_allocation(instance, [&](std::size_t i, int j) { return aprx_index(tables[i], grid, s[i], j); });
}

ActionVector MaiqlAprxLearner::greedy(const StateVector& s) {
  last_lambda_index_ = -1;
  return aprx_index_allocation(*instance_, tables_, grid_, s);
}

}  // namespace marmab
