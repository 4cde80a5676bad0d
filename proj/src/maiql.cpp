#include "marmab/maiql.hpp"

#include <algorithm>
#include <stdexcept>

#include "marmab/allocation.hpp"

namespace marmab {

MaiqlLearner::MaiqlLearner(const RmabInstance& instance, ScheduleParams params, double lambda_bound,
                           MaiqlMode mode)
    : EpsilonGreedyLearner(instance, params), lambda_bound_(lambda_bound), mode_(mode), counter_(instance) {
  if (!(lambda_bound > 0.0)) throw std::invalid_argument("maiql: lambda_bound must be positive");
  for (const auto& arm : instance.arms()) {
    ArmState st;
    st.S = arm.n_states;
    st.M = arm.n_actions;
    const std::size_t targets = static_cast<std::size_t>(st.S) * static_cast<std::size_t>(std::max(0, st.M - 1));
    st.q.assign(targets * static_cast<std::size_t>(st.S) * static_cast<std::size_t>(st.M), 0.0);
    st.lambda.assign(targets, 0.0);
    st.q_sum.assign(targets, 0.0);
    arms_.push_back(std::move(st));
  }
}

double MaiqlLearner::lambda(int arm, int s, int j) const {
  const auto& st = arms_[static_cast<std::size_t>(arm)];
  return st.lambda[static_cast<std::size_t>(s * (st.M - 1) + (j - 1))];
}

void MaiqlLearner::set_lambda(int arm, int s, int j, double v) {
  auto& st = arms_[static_cast<std::size_t>(arm)];
  st.lambda[static_cast<std::size_t>(s * (st.M - 1) + (j - 1))] = std::clamp(v, -lambda_bound_, lambda_bound_);
}

double MaiqlLearner::q(int arm, int i, int j, int s, int a) const {
  const auto& st = arms_[static_cast<std::size_t>(arm)];
  return st.q[q_offset(st, i * (st.M - 1) + (j - 1), s, a)];
}

double& MaiqlLearner::q(int arm, int i, int j, int s, int a) {
  auto& st = arms_[static_cast<std::size_t>(arm)];
  return st.q[q_offset(st, i * (st.M - 1) + (j - 1), s, a)];
}

void MaiqlLearner::observe(std::span<const Experience> batch, long t) {
  for (const auto& e : batch) update(e, t);
}

void MaiqlLearner::update(const Experience& e, long t) {
  auto& st = arms_[static_cast<std::size_t>(e.arm)];
  if (st.M < 2) return;
  const auto& costs = instance_->arm(static_cast<std::size_t>(e.arm)).costs;
  const double beta = instance_->discount();
  const std::uint64_t nu = counter_.increment(e.arm, e.s, e.a);
  const double step = alpha(params_, nu);
  const double ca = costs[static_cast<std::size_t>(e.a)];
  const int n_targets = st.S * (st.M - 1);
  const double table_size = static_cast<double>(st.S * st.M);

  for (int k = 0; k < n_targets; ++k) {
    const double* next = st.q.data() + q_offset(st, k, e.s_next, 0);
    const double best_next = *std::max_element(next, next + st.M);
    double& cell = st.q[q_offset(st, k, e.s, e.a)];
    const double lam = st.lambda[static_cast<std::size_t>(k)];
    double target;
    if (mode_ == MaiqlMode::discounted) {
      target = e.r - ca * lam + beta * best_next;
    } else {
      target = e.r - ca * lam - st.q_sum[static_cast<std::size_t>(k)] / table_size + best_next;
    }
    const double delta = step * (target - cell);
    cell += delta;
    st.q_sum[static_cast<std::size_t>(k)] += delta;
  }

  if (e.a != 0 && t % static_cast<long>(instance_->n_arms()) == 0) {
    const double dc = ca - costs[static_cast<std::size_t>(e.a - 1)];
    if (dc == 0.0) {
      ++refused_;
      return;
    }
    const int k = e.s * (st.M - 1) + (e.a - 1);
    const double diff = st.q[q_offset(st, k, e.s, e.a)] - st.q[q_offset(st, k, e.s, e.a - 1)];
    double& lam = st.lambda[static_cast<std::size_t>(k)];
    lam = std::clamp(lam + gamma(params_, nu) * diff / dc, -lambda_bound_, lambda_bound_);
  }
}

ActionVector MaiqlLearner::greedy(const StateVector& s) {
  return greedy_index_allocation(*instance_, [&](std::size_t i, int j) {
    return lambda(static_cast<int>(i), s[i], j);
  });
}

RmabInstance restrict_to_pair(const RmabInstance& instance, int action_j) {
  std::vector<ArmModel> arms;
  for (const auto& arm : instance.arms()) {
    if (action_j < 1 || action_j >= arm.n_actions) {
      throw std::invalid_argument("wibql: action " + std::to_string(action_j) + " not available on every arm");
    }
    ArmModel b = ArmModel::zeros(arm.n_states, 2);
    b.rewards = arm.rewards;
    b.costs = {0.0, arm.costs[static_cast<std::size_t>(action_j)]};
    for (int s = 0; s < arm.n_states; ++s) {
      std::copy_n(arm.row(s, 0), arm.n_states, b.row(s, 0));
      std::copy_n(arm.row(s, action_j), arm.n_states, b.row(s, 1));
    }
    arms.push_back(std::move(b));
  }
  return RmabInstance(std::move(arms), instance.budget(), instance.discount());
}

WibqlLearner::WibqlLearner(const RmabInstance& instance, ScheduleParams params, double lambda_bound, int action_j)
    : instance_(&instance), action_j_(action_j) {
  restricted_.emplace(restrict_to_pair(instance, action_j));
  inner_.emplace(*restricted_, params, lambda_bound);
  any_affordable_ = false;
  for (const auto& arm : restricted_->arms()) {
    if (arm.costs[1] <= instance.budget() + kFeasibilityTolerance) any_affordable_ = true;
  }
}

ActionVector WibqlLearner::select(const StateVector& s, long t, Engine& rng) {
  ActionVector a = inner_->select(s, t, rng);
  for (auto& x : a.actions) x = x == 0 ? 0 : action_j_;
  if (!any_affordable_) return ActionVector::passive(instance_->n_arms());
  return a;
}

void WibqlLearner::observe(std::span<const Experience> batch, long t) {
  for (const auto& e : batch) {
    if (e.a != 0 && e.a != action_j_) continue;
    Experience b = e;
    b.a = e.a == 0 ? 0 : 1;
    inner_->update(b, t);
  }
}

}  // namespace marmab
