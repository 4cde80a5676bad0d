#include "marmab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "marmab/allocation.hpp"
#include "marmab/knapsack.hpp"
#include "marmab/lpql.hpp"

namespace marmab {

namespace {

std::string vi_message(long it, double res) {
  std::ostringstream m;
  m << "value iteration did not converge after " << it << " iterations (residual " << res << ")";
  return m.str();
}

// Q from V: r(s) - lambda c_a + beta T V
void backup(const ArmModel& arm, double lambda, double beta, const std::vector<double>& v, std::vector<double>& q) {
  const int S = arm.n_states;
  const int M = arm.n_actions;
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < M; ++a) {
      const double* row = arm.row(s, a);
      double ev = 0.0;
      for (int k = 0; k < S; ++k) ev += row[k] * v[static_cast<std::size_t>(k)];
      q[static_cast<std::size_t>(s * M + a)] =
          arm.rewards[static_cast<std::size_t>(s)] - lambda * arm.costs[static_cast<std::size_t>(a)] + beta * ev;
    }
  }
}

void greedy_values(const ArmModel& arm, const std::vector<double>& q, std::vector<double>& v) {
  const int M = arm.n_actions;
  for (int s = 0; s < arm.n_states; ++s) {
    const auto first = q.begin() + s * M;
    v[static_cast<std::size_t>(s)] = *std::max_element(first, first + M);
  }
}

// exact Q of the policy greedy w.r.t. q
std::vector<double> polish(const ArmModel& arm, double lambda, double beta, const std::vector<double>& q) {
  const int S = arm.n_states;
  const int M = arm.n_actions;
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(S, S);
  Eigen::VectorXd b(S);
  for (int s = 0; s < S; ++s) {
    const auto first = q.begin() + s * M;
    const int a = static_cast<int>(std::max_element(first, first + M) - first);
    const double* row = arm.row(s, a);
    for (int k = 0; k < S; ++k) A(s, k) -= beta * row[k];
    b(s) = arm.rewards[static_cast<std::size_t>(s)] - lambda * arm.costs[static_cast<std::size_t>(a)];
  }
  const Eigen::VectorXd v = A.partialPivLu().solve(b);
  std::vector<double> vv(v.data(), v.data() + S);
  std::vector<double> out(q.size());
  backup(arm, lambda, beta, vv, out);
  return out;
}

}  // namespace

ValueIterationFailed::ValueIterationFailed(long it, double res)
    : std::runtime_error(vi_message(it, res)), iterations(it), residual(res) {}

double bellman_residual(const ArmModel& arm, double lambda, double beta, const std::vector<double>& q) {
  std::vector<double> v(static_cast<std::size_t>(arm.n_states));
  greedy_values(arm, q, v);
  std::vector<double> tq(q.size());
  backup(arm, lambda, beta, v, tq);
  double res = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) res = std::max(res, std::abs(tq[k] - q[k]));
  return res;
}

std::vector<double> value_iteration_lambda(const ArmModel& arm, double lambda, double beta, const ViOptions& opts,
                                           const std::vector<double>* warm_v) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("value iteration: tol must be positive");
  const auto S = static_cast<std::size_t>(arm.n_states);
  std::vector<double> v = warm_v && warm_v->size() == S ? *warm_v : std::vector<double>(S, 0.0);
  std::vector<double> q(S * static_cast<std::size_t>(arm.n_actions));
  std::vector<double> v_new(S);
  double res = std::numeric_limits<double>::infinity();
  for (long it = 1; it <= opts.max_iter; ++it) {
    backup(arm, lambda, beta, v, q);
    greedy_values(arm, q, v_new);
    double diff = 0.0;
    for (std::size_t s = 0; s < S; ++s) diff = std::max(diff, std::abs(v_new[s] - v[s]));
    v.swap(v_new);
    // residual of q is at most beta * diff
    res = beta * diff;
    if (opts.polish && (it % 8 == 0 || res <= opts.tol)) {
      std::vector<double> exact = polish(arm, lambda, beta, q);
      const double exact_res = bellman_residual(arm, lambda, beta, exact);
      if (exact_res <= opts.tol) return exact;
    }
    if (res <= opts.tol) return q;
  }
  throw ValueIterationFailed(opts.max_iter, res);
}

OracleQ::OracleQ(const RmabInstance& instance, LambdaGrid grid, const ViOptions& opts) : grid_(grid) {
  for (const auto& arm : instance.arms()) {
    LambdaQTable table(arm.n_states, arm.n_actions, grid_.n_points());
    std::vector<double> warm;
    for (int p = 0; p < grid_.n_points(); ++p) {
      const auto q = value_iteration_lambda(arm, grid_.point(p), instance.discount(), opts, warm.empty() ? nullptr : &warm);
      warm.assign(static_cast<std::size_t>(arm.n_states), 0.0);
      greedy_values(arm, q, warm);
      for (int s = 0; s < arm.n_states; ++s) {
        for (int a = 0; a < arm.n_actions; ++a) table.at(s, a, p) = q[static_cast<std::size_t>(s * arm.n_actions + a)];
      }
    }
    tables_.push_back(std::move(table));
  }
}

double oracle_index(const ArmModel& arm, int s, int j, double beta, double tol) {
  if (j < 1 || j >= arm.n_actions) throw std::invalid_argument("oracle_index: action must be in [1, M)");
  if (s < 0 || s >= arm.n_states) throw std::invalid_argument("oracle_index: state out of range");
  const double dc = arm.costs[static_cast<std::size_t>(j)] - arm.costs[static_cast<std::size_t>(j - 1)];
  if (!(dc > 0.0)) {
    throw NotIndexable("index undefined: actions " + std::to_string(j - 1) + " and " + std::to_string(j) +
                       " have equal cost");
  }
  const auto [rmin, rmax] = std::minmax_element(arm.rewards.begin(), arm.rewards.end());
  // beyond this lambda the extra cost outweighs any possible value gain
  const double hi_bound = (*rmax - *rmin) / ((1.0 - beta) * dc);
  const int M = arm.n_actions;
  std::vector<double> warm;
  auto gap = [&](double lambda) {
    const auto q = value_iteration_lambda(arm, lambda, beta, {}, warm.empty() ? nullptr : &warm);
    warm.assign(static_cast<std::size_t>(arm.n_states), 0.0);
    greedy_values(arm, q, warm);
    return q[static_cast<std::size_t>(s * M + j)] - q[static_cast<std::size_t>(s * M + j - 1)];
  };
  if (gap(0.0) <= 0.0) return 0.0;
  double lo = 0.0;
  double hi = hi_bound;
  if (gap(hi) > 0.0) {
    throw NotIndexable("no indifference point for actions " + std::to_string(j - 1) + "/" + std::to_string(j) +
                       " in state " + std::to_string(s));
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (gap(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<std::vector<double>> oracle_index_table(const RmabInstance& instance, double tol) {
  std::vector<std::vector<double>> out;
  for (const auto& arm : instance.arms()) {
    std::vector<double> row;
    for (int s = 0; s < arm.n_states; ++s) {
      for (int j = 1; j < arm.n_actions; ++j) row.push_back(oracle_index(arm, s, j, instance.discount(), tol));
    }
    out.push_back(std::move(row));
  }
  return out;
}

ActionVector oracle_lp_action(const RmabInstance& instance, const OracleQ& oracle, const StateVector& s, int* chosen_p) {
  const int p = find_lambda_min(oracle.tables(), oracle.grid(), s, instance.budget(), instance.discount());
  if (chosen_p) *chosen_p = p;
  return knapsack_at(instance, oracle.tables(), s, p);
}

ActionVector oracle_lambda0_action(const RmabInstance& instance, const std::vector<std::vector<double>>& q0,
                                   const StateVector& s) {
  KnapsackProblem kp;
  kp.budget = instance.budget();
  for (std::size_t i = 0; i < instance.n_arms(); ++i) {
    const auto& arm = instance.arm(i);
    kp.costs.push_back(arm.costs);
    const auto first = q0[i].begin() + s[i] * arm.n_actions;
    kp.values.emplace_back(first, first + arm.n_actions);
  }
  return solve(kp);
}

ActionVector oracle_index_action(const RmabInstance& instance, const std::vector<std::vector<double>>& index,
                                 const StateVector& s) {
  return greedy_index_allocation(instance, [&](std::size_t i, int j) {
    const int M = instance.arm(i).n_actions;
    return index[i][static_cast<std::size_t>(s[i] * (M - 1) + (j - 1))];
  });
}

namespace {
LambdaGrid oracle_grid(const RmabInstance& instance, int n_lam, std::optional<double> lambda_max) {
  double lmax = lambda_max ? *lambda_max : lambda_max_bound(instance);
  if (lmax <= 0.0) lmax = 1.0;
  return LambdaGrid(lmax, n_lam);
}
}  // namespace

OracleLpPolicy::OracleLpPolicy(const RmabInstance& instance, int n_lam, std::optional<double> lambda_max)
    : instance_(&instance), oracle_(instance, oracle_grid(instance, n_lam, lambda_max)) {}

ActionVector OracleLpPolicy::select(const StateVector& s, long, Engine&) {
  return oracle_lp_action(*instance_, oracle_, s, &last_p_);
}

OracleLambda0Policy::OracleLambda0Policy(const RmabInstance& instance) : instance_(&instance) {
  for (const auto& arm : instance.arms()) q0_.push_back(value_iteration_lambda(arm, 0.0, instance.discount()));
}

ActionVector OracleLambda0Policy::select(const StateVector& s, long, Engine&) {
  return oracle_lambda0_action(*instance_, q0_, s);
}

OracleLpIndexPolicy::OracleLpIndexPolicy(const RmabInstance& instance)
    : instance_(&instance), index_(oracle_index_table(instance)) {}

ActionVector OracleLpIndexPolicy::select(const StateVector& s, long, Engine&) {
  return oracle_index_action(*instance_, index_, s);
}

}  // namespace marmab
