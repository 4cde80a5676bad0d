#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "marmab/lambda_q.hpp"
#include "marmab/learner.hpp"

namespace marmab {

struct ViOptions {
  double tol = 1e-9;
  long max_iter = 100000;
  /// Finish with an exact policy-evaluation solve of the greedy policy.
  bool polish = true;
};

class ValueIterationFailed : public std::runtime_error {
 public:
  ValueIterationFailed(long iterations, double residual);
  long iterations;
  double residual;
};

class NotIndexable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Q(s, a) = r(s) - lambda c_a + beta sum_s' T(s, a, s') max_a' Q(s', a'),
/// returned row-major [s][a]. warm_v, if given, seeds V.
std::vector<double> value_iteration_lambda(const ArmModel& arm, double lambda, double beta, const ViOptions& opts = {},
                                           const std::vector<double>* warm_v = nullptr);

/// Sup-norm Bellman residual of a [s][a] Q-table.
double bellman_residual(const ArmModel& arm, double lambda, double beta, const std::vector<double>& q);

/// Exact Q over a lambda grid for every arm, same layout as the LPQL tensor.
class OracleQ {
 public:
  OracleQ(const RmabInstance& instance, LambdaGrid grid, const ViOptions& opts = {});

  const LambdaGrid& grid() const { return grid_; }
  const std::vector<LambdaQTable>& tables() const { return tables_; }

 private:
  LambdaGrid grid_;
  std::vector<LambdaQTable> tables_;
};

/// Root in lambda of Q(s, a_j, lambda) - Q(s, a_{j-1}, lambda) by bisection.
/// Returns 0 when the difference is already <= 0 at lambda = 0.
/// Throws NotIndexable if no sign change is found on the bracket.
double oracle_index(const ArmModel& arm, int s, int j, double beta, double tol = 1e-10);

/// All indexes of an instance, [arm][s * (M - 1) + (j - 1)].
std::vector<std::vector<double>> oracle_index_table(const RmabInstance& instance, double tol = 1e-10);

ActionVector oracle_lp_action(const RmabInstance& instance, const OracleQ& oracle, const StateVector& s,
                              int* chosen_p = nullptr);
ActionVector oracle_lambda0_action(const RmabInstance& instance, const std::vector<std::vector<double>>& q0,
                                   const StateVector& s);
ActionVector oracle_index_action(const RmabInstance& instance, const std::vector<std::vector<double>>& index,
                                 const StateVector& s);

class OracleLpPolicy : public Policy {
 public:
  OracleLpPolicy(const RmabInstance& instance, int n_lam, std::optional<double> lambda_max = std::nullopt);
  std::string name() const override { return "oracle_lp"; }
  ActionVector select(const StateVector& s, long t, Engine& rng) override;
  int last_lambda_index() const override { return last_p_; }
  const OracleQ& oracle() const { return oracle_; }

 private:
  const RmabInstance* instance_;
  OracleQ oracle_;
  int last_p_ = -1;
};

class OracleLambda0Policy : public Policy {
 public:
  explicit OracleLambda0Policy(const RmabInstance& instance);
  std::string name() const override { return "oracle_lambda0"; }
  ActionVector select(const StateVector& s, long t, Engine& rng) override;

 private:
  const RmabInstance* instance_;
  std::vector<std::vector<double>> q0_;
};

class OracleLpIndexPolicy : public Policy {
 public:
  explicit OracleLpIndexPolicy(const RmabInstance& instance);
  std::string name() const override { return "oracle_lp_index"; }
  ActionVector select(const StateVector& s, long t, Engine& rng) override;
  const std::vector<std::vector<double>>& indexes() const { return index_; }

 private:
  const RmabInstance* instance_;
  std::vector<std::vector<double>> index_;
};

}  // namespace marmab
