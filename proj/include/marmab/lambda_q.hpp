#pragma once

#include <cstddef>
#include <vector>

#include "marmab/core.hpp"

namespace marmab {

/// Points p * lambda_max / n_lam for p = 0..n_lam (n_lam + 1 stored points).
struct LambdaGrid {
  double lambda_max = 0.0;
  int n_lam = 1;

  LambdaGrid() = default;
  LambdaGrid(double lambda_max, int n_lam);

  int n_points() const { return n_lam + 1; }
  double point(int p) const { return static_cast<double>(p) * lambda_max / static_cast<double>(n_lam); }
  double spacing() const { return lambda_max / static_cast<double>(n_lam); }
};

/// max over arms of max r / (min nonzero cost * (1 - discount)).
/// Throws InvalidModel when no arm has a positive cost.
double lambda_max_bound(const RmabInstance& instance);

/// Q(s, a, lambda_p) for one arm, laid out [s][a][p] so grid sweeps are contiguous.
class LambdaQTable {
 public:
  LambdaQTable() = default;
  LambdaQTable(int n_states, int n_actions, int n_points);

  int n_states() const { return n_states_; }
  int n_actions() const { return n_actions_; }
  int n_points() const { return n_points_; }

  double* row(int s, int a) { return data_.data() + offset(s, a); }
  const double* row(int s, int a) const { return data_.data() + offset(s, a); }
  double at(int s, int a, int p) const { return row(s, a)[p]; }
  double& at(int s, int a, int p) { return row(s, a)[p]; }

  /// max_a Q(s, a, p)
  double value(int s, int p) const;

 private:
  std::size_t offset(int s, int a) const {
    return (static_cast<std::size_t>(s) * static_cast<std::size_t>(n_actions_) + static_cast<std::size_t>(a)) *
           static_cast<std::size_t>(n_points_);
  }
  int n_states_ = 0;
  int n_actions_ = 0;
  int n_points_ = 0;
  std::vector<double> data_;
};

/// Scan p = 0, 1, ...: return the first p where the summed slope of
/// V_i(s_i, .) between p and p+1 is >= -B / (1 - discount); n_lam - 1 if none.
int find_lambda_min(const std::vector<LambdaQTable>& tables, const LambdaGrid& grid, const StateVector& s,
                    double budget, double discount);

/// J(s, lambda_p) = lambda_p B / (1 - discount) + sum_i V_i(s_i, lambda_p).
double lagrange_bound(const std::vector<LambdaQTable>& tables, const LambdaGrid& grid, const StateVector& s,
                      double budget, double discount, int p);

/// lambda_p minimizing |Q(s, a_j, p) - Q(s, a_{j-1}, p)|, smallest p on ties.
double aprx_index(const LambdaQTable& table, const LambdaGrid& grid, int s, int j);

}  // namespace marmab
