#include "marmab/lambda_q.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace marmab {

LambdaGrid::LambdaGrid(double lmax, int n) : lambda_max(lmax), n_lam(n) {
  if (n < 1) throw std::invalid_argument("lambda grid: n_lam must be >= 1");
  if (!(lmax > 0.0) || !std::isfinite(lmax)) throw std::invalid_argument("lambda grid: lambda_max must be positive");
}

double lambda_max_bound(const RmabInstance& instance) {
  double best = 0.0;
  bool any_cost = false;
  for (const auto& arm : instance.arms()) {
    double min_cost = std::numeric_limits<double>::infinity();
    for (double c : arm.costs) {
      if (c > 0.0) min_cost = std::min(min_cost, c);
    }
    if (!std::isfinite(min_cost)) continue;
    any_cost = true;
    const double rmax = *std::max_element(arm.rewards.begin(), arm.rewards.end());
    best = std::max(best, rmax / (min_cost * (1.0 - instance.discount())));
  }
  if (!any_cost) throw InvalidModel("lambda_max_bound: no arm has a positive cost");
  return best;
}

LambdaQTable::LambdaQTable(int n_states, int n_actions, int n_points)
    : n_states_(n_states), n_actions_(n_actions), n_points_(n_points) {
  data_.assign(static_cast<std::size_t>(n_states) * static_cast<std::size_t>(n_actions) *
                   static_cast<std::size_t>(n_points),
               0.0);
}

double LambdaQTable::value(int s, int p) const {
  double v = at(s, 0, p);
  for (int a = 1; a < n_actions_; ++a) v = std::max(v, at(s, a, p));
  return v;
}

int find_lambda_min(const std::vector<LambdaQTable>& tables, const LambdaGrid& grid, const StateVector& s,
                    double budget, double discount) {
  const double threshold = -budget / (1.0 - discount);
  const double dl = grid.spacing();
  for (int p = 0; p < grid.n_lam; ++p) {
    double slope = 0.0;
    for (std::size_t i = 0; i < tables.size(); ++i) {
      slope += (tables[i].value(s[i], p + 1) - tables[i].value(s[i], p)) / dl;
    }
    if (slope >= threshold) return p;
  }
  return grid.n_lam - 1;
}

double lagrange_bound(const std::vector<LambdaQTable>& tables, const LambdaGrid& grid, const StateVector& s,
                      double budget, double discount, int p) {
  double j = grid.point(p) * budget / (1.0 - discount);
  for (std::size_t i = 0; i < tables.size(); ++i) j += tables[i].value(s[i], p);
  return j;
}

double aprx_index(const LambdaQTable& table, const LambdaGrid& grid, int s, int j) {
  if (j < 1 || j >= table.n_actions()) throw std::invalid_argument("aprx_index: action must be in [1, M)");
  const double* hi = table.row(s, j);
  const double* lo = table.row(s, j - 1);
  int best = 0;
  double best_gap = std::abs(hi[0] - lo[0]);
  for (int p = 1; p < table.n_points(); ++p) {
    const double gap = std::abs(hi[p] - lo[p]);
    if (gap < best_gap) {
      best_gap = gap;
      best = p;
    }
  }
  return grid.point(best);
}

}  // namespace marmab
