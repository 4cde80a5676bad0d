#pragma once

#include <cstddef>
#include <vector>

#include "marmab/core.hpp"

namespace marmab {

/// Multiple-choice knapsack: exactly one option per arm, summed cost <= budget.
/// values[i][j] and costs[i][j] describe option j of arm i; costs[i][0] == 0.
struct KnapsackProblem {
  std::vector<std::vector<double>> values;
  std::vector<std::vector<double>> costs;
  double budget = 0.0;
};

/// Throws InvalidModel on ragged or inconsistent input.
void check_problem(const KnapsackProblem& p);

/// Left-to-right sums, the canonical evaluation order used everywhere.
double objective(const KnapsackProblem& p, const ActionVector& a);
double total_cost(const KnapsackProblem& p, const ActionVector& a);

/// Exact optimum; ties go to the lexicographically smallest vector.
/// Dispatches to the integer DP when every cost and the budget are integral.
ActionVector solve(const KnapsackProblem& p);

/// Exact branch and bound with an LP-relaxation bound. Works with real costs.
ActionVector solve_branch_and_bound(const KnapsackProblem& p);

/// DP over budget levels after dividing costs by `resolution`.
/// Throws std::invalid_argument on non-integral costs or a table above max_cells.
ActionVector solve_dp_integer(const KnapsackProblem& p, double resolution = 1.0,
                              std::size_t max_cells = 1'000'000);

}  // namespace marmab
