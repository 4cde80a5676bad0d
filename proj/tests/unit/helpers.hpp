#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "marmab/core.hpp"
#include "marmab/knapsack.hpp"

namespace testing {

// state 1 pays 1 and always falls to 0; state 0 stays unless a_1 (cost 1) lifts it.
inline marmab::ArmModel deterministic_two_state() {
  auto arm = marmab::ArmModel::zeros(2, 2);
  arm.costs = {0.0, 1.0};
  arm.rewards = {0.0, 1.0};
  arm.row(0, 0)[0] = 1.0;
  arm.row(0, 1)[1] = 1.0;
  arm.row(1, 0)[0] = 1.0;
  arm.row(1, 1)[0] = 1.0;
  return arm;
}

inline marmab::ArmModel single_state(int n_actions, double reward) {
  auto arm = marmab::ArmModel::zeros(1, n_actions);
  for (int a = 0; a < n_actions; ++a) {
    arm.costs[static_cast<std::size_t>(a)] = a;
    arm.row(0, a)[0] = 1.0;
  }
  arm.rewards = {reward};
  return arm;
}

inline marmab::ArmModel random_arm(int S, int M, std::mt19937_64& g, bool integral_costs = true) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto arm = marmab::ArmModel::zeros(S, M);
  for (int s = 0; s < S; ++s) arm.rewards[static_cast<std::size_t>(s)] = u(g);
  for (int a = 1; a < M; ++a) {
    arm.costs[static_cast<std::size_t>(a)] = arm.costs[static_cast<std::size_t>(a - 1)] + (integral_costs ? 1.0 : 0.1 + u(g));
  }
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < M; ++a) {
      double sum = 0.0;
      for (int k = 0; k < S; ++k) sum += arm.row(s, a)[k] = u(g) + 1e-3;
      for (int k = 0; k < S; ++k) arm.row(s, a)[k] /= sum;
    }
  }
  return arm;
}

struct Enumerated {
  double best = -INFINITY;
  std::vector<int> argbest;
};

// every assignment in lexicographic order; first strict improvement wins
inline Enumerated enumerate(const marmab::KnapsackProblem& p) {
  const std::size_t n = p.values.size();
  std::vector<int> a(n, 0);
  Enumerated out;
  for (;;) {
    double v = 0.0, c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      v += p.values[i][static_cast<std::size_t>(a[i])];
      c += p.costs[i][static_cast<std::size_t>(a[i])];
    }
    if (c <= p.budget + 1e-12 && v > out.best) {
      out.best = v;
      out.argbest = a;
    }
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++a[i] < static_cast<int>(p.values[i].size())) break;
      a[i] = 0;
      if (i == 0) return out;
    }
    if (n == 0) return out;
  }
}

}  // namespace testing
