#include "marmab/core.hpp"

#include <cmath>
#include <sstream>

namespace marmab {

ArmModel ArmModel::zeros(int n_states, int n_actions) {
  ArmModel arm;
  arm.n_states = n_states;
  arm.n_actions = n_actions;
  arm.costs.assign(static_cast<std::size_t>(n_actions), 0.0);
  arm.rewards.assign(static_cast<std::size_t>(n_states), 0.0);
  arm.transitions.assign(static_cast<std::size_t>(n_states) * static_cast<std::size_t>(n_actions) *
                             static_cast<std::size_t>(n_states),
                         0.0);
  return arm;
}

std::vector<std::string> validate(const ArmModel& arm) {
  std::vector<std::string> out;
  if (arm.n_states < 1) out.push_back("n_states must be positive");
  if (arm.n_actions < 1) out.push_back("n_actions must be positive");
  if (!out.empty()) return out;

  const auto S = static_cast<std::size_t>(arm.n_states);
  const auto M = static_cast<std::size_t>(arm.n_actions);
  if (arm.costs.size() != M) {
    out.push_back("costs has " + std::to_string(arm.costs.size()) + " entries, expected " +
                  std::to_string(M));
  } else {
    if (arm.costs[0] != 0.0) out.push_back("costs not sorted / c_0 != 0: c_0 = " + std::to_string(arm.costs[0]));
    for (std::size_t j = 0; j < M; ++j) {
      if (!std::isfinite(arm.costs[j]) || arm.costs[j] < 0.0) {
        out.push_back("cost c_" + std::to_string(j) + " is negative or not finite");
      }
      if (j > 0 && arm.costs[j] < arm.costs[j - 1]) {
        out.push_back("costs not sorted / c_0 != 0: c_" + std::to_string(j) + " < c_" + std::to_string(j - 1));
      }
    }
  }
  if (arm.rewards.size() != S) {
    out.push_back("rewards has " + std::to_string(arm.rewards.size()) + " entries, expected " +
                  std::to_string(S));
  } else {
    for (std::size_t s = 0; s < S; ++s) {
      if (!std::isfinite(arm.rewards[s])) out.push_back("reward r(" + std::to_string(s) + ") is not finite");
    }
  }
  if (arm.transitions.size() != S * M * S) {
    out.push_back("transitions has " + std::to_string(arm.transitions.size()) + " entries, expected " +
                  std::to_string(S * M * S));
    return out;
  }
  for (int s = 0; s < arm.n_states; ++s) {
    for (int a = 0; a < arm.n_actions; ++a) {
      const double* row = arm.row(s, a);
      double sum = 0.0;
      bool in_range = true;
      for (std::size_t k = 0; k < S; ++k) {
        sum += row[k];
        if (!(row[k] >= 0.0 && row[k] <= 1.0)) in_range = false;
      }
      if (!in_range) {
        out.push_back("transition row (s=" + std::to_string(s) + ", a=" + std::to_string(a) +
                      ") has an entry outside [0,1]");
      }
      if (!(std::abs(sum - 1.0) <= kRowSumTolerance)) {
        std::ostringstream msg;
        msg << "transition row (s=" << s << ", a=" << a << ") sums to " << sum;
        out.push_back(msg.str());
      }
    }
  }
  return out;
}

RmabInstance::RmabInstance(std::vector<ArmModel> arms, double budget, double discount)
    : arms_(std::move(arms)), budget_(budget), discount_(discount) {
  std::vector<std::string> problems;
  if (arms_.empty()) problems.push_back("instance needs at least one arm");
  if (!(budget_ >= 0.0) || !std::isfinite(budget_)) problems.push_back("budget must be finite and >= 0");
  if (!(discount_ >= 0.0 && discount_ < 1.0)) problems.push_back("discount must lie in [0, 1)");
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    for (auto& v : validate(arms_[i])) problems.push_back("arm " + std::to_string(i) + ": " + v);
  }
  if (!problems.empty()) {
    std::string msg = "invalid instance:";
    for (auto& p : problems) msg += "\n  " + p;
    throw InvalidModel(msg);
  }
}

double action_cost(const RmabInstance& instance, const ActionVector& a) {
  if (a.size() != instance.n_arms()) {
    throw InvalidModel("action vector has " + std::to_string(a.size()) + " entries for " +
                       std::to_string(instance.n_arms()) + " arms");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const ArmModel& arm = instance.arm(i);
    if (a[i] < 0 || a[i] >= arm.n_actions) {
      throw InvalidModel("action " + std::to_string(a[i]) + " out of range for arm " + std::to_string(i));
    }
    total += arm.costs[static_cast<std::size_t>(a[i])];
  }
  return total;
}

bool is_feasible(const RmabInstance& instance, const ActionVector& a) {
  return action_cost(instance, a) <= instance.budget() + kFeasibilityTolerance;
}

void check_states(const RmabInstance& instance, const StateVector& s) {
  if (s.size() != instance.n_arms()) {
    throw InvalidModel("state vector has " + std::to_string(s.size()) + " entries for " +
                       std::to_string(instance.n_arms()) + " arms");
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= instance.arm(i).n_states) {
      throw InvalidModel("state " + std::to_string(s[i]) + " out of range for arm " + std::to_string(i));
    }
  }
}

bool has_integral_costs(const RmabInstance& instance, double resolution) {
  for (const auto& arm : instance.arms()) {
    for (double c : arm.costs) {
      const double scaled = c / resolution;
      if (std::abs(scaled - std::round(scaled)) > 1e-9) return false;
    }
  }
  return instance.budget() >= 0.0;
}

}  // namespace marmab
