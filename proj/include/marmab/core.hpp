#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace marmab {

/// Raised when an instance or arm breaks a structural invariant.
class InvalidModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One arm's MDP. Rewards are state-only; actions are ordered by cost with
/// costs[0] == 0. Transitions are stored row-major as T[s][a][s'].
struct ArmModel {
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> costs;
  std::vector<double> rewards;
  std::vector<double> transitions;

  double transition(int s, int a, int s_next) const {
    return transitions[row_offset(s, a) + static_cast<std::size_t>(s_next)];
  }
  /// Pointer to the n_states probabilities of T(s, a, .).
  const double* row(int s, int a) const { return transitions.data() + row_offset(s, a); }
  double* row(int s, int a) { return transitions.data() + row_offset(s, a); }

  std::size_t row_offset(int s, int a) const {
    return (static_cast<std::size_t>(s) * static_cast<std::size_t>(n_actions) +
            static_cast<std::size_t>(a)) *
           static_cast<std::size_t>(n_states);
  }

  /// Allocates a zero-filled arm of the given shape.
  static ArmModel zeros(int n_states, int n_actions);
};

struct ActionVector {
  std::vector<int> actions;

  ActionVector() = default;
  explicit ActionVector(std::vector<int> a) : actions(std::move(a)) {}
  static ActionVector passive(std::size_t n_arms) { return ActionVector(std::vector<int>(n_arms, 0)); }

  std::size_t size() const { return actions.size(); }
  int operator[](std::size_t i) const { return actions[i]; }
  int& operator[](std::size_t i) { return actions[i]; }
  bool operator==(const ActionVector&) const = default;
};

struct StateVector {
  std::vector<int> states;

  StateVector() = default;
  explicit StateVector(std::vector<int> s) : states(std::move(s)) {}

  std::size_t size() const { return states.size(); }
  int operator[](std::size_t i) const { return states[i]; }
  int& operator[](std::size_t i) { return states[i]; }
  bool operator==(const StateVector&) const = default;
};

/// Absolute slack allowed when comparing summed real costs with the budget.
inline constexpr double kFeasibilityTolerance = 1e-12;
/// Absolute slack allowed on transition-row sums.
inline constexpr double kRowSumTolerance = 1e-9;

/// N arms sharing a per-round budget. Validated on construction and
/// immutable afterwards.
class RmabInstance {
 public:
  RmabInstance(std::vector<ArmModel> arms, double budget, double discount);

  std::size_t n_arms() const { return arms_.size(); }
  const std::vector<ArmModel>& arms() const { return arms_; }
  const ArmModel& arm(std::size_t i) const { return arms_[i]; }
  double budget() const { return budget_; }
  double discount() const { return discount_; }

 private:
  std::vector<ArmModel> arms_;
  double budget_;
  double discount_;
};

/// Returns every invariant violation of `arm`; empty means valid.
std::vector<std::string> validate(const ArmModel& arm);

/// Sum of per-arm action costs. Throws InvalidModel on shape or index errors.
double action_cost(const RmabInstance& instance, const ActionVector& a);

bool is_feasible(const RmabInstance& instance, const ActionVector& a);

/// Throws InvalidModel unless every state index is in range for its arm.
void check_states(const RmabInstance& instance, const StateVector& s);

/// True when every cost of every arm is (numerically) an integer multiple of
/// `resolution`, and the budget is non-negative.
bool has_integral_costs(const RmabInstance& instance, double resolution = 1.0);

}  // namespace marmab
