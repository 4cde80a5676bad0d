#include "marmab/knapsack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace marmab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Segment {
  double slope;
  double dc;
  double dv;
};

// Upper concave hull of (cost, value) points of one arm, as increments from
// the best zero-cost option. Only segments with positive gain are kept.
struct Hull {
  double base = 0.0;
  std::vector<Segment> segments;
};

Hull build_hull(const std::vector<double>& v, const std::vector<double>& c) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t j = 0; j < v.size(); ++j) pts.emplace_back(c[j], v[j]);
  std::sort(pts.begin(), pts.end(), [](const auto& x, const auto& y) {
    return x.first < y.first || (x.first == y.first && x.second > y.second);
  });
  // drop points not strictly better than a cheaper one
  std::vector<std::pair<double, double>> useful;
  for (const auto& p : pts) {
    if (useful.empty() || p.second > useful.back().second) {
      if (!useful.empty() && p.first == useful.back().first) continue;
      useful.push_back(p);
    }
  }
  std::vector<std::pair<double, double>> hull;
  for (const auto& p : useful) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // b lies on or below the chord a-p
      const double cross = (b.second - a.second) * (p.first - a.first) - (p.second - a.second) * (b.first - a.first);
      if (cross <= 0.0) hull.pop_back();
      else break;
    }
    hull.push_back(p);
  }
  Hull h;
  h.base = hull.front().second;
  for (std::size_t k = 1; k < hull.size(); ++k) {
    const double dc = hull[k].first - hull[k - 1].first;
    const double dv = hull[k].second - hull[k - 1].second;
    h.segments.push_back({dv / dc, dc, dv});
  }
  return h;
}

class BranchAndBound {
 public:
  explicit BranchAndBound(const KnapsackProblem& p) : p_(p), n_(p.values.size()) {
    base_suffix_.assign(n_ + 1, 0.0);
    segs_suffix_.resize(n_ + 1);
    std::vector<Hull> hulls;
    hulls.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) hulls.push_back(build_hull(p.values[i], p.costs[i]));
    for (std::size_t k = n_; k-- > 0;) {
      base_suffix_[k] = base_suffix_[k + 1] + hulls[k].base;
      auto& segs = segs_suffix_[k];
      segs = segs_suffix_[k + 1];
      segs.insert(segs.end(), hulls[k].segments.begin(), hulls[k].segments.end());
      std::stable_sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) { return a.slope > b.slope; });
    }
    order_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      auto& o = order_[i];
      o.resize(p.values[i].size());
      std::iota(o.begin(), o.end(), 0);
      std::stable_sort(o.begin(), o.end(), [&](int a, int b) { return p.values[i][a] > p.values[i][b]; });
    }
  }

  ActionVector run() {
    current_.assign(n_, 0);
    best_actions_ = greedy_incumbent();
    best_value_ = objective(p_, ActionVector(best_actions_));
    dfs(0, 0.0, 0.0);
    return ActionVector(best_actions_);
  }

 private:
  double bound(std::size_t k, double remaining) const {
    double b = base_suffix_[k];
    for (const auto& s : segs_suffix_[k]) {
      if (remaining <= 0.0) break;
      if (s.dc <= remaining) {
        b += s.dv;
        remaining -= s.dc;
      } else {
        b += s.slope * remaining;
        break;
      }
    }
    return b;
  }

  // left-to-right: best affordable option per arm
  std::vector<int> greedy_incumbent() const {
    std::vector<int> a(n_, 0);
    double spent = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      int best = 0;
      for (std::size_t j = 0; j < p_.values[i].size(); ++j) {
        if (p_.values[i][j] > p_.values[i][static_cast<std::size_t>(best)] &&
            spent + p_.costs[i][j] <= p_.budget + kFeasibilityTolerance) {
          best = static_cast<int>(j);
        }
      }
      a[i] = best;
      spent += p_.costs[i][static_cast<std::size_t>(best)];
    }
    return a;
  }

  void dfs(std::size_t k, double value, double spent) {
    if (k == n_) {
      if (value > best_value_ || (value == best_value_ && current_ < best_actions_)) {
        best_value_ = value;
        best_actions_ = current_;
      }
      return;
    }
    const double slack = 1e-9 * (1.0 + std::abs(best_value_));
    for (int j : order_[k]) {
      const double c = p_.costs[k][static_cast<std::size_t>(j)];
      if (spent + c > p_.budget + kFeasibilityTolerance) continue;
      const double v = value + p_.values[k][static_cast<std::size_t>(j)];
      if (v + bound(k + 1, p_.budget - spent - c) < best_value_ - slack) continue;
      current_[k] = j;
      dfs(k + 1, v, spent + c);
    }
    current_[k] = 0;
  }

  const KnapsackProblem& p_;
  std::size_t n_;
  std::vector<double> base_suffix_;
  std::vector<std::vector<Segment>> segs_suffix_;
  std::vector<std::vector<int>> order_;
  std::vector<int> current_;
  std::vector<int> best_actions_;
  double best_value_ = kNegInf;
};

bool integral(double x, double resolution) {
  const double scaled = x / resolution;
  return std::abs(scaled - std::round(scaled)) <= 1e-9 * std::max(1.0, std::abs(scaled));
}

}  // namespace

void check_problem(const KnapsackProblem& p) {
  if (p.values.size() != p.costs.size()) throw InvalidModel("knapsack: values and costs differ in arm count");
  if (!(p.budget >= 0.0)) throw InvalidModel("knapsack: budget must be >= 0");
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    if (p.values[i].empty() || p.values[i].size() != p.costs[i].size()) {
      throw InvalidModel("knapsack: arm " + std::to_string(i) + " has mismatched value/cost lists");
    }
    if (p.costs[i][0] != 0.0) throw InvalidModel("knapsack: arm " + std::to_string(i) + " lacks a zero-cost option");
  }
}

double objective(const KnapsackProblem& p, const ActionVector& a) {
  double v = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) v += p.values[i][static_cast<std::size_t>(a[i])];
  return v;
}

double total_cost(const KnapsackProblem& p, const ActionVector& a) {
  double c = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) c += p.costs[i][static_cast<std::size_t>(a[i])];
  return c;
}

ActionVector solve_branch_and_bound(const KnapsackProblem& p) {
  check_problem(p);
  if (p.values.empty()) return ActionVector{};
  return BranchAndBound(p).run();
}

ActionVector solve_dp_integer(const KnapsackProblem& p, double resolution, std::size_t max_cells) {
  check_problem(p);
  if (!(resolution > 0.0)) throw std::invalid_argument("solve_dp_integer: resolution must be positive");
  const std::size_t n = p.values.size();
  std::vector<std::vector<long>> icost(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (double c : p.costs[i]) {
      if (!integral(c, resolution)) throw std::invalid_argument("solve_dp_integer: non-integral cost");
      icost[i].push_back(std::lround(c / resolution));
    }
  }
  const auto cap = static_cast<long>(std::floor(p.budget / resolution + 1e-9));
  const std::size_t width = static_cast<std::size_t>(cap) + 1;
  if ((n + 1) * width > max_cells) throw std::invalid_argument("solve_dp_integer: table exceeds cell bound");

  // best[k][b]: optimum over arms k..n-1 with b units left
  std::vector<double> best((n + 1) * width, 0.0);
  auto at = [&](std::size_t k, long b) -> double& { return best[k * width + static_cast<std::size_t>(b)]; };
  for (std::size_t k = n; k-- > 0;) {
    for (long b = 0; b <= cap; ++b) {
      double m = kNegInf;
      for (std::size_t j = 0; j < icost[k].size(); ++j) {
        if (icost[k][j] > b) continue;
        m = std::max(m, p.values[k][j] + at(k + 1, b - icost[k][j]));
      }
      at(k, b) = m;
    }
  }
  ActionVector out(std::vector<int>(n, 0));
  long b = cap;
  for (std::size_t k = 0; k < n; ++k) {
    const double target = at(k, b);
    for (std::size_t j = 0; j < icost[k].size(); ++j) {
      if (icost[k][j] > b) continue;
      if (p.values[k][j] + at(k + 1, b - icost[k][j]) == target) {
        out[k] = static_cast<int>(j);
        b -= icost[k][j];
        break;
      }
    }
  }
  return out;
}

ActionVector solve(const KnapsackProblem& p) {
  check_problem(p);
  bool ints = true;
  for (const auto& row : p.costs) {
    for (double c : row) ints = ints && integral(c, 1.0);
  }
  if (ints) {
    const double width = std::floor(p.budget + 1e-9) + 1.0;
    if ((static_cast<double>(p.values.size()) + 1.0) * width <= 1e6) return solve_dp_integer(p);
  }
  return solve_branch_and_bound(p);
}

}  // namespace marmab
