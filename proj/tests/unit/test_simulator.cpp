#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "marmab/domains.hpp"
#include "marmab/schedules.hpp"
#include "marmab/simulator.hpp"

using namespace marmab;

namespace {

ArmModel coin_arm() {
  auto arm = ArmModel::zeros(2, 2);
  arm.costs = {0.0, 1.0};
  arm.rewards = {0.25, 0.75};
  for (int s = 0; s < 2; ++s) {
    for (int a = 0; a < 2; ++a) {
      arm.row(s, a)[0] = 0.5;
      arm.row(s, a)[1] = 0.5;
    }
  }
  return arm;
}

}  // namespace

TEST_CASE("deterministic transition and reward of the current state") {
  RmabInstance inst({testing::deterministic_two_state()}, 1.0, 0.9);
  auto rngs = make_arm_streams(1, 3);
  auto res = step(inst, StateVector({0}), ActionVector({1}), rngs);
  CHECK(res.next == StateVector({1}));
  CHECK(res.rewards == std::vector<double>{0.0});
  REQUIRE(res.experiences.size() == 1);
  const Experience& e = res.experiences[0];
  CHECK(e.arm == 0);
  CHECK(e.s == 0);
  CHECK(e.a == 1);
  CHECK(e.r == 0.0);
  CHECK(e.s_next == 1);
  CHECK(e.use_count == 0);

  res = step(inst, res.next, ActionVector({0}), rngs);
  CHECK(res.next == StateVector({0}));
  CHECK(res.rewards == std::vector<double>{1.0});
}

TEST_CASE("infeasible actions are refused with cost and budget") {
  RmabInstance inst({testing::deterministic_two_state(), testing::deterministic_two_state()}, 1.0, 0.9);
  auto rngs = make_arm_streams(2, 3);
  try {
    step(inst, StateVector({0, 0}), ActionVector({1, 1}), rngs);
    FAIL("expected InfeasibleAction");
  } catch (const InfeasibleAction& e) {
    CHECK(e.cost == 2.0);
    CHECK(e.budget == 1.0);
  }
}

TEST_CASE("identical streams give identical draws") {
  RmabInstance inst({coin_arm(), coin_arm()}, 1.0, 0.9);
  auto r1 = make_arm_streams(2, 99);
  auto r2 = make_arm_streams(2, 99);
  StateVector s1({0, 1}), s2({0, 1});
  for (int t = 0; t < 100; ++t) {
    s1 = step(inst, s1, ActionVector({0, 1}), r1).next;
    s2 = step(inst, s2, ActionVector({0, 1}), r2).next;
    CHECK(s1 == s2);
  }
}

TEST_CASE("half-half row: frequency of s'=1 is 0.5 +- 0.01") {
  RmabInstance inst({coin_arm()}, 0.0, 0.9);
  auto rngs = make_arm_streams(1, 2024);
  StateVector s({0});
  long ones = 0;
  const long n = 100000;
  for (long t = 0; t < n; ++t) {
    s = step(inst, s, ActionVector({0}), rngs).next;
    ones += s[0];
  }
  CHECK(static_cast<double>(ones) / n == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::abs(static_cast<double>(ones) / n - 0.5) <= 0.01);
}

TEST_CASE("arm streams are independent of other arms") {
  std::mt19937_64 g(1);
  std::vector<ArmModel> arms;
  for (int i = 0; i < 4; ++i) arms.push_back(testing::random_arm(3, 2, g));
  RmabInstance full(arms, 0.0, 0.9);
  std::vector<ArmModel> without_second = {arms[0], arms[2], arms[3]};
  RmabInstance reduced(without_second, 0.0, 0.9);

  // the reduced instance keeps the full instance's stream ids for its arms
  auto rf = make_arm_streams(4, 7);
  auto all = make_arm_streams(4, 7);
  std::vector<Engine> rr = {all[0], all[2], all[3]};
  StateVector sf({0, 1, 2, 0}), sr({0, 2, 0});
  for (int t = 0; t < 500; ++t) {
    sf = step(full, sf, ActionVector::passive(4), rf).next;
    sr = step(reduced, sr, ActionVector::passive(3), rr).next;
    CHECK(sf[0] == sr[0]);
    CHECK(sf[2] == sr[1]);
    CHECK(sf[3] == sr[2]);
  }
}

TEST_CASE("run_episode records every round and is deterministic") {
  RmabInstance inst({coin_arm(), coin_arm()}, 1.0, 0.9);
  auto passive = [](const StateVector& s, long) { return ActionVector::passive(s.size()); };
  auto one = run_episode(inst, passive, 1, StateVector({0, 0}), 1);
  CHECK(one.size() == 1);
  CHECK(one.states.size() == 1);

  auto a = run_episode(inst, passive, 200, StateVector({0, 0}), 5);
  auto b = run_episode(inst, passive, 200, StateVector({0, 0}), 5);
  CHECK(a.states == b.states);
  CHECK(a.rewards == b.rewards);
  CHECK_THROWS(run_episode(inst, passive, 0, StateVector({0, 0}), 5));

  auto greedy = [](const StateVector& s, long) { return ActionVector(std::vector<int>(s.size(), 1)); };
  CHECK_THROWS_AS(run_episode(inst, greedy, 3, StateVector({0, 0}), 5), InfeasibleAction);
}

TEST_CASE("random policy on the two-process domain stays feasible") {
  Engine gen = make_engine(3, 0);
  auto inst = gen_two_process(16, 8, 0.95, TwoProcessParams{}, gen);
  Engine explore = make_engine(3, 1);
  auto policy = [&](const StateVector&, long) { return random_action(inst, explore); };
  auto traj = run_episode(inst, policy, 50000, StateVector(std::vector<int>(16, 1)), 3);
  REQUIRE(traj.size() == 50000);
  long infeasible = 0;
  for (const auto& a : traj.actions) infeasible += !is_feasible(inst, a);
  CHECK(infeasible == 0);
}
