#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "marmab/maiql.hpp"
#include "marmab/oracles.hpp"

using namespace marmab;

namespace {

ScheduleParams greedy_params(double C = 0.1, double C_prime = 0.2) {
  ScheduleParams p;
  p.C = C;
  p.C_prime = C_prime;
  p.D = 500;
  p.epsilon0 = 1e-12;  // effectively never explores
  return p;
}

Experience make_exp(int arm, int s, int a, double r, int s_next) { return Experience{arm, s, a, r, s_next, 0}; }

ArmModel free_action_arm() {
  auto arm = testing::deterministic_two_state();
  arm.costs = {0.0, 0.0};
  return arm;
}

}  // namespace

TEST_CASE("one Q step from zeros") {
  // c_a = 0 so the index term vanishes; beta 0.9; alpha(1) = 0.4
  RmabInstance inst({free_action_arm()}, 1.0, 0.9);
  MaiqlLearner m(inst, greedy_params(0.4), 3.0);
  m.update(make_exp(0, 1, 1, 1.0, 0), 1);
  CHECK(m.q(0, 0, 1, 1, 1) == doctest::Approx(0.4));
  CHECK(m.q(0, 1, 1, 1, 1) == doctest::Approx(0.4));
  CHECK(m.q(0, 0, 1, 1, 0) == 0.0);
}

TEST_CASE("one index step") {
  RmabInstance inst({testing::deterministic_two_state()}, 1.0, 0.9);
  MaiqlLearner m(inst, greedy_params(0.1, 0.2), 3.0);
  m.q(0, 0, 1, 0, 1) = 1.0;
  m.q(0, 0, 1, 0, 0) = 0.5;
  // r chosen so the Q step leaves Q(0, a_1) at 1.0: 1 - 1*0 + 0.9*0 = 1
  m.update(make_exp(0, 0, 1, 1.0, 1), 1);
  CHECK(m.q(0, 0, 1, 0, 1) == doctest::Approx(1.0));
  CHECK(m.lambda(0, 0, 1) == doctest::Approx(0.1));
}

TEST_CASE("index step gated on t mod N") {
  std::vector<ArmModel> arms(2, testing::deterministic_two_state());
  RmabInstance inst(arms, 1.0, 0.9);
  MaiqlLearner m(inst, greedy_params(), 3.0);
  m.q(0, 0, 1, 0, 1) = 1.0;
  m.update(make_exp(0, 0, 1, 1.0, 1), 1);
  CHECK(m.lambda(0, 0, 1) == 0.0);
  m.update(make_exp(0, 0, 1, 1.0, 1), 2);
  CHECK(m.lambda(0, 0, 1) > 0.0);
  // passive tuples never move an index
  m.update(make_exp(0, 0, 0, 0.0, 0), 4);
  CHECK(m.lambda(0, 0, 1) > 0.0);
}

TEST_CASE("equal adjacent costs refuse the index step") {
  RmabInstance inst({free_action_arm()}, 1.0, 0.9);
  MaiqlLearner m(inst, greedy_params(), 3.0);
  m.update(make_exp(0, 0, 1, 0.0, 1), 1);
  CHECK(m.refused_index_steps() == 1);
  CHECK(m.lambda(0, 0, 1) == 0.0);
}

TEST_CASE("index sign dynamics with oracle Q held fixed") {
  const auto arm = testing::deterministic_two_state();
  RmabInstance inst({arm}, 1.0, 0.9);
  const double star = 0.9;
  for (double lam : {star - 0.2, star + 0.2}) {
    MaiqlLearner m(inst, greedy_params(), 3.0);
    const auto q = value_iteration_lambda(arm, lam, 0.9);
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < 2; ++a) m.q(0, 0, 1, s, a) = q[static_cast<std::size_t>(s * 2 + a)];
    m.set_lambda(0, 0, 1, lam);
    // deterministic transition at the fixed point: the Q step is a no-op
    m.update(make_exp(0, 0, 1, 0.0, 1), 1);
    if (lam < star) {
      CHECK(m.lambda(0, 0, 1) > lam);
    } else {
      CHECK(m.lambda(0, 0, 1) < lam);
    }
  }
}

TEST_CASE("learned index on the deterministic arm approaches beta") {
  const auto arm = testing::deterministic_two_state();
  RmabInstance inst({arm}, 1.0, 0.9);
  MaiqlLearner m(inst, greedy_params(), 3.0);
  Engine rng = make_engine(3, 0);
  for (long t = 1; t <= 200000; ++t) {
    const int s = static_cast<int>(uniform_index(rng, 2));
    const int a = static_cast<int>(uniform_index(rng, 2));
    const int s_next = s == 0 && a == 1 ? 1 : 0;
    m.update(make_exp(0, s, a, arm.rewards[static_cast<std::size_t>(s)], s_next), t);
  }
  CHECK(std::abs(m.lambda(0, 0, 1) - 0.9) <= 0.1);
}

TEST_CASE("property: indexes stay inside the bound") {
  std::mt19937_64 g(2);
  std::vector<ArmModel> arms;
  for (int i = 0; i < 3; ++i) arms.push_back(testing::random_arm(3, 3, g));
  RmabInstance inst(arms, 2.0, 0.9);
  MaiqlLearner m(inst, greedy_params(0.8, 5.0), 0.5);
  Engine rng = make_engine(2, 0);
  for (long t = 1; t <= 20000; ++t) {
    const int i = static_cast<int>(uniform_index(rng, 3));
    const int s = static_cast<int>(uniform_index(rng, 3));
    const int a = static_cast<int>(uniform_index(rng, 3));
    const int sn = categorical(rng, inst.arm(static_cast<std::size_t>(i)).row(s, a), 3);
    m.update(make_exp(i, s, a, 10.0 * inst.arm(static_cast<std::size_t>(i)).rewards[static_cast<std::size_t>(s)], sn), t);
    for (int x = 0; x < 3; ++x)
      for (int j = 1; j < 3; ++j) {
        CHECK(m.lambda(i, x, j) <= 0.5);
        CHECK(m.lambda(i, x, j) >= -0.5);
      }
  }
}

TEST_CASE("property: updates depend only on the batch, not the behaviour policy") {
  std::mt19937_64 g(3);
  std::vector<ArmModel> arms = {testing::random_arm(2, 3, g), testing::random_arm(2, 3, g)};
  RmabInstance inst(arms, 2.0, 0.9);
  MaiqlLearner a(inst, greedy_params(), 3.0), b(inst, greedy_params(), 3.0);
  Engine rng = make_engine(1, 0), other = make_engine(2, 0);
  std::vector<Experience> batch;
  for (int k = 0; k < 500; ++k) {
    batch.push_back(make_exp(k % 2, static_cast<int>(uniform_index(rng, 2)), static_cast<int>(uniform_index(rng, 3)),
                             0.3, static_cast<int>(uniform_index(rng, 2))));
  }
  a.observe(batch, 2);
  // b acts in between; acting must not touch learned state
  for (int k = 0; k < 50; ++k) b.select(StateVector({0, 1}), 1 + k, other);
  b.observe(batch, 2);
  for (int i = 0; i < 2; ++i)
    for (int s = 0; s < 2; ++s)
      for (int j = 1; j < 3; ++j) CHECK(a.lambda(i, s, j) == b.lambda(i, s, j));
}

TEST_CASE("greedy selection") {
  SUBCASE("zero budget") {
    std::vector<ArmModel> arms(2, testing::deterministic_two_state());
    RmabInstance inst(arms, 0.0, 0.9);
    MaiqlLearner m(inst, greedy_params(), 3.0);
    m.set_lambda(0, 0, 1, 1.0);
    CHECK(m.greedy(StateVector({0, 0})) == ActionVector::passive(2));
  }
  SUBCASE("highest index wins") {
    std::vector<ArmModel> arms(2, testing::deterministic_two_state());
    RmabInstance inst(arms, 1.0, 0.9);
    MaiqlLearner m(inst, greedy_params(), 3.0);
    m.set_lambda(0, 0, 1, 0.9);
    m.set_lambda(1, 0, 1, 0.1);
    CHECK(m.greedy(StateVector({0, 0})) == ActionVector({1, 0}));
    m.set_lambda(1, 0, 1, 1.5);
    CHECK(m.greedy(StateVector({0, 0})) == ActionVector({0, 1}));
  }
  SUBCASE("ties go to the lowest arm") {
    std::vector<ArmModel> arms(3, testing::deterministic_two_state());
    RmabInstance inst(arms, 1.0, 0.9);
    MaiqlLearner m(inst, greedy_params(), 3.0);
    CHECK(m.greedy(StateVector({0, 0, 0})) == ActionVector({1, 0, 0}));
  }
  SUBCASE("increments walk up an arm's actions") {
    RmabInstance inst({testing::single_state(3, 1.0), testing::single_state(3, 1.0)}, 3.0, 0.9);
    MaiqlLearner m(inst, greedy_params(), 3.0);
    m.set_lambda(0, 0, 1, 2.0);
    m.set_lambda(0, 0, 2, 1.0);
    m.set_lambda(1, 0, 1, 1.5);
    m.set_lambda(1, 0, 2, 0.5);
    CHECK(m.greedy(StateVector({0, 0})) == ActionVector({2, 1}));
  }
}

TEST_CASE("wibql acts on floor(B / c_j) arms") {
  std::vector<ArmModel> arms(16, testing::single_state(3, 1.0));
  for (std::size_t i = 0; i < arms.size(); ++i) arms[i].rewards = {static_cast<double>(i)};
  SUBCASE("j = 1, B = 4") {
    RmabInstance inst(arms, 4.0, 0.9);
    WibqlLearner w(inst, greedy_params(), 3.0, 1);
    Engine rng = make_engine(1, 0);
    for (long t = 1; t < 50; ++t) {
      auto a = w.select(StateVector(std::vector<int>(16, 0)), t, rng);
      int acted = 0;
      for (int x : a.actions) {
        CHECK((x == 0 || x == 1));
        acted += x != 0;
      }
      CHECK(acted == 4);
    }
  }
  SUBCASE("j = 2, B = 4") {
    RmabInstance inst(arms, 4.0, 0.9);
    WibqlLearner w(inst, greedy_params(), 3.0, 2);
    Engine rng = make_engine(1, 0);
    auto a = w.select(StateVector(std::vector<int>(16, 0)), 10, rng);
    int acted = 0;
    for (int x : a.actions) {
      CHECK((x == 0 || x == 2));
      acted += x != 0;
    }
    CHECK(acted == 2);
  }
  SUBCASE("zero budget and unaffordable action") {
    RmabInstance none(arms, 0.0, 0.9);
    WibqlLearner w(none, greedy_params(), 3.0, 1);
    Engine rng = make_engine(1, 0);
    CHECK(w.select(StateVector(std::vector<int>(16, 0)), 1, rng) == ActionVector::passive(16));
    RmabInstance small(arms, 1.0, 0.9);
    WibqlLearner w2(small, ScheduleParams{}, 3.0, 2);
    for (long t = 1; t < 200; ++t) CHECK(w2.select(StateVector(std::vector<int>(16, 0)), t, rng) == ActionVector::passive(16));
  }
}

TEST_CASE("wibql ignores tuples outside its action pair") {
  RmabInstance inst({testing::single_state(3, 1.0)}, 2.0, 0.9);
  WibqlLearner w(inst, greedy_params(), 3.0, 2);
  std::vector<Experience> b = {make_exp(0, 0, 1, 1.0, 0)};
  w.observe(b, 1);
  CHECK(w.inner().counter().total() == 0);
  b = {make_exp(0, 0, 2, 1.0, 0)};
  w.observe(b, 1);
  CHECK(w.inner().counter().get(0, 0, 1) == 1);
}
