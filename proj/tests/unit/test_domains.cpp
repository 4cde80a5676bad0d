#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "marmab/domains.hpp"
#include "marmab/oracles.hpp"
#include "marmab/rng.hpp"

using namespace marmab;

namespace {

bool is_type_a(const ArmModel& arm) { return arm.transition(1, 0, 1) <= 0.2; }

bool all_valid(const RmabInstance& inst) {
  for (const auto& arm : inst.arms())
    if (!validate(arm).empty()) return false;
  return true;
}

}  // namespace

TEST_CASE("two-process: type counts") {
  Engine rng = make_engine(1, 0);
  auto inst = gen_two_process(16, 8, 0.95, TwoProcessParams{}, rng);
  int n_a = 0;
  for (const auto& arm : inst.arms()) n_a += is_type_a(arm);
  CHECK(inst.n_arms() == 16);
  CHECK(n_a == 4);

  TwoProcessParams p;
  p.fraction_type_a = 0.3;
  auto odd = gen_two_process(10, 4, 0.95, p, rng);
  n_a = 0;
  for (const auto& arm : odd.arms()) n_a += is_type_a(arm);
  CHECK(n_a == 3);
  Engine r2 = make_engine(2, 0);
  auto one = gen_two_process(1, 1, 0.95, TwoProcessParams{}, r2);
  CHECK(is_type_a(one.arm(0)));
  CHECK_THROWS_AS(gen_two_process(0, 1, 0.95, TwoProcessParams{}, r2), std::invalid_argument);
}

TEST_CASE("two-process: layout and qualitative constraints on generated tensors") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Engine rng = make_engine(seed, streams::kInstance);
    auto inst = gen_two_process(32, 8, 0.95, TwoProcessParams{}, rng);
    for (const auto& arm : inst.arms()) {
      CHECK(validate(arm).empty());
      CHECK(arm.n_states == 2);
      CHECK(arm.n_actions == 3);
      CHECK(arm.costs == std::vector<double>{0.0, 1.0, 2.0});
      CHECK(arm.rewards == std::vector<double>{0.0, 1.0});
      for (int a = 1; a < 3; ++a) {
        CHECK(arm.transition(1, a, 1) >= arm.transition(1, a - 1, 1));
        CHECK(arm.transition(0, a, 1) >= arm.transition(0, a - 1, 1));
      }
      if (is_type_a(arm)) {
        for (int a = 1; a < 3; ++a) {
          CHECK(arm.transition(1, a, 1) >= 0.9);
          CHECK(arm.transition(1, a, 1) > arm.transition(1, 0, 1));
        }
        CHECK(arm.transition(1, 0, 1) <= 0.1);
        for (int a = 0; a < 3; ++a) CHECK(arm.transition(0, a, 1) < 0.15);
      } else {
        CHECK(arm.transition(1, 0, 1) >= 0.9);
        for (int a = 1; a < 3; ++a) CHECK(arm.transition(0, a, 1) >= 0.9);
      }
    }
  }
}

TEST_CASE("two-process: jitter off reproduces the base types exactly") {
  TwoProcessParams p;
  p.jitter = 0.0;
  Engine rng = make_engine(3, 0);
  auto inst = gen_two_process(8, 4, 0.95, p, rng);
  for (const auto& arm : inst.arms()) {
    const auto& t = is_type_a(arm) ? p.type_a : p.type_b;
    for (int a = 0; a < 3; ++a) {
      CHECK(arm.transition(1, a, 1) == t.stay_good[static_cast<std::size_t>(a)]);
      CHECK(arm.transition(0, a, 1) == t.recover[static_cast<std::size_t>(a)]);
    }
  }
}

TEST_CASE("two-process: same seed, same instance") {
  Engine a = make_engine(9, 0), b = make_engine(9, 0);
  auto x = gen_two_process(16, 8, 0.95, TwoProcessParams{}, a);
  auto y = gen_two_process(16, 8, 0.95, TwoProcessParams{}, b);
  for (std::size_t i = 0; i < 16; ++i) CHECK(x.arm(i).transitions == y.arm(i).transitions);
}

TEST_CASE("two-process: shipped Type-B good index below Type-A good index") {
  TwoProcessParams p;
  const auto a = two_process_arm(p.type_a);
  const auto b = two_process_arm(p.type_b);
  for (int j = 1; j < 3; ++j) CHECK(oracle_index(b, 1, j, 0.95) < oracle_index(a, 1, j, 0.95));
}

TEST_CASE("random domain") {
  Engine rng = make_engine(4, 0);
  auto inst = gen_random(16, 5, 10, 0.95, rng);
  CHECK(inst.budget() == 80.0);
  CHECK(all_valid(inst));
  for (const auto& arm : inst.arms()) {
    CHECK(arm.costs[0] == 0.0);
    for (int a = 1; a < 10; ++a) CHECK(arm.costs[static_cast<std::size_t>(a)] > arm.costs[static_cast<std::size_t>(a - 1)]);
    for (double r : arm.rewards) CHECK((r >= 0.0 && r <= 1.0));
    for (int s = 0; s < 5; ++s) {
      for (int a = 0; a < 10; ++a) {
        double sum = 0.0;
        for (int k = 0; k < 5; ++k) sum += arm.transition(s, a, k);
        CHECK(std::abs(sum - 1.0) <= 1e-12);
      }
    }
  }
  for (int m : {2, 5}) CHECK(gen_random(16, 5, m, 0.95, rng).budget() == 8.0 * m);
  CHECK(gen_random(4, 3, 3, 0.9, rng, RowSampling::normalized_uniform, 1.5).budget() == 1.5);
  CHECK(all_valid(gen_random(4, 3, 3, 0.9, rng, RowSampling::dirichlet)));
  CHECK(all_valid(gen_random(1, 1, 1, 0.9, rng)));
  CHECK_THROWS_AS(gen_random(4, 0, 3, 0.9, rng), std::invalid_argument);
}

TEST_CASE("random domain: reward and cost increments look uniform") {
  Engine rng = make_engine(5, 0);
  auto inst = gen_random(400, 5, 5, 0.95, rng);
  double r = 0.0, dc = 0.0;
  for (const auto& arm : inst.arms()) {
    for (double x : arm.rewards) r += x;
    dc += arm.costs[2] - arm.costs[1];
  }
  CHECK(r / 2000.0 == doctest::Approx(0.5).epsilon(0.05));
  CHECK(dc / 400.0 == doctest::Approx(0.5).epsilon(0.1));
}
