#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "marmab/replay.hpp"

using namespace marmab;

namespace {

Experience exp_with(int tag, std::uint64_t uses = 0) {
  Experience e;
  e.arm = tag;
  e.s = tag % 3;
  e.a = tag % 2;
  e.r = tag;
  e.s_next = (tag + 1) % 3;
  e.use_count = uses;
  return e;
}

}  // namespace

TEST_CASE("push then sample one returns that entry") {
  ReplayBuffer buf;
  buf.push(exp_with(4, 7));
  CHECK(buf.entries()[0].use_count == 0);
  Engine rng = make_engine(1, 0);
  auto batch = buf.sample(1, rng);
  REQUIRE(batch.size() == 1);
  CHECK(batch[0].arm == 4);
  CHECK(batch[0].use_count == 1);
  CHECK(buf.entries()[0].use_count == 1);
}

TEST_CASE("capacity evicts the oldest entry") {
  ReplayBuffer buf(2);
  buf.push(exp_with(0));
  buf.push(exp_with(1));
  buf.push(exp_with(2));
  auto e = buf.entries();
  REQUIRE(e.size() == 2);
  CHECK(e[0].arm == 1);
  CHECK(e[1].arm == 2);
}

TEST_CASE("empty buffer refuses and oversized batches are clamped") {
  ReplayBuffer buf;
  Engine rng = make_engine(1, 0);
  CHECK_THROWS(buf.sample(1, rng));
  buf.push(exp_with(0));
  buf.push(exp_with(1));
  auto batch = buf.sample(5, rng);
  CHECK(batch.size() == 2);
  CHECK(batch[0].arm != batch[1].arm);
}

TEST_CASE("use counts {0, 3}: first entry drawn with probability 0.8") {
  Engine rng = make_engine(12, 0);
  const int n = 100000;
  int first = 0;
  for (int k = 0; k < n; ++k) {
    // fresh buffer each draw so the counts stay at {0, 3}
    auto buf = ReplayBuffer::from_entries({exp_with(0, 0), exp_with(1, 3)});
    first += buf.sample(1, rng)[0].arm == 0;
  }
  const double expected = 1.0 / (1.0 + 0.25);
  CHECK(std::abs(static_cast<double>(first) / n - expected) <= 0.01);
}

TEST_CASE("fresh buffer samples uniformly") {
  Engine rng = make_engine(13, 0);
  const int n = 100000;
  std::map<int, int> hits;
  for (int k = 0; k < n; ++k) {
    auto buf = ReplayBuffer::from_entries({exp_with(0), exp_with(1), exp_with(2), exp_with(3)});
    ++hits[buf.sample(1, rng)[0].arm];
  }
  for (auto [tag, count] : hits) CHECK(std::abs(static_cast<double>(count) / n - 0.25) <= 0.01);
}

TEST_CASE("property: bookkeeping over a long mixed sequence") {
  ReplayBuffer buf;
  Engine rng = make_engine(14, 0);
  std::uint64_t requested = 0;
  int next_tag = 0;
  for (int round = 0; round < 3000; ++round) {
    buf.push(exp_with(next_tag++));
    if (round % 3 == 0) {
      const std::size_t k = 1 + round % 7;
      auto batch = buf.sample(k, rng);
      requested += std::min(k, buf.size());
      for (const auto& e : batch) CHECK(e.arm < next_tag);
    }
  }
  std::uint64_t sum = 0;
  for (const auto& e : buf.entries()) sum += e.use_count;
  CHECK(sum == requested);
  CHECK(buf.total_emitted() == requested);
}

TEST_CASE("property: larger use count means smaller draw probability") {
  Engine rng = make_engine(15, 0);
  const int n = 60000;
  std::map<int, int> hits;
  for (int k = 0; k < n; ++k) {
    auto buf = ReplayBuffer::from_entries({exp_with(0, 0), exp_with(1, 1), exp_with(2, 2)});
    ++hits[buf.sample(1, rng)[0].arm];
  }
  CHECK(hits[0] > hits[1]);
  CHECK(hits[1] > hits[2]);
}

TEST_CASE("bounded ring keeps counts consistent after eviction") {
  ReplayBuffer buf(5);
  Engine rng = make_engine(16, 0);
  for (int k = 0; k < 50; ++k) {
    buf.push(exp_with(k));
    buf.sample(2, rng);
    CHECK(buf.size() == std::min<std::size_t>(static_cast<std::size_t>(k) + 1, 5));
    auto e = buf.entries();
    CHECK(e.back().arm == k);
  }
}
