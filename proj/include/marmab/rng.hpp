#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace marmab {

using Engine = std::mt19937_64;

/// SplitMix64-style mixing of (master, stream) into an independent seed.
/// Stream ids are stable, so adding arms never reshuffles existing streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_id);

inline Engine make_engine(std::uint64_t master, std::uint64_t stream_id) {
  return Engine(derive_seed(master, stream_id));
}

namespace streams {
// arm i uses stream i; auxiliary streams live far above any arm count
inline constexpr std::uint64_t kAuxBase = std::uint64_t{1} << 40;
inline constexpr std::uint64_t kExploration = kAuxBase + 1;
inline constexpr std::uint64_t kReplay = kAuxBase + 2;
inline constexpr std::uint64_t kInstance = kAuxBase + 3;
inline constexpr std::uint64_t kInitialState = kAuxBase + 4;
inline constexpr std::uint64_t kTraces = kAuxBase + 5;
inline constexpr std::uint64_t kClustering = kAuxBase + 6;
}  // namespace streams

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(Engine& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Unbiased integer in [0, n) (Lemire's multiply-and-reject). n must be > 0.
std::size_t uniform_index(Engine& rng, std::size_t n);

/// Draws an index from unnormalized non-negative weights w[0..n).
/// Falls back to the last positive weight if rounding overshoots.
int categorical(Engine& rng, const double* w, int n);

/// Beta(a, b) via two gamma draws.
double beta_sample(Engine& rng, double a, double b);

}  // namespace marmab
