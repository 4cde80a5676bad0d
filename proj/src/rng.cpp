#include "marmab/rng.hpp"

#include <stdexcept>

namespace marmab {

namespace {
std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_id) {
  return splitmix(splitmix(master) ^ splitmix(stream_id + 0x632be59bd9b4e019ULL));
}

std::size_t uniform_index(Engine& rng, std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  const std::uint64_t range = n;
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * range;
  auto low = static_cast<std::uint64_t>(m);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

int categorical(Engine& rng, const double* w, int n) {
  double total = 0.0;
  for (int k = 0; k < n; ++k) total += w[k];
  if (!(total > 0.0)) throw std::invalid_argument("categorical: weights sum to zero");
  double u = uniform01(rng) * total;
  int last_positive = -1;
  for (int k = 0; k < n; ++k) {
    if (w[k] <= 0.0) continue;
    last_positive = k;
    if (u < w[k]) return k;
    u -= w[k];
  }
  return last_positive;
}

double beta_sample(Engine& rng, double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  if (x + y == 0.0) return a >= b ? 1.0 : 0.0;
  return x / (x + y);
}

}  // namespace marmab
