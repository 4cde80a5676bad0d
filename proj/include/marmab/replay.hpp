#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "marmab/rng.hpp"
#include "marmab/simulator.hpp"

namespace marmab {

/// Experience store sampled with weight 1 / (1 + use_count).
/// Backed by a Fenwick tree over slots; optional capacity evicts FIFO.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::optional<std::size_t> capacity = std::nullopt);
  /// Rebuilds a buffer holding exactly `entries` (oldest first), use counts kept.
  static ReplayBuffer from_entries(std::vector<Experience> entries,
                                   std::optional<std::size_t> capacity = std::nullopt);

  void push(Experience e);

  /// k distinct entries (clamped to size()); use counts are bumped after the
  /// whole batch is drawn. Returned copies carry the bumped counts.
  std::vector<Experience> sample(std::size_t k, Engine& rng);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  std::optional<std::size_t> capacity() const { return capacity_; }
  /// Entries oldest first.
  std::vector<Experience> entries() const;
  std::uint64_t total_emitted() const { return emitted_; }

 private:
  std::size_t slot_of(std::size_t logical) const;
  void set_weight(std::size_t slot, double w);
  void grow();
  void rebuild();
  std::size_t find(double u) const;

  std::optional<std::size_t> capacity_;
  std::vector<Experience> slots_;
  std::vector<double> weights_;
  std::vector<double> tree_;  // 1-based Fenwick over slots_
  std::size_t head_ = 0;      // slot of the oldest entry
  std::size_t size_ = 0;
  std::uint64_t emitted_ = 0;
  std::uint64_t updates_since_rebuild_ = 0;
};

}  // namespace marmab
