#include "marmab/replay.hpp"

#include <stdexcept>

namespace marmab {

namespace {
double weight_of(const Experience& e) { return 1.0 / (1.0 + static_cast<double>(e.use_count)); }
constexpr std::uint64_t kRebuildEvery = std::uint64_t{1} << 20;
}  // namespace

ReplayBuffer::ReplayBuffer(std::optional<std::size_t> capacity) : capacity_(capacity) {
  if (capacity_ && *capacity_ == 0) throw std::invalid_argument("replay buffer capacity must be positive");
  const std::size_t initial = capacity_ ? *capacity_ : 64;
  slots_.resize(initial);
  weights_.assign(initial, 0.0);
  tree_.assign(initial + 1, 0.0);
}

ReplayBuffer ReplayBuffer::from_entries(std::vector<Experience> entries, std::optional<std::size_t> capacity) {
  ReplayBuffer buf(capacity);
  for (auto& e : entries) {
    const std::uint64_t uc = e.use_count;
    buf.push(e);
    const std::size_t slot = buf.slot_of(buf.size_ - 1);
    buf.slots_[slot].use_count = uc;
    buf.set_weight(slot, weight_of(buf.slots_[slot]));
  }
  buf.rebuild();
  return buf;
}

std::size_t ReplayBuffer::slot_of(std::size_t logical) const { return (head_ + logical) % slots_.size(); }

void ReplayBuffer::set_weight(std::size_t slot, double w) {
  const double delta = w - weights_[slot];
  weights_[slot] = w;
  for (std::size_t i = slot + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  if (++updates_since_rebuild_ >= kRebuildEvery) rebuild();
}

void ReplayBuffer::rebuild() {
  tree_.assign(slots_.size() + 1, 0.0);
  for (std::size_t i = 1; i < tree_.size(); ++i) {
    tree_[i] += weights_[i - 1];
    const std::size_t parent = i + (i & (~i + 1));
    if (parent < tree_.size()) tree_[parent] += tree_[i];
  }
  updates_since_rebuild_ = 0;
}

void ReplayBuffer::grow() {
  // only reached when unbounded, so head_ == 0 and slots are in order
  slots_.resize(slots_.size() * 2);
  weights_.resize(slots_.size(), 0.0);
  rebuild();
}

void ReplayBuffer::push(Experience e) {
  e.use_count = 0;
  if (capacity_ && size_ == *capacity_) {
    slots_[head_] = e;
    set_weight(head_, 1.0);
    head_ = (head_ + 1) % slots_.size();
    return;
  }
  if (!capacity_ && size_ == slots_.size()) grow();
  const std::size_t slot = slot_of(size_);
  slots_[slot] = e;
  ++size_;
  set_weight(slot, 1.0);
}

std::size_t ReplayBuffer::find(double u) const {
  std::size_t pos = 0;
  std::size_t step = 1;
  while (step * 2 < tree_.size()) step *= 2;
  for (; step > 0; step /= 2) {
    if (pos + step < tree_.size() && tree_[pos + step] <= u) {
      pos += step;
      u -= tree_[pos];
    }
  }
  if (pos < weights_.size() && weights_[pos] > 0.0) return pos;
  // rounding pushed us onto an empty slot; take the nearest live one
  for (std::size_t d = 1; d <= weights_.size(); ++d) {
    if (pos >= d && weights_[pos - d] > 0.0) return pos - d;
    if (pos + d < weights_.size() && weights_[pos + d] > 0.0) return pos + d;
  }
  throw std::logic_error("replay buffer: no positive weight");
}

std::vector<Experience> ReplayBuffer::sample(std::size_t k, Engine& rng) {
  if (size_ == 0) throw std::invalid_argument("cannot sample from an empty replay buffer");
  k = std::min(k, size_);
  std::vector<std::size_t> picked;
  picked.reserve(k);
  for (std::size_t n = 0; n < k; ++n) {
    double total = 0.0;
    for (std::size_t i = tree_.size() - 1; i > 0; i -= i & (~i + 1)) total += tree_[i];
    const std::size_t slot = find(uniform01(rng) * total);
    picked.push_back(slot);
    set_weight(slot, 0.0);
  }
  std::vector<Experience> out;
  out.reserve(k);
  for (std::size_t slot : picked) {
    ++slots_[slot].use_count;
    set_weight(slot, weight_of(slots_[slot]));
    out.push_back(slots_[slot]);
  }
  emitted_ += k;
  return out;
}

std::vector<Experience> ReplayBuffer::entries() const {
  std::vector<Experience> out;
  out.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) out.push_back(slots_[slot_of(i)]);
  return out;
}

}  // namespace marmab
