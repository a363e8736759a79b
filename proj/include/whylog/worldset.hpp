#pragma once

#include <bit>
#include <cassert>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace whylog {

// A subset of a model's worlds. The universe size is fixed at construction;
// worlds are identified by their declaration index.
class WorldSet {
 public:
  WorldSet() = default;
  explicit WorldSet(int universe_size)
      : n_(universe_size), bits_((universe_size + 63) / 64, 0) {}

  static WorldSet all(int universe_size) {
    WorldSet s(universe_size);
    for (int w = 0; w < universe_size; ++w) s.add(w);
    return s;
  }

  int universe_size() const { return n_; }

  void add(int w) {
    assert(w >= 0 && w < n_);
    bits_[static_cast<size_t>(w) >> 6] |= uint64_t{1} << (w & 63);
  }

  bool contains(int w) const {
    assert(w >= 0 && w < n_);
    return (bits_[static_cast<size_t>(w) >> 6] >> (w & 63)) & 1;
  }

  bool empty() const {
    for (uint64_t b : bits_)
      if (b) return false;
    return true;
  }

  int count() const {
    int c = 0;
    for (uint64_t b : bits_) c += std::popcount(b);
    return c;
  }

  bool subset_of(const WorldSet& o) const {
    assert(n_ == o.n_);
    for (size_t k = 0; k < bits_.size(); ++k)
      if (bits_[k] & ~o.bits_[k]) return false;
    return true;
  }

  WorldSet intersect(const WorldSet& o) const {
    assert(n_ == o.n_);
    WorldSet r(n_);
    for (size_t k = 0; k < bits_.size(); ++k) r.bits_[k] = bits_[k] & o.bits_[k];
    return r;
  }

  WorldSet unite(const WorldSet& o) const {
    assert(n_ == o.n_);
    WorldSet r(n_);
    for (size_t k = 0; k < bits_.size(); ++k) r.bits_[k] = bits_[k] | o.bits_[k];
    return r;
  }

  std::vector<int> members() const {
    std::vector<int> ws;
    for (int w = 0; w < n_; ++w)
      if (contains(w)) ws.push_back(w);
    return ws;
  }

  friend bool operator==(const WorldSet&, const WorldSet&) = default;
  friend auto operator<=>(const WorldSet&, const WorldSet&) = default;

 private:
  int n_ = 0;
  std::vector<uint64_t> bits_;
};

}  // namespace whylog
