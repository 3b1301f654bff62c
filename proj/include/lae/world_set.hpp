#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

namespace lae {

/// A subset of a world universe {0, ..., n-1}, stored as a bit vector.
/// Universes of up to 64 worlds live inline; larger ones spill to the heap.
class WorldSet {
 public:
  WorldSet() = default;
  explicit WorldSet(std::size_t universe) : n_(universe), words_(word_count(universe)) {
    if (words_ > 1) heap_ = std::make_unique<std::uint64_t[]>(words_);
  }

  static WorldSet full(std::size_t universe) {
    WorldSet s(universe);
    for (std::size_t w = 0; w < s.words_; ++w) s.data()[w] = ~0ULL;
    s.trim();
    return s;
  }

  static WorldSet of(std::size_t universe, std::initializer_list<std::size_t> members) {
    WorldSet s(universe);
    for (auto m : members) s.set(m);
    return s;
  }

  static WorldSet of(std::size_t universe, const std::vector<std::size_t>& members) {
    WorldSet s(universe);
    for (auto m : members) s.set(m);
    return s;
  }

  /// Members given by the low `universe` bits of `mask`; universe must not exceed 64.
  static WorldSet from_mask(std::size_t universe, std::uint64_t mask) {
    WorldSet s(universe);
    if (universe) s.data()[0] = mask;
    s.trim();
    return s;
  }

  WorldSet(const WorldSet& o) : n_(o.n_), words_(o.words_), local_(o.local_) {
    if (words_ > 1) {
      heap_ = std::make_unique<std::uint64_t[]>(words_);
      std::copy_n(o.heap_.get(), words_, heap_.get());
    }
  }
  WorldSet(WorldSet&&) noexcept = default;
  WorldSet& operator=(const WorldSet& o) {
    if (this != &o) {
      WorldSet tmp(o);
      *this = std::move(tmp);
    }
    return *this;
  }
  WorldSet& operator=(WorldSet&&) noexcept = default;

  std::size_t universe() const { return n_; }

  bool test(std::size_t i) const { return (data()[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i) { data()[i >> 6] |= 1ULL << (i & 63); }
  void reset(std::size_t i) { data()[i >> 6] &= ~(1ULL << (i & 63)); }

  std::size_t count() const {
    std::size_t c = 0;
    for (std::size_t w = 0; w < words_; ++w) c += static_cast<std::size_t>(std::popcount(data()[w]));
    return c;
  }
  bool empty() const {
    for (std::size_t w = 0; w < words_; ++w)
      if (data()[w]) return false;
    return true;
  }
  bool any() const { return !empty(); }

  /// Smallest member, or universe() when empty.
  std::size_t first() const {
    for (std::size_t w = 0; w < words_; ++w)
      if (data()[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(data()[w]));
    return n_;
  }
  /// Largest member, or universe() when empty.
  std::size_t last() const {
    for (std::size_t w = words_; w-- > 0;)
      if (data()[w]) return w * 64 + 63 - static_cast<std::size_t>(std::countl_zero(data()[w]));
    return n_;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t bits = data()[w];
      while (bits) {
        f(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  /// Low 64 bits; meaningful as a complete key only for universes of at most 64 worlds.
  std::uint64_t mask() const { return words_ ? data()[0] : 0; }

  bool is_subset_of(const WorldSet& o) const {
    for (std::size_t w = 0; w < words_; ++w)
      if (data()[w] & ~o.data()[w]) return false;
    return true;
  }
  bool intersects(const WorldSet& o) const {
    for (std::size_t w = 0; w < words_; ++w)
      if (data()[w] & o.data()[w]) return true;
    return false;
  }

  WorldSet complement() const {
    WorldSet r(*this);
    for (std::size_t w = 0; w < words_; ++w) r.data()[w] = ~r.data()[w];
    r.trim();
    return r;
  }

  WorldSet& operator&=(const WorldSet& o) {
    for (std::size_t w = 0; w < words_; ++w) data()[w] &= o.data()[w];
    return *this;
  }
  WorldSet& operator|=(const WorldSet& o) {
    for (std::size_t w = 0; w < words_; ++w) data()[w] |= o.data()[w];
    return *this;
  }
  WorldSet& operator-=(const WorldSet& o) {
    for (std::size_t w = 0; w < words_; ++w) data()[w] &= ~o.data()[w];
    return *this;
  }
  friend WorldSet operator&(WorldSet a, const WorldSet& b) { return a &= b; }
  friend WorldSet operator|(WorldSet a, const WorldSet& b) { return a |= b; }
  friend WorldSet operator-(WorldSet a, const WorldSet& b) { return a -= b; }

  friend bool operator==(const WorldSet& a, const WorldSet& b) {
    if (a.n_ != b.n_) return false;
    for (std::size_t w = 0; w < a.words_; ++w)
      if (a.data()[w] != b.data()[w]) return false;
    return true;
  }

  std::string str() const {
    std::string out = "{";
    bool first = true;
    for_each([&](std::size_t i) {
      if (!first) out += ",";
      out += std::to_string(i);
      first = false;
    });
    return out + "}";
  }

 private:
  static std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

  std::uint64_t* data() { return words_ > 1 ? heap_.get() : &local_; }
  const std::uint64_t* data() const { return words_ > 1 ? heap_.get() : &local_; }

  void trim() {
    if (words_ && (n_ & 63)) data()[words_ - 1] &= (1ULL << (n_ & 63)) - 1;
  }

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::uint64_t local_ = 0;
  std::unique_ptr<std::uint64_t[]> heap_;
};

}  // namespace lae
