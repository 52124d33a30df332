#ifndef CAYLEYCI_BITSET_HPP
#define CAYLEYCI_BITSET_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace cayleyci {

/// Fixed-size bitset sized at runtime. The set-intersection workhorse behind
/// adjacency rows, connection-set membership and clique search.
class Bitset {
public:
  Bitset() = default;
  explicit Bitset(std::size_t nbits)
      : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  std::size_t size() const { return nbits_; }

  bool test(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  std::size_t intersect_count(const Bitset &o) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
      c += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
    return c;
  }

  /// True iff every bit of this is also set in o.
  bool is_subset_of(const Bitset &o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  Bitset &operator&=(const Bitset &o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  Bitset &operator|=(const Bitset &o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  /// this &= ~o
  Bitset &subtract(const Bitset &o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }

  friend Bitset operator&(Bitset a, const Bitset &b) { return a &= b; }
  friend Bitset operator|(Bitset a, const Bitset &b) { return a |= b; }

  bool operator==(const Bitset &o) const {
    return nbits_ == o.nbits_ && words_ == o.words_;
  }
  bool operator!=(const Bitset &o) const { return !(*this == o); }

  /// Index of the first set bit at or after `from`, or size() when none.
  std::size_t next(std::size_t from) const {
    if (from >= nbits_) return nbits_;
    std::size_t wi = from >> 6;
    std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (from & 63));
    while (true) {
      if (w) {
        std::size_t bit = (wi << 6) + static_cast<std::size_t>(std::countr_zero(w));
        return bit < nbits_ ? bit : nbits_;
      }
      if (++wi == words_.size()) return nbits_;
      w = words_[wi];
    }
  }

  template <typename Fn> void for_each(Fn &&fn) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        std::size_t bit = (wi << 6) + static_cast<std::size_t>(std::countr_zero(w));
        fn(bit);
        w &= w - 1;
      }
    }
  }

  std::vector<std::uint32_t> to_indices() const {
    std::vector<std::uint32_t> out;
    out.reserve(count());
    for_each([&](std::size_t i) { out.push_back(static_cast<std::uint32_t>(i)); });
    return out;
  }

  std::size_t hash() const {
    std::size_t h = nbits_;
    for (auto w : words_) h = h * 0x9e3779b97f4a7c15ULL + w;
    return h;
  }

  const std::vector<std::uint64_t> &words() const { return words_; }

private:
  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

struct BitsetHash {
  std::size_t operator()(const Bitset &b) const { return b.hash(); }
};

} // namespace cayleyci

#endif
