#ifndef CAYLEYCI_BIGNUM_HPP
#define CAYLEYCI_BIGNUM_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace cayleyci {

/// Unsigned big integer, base 10^9. Just enough for permutation group orders
/// (products of orbit lengths can exceed 64 bits on large-degree groups).
class BigUnsigned {
public:
  BigUnsigned() : limbs_{0} {}
  BigUnsigned(std::uint64_t v) { // NOLINT: implicit by design
    do {
      limbs_.push_back(static_cast<std::uint32_t>(v % kBase));
      v /= kBase;
    } while (v);
  }

  BigUnsigned &operator*=(std::uint64_t m) {
    std::uint64_t carry = 0;
    for (auto &limb : limbs_) {
      std::uint64_t cur = static_cast<std::uint64_t>(limb) * m + carry;
      limb = static_cast<std::uint32_t>(cur % kBase);
      carry = cur / kBase;
    }
    while (carry) {
      limbs_.push_back(static_cast<std::uint32_t>(carry % kBase));
      carry /= kBase;
    }
    return *this;
  }

  bool operator==(const BigUnsigned &o) const { return limbs_ == o.limbs_; }
  bool operator!=(const BigUnsigned &o) const { return !(*this == o); }

  bool operator<(const BigUnsigned &o) const {
    if (limbs_.size() != o.limbs_.size()) return limbs_.size() < o.limbs_.size();
    for (std::size_t i = limbs_.size(); i-- > 0;)
      if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i];
    return false;
  }
  bool operator<=(const BigUnsigned &o) const { return *this < o || *this == o; }

  bool fits_u64() const {
    return *this <= BigUnsigned(~std::uint64_t{0});
  }

  /// Value as u64; only meaningful when fits_u64().
  std::uint64_t as_u64() const {
    std::uint64_t v = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) v = v * kBase + limbs_[i];
    return v;
  }

  std::string to_string() const {
    std::string s = std::to_string(limbs_.back());
    for (std::size_t i = limbs_.size() - 1; i-- > 0;) {
      std::string part = std::to_string(limbs_[i]);
      s += std::string(9 - part.size(), '0') + part;
    }
    return s;
  }

private:
  static constexpr std::uint64_t kBase = 1000000000;
  std::vector<std::uint32_t> limbs_; // little-endian
};

} // namespace cayleyci

#endif
