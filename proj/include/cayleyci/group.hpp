#ifndef CAYLEYCI_GROUP_HPP
#define CAYLEYCI_GROUP_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cayleyci/bitset.hpp"

namespace cayleyci {

/// Element of a finite abelian group, identified by its lexicographic rank
/// among coordinate vectors. The identity is always 0.
using Elem = std::uint32_t;

using Coords = std::vector<int>;

/// Direct product of cyclic groups Z_{n1} x ... x Z_{nd}. Elements are
/// residue vectors, enumerated in lexicographic coordinate order; most
/// arithmetic works on element ranks directly.
class AbelianGroup {
public:
  /// Empty moduli list gives the trivial group (order 1).
  explicit AbelianGroup(std::vector<int> moduli, std::uint64_t order_cap = kDefaultOrderCap);

  const std::vector<int> &moduli() const { return moduli_; }
  std::size_t rank() const { return moduli_.size(); }
  std::uint64_t order() const { return order_; }

  Elem identity() const { return 0; }

  Coords coords(Elem e) const;
  Elem index_of(std::span<const int> coords) const;

  Elem add(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul_int(Elem a, std::uint64_t t) const; // t-fold sum of a

  std::uint64_t element_order(Elem a) const;

  /// True when every modulus equals the same prime p.
  bool is_elementary_abelian() const;
  /// Prime-power multiset of the cyclic factors, sorted. Two groups in this
  /// family are isomorphic iff these multisets agree.
  std::vector<std::uint64_t> elementary_divisors() const;

  bool same_group(const AbelianGroup &o) const { return moduli_ == o.moduli_; }

  static constexpr std::uint64_t kDefaultOrderCap = 1000000;

private:
  std::vector<int> moduli_;
  std::vector<std::uint64_t> strides_; // strides_[i] = prod of moduli after i
  std::uint64_t order_;
  // Flat coords table, built once on construction for groups small enough to
  // matter; rank-major layout. Keeps hot add/neg paths division free.
  std::vector<std::int32_t> coord_table_;

  const std::int32_t *cached(Elem e) const {
    return coord_table_.data() + static_cast<std::size_t>(e) * moduli_.size();
  }
};

AbelianGroup make_group(std::vector<int> moduli, std::uint64_t order_cap = AbelianGroup::kDefaultOrderCap);
AbelianGroup direct_product(const AbelianGroup &g, const AbelianGroup &h);

/// Subset of a group, canonically sorted, with recomputable metadata flags.
class ConnectionSet {
public:
  ConnectionSet(AbelianGroup group, std::vector<Elem> elems);

  const AbelianGroup &group() const { return group_; }
  const std::vector<Elem> &elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool contains(Elem e) const;
  bool contains_identity() const { return contains_identity_; }
  bool is_symmetric() const { return is_symmetric_; }

  /// Membership bitset over element ranks.
  Bitset to_bitset() const;

  bool operator==(const ConnectionSet &o) const {
    return group_.same_group(o.group_) && elems_ == o.elems_;
  }

private:
  AbelianGroup group_;
  std::vector<Elem> elems_; // sorted ascending, duplicate free
  bool contains_identity_;
  bool is_symmetric_;
};

ConnectionSet subset_inverse(const ConnectionSet &s);
ConnectionSet symmetric_closure(const ConnectionSet &s);
ConnectionSet ensure_identity(const ConnectionSet &s);
bool is_subgroup(const ConnectionSet &s);

/// Group automorphism stored as an explicit bijection table, with a matrix
/// witness when the group is elementary abelian.
class GroupAutomorphism {
public:
  GroupAutomorphism(AbelianGroup group, std::vector<Elem> table,
                    std::optional<std::vector<std::vector<int>>> matrix = std::nullopt);

  /// Build from images of the standard generators e_i; throws when the images
  /// do not define an automorphism.
  static GroupAutomorphism from_generator_images(const AbelianGroup &g,
                                                 const std::vector<Elem> &images);
  static GroupAutomorphism identity(const AbelianGroup &g);
  /// x -> -x; an automorphism of every abelian group.
  static GroupAutomorphism negation(const AbelianGroup &g);
  /// table(g) = matrix * g mod p (all moduli equal p).
  static GroupAutomorphism from_matrix(const AbelianGroup &g,
                                       const std::vector<std::vector<int>> &m);

  const AbelianGroup &group() const { return group_; }
  Elem apply(Elem e) const { return table_[e]; }
  const std::vector<Elem> &table() const { return table_; }
  const std::optional<std::vector<std::vector<int>>> &matrix() const { return matrix_; }

  bool is_homomorphism(std::uint64_t exhaustive_cap = 10000, unsigned samples = 1000) const;

  bool operator==(const GroupAutomorphism &o) const { return table_ == o.table_; }

private:
  AbelianGroup group_;
  std::vector<Elem> table_;
  std::optional<std::vector<std::vector<int>>> matrix_;
};

ConnectionSet apply_automorphism(const GroupAutomorphism &alpha, const ConnectionSet &s);

struct AutomorphismEnumCaps {
  std::uint64_t gl_order_cap = 100000000; // |GL(r,p)| bound for the matrix route
  std::uint64_t brute_group_cap = 64;     // |G| bound for generator-image brute force
};

/// Visits every automorphism of g exactly once, deterministically.
/// Throws InfeasibleError when the feasibility guard fails.
void for_each_automorphism(const AbelianGroup &g,
                           const std::function<void(const GroupAutomorphism &)> &fn,
                           const AutomorphismEnumCaps &caps = {});

std::vector<GroupAutomorphism> enumerate_automorphisms(const AbelianGroup &g,
                                                       const AutomorphismEnumCaps &caps = {});

/// |GL(r,p)| = prod_{i<r} (p^r - p^i). Saturates the cap sentinel on overflow.
std::uint64_t gl_order(unsigned r, std::uint64_t p);

} // namespace cayleyci

#endif
