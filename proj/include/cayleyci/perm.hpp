#ifndef CAYLEYCI_PERM_HPP
#define CAYLEYCI_PERM_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "cayleyci/bignum.hpp"
#include "cayleyci/group.hpp"

namespace cayleyci {

/// Permutation of {0..N-1} as an image sequence.
class Perm {
public:
  Perm() = default;
  explicit Perm(std::vector<std::uint32_t> images);
  static Perm identity(unsigned degree);

  unsigned degree() const { return static_cast<unsigned>(images_.size()); }
  std::uint32_t operator[](std::uint32_t x) const { return images_[x]; }
  const std::vector<std::uint32_t> &images() const { return images_; }

  bool is_identity() const;
  bool fixed_point_free() const;
  std::uint64_t order() const;

  Perm inverse() const;
  /// Function composition: (a * b)(x) = a(b(x)).
  friend Perm operator*(const Perm &a, const Perm &b);

  bool operator==(const Perm &o) const { return images_ == o.images_; }
  bool operator!=(const Perm &o) const { return images_ != o.images_; }
  bool operator<(const Perm &o) const { return images_ < o.images_; }

private:
  std::vector<std::uint32_t> images_;
};

/// Base and strong generating set with explicit transversals. Deterministic:
/// base points are chosen smallest-moved-point-first unless seeded.
class StabilizerChain {
public:
  explicit StabilizerChain(unsigned degree, std::vector<std::uint32_t> base_seed = {});

  /// Sifts g through the chain and extends the chain when g is new.
  /// Returns true when the group grew.
  bool add_generator(const Perm &g);

  bool contains(const Perm &g) const;
  /// Residue of g after sifting plus the level it got stuck at.
  std::pair<Perm, std::size_t> sift(const Perm &g) const;

  BigUnsigned order() const;
  unsigned degree() const { return degree_; }
  std::size_t base_length() const { return levels_.size(); }
  std::uint32_t base_point(std::size_t i) const { return levels_[i].base; }

  /// Strong generators fixing the first `level` base points pointwise.
  std::vector<Perm> level_generators(std::size_t level) const;

  /// Orbit partition of all points under the level-`level` generators;
  /// entry = smallest point of the orbit. Level past the base gives the
  /// discrete partition.
  std::vector<std::uint32_t> orbit_partition(std::size_t level) const;

  /// Visits every group element; throws InfeasibleError beyond cap.
  void for_each_element(const std::function<void(const Perm &)> &fn,
                        std::uint64_t cap) const;

private:
  struct Level {
    std::uint32_t base = 0;
    std::vector<Perm> gens; // strong generators entering at this level
    std::vector<std::int32_t> via_gen; // orbit tree: generator index, -1 unset
    std::vector<std::uint32_t> parent; // orbit tree: predecessor point
    std::vector<std::uint32_t> orbit;  // discovery order
  };

  unsigned degree_;
  std::vector<Level> levels_;

  std::pair<Perm, std::size_t> sift_from(const Perm &g, std::size_t from) const;
  void insert_residue(const Perm &residue, std::size_t at_level);
  void complete_level(std::size_t k);
  void extend_base(std::uint32_t point);
  void rebuild_orbit(std::size_t level);
  Perm transversal(std::size_t level, std::uint32_t point) const; // maps base -> point
  bool in_orbit(std::size_t level, std::uint32_t point) const {
    return levels_[level].via_gen[point] != -1 || point == levels_[level].base;
  }
};

/// Finitely generated permutation group; the chain is built on demand.
class PermutationGroup {
public:
  PermutationGroup(unsigned degree, std::vector<Perm> generators);

  unsigned degree() const { return degree_; }
  const std::vector<Perm> &generators() const { return gens_; }

  BigUnsigned order() const;
  bool contains(const Perm &g) const;
  bool is_transitive() const;
  bool is_regular_action() const;

  /// Pointwise stabilizer of v as its own group.
  PermutationGroup point_stabilizer(std::uint32_t v) const;

  void for_each_element(const std::function<void(const Perm &)> &fn,
                        std::uint64_t cap = 10000000) const;
  std::vector<Perm> elements(std::uint64_t cap = 10000000) const;

  /// Prime-power multiset identifying the abelian isomorphism type, computed
  /// from an element-order census. Throws when the group is not abelian.
  std::vector<std::uint64_t> abelian_invariants(std::uint64_t cap = 1000000) const;

  const StabilizerChain &chain() const;

private:
  unsigned degree_;
  std::vector<Perm> gens_;
  mutable std::shared_ptr<StabilizerChain> chain_;
};

PermutationGroup right_regular_representation(const AbelianGroup &h,
                                              std::uint64_t point_cap = 100000);

/// The permutation x -> x + h of the element ranks of H.
Perm translation_perm(const AbelianGroup &h, Elem t);

struct RegularSearchCaps {
  std::uint64_t ambient_order_cap = 10000000; // |A| bound for element enumeration
};

/// All subgroups of `ambient` isomorphic to H acting regularly, deduplicated
/// and sorted by element list. Backtracks over images of a generating tuple,
/// pruning on fixed-point-freeness and partial closure.
std::vector<PermutationGroup> enumerate_regular_subgroups(const PermutationGroup &ambient,
                                                          const AbelianGroup &h,
                                                          const RegularSearchCaps &caps = {});

/// Some a in `ambient` with a^{-1} P a = Q, or nullopt. Fast path for
/// regular P, Q via relabeling candidates; otherwise scans ambient elements.
std::optional<Perm> are_conjugate_subgroups(const PermutationGroup &p,
                                            const PermutationGroup &q,
                                            const PermutationGroup &ambient,
                                            std::uint64_t scan_cap = 1000000);

} // namespace cayleyci

#endif
