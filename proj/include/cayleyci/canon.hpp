#ifndef CAYLEYCI_CANON_HPP
#define CAYLEYCI_CANON_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cayleyci/digraph.hpp"
#include "cayleyci/perm.hpp"

namespace cayleyci {

/// Vertex colouring with its cells in colour order. Refinement-stable
/// partitions are equitable for the paired (out, in) colour signatures.
struct ColouredPartition {
  std::vector<int> colour;                    // colour id per vertex
  std::vector<std::vector<unsigned>> cells;   // cells[c] sorted ascending

  bool discrete() const { return cells.size() == colour.size(); }
};

ColouredPartition unit_partition(unsigned n);
ColouredPartition partition_from_colours(std::vector<int> colour);

/// Coarsest equitable refinement of the initial partition. Idempotent and
/// independent of vertex numbering (signatures are colour-valued only).
ColouredPartition colour_refinement(const Digraph &g, const ColouredPartition &initial);

/// Splits v off its cell; v keeps the cell's colour slot, the rest shifts up.
ColouredPartition individualize(const ColouredPartition &p, unsigned v);

struct CanonicalForm {
  Perm labeling;      // vertex -> canonical position
  std::string bytes;  // digraph6 encoding of the relabeled digraph
};

struct CanonCaps {
  unsigned vertex_cap = 2000;
  std::uint64_t node_budget = 5000000;
};

CanonicalForm canonical_form(const Digraph &g, const CanonCaps &caps = {});

/// Vertex bijection X -> Y preserving arcs exactly, or nullopt.
/// The returned witness is re-verified arc by arc before being handed out.
std::optional<Perm> are_isomorphic(const Digraph &x, const Digraph &y,
                                   const CanonCaps &caps = {});

PermutationGroup automorphism_group(const Digraph &g, const CanonCaps &caps = {});
PermutationGroup point_stabilizer_automorphisms(const Digraph &g, unsigned v,
                                                const CanonCaps &caps = {});

} // namespace cayleyci

#endif
