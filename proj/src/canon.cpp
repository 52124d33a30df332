#include "cayleyci/canon.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cayleyci/errors.hpp"

namespace cayleyci {

ColouredPartition unit_partition(unsigned n) {
  ColouredPartition p;
  p.colour.assign(n, 0);
  if (n) {
    p.cells.resize(1);
    p.cells[0].resize(n);
    std::iota(p.cells[0].begin(), p.cells[0].end(), 0u);
  }
  return p;
}

ColouredPartition partition_from_colours(std::vector<int> colour) {
  ColouredPartition p;
  p.colour = std::move(colour);
  int maxc = -1;
  for (int c : p.colour) maxc = std::max(maxc, c);
  p.cells.assign(static_cast<std::size_t>(maxc + 1), {});
  for (unsigned v = 0; v < p.colour.size(); ++v)
    p.cells[static_cast<std::size_t>(p.colour[v])].push_back(v);
  for (const auto &cell : p.cells)
    if (cell.empty()) throw std::invalid_argument("colour ids must be contiguous");
  return p;
}

ColouredPartition individualize(const ColouredPartition &p, unsigned v) {
  int c = p.colour[v];
  if (p.cells[static_cast<std::size_t>(c)].size() == 1) return p;
  std::vector<int> colour(p.colour.size());
  for (unsigned u = 0; u < p.colour.size(); ++u) {
    if (p.colour[u] < c)
      colour[u] = p.colour[u];
    else if (p.colour[u] > c)
      colour[u] = p.colour[u] + 1;
    else
      colour[u] = (u == v) ? c : c + 1;
  }
  return partition_from_colours(std::move(colour));
}

ColouredPartition colour_refinement(const Digraph &g, const ColouredPartition &initial) {
  unsigned n = g.vertex_count();
  if (initial.colour.size() != n) throw std::invalid_argument("partition size mismatch");
  std::vector<int> colour = initial.colour;
  std::size_t ncells = initial.cells.size();
  while (n) {
    // signature: own colour, sorted out-neighbour colours, sorted in-neighbour
    // colours. Colour-valued only, so invariant under vertex renaming.
    std::vector<std::vector<int>> sig(n);
    for (unsigned v = 0; v < n; ++v) {
      std::vector<int> &s = sig[v];
      s.push_back(colour[v]);
      g.out_row(v).for_each([&](std::size_t w) { s.push_back(colour[w]); });
      std::sort(s.begin() + 1, s.end());
      std::size_t split = s.size();
      s.push_back(-1);
      g.in_row(v).for_each([&](std::size_t w) { s.push_back(colour[w]); });
      std::sort(s.begin() + static_cast<std::ptrdiff_t>(split) + 1, s.end());
    }
    std::vector<unsigned> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](unsigned a, unsigned b) { return sig[a] < sig[b]; });
    std::vector<int> next(n, 0);
    int c = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0 && sig[order[i]] != sig[order[i - 1]]) ++c;
      next[order[i]] = c;
    }
    std::size_t next_cells = static_cast<std::size_t>(c + 1);
    colour = std::move(next);
    if (next_cells == ncells) break;
    ncells = next_cells;
  }
  return partition_from_colours(std::move(colour));
}

namespace {

// cell-size trace plus quotient-matrix hash. Refinement makes the partition
// equitable, so one representative per cell sees the true cell-to-cell counts.
std::uint64_t node_invariant(const Digraph &g, const ColouredPartition &p) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](std::uint64_t v) { h = (h ^ v) * 1099511628211ULL; };
  mix(p.cells.size());
  std::vector<Bitset> cell_bits;
  cell_bits.reserve(p.cells.size());
  for (const auto &cell : p.cells) {
    mix(cell.size());
    Bitset b(g.vertex_count());
    for (unsigned v : cell) b.set(v);
    cell_bits.push_back(std::move(b));
  }
  for (const auto &cell : p.cells) {
    unsigned rep = cell[0];
    for (const auto &other : cell_bits) {
      mix(g.out_row(rep).intersect_count(other));
      mix(g.in_row(rep).intersect_count(other));
    }
  }
  // cell count in the top bits keeps discrete and internal nodes apart
  return (static_cast<std::uint64_t>(p.cells.size()) << 48) ^ (h >> 16);
}

Perm labeling_of(const ColouredPartition &p) {
  std::vector<std::uint32_t> img(p.colour.size());
  for (unsigned v = 0; v < p.colour.size(); ++v)
    img[v] = static_cast<std::uint32_t>(p.colour[v]);
  return Perm(std::move(img));
}

// Individualization-refinement search discovering the automorphism group and
// the canonical leaf in one pass. Candidate children at first-path nodes are
// pruned by the orbits of the already-known automorphisms (the chain is based
// along the first path, so level d orbits are exactly the stabilizer orbits
// of the node's prefix), and a non-first subtree is abandoned as soon as it
// has contributed an automorphism.
class CanonSearch {
public:
  CanonSearch(const Digraph &g, const CanonCaps &caps) : g_(g), caps_(caps) {}

  void run() {
    prefix_.clear();
    cur_inv_.clear();
    ColouredPartition root = unit_partition(g_.vertex_count());
    if (g_.vertex_count() == 0) {
      best_bytes_ = to_digraph6(g_);
      best_labeling_ = Perm::identity(0);
      return;
    }
    descend(root, true, true, std::numeric_limits<std::uint64_t>::max());
  }

  const std::string &best_bytes() const { return best_bytes_; }
  const Perm &best_labeling() const { return best_labeling_; }
  const std::vector<Perm> &generators() const { return gens_; }

private:
  enum class Cmp { kLess, kEqual, kGreater };

  const Digraph &g_;
  CanonCaps caps_;
  std::uint64_t nodes_ = 0;

  std::vector<unsigned> prefix_;
  std::vector<std::uint64_t> cur_inv_;

  bool have_first_ = false;
  std::vector<std::uint64_t> first_inv_;
  std::string first_bytes_;
  Perm first_labeling_;
  std::vector<unsigned> first_path_;

  std::vector<std::uint64_t> best_inv_;
  std::string best_bytes_;
  Perm best_labeling_;

  std::vector<Perm> gens_;
  std::uint64_t gens_found_ = 0;
  std::optional<StabilizerChain> chain_;

  // Lexicographic position of the current invariant path against the best
  // leaf's, recomputed fresh so mid-loop best updates are never stale.
  // Equal prefixes of different length cannot both be leaf paths: the cell
  // count sits in the invariant's top bits, so a discrete node never
  // compares equal to an internal one.
  Cmp vs_best() const {
    std::size_t m = std::min(cur_inv_.size(), best_inv_.size());
    for (std::size_t i = 0; i < m; ++i) {
      if (cur_inv_[i] < best_inv_[i]) return Cmp::kLess;
      if (cur_inv_[i] > best_inv_[i]) return Cmp::kGreater;
    }
    if (cur_inv_.size() == best_inv_.size()) return Cmp::kEqual;
    return cur_inv_.size() < best_inv_.size() ? Cmp::kEqual : Cmp::kGreater;
  }

  void descend(const ColouredPartition &raw, bool on_first, bool matches_first,
               std::uint64_t cutoff) {
    if (gens_found_ > cutoff) return;
    if (++nodes_ > caps_.node_budget)
      throw InfeasibleError("canonical search exceeded node budget " +
                            std::to_string(caps_.node_budget));
    ColouredPartition part = colour_refinement(g_, raw);
    std::uint64_t inv = node_invariant(g_, part);
    std::size_t depth = prefix_.size();
    cur_inv_.push_back(inv);

    if (!have_first_) {
      first_inv_.push_back(inv);
    } else {
      matches_first = matches_first && depth < first_inv_.size() && first_inv_[depth] == inv;
      if (!matches_first && vs_best() == Cmp::kGreater) {
        cur_inv_.pop_back();
        return;
      }
    }

    if (part.discrete()) {
      leaf(part, matches_first);
      cur_inv_.pop_back();
      return;
    }

    std::size_t target = part.cells.size();
    std::size_t smallest = std::numeric_limits<std::size_t>::max();
    for (std::size_t c = 0; c < part.cells.size(); ++c)
      if (part.cells[c].size() > 1 && part.cells[c].size() < smallest) {
        smallest = part.cells[c].size();
        target = c;
      }
    const std::vector<unsigned> cell = part.cells[target];

    std::vector<unsigned> explored;
    for (unsigned v : cell) {
      if (gens_found_ > cutoff) break;
      if (on_first && chain_) {
        std::vector<std::uint32_t> orb = chain_->orbit_partition(depth);
        bool redundant = false;
        for (unsigned u : explored)
          if (orb[u] == orb[v]) {
            redundant = true;
            break;
          }
        if (redundant) continue;
      }
      explored.push_back(v);
      bool child_on_first =
          on_first && (!have_first_ || (depth < first_path_.size() && first_path_[depth] == v));
      std::uint64_t child_cutoff = cutoff;
      if (on_first && !child_on_first) child_cutoff = std::min(cutoff, gens_found_);
      prefix_.push_back(v);
      descend(individualize(part, v), child_on_first, matches_first, child_cutoff);
      prefix_.pop_back();
    }
    cur_inv_.pop_back();
  }

  void leaf(const ColouredPartition &part, bool matches_first) {
    Perm labeling = labeling_of(part);
    std::string bytes = to_digraph6(g_.relabeled(labeling.images()));
    if (!have_first_) {
      have_first_ = true;
      first_bytes_ = bytes;
      first_labeling_ = labeling;
      first_path_ = prefix_;
      best_inv_ = cur_inv_;
      best_bytes_ = bytes;
      best_labeling_ = labeling;
      chain_.emplace(g_.vertex_count(), first_path_);
      return;
    }
    // identical canonical bytes force first_labeling^{-1} * labeling to be
    // an automorphism; equal invariant paths are a necessary condition, so
    // matches_first is just a cheap gate
    if (matches_first && bytes == first_bytes_) {
      Perm gamma = first_labeling_.inverse() * labeling;
      if (!gamma.is_identity() && chain_->add_generator(gamma)) {
        gens_.push_back(gamma);
        ++gens_found_;
      }
    }
    Cmp cmp = vs_best();
    if (cmp == Cmp::kLess || (cmp == Cmp::kEqual && bytes < best_bytes_)) {
      best_inv_ = cur_inv_;
      best_bytes_ = bytes;
      best_labeling_ = labeling;
    }
  }
};

void check_cap(const Digraph &g, const CanonCaps &caps) {
  if (g.vertex_count() > caps.vertex_cap)
    throw InfeasibleError("graph has " + std::to_string(g.vertex_count()) +
                          " vertices, above the canonical-form cap " +
                          std::to_string(caps.vertex_cap));
}

} // namespace

CanonicalForm canonical_form(const Digraph &g, const CanonCaps &caps) {
  check_cap(g, caps);
  CanonSearch search(g, caps);
  search.run();
  return {search.best_labeling(), search.best_bytes()};
}

std::optional<Perm> are_isomorphic(const Digraph &x, const Digraph &y, const CanonCaps &caps) {
  if (x.vertex_count() != y.vertex_count()) return std::nullopt;
  unsigned n = x.vertex_count();
  if (x.arc_count() != y.arc_count() || x.loop_count() != y.loop_count()) return std::nullopt;
  std::vector<std::pair<std::size_t, std::size_t>> dx, dy;
  for (unsigned v = 0; v < n; ++v) {
    dx.emplace_back(x.out_degree(v), x.in_degree(v));
    dy.emplace_back(y.out_degree(v), y.in_degree(v));
  }
  std::sort(dx.begin(), dx.end());
  std::sort(dy.begin(), dy.end());
  if (dx != dy) return std::nullopt;

  CanonicalForm cx = canonical_form(x, caps);
  CanonicalForm cy = canonical_form(y, caps);
  if (cx.bytes != cy.bytes) return std::nullopt;
  Perm witness = cy.labeling.inverse() * cx.labeling;
  for (unsigned u = 0; u < n; ++u)
    for (unsigned v = 0; v < n; ++v)
      if (x.has_arc(u, v) != y.has_arc(witness[u], witness[v]))
        throw std::logic_error("canonical labeling produced an invalid witness");
  return witness;
}

PermutationGroup automorphism_group(const Digraph &g, const CanonCaps &caps) {
  check_cap(g, caps);
  CanonSearch search(g, caps);
  search.run();
  return PermutationGroup(g.vertex_count(), search.generators());
}

PermutationGroup point_stabilizer_automorphisms(const Digraph &g, unsigned v,
                                                const CanonCaps &caps) {
  if (v >= g.vertex_count()) throw std::invalid_argument("vertex out of range");
  return automorphism_group(g, caps).point_stabilizer(v);
}

} // namespace cayleyci
