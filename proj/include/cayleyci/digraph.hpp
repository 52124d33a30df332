#ifndef CAYLEYCI_DIGRAPH_HPP
#define CAYLEYCI_DIGRAPH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cayleyci/bitset.hpp"
#include "cayleyci/group.hpp"

namespace cayleyci {

/// Plain digraph on {0..n-1} with bitset adjacency rows. Undirected graphs
/// are symmetric digraphs carrying a flag; loops live on the diagonal.
class Digraph {
public:
  Digraph() = default;
  explicit Digraph(unsigned n, bool undirected = false);

  unsigned vertex_count() const { return n_; }
  bool undirected() const { return undirected_; }

  void add_edge(unsigned u, unsigned v); // adds both arcs when undirected
  void add_arc(unsigned u, unsigned v);
  bool has_arc(unsigned u, unsigned v) const { return out_[u].test(v); }

  const Bitset &out_row(unsigned v) const { return out_[v]; }
  const Bitset &in_row(unsigned v) const { return in_[v]; }
  std::size_t out_degree(unsigned v) const { return out_[v].count(); }
  std::size_t in_degree(unsigned v) const { return in_[v].count(); }
  bool has_loop(unsigned v) const { return out_[v].test(v); }
  std::size_t loop_count() const;
  std::size_t arc_count() const;

  bool is_symmetric_relation() const;
  /// Marks the graph undirected; requires a symmetric adjacency relation.
  void assert_undirected();

  /// Image of the graph under the vertex bijection perm (perm[v] = new name).
  Digraph relabeled(const std::vector<std::uint32_t> &perm) const;

  bool operator==(const Digraph &o) const {
    return n_ == o.n_ && out_ == o.out_;
  }

private:
  unsigned n_ = 0;
  bool undirected_ = false;
  std::vector<Bitset> out_;
  std::vector<Bitset> in_;
};

/// Cayley digraph of a finite abelian group. Adjacency is derived from the
/// connection set: arc u -> v iff v - u in S. Dense bitset rows are
/// materialized only up to dense_cap vertices; above that, arc queries go
/// through the membership bitset (honest scaling for the 59049-vertex case).
class CayleyDigraph {
public:
  static constexpr std::uint64_t kDefaultDenseCap = 5000;

  CayleyDigraph(AbelianGroup group, ConnectionSet set,
                std::uint64_t dense_cap = kDefaultDenseCap);

  const AbelianGroup &group() const { return group_; }
  const ConnectionSet &connection_set() const { return set_; }
  unsigned vertex_count() const { return static_cast<unsigned>(group_.order()); }
  bool is_undirectable() const { return set_.is_symmetric(); }
  bool undirected() const { return undirected_; }

  bool has_arc(Elem u, Elem v) const {
    return member_.test(group_.sub(v, u));
  }
  std::vector<Elem> out_neighbours(Elem v) const;
  std::vector<Elem> in_neighbours(Elem v) const;

  bool has_dense() const { return dense_.has_value(); }
  /// Dense adjacency view; throws InfeasibleError when not materialized.
  const Digraph &dense() const;

  void mark_undirected(); // requires symmetric connection set

private:
  AbelianGroup group_;
  ConnectionSet set_;
  Bitset member_;
  std::optional<Digraph> dense_;
  bool undirected_ = false;
};

CayleyDigraph build_digraph(const AbelianGroup &g, const ConnectionSet &s,
                            std::uint64_t dense_cap = CayleyDigraph::kDefaultDenseCap);
CayleyDigraph reverse(const CayleyDigraph &x);
CayleyDigraph to_undirected(const CayleyDigraph &x);

/// Undirected graph on V x {0,1} with (x,0) ~ (y,1) iff x -> y.
/// Vertex (x,i) gets index x + i*n.
Digraph bipartite_double_cover(const Digraph &x);
Digraph bipartite_double_cover(const CayleyDigraph &x);

// --- interchange formats ---

/// graph6 string of an undirected loopless graph.
std::string to_graph6(const Digraph &g);
Digraph from_graph6(const std::string &s);

/// digraph6 string; loops allowed (diagonal bits).
std::string to_digraph6(const Digraph &g);
Digraph from_digraph6(const std::string &s);

/// One "u v" pair per line, newline terminated.
std::string to_edge_list(const Digraph &g);
/// Vertex count is max index + 1 unless n_hint is given.
Digraph from_edge_list(const std::string &text, std::optional<unsigned> n_hint = std::nullopt,
                       bool undirected = false);

} // namespace cayleyci

#endif
