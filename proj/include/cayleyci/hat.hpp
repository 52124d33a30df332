#ifndef CAYLEYCI_HAT_HPP
#define CAYLEYCI_HAT_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cayleyci/canon.hpp"
#include "cayleyci/digraph.hpp"
#include "cayleyci/group.hpp"
#include "cayleyci/perm.hpp"

namespace cayleyci {

/// The case split for the clique sizes: pairs of A-cosets for n > 3, the full
/// AB-coset for n = 3.
int k_of(int n);

/// The central construction: from X = Cay(G;S) with S != S^{-1} to the
/// undirected graph X^ = Cay(G x A x B, S^{±1}) with
/// S^ = G ∪ Sb ∪ A ∪ Ab,  A = B = Z_n,  b = (0,...,0 | 0 | 1).
struct HatConstruction {
  AbelianGroup base_group;    // G
  ConnectionSet base_set;     // S with the identity ensured
  int n = 0;
  int k = 0;
  AbelianGroup hat_group;     // G x Z_n x Z_n
  ConnectionSet hat_set;      // S^
  ConnectionSet hat_set_sym;  // S^{±1}
  CayleyDigraph hat_graph;    // Cay(hat_group; S^{±1}), undirected
  Elem b_elem = 0;

  // coordinate split of a hat vertex: v = (g, a, b)
  Elem g_of(Elem v) const { return v / static_cast<Elem>(n * n); }
  int a_of(Elem v) const { return static_cast<int>((v / static_cast<Elem>(n)) % n); }
  int bv_of(Elem v) const { return static_cast<int>(v % static_cast<Elem>(n)); }
  Elem compose(Elem g, int a, int bv) const {
    return g * static_cast<Elem>(n * n) + static_cast<Elem>(a * n + bv);
  }
};

HatConstruction build_hat(const AbelianGroup &g, const ConnectionSet &s, int n,
                          std::uint64_t dense_cap = CayleyDigraph::kDefaultDenseCap);

/// (G \ S) ∪ {1_G}
ConnectionSet complement_trick(const AbelianGroup &g, const ConnectionSet &s);

struct HypothesisVerdict {
  std::string id;
  enum class State { kPass, kFail, kInfeasible } state = State::kFail;
  std::string detail;
};

struct HypothesisReport {
  std::vector<int> moduli;
  std::size_t set_size = 0; // after the identity is ensured
  int n = 0;
  int k = 0;
  std::vector<HypothesisVerdict> items;

  bool all_pass() const;
  const HypothesisVerdict &item(const std::string &id) const;
};

struct HypothesisCaps {
  unsigned iso_vertex_cap = 2000; // fallback X vs X^- isomorphism test
  AutomorphismEnumCaps auto_caps;
  CanonCaps canon;
};

/// Evaluates the hypothesis list on (G, S ∪ {1}, n): n >= 3; nk != |G|;
/// n > 3 or |S ∪ {1}| <= |G|/3; X not iso X^- or some α maps S to S^{-1};
/// S != S^{-1}; plus the working bound k|S| <= |G|+1 after optional
/// complementation. The α disjunct tries inversion first (always a witness
/// for abelian G) before any isomorphism test.
HypothesisReport check_hypotheses(const AbelianGroup &g, const ConnectionSet &s, int n,
                                  const HypothesisCaps &caps = {});

/// The eleven explicit subsets over (Z_3)^8 together with their union.
/// Basis: w_i = e_i (i = 1..3), v_j = e_{3+j} (j = 1..5).
struct SpigaSets {
  std::vector<std::pair<std::array<int, 3>, std::vector<Elem>>> subsets;
  std::vector<Elem> all;
};

SpigaSets spiga_sets();
ConnectionSet spiga_connection_set();

/// Zero-pads one coordinate: (Z_p)^r -> (Z_p)^{r+1}, set size preserved.
ConnectionSet embed_group(const ConnectionSet &s);

enum class WitnessMode { kRPlus2, kRPlus3 };

struct WitnessResult {
  bool ok = false;
  std::string rejection;            // set when no construction was attempted
  bool embedded = false;            // r+3 embedding fired
  bool complemented = false;        // complement trick fired
  HypothesisReport report;
  std::optional<HatConstruction> hat;
};

/// The r+2 / r+3 pipelines: validates Thm-side conditions, embeds for r+3,
/// applies the complement trick when |S ∪ {1}| > (|G|+1)/2, then checks the
/// hypotheses and builds the hat with n = p.
WitnessResult build_non_ci_witness(int p, int r, const ConnectionSet &s, WitnessMode mode,
                                   std::uint64_t dense_cap = CayleyDigraph::kDefaultDenseCap,
                                   const HypothesisCaps &caps = {});

/// The map (g, u, v) -> (pi(g), u + a, v + b). pi must be an automorphism of
/// Cay(G; S) (checked); the result is an automorphism of the hat graph.
Perm lift_automorphism(const Perm &pi, int a, int b, const HatConstruction &hat);

} // namespace cayleyci

#endif
