#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "cayleyci/errors.hpp"
#include "cayleyci/group.hpp"

using namespace cayleyci;

namespace {

ConnectionSet set_of(const AbelianGroup &g, std::vector<Elem> elems) {
  return ConnectionSet(g, std::move(elems));
}

// independent oracle: count invertible r x r matrices over Z_p by brute force
unsigned count_invertible_matrices(int r, int p) {
  unsigned total = 1;
  for (int i = 0; i < r * r; ++i) total *= static_cast<unsigned>(p);
  unsigned count = 0;
  for (unsigned code = 0; code < total; ++code) {
    std::vector<std::vector<int>> m(r, std::vector<int>(r));
    unsigned c = code;
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        m[i][j] = static_cast<int>(c % p);
        c /= p;
      }
    // Gaussian elimination over Z_p
    int rank = 0;
    for (int col = 0; col < r && rank < r; ++col) {
      int pivot = -1;
      for (int row = rank; row < r; ++row)
        if (m[row][col] % p != 0) {
          pivot = row;
          break;
        }
      if (pivot < 0) continue;
      std::swap(m[pivot], m[rank]);
      // scale pivot row to 1
      int inv = 0;
      for (int t = 1; t < p; ++t)
        if ((m[rank][col] * t) % p == 1) inv = t;
      for (int j = 0; j < r; ++j) m[rank][j] = (m[rank][j] * inv) % p;
      for (int row = 0; row < r; ++row) {
        if (row == rank || m[row][col] == 0) continue;
        int f = m[row][col];
        for (int j = 0; j < r; ++j)
          m[row][j] = ((m[row][j] - f * m[rank][j]) % p + p * p) % p;
      }
      ++rank;
    }
    if (rank == r) ++count;
  }
  return count;
}

} // namespace

TEST_CASE("make_group orders") {
  CHECK(make_group(std::vector<int>(8, 3)).order() == 6561);
  CHECK(make_group({5, 4, 4}).order() == 80);
  CHECK(make_group(std::vector<int>(10, 3)).order() == 59049);
  CHECK(make_group({}).order() == 1);
}

TEST_CASE("make_group errors") {
  CHECK_THROWS_AS(make_group({1}), std::invalid_argument);
  CHECK_THROWS_AS(make_group({0, 3}), std::invalid_argument);
  CHECK_THROWS_AS(make_group(std::vector<int>(64, 2)), InfeasibleError);
  CHECK_THROWS_AS(make_group({101, 101, 101}), InfeasibleError); // > 1e6 default cap
}

TEST_CASE("direct_product") {
  AbelianGroup a = make_group(std::vector<int>(8, 3));
  AbelianGroup b = make_group({3});
  AbelianGroup c = direct_product(direct_product(a, b), b);
  CHECK(c.moduli() == std::vector<int>(10, 3));
  CHECK(c.order() == 59049);

  AbelianGroup d = direct_product(make_group({5}), make_group({4}));
  CHECK(d.moduli() == std::vector<int>{5, 4});
  CHECK(d.order() == 20);

  AbelianGroup g = make_group({6, 2});
  CHECK(direct_product(g, make_group({})).moduli() == g.moduli());
}

TEST_CASE("coordinate arithmetic matches the modular oracle") {
  AbelianGroup g = make_group({5, 4, 3});
  std::mt19937 rng(42);
  std::uniform_int_distribution<Elem> dist(0, static_cast<Elem>(g.order() - 1));
  for (int trial = 0; trial < 1000; ++trial) {
    Elem a = dist(rng), b = dist(rng);
    Coords ca = g.coords(a), cb = g.coords(b);
    Coords expect(3);
    for (int i = 0; i < 3; ++i) expect[i] = (ca[i] + cb[i]) % g.moduli()[i];
    CHECK(g.coords(g.add(a, b)) == expect);
    CHECK(g.add(a, g.neg(a)) == g.identity());
  }
  // round trip
  for (Elem e = 0; e < g.order(); ++e) CHECK(g.index_of(g.coords(e)) == e);
}

TEST_CASE("element order") {
  AbelianGroup g = make_group({4, 6});
  CHECK(g.element_order(g.identity()) == 1);
  CHECK(g.element_order(g.index_of(std::vector<int>{1, 0})) == 4);
  CHECK(g.element_order(g.index_of(std::vector<int>{2, 3})) == 2);
  CHECK(g.element_order(g.index_of(std::vector<int>{1, 1})) == 12);
}

TEST_CASE("subset_inverse") {
  AbelianGroup z5 = make_group({5});
  CHECK(subset_inverse(set_of(z5, {1})).elements() == std::vector<Elem>{4});
  ConnectionSet sym = set_of(z5, {1, 4});
  CHECK(subset_inverse(sym) == sym);
}

TEST_CASE("symmetric_closure") {
  AbelianGroup z5 = make_group({5});
  CHECK(symmetric_closure(set_of(z5, {1})).elements() == std::vector<Elem>{1, 4});
  CHECK(symmetric_closure(set_of(z5, {0, 1})).elements() == std::vector<Elem>{0, 1, 4});
  ConnectionSet sym = set_of(z5, {2, 3});
  CHECK(symmetric_closure(sym) == sym);
  // idempotent superset
  ConnectionSet s = set_of(make_group({7}), {1, 2, 5});
  ConnectionSet c = symmetric_closure(s);
  CHECK(c.is_symmetric());
  CHECK(symmetric_closure(c) == c);
  for (Elem e : s.elements()) CHECK(c.contains(e));
}

TEST_CASE("is_subgroup") {
  AbelianGroup z4 = make_group({4});
  CHECK(is_subgroup(set_of(z4, {0, 2})));
  CHECK_FALSE(is_subgroup(set_of(z4, {0, 1})));
  CHECK_FALSE(is_subgroup(set_of(z4, {})));
  CHECK_FALSE(is_subgroup(set_of(z4, {2}))); // no identity
  CHECK(is_subgroup(set_of(z4, {0, 1, 2, 3})));
}

TEST_CASE("apply_automorphism") {
  AbelianGroup z5 = make_group({5});
  ConnectionSet s = set_of(z5, {1});
  CHECK(apply_automorphism(GroupAutomorphism::identity(z5), s) == s);
  CHECK(apply_automorphism(GroupAutomorphism::negation(z5), s).elements() ==
        std::vector<Elem>{4});

  AbelianGroup z3sq = make_group({3, 3});
  GroupAutomorphism swap = GroupAutomorphism::from_matrix(z3sq, {{0, 1}, {1, 0}});
  ConnectionSet e1 = set_of(z3sq, {z3sq.index_of(std::vector<int>{1, 0})});
  CHECK(apply_automorphism(swap, e1).elements() ==
        std::vector<Elem>{z3sq.index_of(std::vector<int>{0, 1})});

  CHECK_THROWS_AS(apply_automorphism(GroupAutomorphism::identity(z5), e1),
                  std::invalid_argument);
}

TEST_CASE("enumerate_automorphisms counts") {
  CHECK(enumerate_automorphisms(make_group({3})).size() == 2);
  CHECK(enumerate_automorphisms(make_group({2, 2})).size() == count_invertible_matrices(2, 2));
  CHECK(count_invertible_matrices(2, 2) == 6);
  CHECK(enumerate_automorphisms(make_group({3, 3})).size() == count_invertible_matrices(2, 3));
  CHECK(count_invertible_matrices(2, 3) == 48);
}

TEST_CASE("enumerate_automorphisms mixed moduli vs brute-force table oracle") {
  AbelianGroup g = make_group({2, 4});
  // oracle: try every pair of generator images and keep the bijective
  // homomorphic extensions
  unsigned oracle = 0;
  for (Elem i1 = 0; i1 < g.order(); ++i1)
    for (Elem i2 = 0; i2 < g.order(); ++i2) {
      std::vector<Elem> table(g.order());
      bool ok = true;
      for (Elem e = 0; e < g.order() && ok; ++e) {
        Coords c = g.coords(e);
        table[e] = g.add(g.mul_int(i1, c[0]), g.mul_int(i2, c[1]));
      }
      std::vector<Elem> sorted = table;
      std::sort(sorted.begin(), sorted.end());
      for (Elem e = 0; e < g.order(); ++e)
        if (sorted[e] != e) ok = false;
      for (Elem a = 0; a < g.order() && ok; ++a)
        for (Elem b = 0; b < g.order() && ok; ++b)
          if (table[g.add(a, b)] != g.add(table[a], table[b])) ok = false;
      if (ok) ++oracle;
    }
  auto autos = enumerate_automorphisms(g);
  CHECK(autos.size() == oracle);
  CHECK(oracle == 8); // |Aut(Z2 x Z4)|
}

TEST_CASE("automorphism stream is homomorphic and duplicate free") {
  for (const auto &moduli : {std::vector<int>{2, 2}, std::vector<int>{6}, std::vector<int>{3, 3}}) {
    AbelianGroup g = make_group(moduli);
    std::set<std::vector<Elem>> tables;
    for (const GroupAutomorphism &a : enumerate_automorphisms(g)) {
      CHECK(a.is_homomorphism());
      CHECK(tables.insert(a.table()).second);
      if (g.is_elementary_abelian()) CHECK(a.matrix().has_value());
    }
  }
}

TEST_CASE("enumeration cap reports infeasible") {
  AutomorphismEnumCaps caps;
  caps.gl_order_cap = 10;
  CHECK_THROWS_AS(enumerate_automorphisms(make_group({3, 3}), caps), InfeasibleError);
  caps = AutomorphismEnumCaps{};
  caps.brute_group_cap = 4;
  CHECK_THROWS_AS(enumerate_automorphisms(make_group({2, 4}), caps), InfeasibleError);
}

TEST_CASE("automorphisms preserve the subgroup property") {
  for (const auto &moduli :
       {std::vector<int>{4}, std::vector<int>{2, 2}, std::vector<int>{8}, std::vector<int>{2, 4}}) {
    AbelianGroup g = make_group(moduli);
    auto autos = enumerate_automorphisms(g);
    for (unsigned mask = 0; mask < (1u << g.order()); ++mask) {
      std::vector<Elem> elems;
      for (Elem e = 0; e < g.order(); ++e)
        if (mask & (1u << e)) elems.push_back(e);
      ConnectionSet s = set_of(g, std::move(elems));
      bool sub = is_subgroup(s);
      for (const GroupAutomorphism &a : autos)
        CHECK(is_subgroup(apply_automorphism(a, s)) == sub);
    }
  }
}

TEST_CASE("elementary divisors") {
  CHECK(make_group({6}).elementary_divisors() == std::vector<std::uint64_t>{2, 3});
  CHECK(make_group({2, 3}).elementary_divisors() == std::vector<std::uint64_t>{2, 3});
  CHECK(make_group({4, 2}).elementary_divisors() == std::vector<std::uint64_t>{2, 4});
  CHECK(make_group({12, 2}).elementary_divisors() == std::vector<std::uint64_t>{2, 3, 4});
}
