#include "cayleyci/group.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "cayleyci/errors.hpp"

namespace cayleyci {

namespace {

constexpr std::uint64_t kCoordTableCells = std::uint64_t{1} << 26;

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

} // namespace

AbelianGroup::AbelianGroup(std::vector<int> moduli, std::uint64_t order_cap)
    : moduli_(std::move(moduli)) {
  order_ = 1;
  for (int m : moduli_) {
    if (m < 2) throw std::invalid_argument("group modulus must be >= 2");
    if (order_ > order_cap / static_cast<std::uint64_t>(m))
      throw InfeasibleError("group order exceeds cap " + std::to_string(order_cap));
    order_ *= static_cast<std::uint64_t>(m);
  }
  strides_.resize(moduli_.size());
  std::uint64_t s = 1;
  for (std::size_t i = moduli_.size(); i-- > 0;) {
    strides_[i] = s;
    s *= static_cast<std::uint64_t>(moduli_[i]);
  }
  if (!moduli_.empty() && order_ * moduli_.size() <= kCoordTableCells) {
    coord_table_.resize(order_ * moduli_.size());
    std::vector<int> cur(moduli_.size(), 0);
    for (Elem e = 0; e < order_; ++e) {
      std::copy(cur.begin(), cur.end(),
                coord_table_.begin() + static_cast<std::size_t>(e) * moduli_.size());
      for (std::size_t i = moduli_.size(); i-- > 0;) {
        if (++cur[i] < moduli_[i]) break;
        cur[i] = 0;
      }
    }
  }
}

Coords AbelianGroup::coords(Elem e) const {
  Coords c(moduli_.size());
  if (!coord_table_.empty()) {
    const std::int32_t *p = cached(e);
    std::copy(p, p + moduli_.size(), c.begin());
    return c;
  }
  std::uint64_t v = e;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    c[i] = static_cast<int>(v / strides_[i]);
    v %= strides_[i];
  }
  return c;
}

Elem AbelianGroup::index_of(std::span<const int> coords) const {
  if (coords.size() != moduli_.size())
    throw std::invalid_argument("coordinate arity mismatch");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    int c = coords[i] % moduli_[i];
    if (c < 0) c += moduli_[i];
    v += static_cast<std::uint64_t>(c) * strides_[i];
  }
  return static_cast<Elem>(v);
}

Elem AbelianGroup::add(Elem a, Elem b) const {
  if (!coord_table_.empty()) {
    const std::int32_t *ca = cached(a);
    const std::int32_t *cb = cached(b);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      int c = ca[i] + cb[i];
      if (c >= moduli_[i]) c -= moduli_[i];
      v += static_cast<std::uint64_t>(c) * strides_[i];
    }
    return static_cast<Elem>(v);
  }
  std::uint64_t va = a, vb = b, v = 0;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    int c = static_cast<int>(va / strides_[i]) + static_cast<int>(vb / strides_[i]);
    va %= strides_[i];
    vb %= strides_[i];
    if (c >= moduli_[i]) c -= moduli_[i];
    v += static_cast<std::uint64_t>(c) * strides_[i];
  }
  return static_cast<Elem>(v);
}

Elem AbelianGroup::neg(Elem a) const {
  if (!coord_table_.empty()) {
    const std::int32_t *ca = cached(a);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      int c = ca[i] ? moduli_[i] - ca[i] : 0;
      v += static_cast<std::uint64_t>(c) * strides_[i];
    }
    return static_cast<Elem>(v);
  }
  std::uint64_t va = a, v = 0;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    int c = static_cast<int>(va / strides_[i]);
    va %= strides_[i];
    if (c) c = moduli_[i] - c;
    v += static_cast<std::uint64_t>(c) * strides_[i];
  }
  return static_cast<Elem>(v);
}

Elem AbelianGroup::mul_int(Elem a, std::uint64_t t) const {
  Coords ca = coords(a);
  Coords c(moduli_.size());
  for (std::size_t i = 0; i < moduli_.size(); ++i)
    c[i] = static_cast<int>((static_cast<std::uint64_t>(ca[i]) * t) %
                            static_cast<std::uint64_t>(moduli_[i]));
  return index_of(c);
}

std::uint64_t AbelianGroup::element_order(Elem a) const {
  Coords c = coords(a);
  std::uint64_t ord = 1;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    std::uint64_t m = static_cast<std::uint64_t>(moduli_[i]);
    std::uint64_t g = std::gcd(static_cast<std::uint64_t>(c[i]), m);
    std::uint64_t oi = m / g; // order of c[i] in Z_m
    ord = std::lcm(ord, oi);
  }
  return ord;
}

bool AbelianGroup::is_elementary_abelian() const {
  if (moduli_.empty()) return false;
  int p = moduli_[0];
  if (!is_prime(static_cast<std::uint64_t>(p))) return false;
  return std::all_of(moduli_.begin(), moduli_.end(), [&](int m) { return m == p; });
}

std::vector<std::uint64_t> AbelianGroup::elementary_divisors() const {
  std::vector<std::uint64_t> out;
  for (int m : moduli_) {
    std::uint64_t v = static_cast<std::uint64_t>(m);
    for (std::uint64_t p = 2; p * p <= v; ++p) {
      if (v % p) continue;
      std::uint64_t q = 1;
      while (v % p == 0) {
        q *= p;
        v /= p;
      }
      out.push_back(q);
    }
    if (v > 1) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

AbelianGroup make_group(std::vector<int> moduli, std::uint64_t order_cap) {
  return AbelianGroup(std::move(moduli), order_cap);
}

AbelianGroup direct_product(const AbelianGroup &g, const AbelianGroup &h) {
  std::vector<int> m = g.moduli();
  m.insert(m.end(), h.moduli().begin(), h.moduli().end());
  return AbelianGroup(std::move(m));
}

ConnectionSet::ConnectionSet(AbelianGroup group, std::vector<Elem> elems)
    : group_(std::move(group)), elems_(std::move(elems)) {
  std::sort(elems_.begin(), elems_.end());
  elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
  for (Elem e : elems_)
    if (e >= group_.order())
      throw std::invalid_argument("connection set element outside group");
  contains_identity_ = !elems_.empty() && elems_.front() == group_.identity();
  is_symmetric_ = true;
  for (Elem e : elems_)
    if (!std::binary_search(elems_.begin(), elems_.end(), group_.neg(e))) {
      is_symmetric_ = false;
      break;
    }
}

bool ConnectionSet::contains(Elem e) const {
  return std::binary_search(elems_.begin(), elems_.end(), e);
}

Bitset ConnectionSet::to_bitset() const {
  Bitset b(group_.order());
  for (Elem e : elems_) b.set(e);
  return b;
}

ConnectionSet subset_inverse(const ConnectionSet &s) {
  std::vector<Elem> out;
  out.reserve(s.size());
  for (Elem e : s.elements()) out.push_back(s.group().neg(e));
  return ConnectionSet(s.group(), std::move(out));
}

ConnectionSet symmetric_closure(const ConnectionSet &s) {
  std::vector<Elem> out = s.elements();
  for (Elem e : s.elements()) out.push_back(s.group().neg(e));
  return ConnectionSet(s.group(), std::move(out));
}

ConnectionSet ensure_identity(const ConnectionSet &s) {
  if (s.contains_identity()) return s;
  std::vector<Elem> out = s.elements();
  out.push_back(s.group().identity());
  return ConnectionSet(s.group(), std::move(out));
}

bool is_subgroup(const ConnectionSet &s) {
  if (s.size() == 0) return false;
  if (!s.contains(s.group().identity())) return false;
  for (Elem a : s.elements()) {
    if (!s.contains(s.group().neg(a))) return false;
    for (Elem b : s.elements())
      if (!s.contains(s.group().add(a, b))) return false;
  }
  return true;
}

GroupAutomorphism::GroupAutomorphism(AbelianGroup group, std::vector<Elem> table,
                                     std::optional<std::vector<std::vector<int>>> matrix)
    : group_(std::move(group)), table_(std::move(table)), matrix_(std::move(matrix)) {
  if (table_.size() != group_.order())
    throw std::invalid_argument("automorphism table size mismatch");
  std::vector<Elem> sorted = table_;
  std::sort(sorted.begin(), sorted.end());
  for (Elem i = 0; i < sorted.size(); ++i)
    if (sorted[i] != i) throw std::invalid_argument("automorphism table is not a bijection");
}

GroupAutomorphism GroupAutomorphism::from_generator_images(const AbelianGroup &g,
                                                           const std::vector<Elem> &images) {
  if (images.size() != g.rank())
    throw std::invalid_argument("need one image per cyclic factor");
  std::vector<Elem> table(g.order());
  for (Elem e = 0; e < g.order(); ++e) {
    Coords c = g.coords(e);
    Elem img = g.identity();
    for (std::size_t i = 0; i < images.size(); ++i)
      img = g.add(img, g.mul_int(images[i], static_cast<std::uint64_t>(c[i])));
    table[e] = img;
  }
  return GroupAutomorphism(g, std::move(table));
}

GroupAutomorphism GroupAutomorphism::identity(const AbelianGroup &g) {
  std::vector<Elem> table(g.order());
  for (Elem e = 0; e < g.order(); ++e) table[e] = e;
  return GroupAutomorphism(g, std::move(table));
}

GroupAutomorphism GroupAutomorphism::negation(const AbelianGroup &g) {
  std::vector<Elem> table(g.order());
  for (Elem e = 0; e < g.order(); ++e) table[e] = g.neg(e);
  return GroupAutomorphism(g, std::move(table));
}

GroupAutomorphism GroupAutomorphism::from_matrix(const AbelianGroup &g,
                                                 const std::vector<std::vector<int>> &m) {
  std::size_t r = g.rank();
  if (m.size() != r) throw std::invalid_argument("matrix dimension mismatch");
  std::vector<Elem> table(g.order());
  Coords out(r);
  for (Elem e = 0; e < g.order(); ++e) {
    Coords c = g.coords(e);
    for (std::size_t i = 0; i < r; ++i) {
      long long acc = 0;
      for (std::size_t j = 0; j < r; ++j) acc += static_cast<long long>(m[i][j]) * c[j];
      out[i] = static_cast<int>(((acc % g.moduli()[i]) + g.moduli()[i]) % g.moduli()[i]);
    }
    table[e] = g.index_of(out);
  }
  return GroupAutomorphism(g, std::move(table), m);
}

bool GroupAutomorphism::is_homomorphism(std::uint64_t exhaustive_cap, unsigned samples) const {
  std::uint64_t n = group_.order();
  if (n <= exhaustive_cap) {
    // small groups: check every pair via one pass per left factor
    for (Elem a = 0; a < n; ++a)
      for (Elem b = a; b < n; ++b)
        if (table_[group_.add(a, b)] != group_.add(table_[a], table_[b])) return false;
    return true;
  }
  std::uint64_t state = 0x2545f4914f6cdd1dULL;
  auto next = [&]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  };
  for (unsigned i = 0; i < samples; ++i) {
    Elem a = static_cast<Elem>(next() % n);
    Elem b = static_cast<Elem>(next() % n);
    if (table_[group_.add(a, b)] != group_.add(table_[a], table_[b])) return false;
  }
  return true;
}

ConnectionSet apply_automorphism(const GroupAutomorphism &alpha, const ConnectionSet &s) {
  if (!alpha.group().same_group(s.group()))
    throw std::invalid_argument("automorphism and set belong to different groups");
  std::vector<Elem> out;
  out.reserve(s.size());
  for (Elem e : s.elements()) out.push_back(alpha.apply(e));
  return ConnectionSet(s.group(), std::move(out));
}

std::uint64_t gl_order(unsigned r, std::uint64_t p) {
  // prod_{i<r} (p^r - p^i), saturating
  long double approx = 1.0L;
  std::uint64_t pr = 1;
  for (unsigned i = 0; i < r; ++i) {
    if (pr > (~std::uint64_t{0}) / p) return ~std::uint64_t{0};
    pr *= p;
  }
  std::uint64_t result = 1;
  std::uint64_t pi = 1;
  for (unsigned i = 0; i < r; ++i) {
    std::uint64_t factor = pr - pi;
    approx *= static_cast<long double>(factor);
    if (approx > 1.8e19L) return ~std::uint64_t{0};
    result *= factor;
    pi *= p;
  }
  return result;
}

namespace {

// Enumerate GL(r,p) row by row; rows must stay outside the span of the rows
// chosen so far. Span is tracked as a bitset over element ranks.
void enum_gl_recurse(const AbelianGroup &g, unsigned row,
                     std::vector<std::vector<int>> &m, Bitset &span,
                     const std::function<void(const GroupAutomorphism &)> &fn) {
  std::size_t r = g.rank();
  if (row == r) {
    fn(GroupAutomorphism::from_matrix(g, m));
    return;
  }
  // candidate row vectors are just the elements of (Z_p)^r outside the span
  for (Elem cand = 1; cand < g.order(); ++cand) {
    if (span.test(cand)) continue;
    Coords c = g.coords(cand);
    m[row] = c;
    std::vector<Elem> added = span.to_indices();
    Bitset next_span = span;
    // close the span under the new row: multiples of cand added to old span
    int p = g.moduli()[0];
    for (int t = 1; t < p; ++t) {
      Elem tm = g.mul_int(cand, static_cast<std::uint64_t>(t));
      next_span.set(tm);
      for (Elem old : added) next_span.set(g.add(old, tm));
    }
    enum_gl_recurse(g, row + 1, m, next_span, fn);
  }
  m[row].assign(r, 0);
}

// Brute force over generator images for small mixed-moduli groups.
void enum_brute_recurse(const AbelianGroup &g, std::size_t idx, std::vector<Elem> &images,
                        std::vector<Elem> &span, // sorted subgroup generated so far
                        const std::function<void(const GroupAutomorphism &)> &fn) {
  if (idx == g.rank()) {
    fn(GroupAutomorphism::from_generator_images(g, images));
    return;
  }
  std::uint64_t want = static_cast<std::uint64_t>(g.moduli()[idx]);
  std::uint64_t target = span.size() * want;
  for (Elem cand = 0; cand < g.order(); ++cand) {
    if (g.element_order(cand) != want) continue;
    // injectivity on the partial product: span must grow by a factor of n_idx
    std::vector<Elem> next = span;
    for (std::uint64_t t = 1; t < want; ++t) {
      Elem tc = g.mul_int(cand, t);
      for (Elem old : span) next.push_back(g.add(old, tc));
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    if (next.size() != target) continue;
    images[idx] = cand;
    enum_brute_recurse(g, idx + 1, images, next, fn);
  }
}

} // namespace

void for_each_automorphism(const AbelianGroup &g,
                           const std::function<void(const GroupAutomorphism &)> &fn,
                           const AutomorphismEnumCaps &caps) {
  if (g.rank() == 0) {
    fn(GroupAutomorphism::identity(g));
    return;
  }
  if (g.is_elementary_abelian()) {
    std::uint64_t total = gl_order(static_cast<unsigned>(g.rank()),
                                   static_cast<std::uint64_t>(g.moduli()[0]));
    if (total > caps.gl_order_cap)
      throw InfeasibleError("|GL(" + std::to_string(g.rank()) + "," +
                            std::to_string(g.moduli()[0]) + ")| = " + std::to_string(total) +
                            " exceeds cap " + std::to_string(caps.gl_order_cap));
    std::vector<std::vector<int>> m(g.rank(), std::vector<int>(g.rank(), 0));
    Bitset span(g.order());
    span.set(g.identity());
    enum_gl_recurse(g, 0, m, span, fn);
    return;
  }
  if (g.order() > caps.brute_group_cap)
    throw InfeasibleError("automorphism enumeration infeasible: |G| = " +
                          std::to_string(g.order()) + " > " +
                          std::to_string(caps.brute_group_cap) + " and moduli are mixed");
  std::vector<Elem> images(g.rank(), 0);
  std::vector<Elem> span{g.identity()};
  enum_brute_recurse(g, 0, images, span, fn);
}

std::vector<GroupAutomorphism> enumerate_automorphisms(const AbelianGroup &g,
                                                       const AutomorphismEnumCaps &caps) {
  std::vector<GroupAutomorphism> out;
  for_each_automorphism(g, [&](const GroupAutomorphism &a) { out.push_back(a); }, caps);
  return out;
}

} // namespace cayleyci
