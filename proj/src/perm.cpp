#include "cayleyci/perm.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "cayleyci/errors.hpp"

namespace cayleyci {

Perm::Perm(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  std::vector<std::uint32_t> sorted = images_;
  std::sort(sorted.begin(), sorted.end());
  for (std::uint32_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != i) throw std::invalid_argument("image sequence is not a bijection");
}

Perm Perm::identity(unsigned degree) {
  std::vector<std::uint32_t> img(degree);
  std::iota(img.begin(), img.end(), 0u);
  return Perm(std::move(img));
}

bool Perm::is_identity() const {
  for (std::uint32_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i) return false;
  return true;
}

bool Perm::fixed_point_free() const {
  for (std::uint32_t i = 0; i < images_.size(); ++i)
    if (images_[i] == i) return false;
  return true;
}

std::uint64_t Perm::order() const {
  std::vector<bool> seen(images_.size(), false);
  std::uint64_t ord = 1;
  for (std::uint32_t i = 0; i < images_.size(); ++i) {
    if (seen[i]) continue;
    std::uint64_t len = 0;
    std::uint32_t j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = images_[j];
      ++len;
    }
    ord = std::lcm(ord, len);
  }
  return ord;
}

Perm Perm::inverse() const {
  std::vector<std::uint32_t> inv(images_.size());
  for (std::uint32_t i = 0; i < images_.size(); ++i) inv[images_[i]] = i;
  return Perm(std::move(inv));
}

Perm operator*(const Perm &a, const Perm &b) {
  if (a.degree() != b.degree()) throw std::invalid_argument("degree mismatch");
  std::vector<std::uint32_t> img(a.degree());
  for (std::uint32_t i = 0; i < img.size(); ++i) img[i] = a.images_[b.images_[i]];
  return Perm(std::move(img));
}

namespace {

std::uint32_t smallest_moved(const Perm &g) {
  for (std::uint32_t i = 0; i < g.degree(); ++i)
    if (g[i] != i) return i;
  throw std::logic_error("identity has no moved point");
}

} // namespace

StabilizerChain::StabilizerChain(unsigned degree, std::vector<std::uint32_t> base_seed)
    : degree_(degree) {
  for (std::uint32_t b : base_seed) extend_base(b);
}

void StabilizerChain::extend_base(std::uint32_t point) {
  Level lv;
  lv.base = point;
  lv.via_gen.assign(degree_, -1);
  lv.parent.assign(degree_, 0);
  lv.orbit = {point};
  levels_.push_back(std::move(lv));
}

std::vector<Perm> StabilizerChain::level_generators(std::size_t level) const {
  std::vector<Perm> out;
  for (std::size_t i = level; i < levels_.size(); ++i)
    out.insert(out.end(), levels_[i].gens.begin(), levels_[i].gens.end());
  return out;
}

void StabilizerChain::rebuild_orbit(std::size_t level) {
  Level &lv = levels_[level];
  std::vector<Perm> gens = level_generators(level);
  lv.via_gen.assign(degree_, -1);
  lv.parent.assign(degree_, 0);
  lv.orbit = {lv.base};
  for (std::size_t qi = 0; qi < lv.orbit.size(); ++qi) {
    std::uint32_t y = lv.orbit[qi];
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      std::uint32_t z = gens[gi][y];
      if (z != lv.base && lv.via_gen[z] == -1) {
        lv.via_gen[z] = static_cast<std::int32_t>(gi);
        lv.parent[z] = y;
        lv.orbit.push_back(z);
      }
    }
  }
}

Perm StabilizerChain::transversal(std::size_t level, std::uint32_t point) const {
  const Level &lv = levels_[level];
  std::vector<Perm> gens = level_generators(level);
  std::vector<std::int32_t> path;
  std::uint32_t p = point;
  while (p != lv.base) {
    path.push_back(lv.via_gen[p]);
    p = lv.parent[p];
  }
  Perm u = Perm::identity(degree_);
  for (auto it = path.rbegin(); it != path.rend(); ++it) u = gens[*it] * u;
  return u;
}

std::pair<Perm, std::size_t> StabilizerChain::sift(const Perm &g) const {
  return sift_from(g, 0);
}

std::pair<Perm, std::size_t> StabilizerChain::sift_from(const Perm &g, std::size_t from) const {
  Perm h = g;
  for (std::size_t i = from; i < levels_.size(); ++i) {
    std::uint32_t y = h[levels_[i].base];
    if (y == levels_[i].base) continue;
    if (!in_orbit(i, y)) return {h, i};
    h = transversal(i, y).inverse() * h;
  }
  return {h, levels_.size()};
}

// Insert a sifted residue at its level and re-establish the chain condition
// from that level upward (every Schreier generator sifts to identity below).
void StabilizerChain::insert_residue(const Perm &residue, std::size_t at_level) {
  if (at_level == levels_.size()) extend_base(smallest_moved(residue));
  levels_[at_level].gens.push_back(residue);
  for (std::size_t k = at_level + 1; k-- > 0;) complete_level(k);
}

void StabilizerChain::complete_level(std::size_t k) {
  bool done = false;
  while (!done) {
    done = true;
    rebuild_orbit(k);
    std::vector<Perm> gens = level_generators(k);
    for (std::size_t yi = 0; yi < levels_[k].orbit.size() && done; ++yi) {
      std::uint32_t y = levels_[k].orbit[yi];
      Perm uy = transversal(k, y);
      for (std::size_t gi = 0; gi < gens.size() && done; ++gi) {
        Perm s = transversal(k, gens[gi][y]).inverse() * (gens[gi] * uy);
        if (s.is_identity()) continue;
        auto [residue, lev] = sift_from(s, k + 1);
        if (residue.is_identity() && lev == levels_.size()) continue;
        if (lev == levels_.size()) extend_base(smallest_moved(residue));
        levels_[lev].gens.push_back(residue);
        for (std::size_t m = lev; m > k; --m) complete_level(m);
        done = false; // this level's orbit may have grown: restart the scan
      }
    }
  }
}

bool StabilizerChain::add_generator(const Perm &g) {
  if (g.degree() != degree_) throw std::invalid_argument("generator degree mismatch");
  auto [h, j] = sift(g);
  if (h.is_identity()) return false;
  insert_residue(h, j);
  return true;
}

bool StabilizerChain::contains(const Perm &g) const {
  if (g.degree() != degree_) return false;
  auto [h, j] = sift(g);
  return j == levels_.size() && h.is_identity();
}

BigUnsigned StabilizerChain::order() const {
  BigUnsigned o(1);
  for (const Level &lv : levels_) o *= lv.orbit.size();
  return o;
}

std::vector<std::uint32_t> StabilizerChain::orbit_partition(std::size_t level) const {
  std::vector<std::uint32_t> part(degree_);
  std::iota(part.begin(), part.end(), 0u);
  if (level >= levels_.size()) return part; // trivial group: discrete
  std::vector<Perm> gens = level_generators(level);
  std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
    while (part[x] != x) {
      part[x] = part[part[x]];
      x = part[x];
    }
    return x;
  };
  for (const Perm &g : gens)
    for (std::uint32_t x = 0; x < degree_; ++x) {
      std::uint32_t a = find(x), b = find(g[x]);
      if (a != b) part[std::max(a, b)] = std::min(a, b);
    }
  for (std::uint32_t x = 0; x < degree_; ++x) part[x] = find(x);
  return part;
}

void StabilizerChain::for_each_element(const std::function<void(const Perm &)> &fn,
                                       std::uint64_t cap) const {
  BigUnsigned o = order();
  if (!(o <= BigUnsigned(cap)))
    throw InfeasibleError("group order " + o.to_string() + " exceeds enumeration cap " +
                          std::to_string(cap));
  Perm id = Perm::identity(degree_);
  std::function<void(std::size_t, const Perm &)> rec = [&](std::size_t level, const Perm &acc) {
    if (level == levels_.size()) {
      fn(acc);
      return;
    }
    for (std::uint32_t y : levels_[level].orbit)
      rec(level + 1, acc * transversal(level, y));
  };
  rec(0, id);
}

PermutationGroup::PermutationGroup(unsigned degree, std::vector<Perm> generators)
    : degree_(degree), gens_(std::move(generators)) {
  for (const Perm &g : gens_)
    if (g.degree() != degree_) throw std::invalid_argument("generator degree mismatch");
  auto chain = std::make_shared<StabilizerChain>(degree_);
  for (const Perm &g : gens_) chain->add_generator(g);
  chain_ = std::move(chain);
}

const StabilizerChain &PermutationGroup::chain() const { return *chain_; }

BigUnsigned PermutationGroup::order() const { return chain_->order(); }

bool PermutationGroup::contains(const Perm &g) const { return chain_->contains(g); }

bool PermutationGroup::is_transitive() const {
  if (degree_ == 0) return true;
  std::vector<bool> seen(degree_, false);
  std::vector<std::uint32_t> queue{0};
  seen[0] = true;
  std::size_t count = 1;
  for (std::size_t qi = 0; qi < queue.size(); ++qi)
    for (const Perm &g : gens_) {
      std::uint32_t z = g[queue[qi]];
      if (!seen[z]) {
        seen[z] = true;
        ++count;
        queue.push_back(z);
      }
    }
  return count == degree_;
}

bool PermutationGroup::is_regular_action() const {
  return is_transitive() && order() == BigUnsigned(degree_);
}

PermutationGroup PermutationGroup::point_stabilizer(std::uint32_t v) const {
  StabilizerChain rebased(degree_, {v});
  for (const Perm &g : gens_) rebased.add_generator(g);
  return PermutationGroup(degree_, rebased.level_generators(1));
}

void PermutationGroup::for_each_element(const std::function<void(const Perm &)> &fn,
                                        std::uint64_t cap) const {
  chain_->for_each_element(fn, cap);
}

std::vector<Perm> PermutationGroup::elements(std::uint64_t cap) const {
  std::vector<Perm> out;
  for_each_element([&](const Perm &p) { out.push_back(p); }, cap);
  return out;
}

std::vector<std::uint64_t> PermutationGroup::abelian_invariants(std::uint64_t cap) const {
  for (std::size_t i = 0; i < gens_.size(); ++i)
    for (std::size_t j = i + 1; j < gens_.size(); ++j)
      if (!(gens_[i] * gens_[j] == gens_[j] * gens_[i]))
        throw std::invalid_argument("group is not abelian");
  BigUnsigned big = order();
  if (!(big <= BigUnsigned(cap)))
    throw InfeasibleError("order exceeds census cap");
  std::uint64_t n = big.as_u64();
  std::vector<std::uint64_t> orders;
  for_each_element([&](const Perm &p) { orders.push_back(p.order()); }, cap);
  std::vector<std::uint64_t> invariants;
  std::uint64_t rest = n;
  for (std::uint64_t p = 2; p <= rest; ++p) {
    if (rest % p) continue;
    while (rest % p == 0) rest /= p;
    // s_j = log_p #{x : ord(x) divides p^j}; factor exponent multiset follows
    std::vector<std::uint64_t> s{0};
    for (std::uint64_t pj = p;; pj *= p) {
      std::uint64_t cnt = 0;
      for (std::uint64_t o : orders) {
        // order divides p^j iff o is a power of p dividing pj
        std::uint64_t q = o;
        while (q % p == 0) q /= p;
        if (q == 1 && pj % o == 0) ++cnt;
      }
      std::uint64_t lg = 0, v = cnt;
      while (v > 1) {
        v /= p;
        ++lg;
      }
      s.push_back(lg);
      if (s.back() == s[s.size() - 2]) break; // stabilized
    }
    for (std::size_t j = 1; j + 1 < s.size(); ++j) {
      std::uint64_t with_ge_j = s[j] - s[j - 1];
      std::uint64_t with_ge_j1 = s[j + 1] - s[j];
      std::uint64_t exactly_j = with_ge_j - with_ge_j1;
      std::uint64_t q = 1;
      for (std::size_t t = 0; t < j; ++t) q *= p;
      for (std::uint64_t c = 0; c < exactly_j; ++c) invariants.push_back(q);
    }
  }
  std::sort(invariants.begin(), invariants.end());
  return invariants;
}

Perm translation_perm(const AbelianGroup &h, Elem t) {
  std::vector<std::uint32_t> img(h.order());
  for (Elem x = 0; x < h.order(); ++x) img[x] = h.add(x, t);
  return Perm(std::move(img));
}

PermutationGroup right_regular_representation(const AbelianGroup &h, std::uint64_t point_cap) {
  if (h.order() > point_cap)
    throw InfeasibleError("regular representation degree exceeds cap");
  std::vector<Perm> gens;
  Coords unit(h.rank(), 0);
  for (std::size_t i = 0; i < h.rank(); ++i) {
    unit[i] = 1;
    gens.push_back(translation_perm(h, h.index_of(unit)));
    unit[i] = 0;
  }
  return PermutationGroup(static_cast<unsigned>(h.order()), std::move(gens));
}

namespace {

using ElementKey = std::vector<std::uint32_t>;

ElementKey subgroup_key(const std::vector<Perm> &elems) {
  std::vector<const Perm *> ptrs;
  ptrs.reserve(elems.size());
  for (const Perm &p : elems) ptrs.push_back(&p);
  std::sort(ptrs.begin(), ptrs.end(), [](const Perm *a, const Perm *b) { return *a < *b; });
  ElementKey key;
  key.reserve(elems.size() * (elems.empty() ? 0 : elems[0].degree()));
  for (const Perm *p : ptrs)
    key.insert(key.end(), p->images().begin(), p->images().end());
  return key;
}

bool commutes(const Perm &a, const Perm &b) {
  for (std::uint32_t x = 0; x < a.degree(); ++x)
    if (a[b[x]] != b[a[x]]) return false;
  return true;
}

} // namespace

std::vector<PermutationGroup> enumerate_regular_subgroups(const PermutationGroup &ambient,
                                                          const AbelianGroup &h,
                                                          const RegularSearchCaps &caps) {
  unsigned n = ambient.degree();
  if (h.order() != n)
    throw std::invalid_argument("ambient degree must equal |H| for a regular action");
  if (!(ambient.order() <= BigUnsigned(caps.ambient_order_cap)))
    throw InfeasibleError("ambient group order " + ambient.order().to_string() +
                          " exceeds regular-subgroup search cap");

  // candidate generator images: fixed-point-free elements of the exact order
  std::vector<std::uint64_t> needed;
  for (int m : h.moduli()) needed.push_back(static_cast<std::uint64_t>(m));
  std::map<std::uint64_t, std::vector<Perm>> candidates;
  for (std::uint64_t o : needed) candidates[o];
  ambient.for_each_element(
      [&](const Perm &p) {
        if (!p.fixed_point_free()) return;
        auto it = candidates.find(p.order());
        if (it != candidates.end()) it->second.push_back(p);
      },
      caps.ambient_order_cap);

  std::set<ElementKey> seen;
  std::vector<PermutationGroup> results;
  std::vector<Perm> chosen;
  std::vector<Perm> closure{Perm::identity(n)};

  std::function<void(std::size_t, const std::vector<Perm> &)> rec =
      [&](std::size_t idx, const std::vector<Perm> &elems) {
        if (idx == needed.size()) {
          if (elems.size() != n) return;
          // sharply transitive: images of 0 must be pairwise distinct
          std::vector<bool> hit(n, false);
          for (const Perm &m : elems) {
            if (hit[m[0]]) return;
            hit[m[0]] = true;
          }
          ElementKey key = subgroup_key(elems);
          if (seen.insert(key).second)
            results.emplace_back(n, chosen);
          return;
        }
        std::uint64_t want = needed[idx];
        for (const Perm &cand : candidates[want]) {
          bool ok = true;
          for (const Perm &prev : chosen)
            if (!commutes(cand, prev)) {
              ok = false;
              break;
            }
          if (!ok) continue;
          // closure grows by the cyclic factor; all new elements must be
          // fresh and fixed point free
          std::vector<Perm> next = elems;
          Perm power = cand;
          bool good = true;
          for (std::uint64_t t = 1; t < want && good; ++t) {
            for (const Perm &e : elems) {
              Perm ne = e * power;
              if (!ne.is_identity() && !ne.fixed_point_free()) {
                good = false;
                break;
              }
              for (const Perm &old : next)
                if (old == ne) {
                  good = false;
                  break;
                }
              if (!good) break;
              next.push_back(ne);
            }
            power = power * cand;
          }
          if (!good) continue;
          chosen.push_back(cand);
          rec(idx + 1, next);
          chosen.pop_back();
        }
      };
  rec(0, closure);

  std::vector<std::pair<ElementKey, std::size_t>> keyed;
  keyed.reserve(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    std::vector<Perm> elems = results[i].elements();
    keyed.emplace_back(subgroup_key(elems), i);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<PermutationGroup> sorted;
  sorted.reserve(results.size());
  for (auto &[key, i] : keyed) sorted.push_back(std::move(results[i]));
  return sorted;
}

namespace {

/// Isomorphisms H -> P for a regular abelian subgroup P, as generator-image
/// tuples. fn gets one Perm per cyclic factor of H.
void for_each_embedding(const AbelianGroup &h, const std::vector<Perm> &p_elems,
                        const std::function<bool(const std::vector<Perm> &)> &fn) {
  std::size_t d = h.rank();
  std::vector<Perm> chosen;
  std::vector<Perm> span;
  for (const Perm &e : p_elems)
    if (e.is_identity()) span.push_back(e);
  bool stop = false;
  std::function<void(std::size_t, const std::vector<Perm> &)> rec =
      [&](std::size_t idx, const std::vector<Perm> &cur) {
        if (stop) return;
        if (idx == d) {
          if (cur.size() == p_elems.size() && !fn(chosen)) stop = true;
          return;
        }
        std::uint64_t want = static_cast<std::uint64_t>(h.moduli()[idx]);
        for (const Perm &cand : p_elems) {
          if (stop) return;
          if (cand.order() != want) continue;
          std::vector<Perm> next = cur;
          Perm power = cand;
          bool good = true;
          for (std::uint64_t t = 1; t < want && good; ++t) {
            for (const Perm &e : cur) {
              Perm ne = e * power;
              for (const Perm &old : next)
                if (old == ne) {
                  good = false;
                  break;
                }
              if (!good) break;
              next.push_back(ne);
            }
            power = power * cand;
          }
          if (!good) continue;
          chosen.push_back(cand);
          rec(idx + 1, next);
          chosen.pop_back();
        }
      };
  rec(0, span);
}

Perm embedding_image(const AbelianGroup &h, const std::vector<Perm> &gen_images, Elem x) {
  Perm out = Perm::identity(gen_images.empty() ? 0 : gen_images[0].degree());
  Coords c = h.coords(x);
  for (std::size_t i = 0; i < gen_images.size(); ++i) {
    Perm pw = gen_images[i];
    for (int t = 0; t < c[i]; ++t) out = pw * out;
  }
  return out;
}

} // namespace

std::optional<Perm> are_conjugate_subgroups(const PermutationGroup &p,
                                            const PermutationGroup &q,
                                            const PermutationGroup &ambient,
                                            std::uint64_t scan_cap) {
  if (p.degree() != q.degree() || p.degree() != ambient.degree())
    throw std::invalid_argument("degree mismatch");
  if (p.order() != q.order()) return std::nullopt;

  bool regular_route = p.is_regular_action() && q.is_regular_action();
  std::vector<std::uint64_t> inv_p, inv_q;
  if (regular_route) {
    try {
      inv_p = p.abelian_invariants();
      inv_q = q.abelian_invariants();
    } catch (const std::invalid_argument &) {
      regular_route = false; // nonabelian: fall through to the scan
    }
  }
  if (regular_route) {
    if (inv_p != inv_q) return std::nullopt;
    std::vector<int> moduli;
    for (std::uint64_t v : inv_p) moduli.push_back(static_cast<int>(v));
    if (moduli.empty()) return Perm::identity(p.degree()); // trivial subgroups
    AbelianGroup h(moduli);
    unsigned n = p.degree();
    std::vector<Perm> p_elems = p.elements();
    std::vector<Perm> q_elems = q.elements();

    // one fixed coordinate system on P
    std::vector<Perm> psi_p;
    for_each_embedding(h, p_elems, [&](const std::vector<Perm> &gens) {
      psi_p = gens;
      return false; // first one suffices
    });
    if (psi_p.empty()) return std::nullopt;
    // point x corresponds to the unique element of P sending 0 to x
    std::vector<Elem> pt2h(n);
    for (Elem x = 0; x < h.order(); ++x) pt2h[embedding_image(h, psi_p, x)[0]] = x;

    std::optional<Perm> found;
    for_each_embedding(h, q_elems, [&](const std::vector<Perm> &psi_q) {
      std::vector<Perm> q_images(h.order(), Perm::identity(n));
      for (Elem x = 0; x < h.order(); ++x) q_images[x] = embedding_image(h, psi_q, x);
      for (std::uint32_t c = 0; c < n; ++c) {
        std::vector<std::uint32_t> img(n);
        for (std::uint32_t x = 0; x < n; ++x) img[x] = q_images[pt2h[x]][c];
        Perm a(img);
        if (!ambient.contains(a)) continue;
        Perm conj = a.inverse();
        bool ok = true;
        for (const Perm &g : p.generators())
          if (!q.contains(conj.inverse() * g * conj)) {
            ok = false;
            break;
          }
        if (ok) {
          found = conj;
          return false;
        }
      }
      return true;
    });
    return found;
  }

  // general fallback: scan ambient elements
  std::optional<Perm> found;
  try {
    ambient.for_each_element(
        [&](const Perm &a) {
          if (found) return;
          bool ok = true;
          for (const Perm &g : p.generators())
            if (!q.contains(a.inverse() * g * a)) {
              ok = false;
              break;
            }
          if (ok) found = a;
        },
        scan_cap);
  } catch (const InfeasibleError &) {
    throw InfeasibleError("conjugacy scan infeasible: ambient order exceeds cap " +
                          std::to_string(scan_cap));
  }
  return found;
}

} // namespace cayleyci
