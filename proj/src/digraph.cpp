#include "cayleyci/digraph.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "cayleyci/errors.hpp"

namespace cayleyci {

Digraph::Digraph(unsigned n, bool undirected) : n_(n), undirected_(undirected) {
  out_.assign(n, Bitset(n));
  in_.assign(n, Bitset(n));
}

void Digraph::add_arc(unsigned u, unsigned v) {
  if (u >= n_ || v >= n_) throw std::invalid_argument("vertex out of range");
  out_[u].set(v);
  in_[v].set(u);
}

void Digraph::add_edge(unsigned u, unsigned v) {
  add_arc(u, v);
  if (undirected_) add_arc(v, u);
}

std::size_t Digraph::loop_count() const {
  std::size_t c = 0;
  for (unsigned v = 0; v < n_; ++v) c += has_loop(v);
  return c;
}

std::size_t Digraph::arc_count() const {
  std::size_t c = 0;
  for (unsigned v = 0; v < n_; ++v) c += out_[v].count();
  return c;
}

bool Digraph::is_symmetric_relation() const {
  for (unsigned v = 0; v < n_; ++v)
    if (out_[v] != in_[v]) return false;
  return true;
}

void Digraph::assert_undirected() {
  if (!is_symmetric_relation())
    throw std::invalid_argument("adjacency relation is not symmetric");
  undirected_ = true;
}

Digraph Digraph::relabeled(const std::vector<std::uint32_t> &perm) const {
  if (perm.size() != n_) throw std::invalid_argument("relabeling size mismatch");
  Digraph g(n_, undirected_);
  for (unsigned u = 0; u < n_; ++u)
    out_[u].for_each([&](std::size_t v) { g.add_arc(perm[u], perm[v]); });
  return g;
}

CayleyDigraph::CayleyDigraph(AbelianGroup group, ConnectionSet set, std::uint64_t dense_cap)
    : group_(std::move(group)), set_(std::move(set)), member_(group_.order()) {
  if (!set_.group().same_group(group_))
    throw std::invalid_argument("connection set not a subset of the group");
  for (Elem s : set_.elements()) member_.set(s);
  if (group_.order() <= dense_cap) {
    Digraph d(static_cast<unsigned>(group_.order()));
    for (Elem v = 0; v < group_.order(); ++v)
      for (Elem s : set_.elements()) d.add_arc(v, group_.add(s, v));
    dense_ = std::move(d);
  }
}

std::vector<Elem> CayleyDigraph::out_neighbours(Elem v) const {
  if (v >= group_.order()) throw std::invalid_argument("vertex out of range");
  std::vector<Elem> out;
  out.reserve(set_.size());
  for (Elem s : set_.elements()) out.push_back(group_.add(s, v));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Elem> CayleyDigraph::in_neighbours(Elem v) const {
  if (v >= group_.order()) throw std::invalid_argument("vertex out of range");
  std::vector<Elem> out;
  out.reserve(set_.size());
  for (Elem s : set_.elements()) out.push_back(group_.sub(v, s));
  std::sort(out.begin(), out.end());
  return out;
}

const Digraph &CayleyDigraph::dense() const {
  if (!dense_)
    throw InfeasibleError("dense adjacency not materialized at " +
                          std::to_string(group_.order()) + " vertices");
  return *dense_;
}

void CayleyDigraph::mark_undirected() {
  if (!set_.is_symmetric())
    throw std::invalid_argument("connection set is not symmetric; graph stays directed");
  undirected_ = true;
  if (dense_) dense_->assert_undirected();
}

CayleyDigraph build_digraph(const AbelianGroup &g, const ConnectionSet &s,
                            std::uint64_t dense_cap) {
  return CayleyDigraph(g, s, dense_cap);
}

CayleyDigraph reverse(const CayleyDigraph &x) {
  return CayleyDigraph(x.group(), subset_inverse(x.connection_set()));
}

CayleyDigraph to_undirected(const CayleyDigraph &x) {
  CayleyDigraph g = x;
  g.mark_undirected();
  return g;
}

Digraph bipartite_double_cover(const Digraph &x) {
  unsigned n = x.vertex_count();
  Digraph g(2 * n, true);
  for (unsigned u = 0; u < n; ++u)
    x.out_row(u).for_each([&](std::size_t v) {
      g.add_edge(u, static_cast<unsigned>(v) + n);
    });
  return g;
}

Digraph bipartite_double_cover(const CayleyDigraph &x) {
  unsigned n = x.vertex_count();
  Digraph g(2 * n, true);
  for (Elem u = 0; u < n; ++u)
    for (Elem v : x.out_neighbours(u)) g.add_edge(u, v + n);
  return g;
}

namespace {

void append_n(std::string &s, unsigned n) {
  if (n <= 62) {
    s.push_back(static_cast<char>(n + 63));
  } else if (n <= 258047) {
    s.push_back(126);
    s.push_back(static_cast<char>(((n >> 12) & 63) + 63));
    s.push_back(static_cast<char>(((n >> 6) & 63) + 63));
    s.push_back(static_cast<char>((n & 63) + 63));
  } else {
    throw std::invalid_argument("graph too large for 6-bit encoding");
  }
}

unsigned parse_n(const std::string &s, std::size_t &pos) {
  if (pos >= s.size()) throw IoError("truncated 6-bit graph string");
  unsigned c = static_cast<unsigned char>(s[pos]);
  if (c != 126) {
    ++pos;
    if (c < 63 || c > 125) throw IoError("bad size byte in 6-bit graph string");
    return c - 63;
  }
  ++pos;
  if (pos + 3 > s.size()) throw IoError("truncated size field");
  unsigned n = 0;
  for (int i = 0; i < 3; ++i) {
    unsigned b = static_cast<unsigned char>(s[pos++]);
    if (b < 63 || b > 126) throw IoError("bad size byte");
    n = (n << 6) | (b - 63);
  }
  return n;
}

class BitWriter {
public:
  explicit BitWriter(std::string &out) : out_(out) {}
  void push(bool bit) {
    cur_ = (cur_ << 1) | static_cast<unsigned>(bit);
    if (++nbits_ == 6) flush_full();
  }
  void finish() {
    if (nbits_) {
      cur_ <<= (6 - nbits_);
      flush_full();
    }
  }

private:
  void flush_full() {
    out_.push_back(static_cast<char>(cur_ + 63));
    cur_ = 0;
    nbits_ = 0;
  }
  std::string &out_;
  unsigned cur_ = 0;
  unsigned nbits_ = 0;
};

class BitReader {
public:
  BitReader(const std::string &s, std::size_t pos) : s_(s), pos_(pos) {}
  bool next() {
    if (nbits_ == 0) {
      if (pos_ >= s_.size()) throw IoError("truncated 6-bit graph string");
      unsigned b = static_cast<unsigned char>(s_[pos_++]);
      if (b < 63 || b > 126) throw IoError("bad data byte in 6-bit graph string");
      cur_ = b - 63;
      nbits_ = 6;
    }
    --nbits_;
    return (cur_ >> nbits_) & 1u;
  }

private:
  const std::string &s_;
  std::size_t pos_;
  unsigned cur_ = 0;
  unsigned nbits_ = 0;
};

std::size_t skip_header(const std::string &s, const char *hdr) {
  std::string h(hdr);
  if (s.rfind(h, 0) == 0) return h.size();
  return 0;
}

} // namespace

std::string to_graph6(const Digraph &g) {
  if (!g.is_symmetric_relation())
    throw std::invalid_argument("graph6 requires an undirected graph");
  if (g.loop_count() > 0)
    throw std::invalid_argument("graph6 cannot represent loops");
  std::string s;
  append_n(s, g.vertex_count());
  BitWriter w(s);
  for (unsigned j = 1; j < g.vertex_count(); ++j)
    for (unsigned i = 0; i < j; ++i) w.push(g.has_arc(i, j));
  w.finish();
  return s;
}

Digraph from_graph6(const std::string &str) {
  std::size_t pos = skip_header(str, ">>graph6<<");
  unsigned n = parse_n(str, pos);
  Digraph g(n, true);
  BitReader r(str, pos);
  for (unsigned j = 1; j < n; ++j)
    for (unsigned i = 0; i < j; ++i)
      if (r.next()) g.add_edge(i, j);
  return g;
}

std::string to_digraph6(const Digraph &g) {
  std::string s = "&";
  append_n(s, g.vertex_count());
  BitWriter w(s);
  for (unsigned i = 0; i < g.vertex_count(); ++i)
    for (unsigned j = 0; j < g.vertex_count(); ++j) w.push(g.has_arc(i, j));
  w.finish();
  return s;
}

Digraph from_digraph6(const std::string &str) {
  std::size_t pos = skip_header(str, ">>digraph6<<");
  if (pos >= str.size() || str[pos] != '&') throw IoError("digraph6 string must start with '&'");
  ++pos;
  unsigned n = parse_n(str, pos);
  Digraph g(n);
  BitReader r(str, pos);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j)
      if (r.next()) g.add_arc(i, j);
  return g;
}

std::string to_edge_list(const Digraph &g) {
  std::ostringstream os;
  for (unsigned u = 0; u < g.vertex_count(); ++u)
    g.out_row(u).for_each([&](std::size_t v) {
      if (!g.undirected() || u <= v) os << u << ' ' << v << '\n';
    });
  return os.str();
}

Digraph from_edge_list(const std::string &text, std::optional<unsigned> n_hint,
                       bool undirected) {
  std::vector<std::pair<unsigned, unsigned>> arcs;
  unsigned maxv = 0;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    unsigned u, v;
    if (!(ls >> u >> v)) throw IoError("bad edge list line: " + line);
    arcs.emplace_back(u, v);
    maxv = std::max({maxv, u, v});
  }
  unsigned n = n_hint.value_or(arcs.empty() ? 0 : maxv + 1);
  if (n <= maxv && !arcs.empty()) throw IoError("edge list vertex exceeds vertex count");
  Digraph g(n, undirected);
  for (auto [u, v] : arcs) g.add_edge(u, v);
  return g;
}

} // namespace cayleyci
