#include "dstk/testkit.hpp"

#include <algorithm>
#include <boost/pending/disjoint_sets.hpp>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "dstk/errors.hpp"

namespace dstk {

struct Test::Impl {
  bool canonical = true;
  // canonical cache
  mutable std::mutex mu;
  mutable std::unordered_map<std::uint64_t, NodePair> cache;
  // foreign entries
  std::map<std::uint64_t, std::vector<NodePair>> levels;

  const NodePair& canonical_level(std::uint64_t q) const;
};

LevelRecipe level_recipe(std::uint64_t q) {
  if (q == 0) throw precondition_error("level 0 has no recipe");
  const NatPair r = phi(phi(q - 1).second);
  return {r.first, r.second};
}

const NodePair& Test::Impl::canonical_level(std::uint64_t q) const {
  if (q > kMaxLevelLength) {
    throw resource_limit("level " + std::to_string(q) + " exceeds the explicit word bound");
  }
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(q); it != cache.end()) return it->second;
  std::vector<std::uint64_t> todo{q};
  while (!todo.empty()) {
    const std::uint64_t x = todo.back();
    if (cache.count(x)) {
      todo.pop_back();
      continue;
    }
    if (x == 0) {
      cache.emplace(0, NodePair{});
      todo.pop_back();
      continue;
    }
    const LevelRecipe rc = level_recipe(x);
    auto parent = cache.find(rc.parent);
    if (parent == cache.end()) {
      todo.push_back(rc.parent);
      continue;
    }
    const Word ins = psi(rc.n);
    const Word pad = Word::zeros(x - 1 - rc.parent - ins.size());
    NodePair np{parent->second.s + "0"_w + ins + pad, parent->second.t + "1"_w + ins + pad};
    cache.emplace(x, std::move(np));
    todo.pop_back();
  }
  return cache.at(q);
}

Test Test::canonical() { return Test(std::make_shared<Impl>()); }

Test Test::from_entries(const std::vector<std::pair<std::uint64_t, NodePair>>& entries) {
  auto impl = std::make_shared<Impl>();
  impl->canonical = false;
  for (const auto& [q, np] : entries) {
    if (np.s.size() != q || np.t.size() != q) {
      throw parse_error("entry at level " + std::to_string(q) + " has words of the wrong length");
    }
    impl->levels[q].push_back(np);
  }
  return Test(std::move(impl));
}

Test Test::load(std::istream& in) {
  std::vector<std::pair<std::uint64_t, NodePair>> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string qs, s, t, extra;
    if (!std::getline(ls, qs, '\t') || !std::getline(ls, s, '\t') || !std::getline(ls, t, '\t') ||
        std::getline(ls, extra)) {
      throw parse_error("line " + std::to_string(lineno) + ": expected q<TAB>s<TAB>t");
    }
    if (qs.empty() || qs.find_first_not_of("0123456789") != std::string::npos) {
      throw parse_error("line " + std::to_string(lineno) + ": bad level '" + qs + "'");
    }
    entries.emplace_back(std::stoull(qs), NodePair{Word::parse(s), Word::parse(t)});
  }
  return from_entries(entries);
}

void Test::save(std::ostream& out, std::uint64_t max_q) const {
  for (std::uint64_t q = 0; q <= max_q; ++q) {
    for (const NodePair& np : entries(q)) out << q << '\t' << np.s << '\t' << np.t << '\n';
  }
}

bool Test::is_canonical() const { return impl_->canonical; }

std::optional<std::uint64_t> Test::depth() const {
  if (impl_->canonical) return std::nullopt;
  if (impl_->levels.empty()) return 0;
  return impl_->levels.rbegin()->first;
}

std::vector<NodePair> Test::entries(std::uint64_t q) const {
  if (impl_->canonical) return {impl_->canonical_level(q)};
  auto it = impl_->levels.find(q);
  if (it == impl_->levels.end()) return {};
  return it->second;
}

const NodePair& Test::level(std::uint64_t q) const {
  if (impl_->canonical) return impl_->canonical_level(q);
  auto it = impl_->levels.find(q);
  if (it == impl_->levels.end() || it->second.size() != 1) {
    throw precondition_error("test has no unique pair at level " + std::to_string(q));
  }
  return it->second.front();
}

void Test::materialize(std::uint64_t max_q) const {
  if (!impl_->canonical) return;
  for (std::uint64_t q = 0; q <= max_q; ++q) impl_->canonical_level(q);
}

namespace {
int canonical_bit(std::uint64_t q, std::uint64_t i, int branch_bit) {
  if (i >= q) throw std::out_of_range("coordinate beyond level length");
  for (;;) {
    const LevelRecipe rc = level_recipe(q);
    if (i < rc.parent) {
      q = rc.parent;
      continue;
    }
    if (i == rc.parent) return branch_bit;
    const Word ins = psi(rc.n);
    const std::uint64_t j = i - rc.parent - 1;
    return j < ins.size() ? ins[static_cast<std::size_t>(j)] : 0;
  }
}
}  // namespace

int Test::s_bit(std::uint64_t q, std::uint64_t i) const {
  if (!impl_->canonical) return level(q).s[static_cast<std::size_t>(i)];
  return canonical_bit(q, i, 0);
}

int Test::t_bit(std::uint64_t q, std::uint64_t i) const {
  if (!impl_->canonical) return level(q).t[static_cast<std::size_t>(i)];
  return canonical_bit(q, i, 1);
}

Test build_test(std::uint64_t max_q) {
  // Theta(max_q^2) characters
  constexpr std::uint64_t kMaxStored = std::uint64_t{1} << 14;
  if (max_q > kMaxStored) {
    throw resource_limit("build_test: storing " + std::to_string(max_q) +
                         " levels exceeds the bound; use coordinate access");
  }
  Test t = Test::canonical();
  t.materialize(max_q);
  return t;
}

namespace {
std::string pair_str(const NodePair& np) { return "s=" + np.s.str() + " t=" + np.t.str(); }

// Last position where s and t differ.
std::optional<std::size_t> last_difference(const Word& s, const Word& t) {
  for (std::size_t i = s.size(); i-- > 0;) {
    if (s[i] != t[i]) return i;
  }
  return std::nullopt;
}

// q with (s, t) = (s_q 0 w, t_q 1 w), checked against the entries at level q.
std::optional<std::size_t> decomposition(const Word& s, const Word& t, const Test& test) {
  auto q = last_difference(s, t);
  if (!q || s[*q] != 0 || t[*q] != 1) return std::nullopt;
  if (auto d = test.depth(); d && *q > *d) return std::nullopt;
  const Word sp = s.prefix(*q), tp = t.prefix(*q);
  for (const NodePair& np : test.entries(*q)) {
    if (np.s == sp && np.t == tp) return q;
  }
  return std::nullopt;
}
}  // namespace

BWitness find_b_witness(const Test& test, std::uint64_t p, std::uint64_t m, const Word& u) {
  if (test.is_canonical()) {
    const std::uint64_t n = psi_inv(u);
    const std::uint64_t r = pair(p, n);
    const std::uint64_t q = pair(m, r);
    if (q + 1 > Test::kMaxLevelLength) {
      throw resource_limit("witness level " + std::to_string(q + 1) + " exceeds the explicit word bound");
    }
    return {Word::zeros(q - p - u.size()), q + 1};
  }
  const NodePair& base = test.level(p);
  const Word a = base.s + "0"_w + u;
  const Word b = base.t + "1"_w + u;
  const std::uint64_t top = *test.depth();
  for (std::uint64_t level = a.size(); level <= top; ++level) {
    if (phi(level - 1).first != m) continue;
    std::optional<BWitness> best;
    for (const NodePair& np : test.entries(level)) {
      if (!a.is_prefix_of(np.s) || !b.is_prefix_of(np.t)) continue;
      const Word v = np.s.drop(a.size());
      if (np.t.drop(b.size()) != v) continue;
      if (!best || v < best->v) best = BWitness{v, level};
    }
    if (best) return *best;
  }
  throw search_exhausted("no witness for (p,m,u)=(" + std::to_string(p) + "," + std::to_string(m) + "," + u.str() +
                         ") up to level " + std::to_string(top));
}

Word witness_b(const Test& test, std::uint64_t p, std::uint64_t m, const Word& u) {
  return find_b_witness(test, p, m, u).v;
}

TestCheckReport check_def31(const Test& test, std::uint64_t max_q, const BBounds& bounds) {
  TestCheckReport rep;
  auto fail = [&rep](char clause, std::string w) {
    rep.ok = false;
    rep.clause = clause;
    rep.witness = std::move(w);
    return rep;
  };
  // (a)
  for (std::uint64_t q = 0; q <= max_q; ++q) {
    const auto es = test.entries(q);
    if (es.size() != 1) {
      return fail('a', "level=" + std::to_string(q) + " entries=" + std::to_string(es.size()));
    }
    if (es[0].s.size() != q || es[0].t.size() != q) return fail('a', "level=" + std::to_string(q) + " bad length");
    ++rep.levels_checked;
  }
  // (c)
  for (std::uint64_t n = 1; n <= max_q; ++n) {
    const NodePair& np = test.level(n);
    auto q = decomposition(np.s, np.t, test);
    if (!q) return fail('c', "level=" + std::to_string(n) + " " + pair_str(np));
  }
  // (b)
  for (std::uint64_t p = 0; p <= bounds.p_max; ++p) {
    const NodePair& base = test.level(p);
    for (std::uint64_t m = 0; m <= bounds.m_max; ++m) {
      for (std::uint64_t len = 0; len <= bounds.u_len_max; ++len) {
        for (std::uint64_t val = 0; val < (std::uint64_t{1} << len); ++val) {
          const Word u = Word::from_value(val, len);
          const std::string tag =
              "p=" + std::to_string(p) + " m=" + std::to_string(m) + " u=" + u.str();
          BWitness w;
          try {
            w = find_b_witness(test, p, m, u);
          } catch (const search_exhausted&) {
            return fail('b', tag + " no witness");
          }
          const Word s = base.s + "0"_w + u + w.v;
          const Word t = base.t + "1"_w + u + w.v;
          bool found = false;
          for (const NodePair& np : test.entries(w.level)) found = found || (np.s == s && np.t == t);
          if (!found || s.size() != w.level || phi(w.level - 1).first != m) {
            return fail('b', tag + " v=" + w.v.str() + " level=" + std::to_string(w.level));
          }
          ++rep.b_checked;
        }
      }
    }
  }
  return rep;
}

bool prefix_in_T(const Word& s, const Word& t, const Test& test) {
  if (s.size() != t.size()) throw precondition_error("prefix_in_T: words of unequal length");
  if (s.empty()) return true;
  return decomposition(s, t, test).has_value();
}

std::vector<NodePair> level_slice(const Test& test, std::uint64_t p) {
  if (p > 24) throw resource_limit("level slice beyond p=24");
  std::vector<NodePair> out;
  if (p == 0) {
    out.push_back({});
    return out;
  }
  for (std::uint64_t q = 0; q < p; ++q) {
    const std::uint64_t free = p - q - 1;
    for (const NodePair& np : test.entries(q)) {
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << free); ++v) {
        const Word w = Word::from_value(v, free);
        out.push_back({np.s + "0"_w + w, np.t + "1"_w + w});
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LevelGraph level_graph(const Test& test, std::uint64_t p) {
  LevelGraph g;
  g.level = p;
  g.graph.left = g.graph.right = std::size_t{1} << p;
  for (const NodePair& np : level_slice(test, p)) {
    g.graph.edges.push_back({static_cast<std::uint32_t>(np.s.value()), static_cast<std::uint32_t>(np.t.value())});
  }
  return g;
}

std::optional<Edge> cycle_edge(const BipartiteGraph& g) {
  const std::size_t n = g.left + g.right;
  std::vector<std::size_t> rank(n), parent(n);
  boost::disjoint_sets<std::size_t*, std::size_t*> sets(rank.data(), parent.data());
  for (std::size_t i = 0; i < n; ++i) sets.make_set(i);
  std::vector<Edge> edges = g.edges;
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (const Edge& e : edges) {
    const std::size_t a = sets.find_set(e.left);
    const std::size_t b = sets.find_set(g.left + e.right);
    if (a == b) return e;
    sets.link(a, b);
  }
  return std::nullopt;
}

bool is_acyclic(const BipartiteGraph& g) { return !cycle_edge(g).has_value(); }

std::optional<Rectangle> find_rectangle(std::span<const NodePair> slice) {
  std::map<Word, std::vector<Word>> rows_of;  // column -> rows
  for (const NodePair& np : slice) rows_of[np.t].push_back(np.s);
  std::map<std::pair<Word, Word>, Word> seen;  // row pair -> first column
  for (auto& [col, rows] : rows_of) {
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = i + 1; j < rows.size(); ++j) {
        auto [it, fresh] = seen.emplace(std::make_pair(rows[i], rows[j]), col);
        if (!fresh) return Rectangle{rows[i], rows[j], it->second, col};
      }
    }
  }
  return std::nullopt;
}

bool rectangle_free(std::span<const NodePair> slice) { return !find_rectangle(slice).has_value(); }

bool rectangle_free(const Test& test, std::uint64_t p) {
  const auto slice = level_slice(test, p);
  return rectangle_free(slice);
}

void write_dot(std::ostream& out, const LevelGraph& g) {
  const auto p = static_cast<std::size_t>(g.level);
  auto name = [p](char side, std::uint32_t v) {
    return std::string("\"") + side + "_" + Word::from_value(v, p).str() + "\"";
  };
  out << "graph level_" << g.level << " {\n";
  for (std::size_t v = 0; v < g.graph.left; ++v) out << "  " << name('L', static_cast<std::uint32_t>(v)) << ";\n";
  for (std::size_t v = 0; v < g.graph.right; ++v) out << "  " << name('R', static_cast<std::uint32_t>(v)) << ";\n";
  std::vector<Edge> edges = g.graph.edges;
  std::sort(edges.begin(), edges.end());
  for (const Edge& e : edges) out << "  " << name('L', e.left) << " -- " << name('R', e.right) << ";\n";
  out << "}\n";
}

bool branch_member(const EvConstSeq& alpha, const EvConstSeq& beta, const Test& test) {
  if (alpha.tail() != beta.tail()) {
    throw undecided_error("branch membership with unequal tails is undecided");
  }
  // past N both sides append equal bits, and T is closed under that
  const std::uint64_t n = std::max(alpha.prefix().size(), beta.prefix().size()) + 1;
  for (std::uint64_t r = 0; r <= n; ++r) {
    if (!prefix_in_T(alpha.take(r), beta.take(r), test)) return false;
  }
  return true;
}

}  // namespace dstk
