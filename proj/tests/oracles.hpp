#pragma once

// Independent reference implementations used by the tests.  They deliberately
// avoid the library: plain strings, linear scans, brute force.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

// Diagonal enumeration by walking: (0,0),(1,0),(0,1),(2,0),(1,1),(0,2),...
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> phi_table(std::uint64_t count) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (std::uint64_t d = 0; out.size() < count; ++d)
    for (std::uint64_t p = 0; p <= d && out.size() < count; ++p) out.emplace_back(d - p, p);
  return out;
}

// Words by length, then lexicographically.
inline std::vector<std::string> psi_table(std::uint64_t count) {
  std::vector<std::string> out{""};
  for (std::size_t start = 0; out.size() < count; ++start) {
    const std::string w = out[start];
    out.push_back(w + "0");
    out.push_back(w + "1");
  }
  out.resize(count);
  return out;
}

inline std::uint64_t pair_by_scan(std::uint64_t n, std::uint64_t p) {
  std::uint64_t sum = 0;
  for (std::uint64_t k = 0; k <= n + p; ++k) sum += k;
  return sum + p;
}

// The canonical test, levels 0..max_q, straight from the recurrence on strings.
inline std::vector<std::pair<std::string, std::string>> test_levels(std::uint64_t max_q) {
  const auto phis = phi_table(max_q + 1);
  const auto words = psi_table(max_q + 1);
  std::vector<std::pair<std::string, std::string>> lv{{"", ""}};
  for (std::uint64_t q = 1; q <= max_q; ++q) {
    const std::uint64_t r = phis[q - 1].second;
    const auto [parent, n] = phis[r];
    const std::string& mid = words[n];
    const std::size_t used = lv[parent].first.size() + 1 + mid.size();
    const std::string pad(q - used, '0');
    lv.emplace_back(lv[parent].first + "0" + mid + pad, lv[parent].second + "1" + mid + pad);
  }
  return lv;
}

// First coordinate of the diagonal enumeration at q, by scanning diagonals.
inline std::pair<std::uint64_t, std::uint64_t> unpair_by_scan(std::uint64_t q) {
  std::uint64_t d = 0, start = 0;
  while (start + d + 1 <= q) {
    start += d + 1;
    ++d;
  }
  const std::uint64_t p = q - start;
  return {d - p, p};
}

inline std::string psi_word(std::uint64_t n) {
  std::uint64_t len = 0;
  while ((std::uint64_t{2} << len) - 1 <= n) ++len;
  const std::uint64_t val = n - ((std::uint64_t{1} << len) - 1);
  std::string w;
  for (std::uint64_t i = 0; i < len; ++i) w += ((val >> (len - 1 - i)) & 1U) ? '1' : '0';
  return w;
}

// A single level of the canonical test, following parents only.
inline std::pair<std::string, std::string> level_of(std::uint64_t q,
                                                    std::map<std::uint64_t, std::pair<std::string, std::string>>& memo) {
  if (q == 0) return {"", ""};
  if (auto it = memo.find(q); it != memo.end()) return it->second;
  const std::uint64_t r = unpair_by_scan(q - 1).second;
  const auto [parent, n] = unpair_by_scan(r);
  const auto base = level_of(parent, memo);
  const std::string mid = psi_word(n);
  const std::string pad(q - parent - 1 - mid.size(), '0');
  auto out = std::make_pair(base.first + "0" + mid + pad, base.second + "1" + mid + pad);
  memo[q] = out;
  return out;
}

inline bool in_tree(const std::string& s, const std::string& t,
                    const std::vector<std::pair<std::string, std::string>>& lv) {
  if (s.empty() && t.empty()) return true;
  for (std::size_t q = 0; q < s.size() && q < lv.size(); ++q) {
    const std::string w = s.substr(q + 1);
    if (s == lv[q].first + "0" + w && t == lv[q].second + "1" + w) return true;
  }
  return false;
}

inline std::set<std::pair<std::string, std::string>> slice(std::uint64_t p,
                                                            const std::vector<std::pair<std::string, std::string>>& lv) {
  std::set<std::pair<std::string, std::string>> out;
  if (p == 0) {
    out.emplace("", "");
    return out;
  }
  for (std::uint64_t q = 0; q < p; ++q) {
    const std::uint64_t wl = p - q - 1;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << wl); ++x) {
      std::string w;
      for (std::uint64_t i = 0; i < wl; ++i) w += ((x >> (wl - 1 - i)) & 1U) ? '1' : '0';
      out.emplace(lv[q].first + "0" + w, lv[q].second + "1" + w);
    }
  }
  return out;
}

// Cycle check on a bipartite edge list by repeatedly deleting leaves.
inline bool acyclic_by_pruning(std::size_t left, std::size_t right,
                               const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::multiset<std::size_t>> adj(left + right);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto [a, b] : edges) {
    if (!seen.emplace(a, b).second) continue;  // edge set, repeats collapse
    adj[a].insert(left + b);
    adj[left + b].insert(a);
  }
  std::vector<std::size_t> stack;
  for (std::size_t v = 0; v < adj.size(); ++v)
    if (adj[v].size() == 1) stack.push_back(v);
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (adj[v].size() != 1) continue;
    const std::size_t u = *adj[v].begin();
    adj[v].clear();
    adj[u].erase(adj[u].find(v));
    if (adj[u].size() == 1) stack.push_back(u);
  }
  for (const auto& a : adj)
    if (!a.empty()) return false;
  return true;
}

inline bool rectangle_free(const std::set<std::pair<std::string, std::string>>& sl) {
  for (const auto& [a, b] : sl)
    for (const auto& [c, d] : sl)
      if (a != c && b != d && sl.count({a, d}) && sl.count({c, b})) return false;
  return true;
}

// Eventually constant sequence as prefix + tail.
struct Seq {
  std::string prefix;
  int tail = 0;
  int at(std::uint64_t i) const { return i < prefix.size() ? prefix[i] - '0' : tail; }
};

// rho0(e)(i) = 1 iff e(<i,j>) = 0 for all j; j scanned far past the prefix.
inline int rho0_brute(const Seq& e, std::uint64_t i, std::uint64_t j_max) {
  for (std::uint64_t j = 0; j < j_max; ++j)
    if (e.at((i + j) * (i + j + 1) / 2 + j) == 1) return 0;
  return 1;
}

inline std::uint64_t tri(std::uint64_t i) { return i * (i + 1) / 2; }

// Whole sequence rho0(e): past index i with tri(i) >= |prefix| every queried position is in the tail.
inline Seq rho0_seq(const Seq& e) {
  const std::uint64_t len = e.prefix.size();
  std::uint64_t cut = 0;
  while (tri(cut) < len) ++cut;
  Seq out;
  for (std::uint64_t i = 0; i < cut; ++i) out.prefix += static_cast<char>('0' + rho0_brute(e, i, len + 1));
  out.tail = 1 - e.tail;
  return out;
}

inline Seq rho0_iter(std::uint64_t n, Seq e) {
  for (std::uint64_t k = 0; k < n; ++k) e = rho0_seq(e);
  return e;
}

// Coordinates k < count of rho0^omega with fundamental sequence xi(k), from the staged maps.
inline std::string rho0_omega_prefix(const Seq& e, const std::function<std::uint64_t(std::uint64_t)>& xi,
                                     std::uint64_t count) {
  std::string out;
  Seq cur = e;  // rho0^{(0,k)}(e)
  for (std::uint64_t k = 0; k < count; ++k) {
    // stage (k,k+1): keep the first k coordinates, apply rho0^{xi_k} to the k-th shift
    Seq sh;
    sh.tail = cur.tail;
    sh.prefix = k < cur.prefix.size() ? cur.prefix.substr(k) : "";
    const Seq img = rho0_iter(xi(k), sh);
    Seq next;
    for (std::uint64_t i = 0; i < k; ++i) next.prefix += static_cast<char>('0' + cur.at(i));
    next.prefix += img.prefix;
    next.tail = img.tail;
    cur = next;
    out += static_cast<char>('0' + cur.at(k));
  }
  return out;
}

inline Seq random_seq(std::mt19937_64& rng, std::size_t max_prefix, int tail = -1) {
  Seq s;
  const std::size_t len = std::uniform_int_distribution<std::size_t>(0, max_prefix)(rng);
  for (std::size_t i = 0; i < len; ++i) s.prefix += (rng() & 1U) ? '1' : '0';
  s.tail = tail >= 0 ? tail : static_cast<int>(rng() & 1U);
  return s;
}

inline std::string seq_literal(const Seq& s) { return std::to_string(s.tail) + ":" + (s.prefix.empty() ? "-" : s.prefix); }

// All words over {0,1} of length <= depth.
inline std::vector<std::string> binary_words(unsigned depth) {
  std::vector<std::string> out{""};
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].size() < depth) {
      out.push_back(out[i] + "0");
      out.push_back(out[i] + "1");
    }
  return out;
}

inline bool is_prefix(const std::string& a, const std::string& b) {
  return a.size() <= b.size() && b.compare(0, a.size(), a) == 0;
}

inline int ones(const std::string& w) {
  int c = 0;
  for (char ch : w) c += ch == '1';
  return c;
}

}  // namespace oracle
