#include "dstk/selector.hpp"

#include <algorithm>
#include <deque>

#include "dstk/errors.hpp"

namespace dstk {

SelectorInstance SelectorInstance::make(std::size_t f0, std::size_t f1, std::size_t x0, std::size_t x1,
                                        std::vector<Edge> edges, SetMap psi) {
  if (x0 == 0 || x1 == 0 || x0 * x1 > 64) throw precondition_error("point space must have 1..64 points");
  if (psi.size() != f0 * f1) throw precondition_error("psi must cover F0 x F1");
  const PointSet all = x0 * x1 == 64 ? ~PointSet{0} : (PointSet{1} << (x0 * x1)) - 1;
  for (PointSet s : psi) {
    if (s & ~all) throw precondition_error("psi names points outside X0 x X1");
  }
  std::vector<Edge> sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw precondition_error("repeated edge");
  for (const Edge& e : edges) {
    if (e.left >= f0 || e.right >= f1) throw precondition_error("edge outside F0 x F1");
  }
  if (!is_acyclic(BipartiteGraph{f0, f1, edges})) throw precondition_error("edge set is not acyclic");
  return SelectorInstance{f0, f1, x0, x1, std::move(edges), std::move(psi)};
}

bool SelectorInstance::has_edge(Edge e) const { return std::find(edges.begin(), edges.end(), e) != edges.end(); }

std::optional<Edge> selector_violation(const SelectorInstance& inst, const SetMap& map, const PiSelector& sel) {
  for (const Edge& e : inst.edges) {
    if (!inst.contains(map, e, sel.at(e))) return e;
  }
  return std::nullopt;
}

bool is_pi_selector(const SelectorInstance& inst, const SetMap& map, const PiSelector& sel) {
  if (sel.psi0.size() != inst.f0 || sel.psi1.size() != inst.f1) return false;
  for (auto v : sel.psi0) {
    if (v >= inst.x0) return false;
  }
  for (auto v : sel.psi1) {
    if (v >= inst.x1) return false;
  }
  return !selector_violation(inst, map, sel).has_value();
}

std::optional<PiSelector> find_selector(const SelectorInstance& inst, const SetMap& map, std::optional<Pin> pin) {
  if (pin && pin->value >= (pin->side == 0 ? inst.x0 : inst.x1)) return std::nullopt;
  // Enumerate psi0 in lexicographic order; each F1 vertex is then an independent choice.
  std::vector<std::vector<Edge>> at_right(inst.f1);
  for (const Edge& e : inst.edges) at_right[e.right].push_back(e);
  PiSelector sel{std::vector<std::uint32_t>(inst.f0, 0), std::vector<std::uint32_t>(inst.f1, 0)};
  auto fixed0 = [&](std::size_t v) { return pin && pin->side == 0 && pin->vertex == v; };
  for (std::size_t v = 0; v < inst.f0; ++v) {
    if (fixed0(v)) sel.psi0[v] = pin->value;
  }
  for (;;) {
    bool ok = true;
    for (std::size_t r = 0; r < inst.f1 && ok; ++r) {
      bool found = false;
      for (std::uint32_t val = 0; val < inst.x1 && !found; ++val) {
        if (pin && pin->side == 1 && pin->vertex == r && pin->value != val) continue;
        found = std::all_of(at_right[r].begin(), at_right[r].end(),
                            [&](const Edge& e) { return inst.contains(map, e, {sel.psi0[e.left], val}); });
        if (found) sel.psi1[r] = val;
      }
      ok = found;
    }
    if (ok) return sel;
    // next psi0, odometer with the last vertex fastest
    std::size_t v = inst.f0;
    for (;;) {
      if (v == 0) return std::nullopt;
      --v;
      if (fixed0(v)) continue;
      if (++sel.psi0[v] < inst.x0) break;
      sel.psi0[v] = 0;
    }
  }
}

std::optional<std::vector<TaggedVertex>> unique_path(const SelectorInstance& inst, TaggedVertex from,
                                                     TaggedVertex to) {
  const std::size_t n = inst.f0 + inst.f1;
  auto id = [&](TaggedVertex t) { return t.side == 0 ? t.index : inst.f0 + t.index; };
  auto vertex = [&](std::size_t i) {
    return i < inst.f0 ? TaggedVertex{0, static_cast<std::uint32_t>(i)}
                       : TaggedVertex{1, static_cast<std::uint32_t>(i - inst.f0)};
  };
  std::vector<std::vector<std::size_t>> adj(n);
  for (const Edge& e : inst.edges) {
    adj[e.left].push_back(inst.f0 + e.right);
    adj[inst.f0 + e.right].push_back(e.left);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  const std::size_t kNone = n;
  std::vector<std::size_t> prev(n, kNone);
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue{id(from)};
  seen[id(from)] = true;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    if (u == id(to)) break;
    for (std::size_t w : adj[u]) {
      if (!seen[w]) {
        seen[w] = true;
        prev[w] = u;
        queue.push_back(w);
      }
    }
  }
  if (!seen[id(to)]) return std::nullopt;
  std::vector<TaggedVertex> path;
  for (std::size_t u = id(to); u != kNone; u = prev[u]) path.push_back(vertex(u));
  std::reverse(path.begin(), path.end());
  return path;
}

NHV partition_nhv(const SelectorInstance& inst, Edge t0) {
  if (!inst.has_edge(t0)) throw precondition_error("t0 is not an edge");
  NHV out;
  const TaggedVertex f0{0, t0.left};
  const TaggedVertex f1{1, t0.right};
  for (std::uint32_t a = 0; a < inst.f0; ++a) {
    for (std::uint32_t b = 0; b < inst.f1; ++b) {
      const Edge e{a, b};
      if (e == t0) continue;
      if (!inst.has_edge(e)) {
        out.n.push_back(e);
      } else if (a == t0.left) {
        out.v.push_back(e);
      } else {
        auto path = unique_path(inst, {0, a}, f0);
        if (!path) {
          out.n.push_back(e);
        } else if ((*path)[path->size() - 2] == f1) {
          out.h.push_back(e);
        } else {
          out.v.push_back(e);
        }
      }
    }
  }
  return out;
}

PiSelector blend(const SelectorInstance& inst, Edge t0, const SetMap& phi, const PiSelector& psi_a,
                 const PiSelector& psi_b, Point x) {
  if (!inst.has_edge(t0)) throw precondition_error("blend: t0 is not an edge");
  if (x.x0 >= inst.x0 || x.x1 >= inst.x1 || !inst.contains(inst.psi, t0, x)) {
    throw precondition_error("blend: x is not a point of psi(t0)");
  }
  for (const Edge& e : inst.edges) {
    if (!(e == t0) && phi[inst.index(e)] != inst.psi[inst.index(e)]) {
      throw precondition_error("blend: phi differs from psi off t0");
    }
  }
  if (!is_pi_selector(inst, phi, psi_a)) throw precondition_error("blend: first selector is not a selector for phi");
  if (!is_pi_selector(inst, phi, psi_b)) throw precondition_error("blend: second selector is not a selector for phi");
  if (psi_a.psi0[t0.left] != x.x0 || psi_b.psi1[t0.right] != x.x1) {
    throw precondition_error("blend: selectors are not anchored at x");
  }

  const NHV parts = partition_nhv(inst, t0);
  std::vector<bool> h0(inst.f0, false), h1(inst.f1, false);
  for (const Edge& e : parts.h) {
    h0[e.left] = true;
    h1[e.right] = true;
  }
  PiSelector out{std::vector<std::uint32_t>(inst.f0), std::vector<std::uint32_t>(inst.f1)};
  for (std::uint32_t a = 0; a < inst.f0; ++a) {
    out.psi0[a] = a == t0.left ? x.x0 : h0[a] ? psi_b.psi0[a] : psi_a.psi0[a];
  }
  for (std::uint32_t b = 0; b < inst.f1; ++b) {
    out.psi1[b] = b == t0.right ? x.x1 : h1[b] ? psi_b.psi1[b] : psi_a.psi1[b];
  }

  if (!(out.at(t0) == x)) throw std::logic_error("blend produced a wrong value at t0");
  for (const Edge& e : inst.edges) {
    if (!(e == t0) && !inst.contains(phi, e, out.at(e))) throw std::logic_error("blend produced an invalid selector");
  }
  return out;
}

std::string to_string(LiftFailure f) {
  switch (f) {
    case LiftFailure::none:
      return "none";
    case LiftFailure::no_base_selector:
      return "no base selector";
    case LiftFailure::separation_surrogate_failed:
      return "separation surrogate failed";
  }
  return "?";
}

LiftResult lift_selector(const SelectorInstance& inst, const SetMap& phi_bar, const std::optional<PiSelector>& base) {
  if (phi_bar.size() != inst.psi.size()) throw precondition_error("phi_bar must cover F0 x F1");
  for (const Edge& e : inst.edges) {
    if (inst.psi[inst.index(e)] & ~phi_bar[inst.index(e)]) throw precondition_error("psi(t) not inside phi_bar(t)");
  }
  LiftResult res;
  std::optional<PiSelector> cur = base;
  if (cur) {
    if (!is_pi_selector(inst, phi_bar, *cur)) throw precondition_error("base is not a selector for phi_bar");
  } else {
    cur = find_selector(inst, phi_bar);
  }
  if (!cur) {
    res.failure = LiftFailure::no_base_selector;
    return res;
  }

  SetMap stage = phi_bar;
  for (std::size_t j = 0; j < inst.edges.size(); ++j) {
    const Edge t = inst.edges[j];
    SetMap next = stage;
    next[inst.index(t)] = inst.psi[inst.index(t)];
    if (inst.contains(next, t, cur->at(t))) {
      stage = std::move(next);
      continue;
    }
    std::vector<bool> u0(inst.x0), u1(inst.x1);
    for (std::uint32_t v = 0; v < inst.x0; ++v) u0[v] = find_selector(inst, stage, Pin{0, t.left, v}).has_value();
    for (std::uint32_t v = 0; v < inst.x1; ++v) u1[v] = find_selector(inst, stage, Pin{1, t.right, v}).has_value();
    std::optional<Point> x;
    for (std::uint32_t a = 0; a < inst.x0 && !x; ++a) {
      for (std::uint32_t b = 0; b < inst.x1 && !x; ++b) {
        if (u0[a] && u1[b] && inst.contains(next, t, {a, b})) x = Point{a, b};
      }
    }
    if (!x) {
      res.failure = LiftFailure::separation_surrogate_failed;
      res.stage = j;
      return res;
    }
    const PiSelector psi_a = *find_selector(inst, stage, Pin{0, t.left, x->x0});
    const PiSelector psi_b = *find_selector(inst, stage, Pin{1, t.right, x->x1});
    SelectorInstance target = inst;
    target.psi = next;
    cur = blend(target, t, stage, psi_a, psi_b, *x);
    ++res.blends;
    stage = std::move(next);
  }
  if (!is_pi_selector(inst, inst.psi, *cur)) throw std::logic_error("lift produced an invalid selector");
  res.selector = cur;
  return res;
}

}  // namespace dstk
