#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "dstk/errors.hpp"
#include "dstk/selector.hpp"
#include "generators.hpp"

using namespace dstk;

namespace {

// the level-2 slice {(00,10),(01,11),(00,11)} with words numbered by value
const std::vector<Edge> kT2{{0, 2}, {1, 3}, {0, 3}};

SelectorInstance t2_instance(SetMap psi, std::size_t x = 2) {
  return SelectorInstance::make(4, 4, x, x, kT2, std::move(psi));
}

PointSet point(const SelectorInstance& inst, std::uint32_t a, std::uint32_t b) { return PointSet{1} << inst.bit({a, b}); }

// Plain enumeration of all product maps.
bool brute_has_selector(const SelectorInstance& inst, const SetMap& map) {
  std::vector<std::uint32_t> p0(inst.f0, 0), p1(inst.f1, 0);
  std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
    if (k == inst.f0 + inst.f1) {
      for (const auto& e : inst.edges)
        if (!((map[inst.index(e)] >> inst.bit({p0[e.left], p1[e.right]})) & 1U)) return false;
      return true;
    }
    const std::size_t lim = k < inst.f0 ? inst.x0 : inst.x1;
    for (std::uint32_t v = 0; v < lim; ++v) {
      (k < inst.f0 ? p0[k] : p1[k - inst.f0]) = v;
      if (rec(k + 1)) return true;
    }
    return false;
  };
  return rec(0);
}

// All simple paths between two vertices.
std::size_t count_simple_paths(const SelectorInstance& inst, TaggedVertex a, TaggedVertex b) {
  std::size_t count = 0;
  std::set<TaggedVertex> on;
  std::function<void(TaggedVertex)> dfs = [&](TaggedVertex v) {
    if (v == b) {
      ++count;
      return;
    }
    on.insert(v);
    for (const auto& e : inst.edges) {
      TaggedVertex w;
      if (v.side == 0 && e.left == v.index) w = {1, e.right};
      else if (v.side == 1 && e.right == v.index) w = {0, e.left};
      else continue;
      if (!on.count(w)) dfs(w);
    }
    on.erase(v);
  };
  dfs(a);
  return count;
}

}  // namespace

TEST(Instance, Validation) {
  EXPECT_THROW(SelectorInstance::make(2, 2, 1, 1, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, SetMap(4, 1)), precondition_error);
  EXPECT_THROW(SelectorInstance::make(2, 2, 1, 1, {{0, 0}, {0, 0}}, SetMap(4, 1)), precondition_error);
  EXPECT_THROW(SelectorInstance::make(2, 2, 1, 1, {{0, 2}}, SetMap(4, 1)), precondition_error);
  EXPECT_THROW(SelectorInstance::make(2, 2, 1, 1, {{0, 0}}, SetMap(3, 1)), precondition_error);
  EXPECT_NO_THROW(t2_instance(SetMap(16, 15)));
}

TEST(UniquePath, Examples) {
  const auto inst = t2_instance(SetMap(16, 15));
  const auto self = unique_path(inst, {0, 1}, {0, 1});
  ASSERT_TRUE(self);
  EXPECT_EQ(self->size(), 1U);
  const auto p = unique_path(inst, {0, 1}, {0, 0});
  ASSERT_TRUE(p);
  EXPECT_EQ(*p, (std::vector<TaggedVertex>{{0, 1}, {1, 3}, {0, 0}}));
  EXPECT_FALSE(unique_path(inst, {0, 2}, {0, 0}));
}

TEST(UniquePath, AgreesWithExhaustiveEnumeration) {
  std::mt19937_64 rng(1);
  for (int iter = 0; iter < 300; ++iter) {
    const auto c = gen::random_case(rng, 5, 2);
    for (std::uint32_t a = 0; a < c.inst.f0; ++a)
      for (std::uint32_t b = 0; b < c.inst.f1; ++b) {
        const TaggedVertex from{0, a}, to{1, b};
        const auto n = count_simple_paths(c.inst, from, to);
        ASSERT_LE(n, 1U);
        const auto p = unique_path(c.inst, from, to);
        ASSERT_EQ(p.has_value(), n == 1);
        if (p) {
          for (std::size_t i = 0; i + 1 < p->size(); ++i) {
            const auto& u = (*p)[i];
            const auto& w = (*p)[i + 1];
            ASSERT_NE(u.side, w.side);
            const Edge e = u.side == 0 ? Edge{u.index, w.index} : Edge{w.index, u.index};
            ASSERT_TRUE(c.inst.has_edge(e));
          }
        }
      }
  }
}

TEST(Partition, Examples) {
  const auto single = SelectorInstance::make(3, 3, 1, 1, {{1, 2}}, SetMap(9, 1));
  const auto a = partition_nhv(single, {1, 2});
  EXPECT_TRUE(a.h.empty());
  EXPECT_TRUE(a.v.empty());
  EXPECT_EQ(a.n.size(), 8U);

  const auto inst = t2_instance(SetMap(16, 15));
  const auto p = partition_nhv(inst, {0, 3});
  EXPECT_EQ(p.h, (std::vector<Edge>{{1, 3}}));
  EXPECT_EQ(p.v, (std::vector<Edge>{{0, 2}}));
  EXPECT_THROW(partition_nhv(inst, {1, 2}), precondition_error);
}

TEST(Partition, CoversAndSeparatesProjections) {
  std::mt19937_64 rng(2);
  for (int iter = 0; iter < 1000; ++iter) {
    const auto c = gen::random_case(rng, 6, 1);
    if (c.inst.edges.empty()) continue;
    const Edge t0 = c.inst.edges[gen::uniform(rng, 0, c.inst.edges.size() - 1)];
    const auto p = partition_nhv(c.inst, t0);
    std::set<Edge> all{t0};
    for (const auto* part : {&p.n, &p.h, &p.v})
      for (const auto& e : *part) ASSERT_TRUE(all.insert(e).second) << "overlap";
    ASSERT_EQ(all.size(), c.inst.f0 * c.inst.f1);
    for (const auto& e : p.h) ASSERT_TRUE(c.inst.has_edge(e));
    for (const auto& e : p.v) ASSERT_TRUE(c.inst.has_edge(e));
    std::set<std::uint32_t> h0, h1;
    for (const auto& e : p.h) {
      h0.insert(e.left);
      h1.insert(e.right);
    }
    for (const auto& e : p.v) {
      ASSERT_FALSE(h0.count(e.left));
      ASSERT_FALSE(h1.count(e.right));
    }
  }
}

TEST(Blend, HandBuiltExample) {
  SetMap phi(16, 0), psi(16, 0);
  auto probe = t2_instance(SetMap(16, 0));
  phi[probe.index({0, 3})] = 15;
  phi[probe.index({0, 2})] = point(probe, 0, 1);
  phi[probe.index({1, 3})] = point(probe, 1, 0);
  psi = phi;
  psi[probe.index({0, 3})] = point(probe, 0, 0);
  const auto inst = t2_instance(psi);
  const PiSelector a{{0, 1, 0, 0}, {0, 0, 1, 0}};
  const PiSelector b{{0, 1, 1, 1}, {1, 1, 1, 0}};
  ASSERT_TRUE(is_pi_selector(inst, phi, a));
  ASSERT_TRUE(is_pi_selector(inst, phi, b));
  const auto out = blend(inst, {0, 3}, phi, a, b, {0, 0});
  EXPECT_EQ(out.at({0, 3}), (Point{0, 0}));
  EXPECT_TRUE(is_pi_selector(inst, psi, out));

  const PiSelector bad{{1, 1, 0, 0}, {0, 0, 1, 0}};
  EXPECT_THROW(blend(inst, {0, 3}, phi, bad, b, {0, 0}), precondition_error);
  EXPECT_THROW(blend(inst, {0, 3}, phi, a, b, {1, 1}), precondition_error);
}

TEST(Blend, SingleEdge) {
  const auto inst = SelectorInstance::make(1, 1, 2, 2, {{0, 0}}, SetMap{0b1000});
  const auto out = blend(inst, {0, 0}, SetMap{0b1111}, PiSelector{{1}, {0}}, PiSelector{{0}, {1}}, {1, 1});
  EXPECT_EQ(out.at({0, 0}), (Point{1, 1}));
}

TEST(Blend, RandomInputsAlwaysValid) {
  std::mt19937_64 rng(7);
  int blended = 0;
  for (int iter = 0; iter < 1000; ++iter) {
    auto c = gen::random_case(rng, 5, 4);
    if (c.inst.edges.empty()) continue;
    const Edge t0 = c.inst.edges[gen::uniform(rng, 0, c.inst.edges.size() - 1)];
    const auto i0 = c.inst.index(t0);
    const PointSet target = c.inst.psi[i0];
    SetMap psi = c.phi_bar;
    psi[i0] = target;
    const auto inst = SelectorInstance::make(c.inst.f0, c.inst.f1, c.inst.x0, c.inst.x1, c.inst.edges, psi);
    for (std::uint32_t a = 0; a < inst.x0; ++a)
      for (std::uint32_t b = 0; b < inst.x1; ++b) {
        if (!((target >> inst.bit({a, b})) & 1U)) continue;
        const auto sa = find_selector(inst, c.phi_bar, Pin{0, t0.left, a});
        const auto sb = find_selector(inst, c.phi_bar, Pin{1, t0.right, b});
        if (!sa || !sb) continue;
        const auto out = blend(inst, t0, c.phi_bar, *sa, *sb, {a, b});
        ASSERT_TRUE(is_pi_selector(inst, psi, out));
        ++blended;
      }
  }
  EXPECT_GT(blended, 100);
}

TEST(FindSelector, AgreesWithBruteForce) {
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 400; ++iter) {
    const auto c = gen::random_case(rng, 4, 3);
    const auto s = find_selector(c.inst, c.inst.psi);
    ASSERT_EQ(s.has_value(), brute_has_selector(c.inst, c.inst.psi));
    if (s) { ASSERT_TRUE(is_pi_selector(c.inst, c.inst.psi, *s)); }
  }
}

TEST(Lift, IdentityClosureReturnsBase) {
  std::mt19937_64 rng(4);
  int checked = 0;
  for (int iter = 0; iter < 200; ++iter) {
    const auto c = gen::random_case(rng, 4, 3);
    const auto base = find_selector(c.inst, c.phi_bar);
    if (!base) continue;
    const auto inst = SelectorInstance::make(c.inst.f0, c.inst.f1, c.inst.x0, c.inst.x1, c.inst.edges, c.phi_bar);
    const auto res = lift_selector(inst, c.phi_bar, base);
    ASSERT_TRUE(res.selector);
    EXPECT_EQ(*res.selector, *base);
    EXPECT_EQ(res.blends, 0U);
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(Lift, NoBaseSelector) {
  const auto inst = SelectorInstance::make(1, 1, 1, 1, {{0, 0}}, SetMap{0});
  const auto res = lift_selector(inst, SetMap{0});
  EXPECT_FALSE(res.selector);
  EXPECT_EQ(res.failure, LiftFailure::no_base_selector);
  EXPECT_EQ(to_string(res.failure), "no base selector");
}

TEST(Lift, RejectsPsiOutsideClosure) {
  const auto inst = SelectorInstance::make(1, 1, 1, 2, {{0, 0}}, SetMap{0b11});
  EXPECT_THROW(lift_selector(inst, SetMap{0b01}), precondition_error);
}

TEST(Lift, NeverInvalidAndConsistentWithBruteForce) {
  std::mt19937_64 rng(5);
  int ok = 0, surrogate = 0, nobase = 0;
  for (int iter = 0; iter < 1000; ++iter) {
    const auto c = gen::random_case(rng, 4, 3);
    const auto res = lift_selector(c.inst, c.phi_bar);
    if (res.selector) {
      ASSERT_TRUE(is_pi_selector(c.inst, c.inst.psi, *res.selector));
      ++ok;
    } else if (res.failure == LiftFailure::no_base_selector) {
      ASSERT_FALSE(brute_has_selector(c.inst, c.phi_bar));
      ++nobase;
    } else {
      ASSERT_EQ(res.failure, LiftFailure::separation_surrogate_failed);
      ++surrogate;
    }
    // a Psi-selector found means a Phi_bar-selector exists
    if (brute_has_selector(c.inst, c.inst.psi)) { ASSERT_NE(res.failure, LiftFailure::no_base_selector); }
  }
  EXPECT_GT(ok, 100);
  RecordProperty("lift_ok", ok);
  RecordProperty("lift_surrogate", surrogate);
  RecordProperty("lift_nobase", nobase);
}
