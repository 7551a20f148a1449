#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dstk/testkit.hpp"

namespace dstk {

// Subset of X0 x X1 as a bit mask; point (x0, x1) is bit x0 * |X1| + x1.
using PointSet = std::uint64_t;
// Map F0 x F1 -> subsets of X0 x X1, indexed f0 * |F1| + f1.
using SetMap = std::vector<PointSet>;

struct Point {
  std::uint32_t x0 = 0;
  std::uint32_t x1 = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct TaggedVertex {
  int side = 0;  // 0: F0, 1: F1
  std::uint32_t index = 0;
  friend bool operator==(const TaggedVertex&, const TaggedVertex&) = default;
  friend auto operator<=>(const TaggedVertex&, const TaggedVertex&) = default;
};

struct SelectorInstance {
  std::size_t f0 = 0;
  std::size_t f1 = 0;
  std::size_t x0 = 0;
  std::size_t x1 = 0;
  std::vector<Edge> edges;  // the edge set, in enumeration order
  SetMap psi;

  // Validates sizes and acyclicity.
  static SelectorInstance make(std::size_t f0, std::size_t f1, std::size_t x0, std::size_t x1,
                               std::vector<Edge> edges, SetMap psi);

  std::size_t index(Edge e) const { return e.left * f1 + e.right; }
  std::size_t bit(Point x) const { return x.x0 * x1 + x.x1; }
  bool has_edge(Edge e) const;
  bool contains(const SetMap& map, Edge e, Point x) const { return (map[index(e)] >> bit(x)) & 1U; }
};

struct PiSelector {
  std::vector<std::uint32_t> psi0;
  std::vector<std::uint32_t> psi1;
  Point at(Edge e) const { return {psi0[e.left], psi1[e.right]}; }
  friend bool operator==(const PiSelector&, const PiSelector&) = default;
};

// First edge t (in enumeration order) with sel(t) outside map(t).
std::optional<Edge> selector_violation(const SelectorInstance& inst, const SetMap& map, const PiSelector& sel);
bool is_pi_selector(const SelectorInstance& inst, const SetMap& map, const PiSelector& sel);

struct Pin {
  int side = 0;
  std::uint32_t vertex = 0;
  std::uint32_t value = 0;
};

// Least selector for `map` in lexicographic order (psi0, then psi1), optionally with one pinned value.
std::optional<PiSelector> find_selector(const SelectorInstance& inst, const SetMap& map,
                                        std::optional<Pin> pin = std::nullopt);

std::optional<std::vector<TaggedVertex>> unique_path(const SelectorInstance& inst, TaggedVertex from,
                                                     TaggedVertex to);

struct NHV {
  std::vector<Edge> n;
  std::vector<Edge> h;
  std::vector<Edge> v;
};

NHV partition_nhv(const SelectorInstance& inst, Edge t0);

// The blended selector for target map inst.psi out of two selectors for phi.
PiSelector blend(const SelectorInstance& inst, Edge t0, const SetMap& phi, const PiSelector& psi_a,
                 const PiSelector& psi_b, Point x);

enum class LiftFailure { none, no_base_selector, separation_surrogate_failed };

struct LiftResult {
  std::optional<PiSelector> selector;
  LiftFailure failure = LiftFailure::none;
  std::size_t stage = 0;
  std::size_t blends = 0;
};

std::string to_string(LiftFailure f);

LiftResult lift_selector(const SelectorInstance& inst, const SetMap& phi_bar,
                         const std::optional<PiSelector>& base = std::nullopt);

}  // namespace dstk
