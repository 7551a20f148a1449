#pragma once

#include <numeric>
#include <random>
#include <vector>

#include "dstk/selector.hpp"

namespace gen {

inline std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Random forest on F0 + F1: candidate edges in shuffled order, kept when they join two components.
inline std::vector<dstk::Edge> random_forest(std::mt19937_64& rng, std::size_t f0, std::size_t f1, double density) {
  std::vector<dstk::Edge> cand;
  for (std::uint32_t a = 0; a < f0; ++a)
    for (std::uint32_t b = 0; b < f1; ++b) cand.push_back({a, b});
  std::shuffle(cand.begin(), cand.end(), rng);
  std::vector<std::size_t> comp(f0 + f1);
  std::iota(comp.begin(), comp.end(), 0);
  auto root = [&](std::size_t v) {
    while (comp[v] != v) v = comp[v] = comp[comp[v]];
    return v;
  };
  std::bernoulli_distribution keep(density);
  std::vector<dstk::Edge> out;
  for (const auto& e : cand) {
    const auto ra = root(e.left), rb = root(f0 + e.right);
    if (ra == rb || !keep(rng)) continue;
    comp[ra] = rb;
    out.push_back(e);
  }
  return out;
}

inline dstk::PointSet random_subset(std::mt19937_64& rng, std::size_t points, double p) {
  std::bernoulli_distribution in(p);
  dstk::PointSet s = 0;
  for (std::size_t i = 0; i < points; ++i)
    if (in(rng)) s |= dstk::PointSet{1} << i;
  return s;
}

struct RandomCase {
  dstk::SelectorInstance inst;
  dstk::SetMap phi_bar;
};

// Psi(t) inside Phi_bar(t); both random, Phi_bar denser.
inline RandomCase random_case(std::mt19937_64& rng, std::size_t max_f, std::size_t max_x) {
  const std::size_t f0 = uniform(rng, 1, max_f), f1 = uniform(rng, 1, max_f);
  const std::size_t x0 = uniform(rng, 1, max_x), x1 = uniform(rng, 1, max_x);
  auto edges = random_forest(rng, f0, f1, 0.7);
  dstk::SetMap bar(f0 * f1, 0), psi(f0 * f1, 0);
  for (const auto& e : edges) {
    const auto i = e.left * f1 + e.right;
    bar[i] = random_subset(rng, x0 * x1, 0.75);
    psi[i] = bar[i] & random_subset(rng, x0 * x1, 0.6);
  }
  return {dstk::SelectorInstance::make(f0, f1, x0, x1, std::move(edges), std::move(psi)), std::move(bar)};
}

}  // namespace gen
