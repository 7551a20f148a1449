#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dstk/codings.hpp"
#include "dstk/word.hpp"

namespace dstk {

// A per-level selection q -> (s_q, t_q).  Either the canonical recursive test
// (levels computed on demand) or a foreign test given by explicit entries.
class Test {
 public:
  // Largest level that may be materialized as explicit words.
  static constexpr std::uint64_t kMaxLevelLength = std::uint64_t{1} << 24;

  static Test canonical();
  static Test from_entries(const std::vector<std::pair<std::uint64_t, NodePair>>& entries);
  // Lines "q<TAB>s<TAB>t", "-" for the empty word.
  static Test load(std::istream& in);
  void save(std::ostream& out, std::uint64_t max_q) const;

  bool is_canonical() const;
  // Highest level present in a foreign test; empty for the canonical one.
  std::optional<std::uint64_t> depth() const;

  std::vector<NodePair> entries(std::uint64_t q) const;
  // The unique pair at level q; throws precondition_error when absent or ambiguous.
  const NodePair& level(std::uint64_t q) const;
  void materialize(std::uint64_t max_q) const;

  // Coordinate access for the canonical test without storing the level.
  int s_bit(std::uint64_t q, std::uint64_t i) const;
  int t_bit(std::uint64_t q, std::uint64_t i) const;

 private:
  struct Impl;
  explicit Test(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<Impl> impl_;
};

// Canonical test with levels 0..max_q stored.
Test build_test(std::uint64_t max_q);

// Parent level and inserted index used by the canonical recurrence at level q >= 1:
// with r = (q-1)_1, parent = (r)_0 and n = (r)_1.
struct LevelRecipe {
  std::uint64_t parent = 0;
  std::uint64_t n = 0;
};
LevelRecipe level_recipe(std::uint64_t q);

struct BBounds {
  std::uint64_t p_max = 3;
  std::uint64_t m_max = 3;
  std::uint64_t u_len_max = 3;
};

struct TestCheckReport {
  bool ok = true;
  char clause = 0;  // 'a', 'b' or 'c' when !ok
  std::string witness;
  std::uint64_t levels_checked = 0;
  std::uint64_t b_checked = 0;
};

TestCheckReport check_def31(const Test& test, std::uint64_t max_q, const BBounds& bounds);

struct BWitness {
  Word v;
  std::uint64_t level = 0;  // level holding (s_p 0 u v, t_p 1 u v)
};

// Canonical test: closed form.  Foreign test: search over the levels present.
// Throws search_exhausted (foreign) or std::overflow_error / resource_limit (arithmetic).
BWitness find_b_witness(const Test& test, std::uint64_t p, std::uint64_t m, const Word& u);
Word witness_b(const Test& test, std::uint64_t p, std::uint64_t m, const Word& u);

bool prefix_in_T(const Word& s, const Word& t, const Test& test);

std::vector<NodePair> level_slice(const Test& test, std::uint64_t p);

struct Edge {
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct BipartiteGraph {
  std::size_t left = 0;
  std::size_t right = 0;
  std::vector<Edge> edges;
};

// Vertices are the words of length `level`, numbered by their binary value.
struct LevelGraph {
  std::uint64_t level = 0;
  BipartiteGraph graph;
};

LevelGraph level_graph(const Test& test, std::uint64_t p);

bool is_acyclic(const BipartiteGraph& g);
inline bool is_acyclic(const LevelGraph& g) { return is_acyclic(g.graph); }
// First edge (in sorted order) closing a cycle.
std::optional<Edge> cycle_edge(const BipartiteGraph& g);

struct Rectangle {
  Word e0, e0b, e1, e1b;
};
std::optional<Rectangle> find_rectangle(std::span<const NodePair> slice);
bool rectangle_free(std::span<const NodePair> slice);
bool rectangle_free(const Test& test, std::uint64_t p);

void write_dot(std::ostream& out, const LevelGraph& g);

// Equal tails only; unequal tails throw undecided_error.
bool branch_member(const EvConstSeq& alpha, const EvConstSeq& beta, const Test& test);

}  // namespace dstk
