#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dstk {

// All words of length <= depth over the digits 0..alphabet-1, numbered in length-then-lex order.
class TruncTree {
 public:
  TruncTree(unsigned alphabet, unsigned depth);

  unsigned alphabet() const { return alphabet_; }
  unsigned depth() const { return depth_; }
  std::size_t size() const { return words_.size(); }
  const std::string& word(std::size_t i) const { return words_[i]; }
  std::optional<std::size_t> find(std::string_view w) const;
  std::size_t index(std::string_view w) const;
  // word(i) is a (non-strict) initial segment of word(j)
  bool extends(std::size_t i, std::size_t j) const;

 private:
  unsigned alphabet_;
  unsigned depth_;
  std::vector<std::string> words_;
  std::vector<std::size_t> level_start_;
};

// "-" stands for the empty word.
std::string word_literal(const std::string& w);
std::string parse_word_literal(std::string_view text);

class TreeRelation {
 public:
  explicit TreeRelation(std::shared_ptr<const TruncTree> tree);

  static TreeRelation from_predicate(std::shared_ptr<const TruncTree> tree,
                                     const std::function<bool(const std::string&, const std::string&)>& pred);
  // Non-strict extension order.
  static TreeRelation extension(std::shared_ptr<const TruncTree> tree);
  // s R t iff s is an initial segment of t and #1(s) is 0 or #1(t).
  static TreeRelation ones_relation(std::shared_ptr<const TruncTree> tree);
  // s R t iff s is an initial segment of t and t is in the prefix-closed set c_tree.
  static TreeRelation closed_set(std::shared_ptr<const TruncTree> tree, const std::set<std::string>& c_tree);
  // Lines "s<TAB>t".
  static TreeRelation load(std::istream& in, std::shared_ptr<const TruncTree> tree);
  void save(std::ostream& out) const;

  const TruncTree& tree() const { return *tree_; }
  const std::shared_ptr<const TruncTree>& tree_ptr() const { return tree_; }
  bool related(std::size_t s, std::size_t t) const { return (bits_[s * row_ + t / 64] >> (t % 64)) & 1U; }
  bool related(std::string_view s, std::string_view t) const { return related(tree_->index(s), tree_->index(t)); }
  void set(std::size_t s, std::size_t t, bool value = true);
  bool subset_of(const TreeRelation& other) const;
  TreeRelation intersect(const TreeRelation& other) const;
  std::size_t pair_count() const;

  friend bool operator==(const TreeRelation& a, const TreeRelation& b) { return a.bits_ == b.bits_; }

 private:
  std::shared_ptr<const TruncTree> tree_;
  std::size_t row_ = 0;  // 64-bit words per row
  std::vector<std::uint64_t> bits_;
};

// First violated requirement as text, or nothing.
std::optional<std::string> tree_relation_violation(const TreeRelation& r);
bool is_tree_relation(const TreeRelation& r);

// P_R(t) listed bottom-up along R.
std::vector<std::string> predecessors(const TreeRelation& r, std::string_view t);
std::size_t height(const TreeRelation& r, std::string_view t);

// R must be inside S (precondition_error otherwise).
std::optional<std::string> distinguished_violation(const TreeRelation& r, const TreeRelation& s);
bool is_distinguished(const TreeRelation& r, const TreeRelation& s);

// Stages 0..eta; an optional top relation stands for a limit index eta+1.
struct ResolutionFamily {
  std::vector<TreeRelation> stages;
  std::optional<TreeRelation> top;

  std::size_t last_index() const { return top ? stages.size() : stages.size() - 1; }
  const TreeRelation& at(std::size_t rho) const;
};

std::optional<std::string> resolution_family_violation(const ResolutionFamily& f);
bool is_resolution_family(const ResolutionFamily& f);

std::string z_rho(const ResolutionFamily& f, std::size_t rho, std::string_view z);

struct XiEnumeration {
  // (representative index, z^index), longest word first
  std::vector<std::pair<std::size_t, std::string>> entries;
  bool chain_links_hold = true;
  bool index_sets_are_intervals = true;
};

XiEnumeration xi_enumeration(const ResolutionFamily& f, std::string_view z);

// eta[k] for k = 0..depth; needs a top relation and 1 <= eta[k] < stages.size().
std::optional<std::string> uniformity_violation(const ResolutionFamily& f, const std::vector<std::size_t>& eta);
bool is_uniform(const ResolutionFamily& f, const std::vector<std::size_t>& eta);

// s below s' (initial segment), s' R^rho s'', s R^(rho+1) s''  =>  s R^(rho+1) s'.
std::optional<std::string> stage_link_counterexample(const ResolutionFamily& f);

}  // namespace dstk
