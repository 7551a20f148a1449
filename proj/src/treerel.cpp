#include "dstk/treerel.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <sstream>

#include "dstk/errors.hpp"

namespace dstk {

namespace {

constexpr std::size_t kMaxTreeNodes = 1U << 13;

std::size_t ones(const std::string& w) { return static_cast<std::size_t>(std::count(w.begin(), w.end(), '1')); }

}  // namespace

TruncTree::TruncTree(unsigned alphabet, unsigned depth) : alphabet_(alphabet), depth_(depth) {
  if (alphabet < 1 || alphabet > 10) throw precondition_error("alphabet size must be in 1..10");
  std::vector<std::string> level{""};
  for (unsigned len = 0;; ++len) {
    level_start_.push_back(words_.size());
    if (words_.size() + level.size() > kMaxTreeNodes) throw resource_limit("truncated tree too large");
    words_.insert(words_.end(), level.begin(), level.end());
    if (len == depth) break;
    std::vector<std::string> next;
    next.reserve(level.size() * alphabet);
    for (const auto& w : level)
      for (unsigned d = 0; d < alphabet; ++d) next.push_back(w + static_cast<char>('0' + d));
    level = std::move(next);
  }
}

std::optional<std::size_t> TruncTree::find(std::string_view w) const {
  if (w.size() > depth_) return std::nullopt;
  std::size_t offset = 0;
  for (char c : w) {
    if (c < '0' || c >= static_cast<char>('0' + alphabet_)) return std::nullopt;
    offset = offset * alphabet_ + static_cast<std::size_t>(c - '0');
  }
  return level_start_[w.size()] + offset;
}

std::size_t TruncTree::index(std::string_view w) const {
  auto i = find(w);
  if (!i) throw precondition_error("word '" + std::string(w) + "' is not a node of the tree");
  return *i;
}

bool TruncTree::extends(std::size_t i, std::size_t j) const {
  const auto& a = words_[i];
  const auto& b = words_[j];
  return a.size() <= b.size() && b.compare(0, a.size(), a) == 0;
}

std::string word_literal(const std::string& w) { return w.empty() ? "-" : w; }

std::string parse_word_literal(std::string_view text) {
  if (text == "-") return {};
  if (text.empty()) throw parse_error("empty word literal (use '-')");
  for (char c : text)
    if (c < '0' || c > '9') throw parse_error("bad word literal '" + std::string(text) + "'");
  return std::string(text);
}

TreeRelation::TreeRelation(std::shared_ptr<const TruncTree> tree)
    : tree_(std::move(tree)), row_((tree_->size() + 63) / 64), bits_(tree_->size() * row_, 0) {}

void TreeRelation::set(std::size_t s, std::size_t t, bool value) {
  auto& word = bits_[s * row_ + t / 64];
  const std::uint64_t mask = std::uint64_t{1} << (t % 64);
  word = value ? (word | mask) : (word & ~mask);
}

TreeRelation TreeRelation::from_predicate(std::shared_ptr<const TruncTree> tree,
                                          const std::function<bool(const std::string&, const std::string&)>& pred) {
  TreeRelation r(tree);
  const std::size_t n = tree->size();
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t)
      if (pred(tree->word(s), tree->word(t))) r.set(s, t);
  return r;
}

TreeRelation TreeRelation::extension(std::shared_ptr<const TruncTree> tree) {
  TreeRelation r(tree);
  const std::size_t n = tree->size();
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t)
      if (tree->extends(s, t)) r.set(s, t);
  return r;
}

TreeRelation TreeRelation::ones_relation(std::shared_ptr<const TruncTree> tree) {
  TreeRelation r(tree);
  const std::size_t n = tree->size();
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t k = ones(tree->word(s));
    for (std::size_t t = 0; t < n; ++t)
      if (tree->extends(s, t) && (k == 0 || k == ones(tree->word(t)))) r.set(s, t);
  }
  return r;
}

TreeRelation TreeRelation::closed_set(std::shared_ptr<const TruncTree> tree, const std::set<std::string>& c_tree) {
  for (const auto& w : c_tree) {
    if (!tree->find(w)) throw precondition_error("code word '" + word_literal(w) + "' is not a node of the tree");
    for (std::size_t k = 0; k < w.size(); ++k)
      if (!c_tree.count(w.substr(0, k)))
        throw precondition_error("code is not prefix-closed: '" + word_literal(w) + "' lacks prefix '" +
                                 word_literal(w.substr(0, k)) + "'");
  }
  TreeRelation r(tree);
  const std::size_t n = tree->size();
  for (std::size_t t = 0; t < n; ++t) {
    if (!c_tree.count(tree->word(t))) continue;
    for (std::size_t s = 0; s < n; ++s)
      if (tree->extends(s, t)) r.set(s, t);
  }
  return r;
}

TreeRelation TreeRelation::load(std::istream& in, std::shared_ptr<const TruncTree> tree) {
  TreeRelation r(tree);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
      throw parse_error("relation line " + std::to_string(lineno) + ": expected 's<TAB>t'");
    const auto s = tree->find(parse_word_literal(std::string_view(line).substr(0, tab)));
    const auto t = tree->find(parse_word_literal(std::string_view(line).substr(tab + 1)));
    if (!s || !t) throw parse_error("relation line " + std::to_string(lineno) + ": word outside the tree");
    r.set(*s, *t);
  }
  return r;
}

void TreeRelation::save(std::ostream& out) const {
  const std::size_t n = tree_->size();
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t)
      if (related(s, t)) out << word_literal(tree_->word(s)) << '\t' << word_literal(tree_->word(t)) << '\n';
}

bool TreeRelation::subset_of(const TreeRelation& other) const {
  if (other.bits_.size() != bits_.size()) return false;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] & ~other.bits_[i]) return false;
  return true;
}

TreeRelation TreeRelation::intersect(const TreeRelation& other) const {
  if (other.bits_.size() != bits_.size()) throw precondition_error("relations live on different trees");
  TreeRelation r(tree_);
  for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] = bits_[i] & other.bits_[i];
  return r;
}

std::size_t TreeRelation::pair_count() const {
  std::size_t c = 0;
  for (auto w : bits_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

namespace {

std::string pair_text(const TruncTree& tree, std::size_t s, std::size_t t) {
  return word_literal(tree.word(s)) + " " + word_literal(tree.word(t));
}

std::vector<std::size_t> pred_indices(const TreeRelation& r, std::size_t t) {
  std::vector<std::size_t> p;
  for (std::size_t s = 0; s < r.tree().size(); ++s)
    if (r.related(s, t)) p.push_back(s);
  return p;
}

}  // namespace

std::optional<std::string> tree_relation_violation(const TreeRelation& r) {
  const auto& tree = r.tree();
  const std::size_t n = tree.size();
  for (std::size_t t = 0; t < n; ++t)
    if (!r.related(0, t)) return "clause (a) fails: - not related to " + word_literal(tree.word(t));
  for (std::size_t s = 0; s < n; ++s)
    if (!r.related(s, s)) return "reflexivity fails at " + word_literal(tree.word(s));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = s + 1; t < n; ++t)
      if (r.related(s, t) && r.related(t, s)) return "antisymmetry fails at " + pair_text(tree, s, t);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      if (!r.related(s, t)) continue;
      for (std::size_t u = 0; u < n; ++u)
        if (r.related(t, u) && !r.related(s, u))
          return "transitivity fails at " + pair_text(tree, s, t) + " " + word_literal(tree.word(u));
    }
  for (std::size_t t = 0; t < n; ++t) {
    const auto p = pred_indices(r, t);
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j)
        if (!r.related(p[i], p[j]) && !r.related(p[j], p[i]))
          return "clause (b) fails at " + word_literal(tree.word(t)) + ": incomparable " + pair_text(tree, p[i], p[j]);
  }
  return std::nullopt;
}

bool is_tree_relation(const TreeRelation& r) { return !tree_relation_violation(r); }

std::vector<std::string> predecessors(const TreeRelation& r, std::string_view t) {
  auto p = pred_indices(r, r.tree().index(t));
  std::sort(p.begin(), p.end(), [&](std::size_t a, std::size_t b) {
    if (a == b) return false;
    if (r.related(a, b)) return true;
    if (r.related(b, a)) return false;
    throw precondition_error("predecessor set is not linearly ordered");
  });
  std::vector<std::string> out;
  out.reserve(p.size());
  for (auto i : p) out.push_back(r.tree().word(i));
  return out;
}

std::size_t height(const TreeRelation& r, std::string_view t) {
  const auto p = pred_indices(r, r.tree().index(t));
  if (p.empty()) throw precondition_error("node has no predecessors (relation is not reflexive)");
  return p.size() - 1;
}

std::optional<std::string> distinguished_violation(const TreeRelation& r, const TreeRelation& s_rel) {
  if (!r.subset_of(s_rel)) throw precondition_error("relation is not contained in the ambient relation");
  const auto& tree = r.tree();
  const std::size_t n = tree.size();
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t u = 0; u < n; ++u) {
      if (!r.related(s, u)) continue;
      for (std::size_t t = 0; t < n; ++t)
        if (s_rel.related(s, t) && s_rel.related(t, u) && !r.related(s, t))
          return "jump " + pair_text(tree, s, u) + " over " + word_literal(tree.word(t));
    }
  return std::nullopt;
}

bool is_distinguished(const TreeRelation& r, const TreeRelation& s) { return !distinguished_violation(r, s); }

const TreeRelation& ResolutionFamily::at(std::size_t rho) const {
  if (rho < stages.size()) return stages[rho];
  if (top && rho == stages.size()) return *top;
  throw precondition_error("index " + std::to_string(rho) + " outside the family");
}

std::optional<std::string> resolution_family_violation(const ResolutionFamily& f) {
  if (f.stages.empty()) return "family has no stages";
  for (std::size_t rho = 0; rho <= f.last_index(); ++rho)
    if (auto v = tree_relation_violation(f.at(rho))) return "stage " + std::to_string(rho) + ": " + *v;
  for (std::size_t rho = 0; rho + 1 < f.stages.size(); ++rho) {
    if (!f.stages[rho + 1].subset_of(f.stages[rho]))
      return "stage " + std::to_string(rho + 1) + " is not contained in stage " + std::to_string(rho);
    if (auto v = distinguished_violation(f.stages[rho + 1], f.stages[rho]))
      return "stage " + std::to_string(rho + 1) + " not distinguished: " + *v;
  }
  if (f.top) {
    TreeRelation meet = f.stages[0];
    for (std::size_t rho = 1; rho < f.stages.size(); ++rho) meet = meet.intersect(f.stages[rho]);
    if (!(meet == *f.top)) return "top stage differs from the intersection of the stages";
  }
  return std::nullopt;
}

bool is_resolution_family(const ResolutionFamily& f) {
  try {
    return !resolution_family_violation(f);
  } catch (const precondition_error&) {
    return false;
  }
}

std::string z_rho(const ResolutionFamily& f, std::size_t rho, std::string_view z) {
  if (z.empty()) throw precondition_error("z must be nonempty");
  const auto& r = f.at(rho);
  const std::size_t zi = r.tree().index(z);
  for (std::size_t len = z.size(); len-- > 0;)
    if (r.related(r.tree().index(z.substr(0, len)), zi)) return std::string(z.substr(0, len));
  throw precondition_error("no proper initial segment of z is related to z");
}

XiEnumeration xi_enumeration(const ResolutionFamily& f, std::string_view z) {
  XiEnumeration out;
  std::vector<std::string> values;
  for (std::size_t rho = 0; rho <= f.last_index(); ++rho) values.push_back(z_rho(f, rho, z));

  std::vector<std::pair<std::size_t, std::string>> reps;
  for (std::size_t rho = 0; rho < values.size(); ++rho) {
    const bool last_of_value =
        std::none_of(values.begin() + static_cast<std::ptrdiff_t>(rho) + 1, values.end(),
                     [&](const std::string& v) { return v == values[rho]; });
    if (last_of_value) reps.emplace_back(rho, values[rho]);
    // indices attaining a value must be contiguous
    auto first = std::find(values.begin(), values.end(), values[rho]);
    if (static_cast<std::size_t>(first - values.begin()) < rho && values[rho - 1] != values[rho])
      out.index_sets_are_intervals = false;
  }
  std::stable_sort(reps.begin(), reps.end(),
                   [](const auto& a, const auto& b) { return a.second.size() > b.second.size(); });
  for (std::size_t i = 0; i + 1 < reps.size(); ++i) {
    const auto& [xi_next, w_next] = reps[i + 1];
    if (!f.at(xi_next).related(w_next, reps[i].second)) out.chain_links_hold = false;
  }
  out.entries = std::move(reps);
  return out;
}

std::optional<std::string> uniformity_violation(const ResolutionFamily& f, const std::vector<std::size_t>& eta) {
  if (!f.top) throw precondition_error("uniformity needs a top index");
  const auto& tree = f.top->tree();
  if (eta.size() < static_cast<std::size_t>(tree.depth()) + 1)
    throw precondition_error("eta must be given for k = 0..depth");
  const std::size_t n = tree.size();
  for (std::size_t k = 0; k < eta.size(); ++k) {
    if (eta[k] < 1) throw precondition_error("eta_k must be at least 1");
    if (eta[k] >= f.stages.size()) throw precondition_error("eta_k must index a stage below the top");
  }
  std::vector<std::vector<std::size_t>> heights(f.stages.size());
  for (std::size_t k = 0; k < eta.size(); ++k) {
    auto& h = heights[eta[k]];
    if (!h.empty()) continue;
    const auto& r = f.stages[eta[k]];
    h.resize(n);
    for (std::size_t t = 0; t < n; ++t) h[t] = pred_indices(r, t).size() - 1;
  }
  for (std::size_t k = 0; k < eta.size(); ++k) {
    const auto& r = f.stages[eta[k]];
    const auto& h = heights[eta[k]];
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = 0; t < n; ++t)
        if (std::min(h[s], h[t]) <= k && r.related(s, t) && !f.top->related(s, t))
          return "k=" + std::to_string(k) + " pair " + pair_text(tree, s, t);
  }
  return std::nullopt;
}

bool is_uniform(const ResolutionFamily& f, const std::vector<std::size_t>& eta) { return !uniformity_violation(f, eta); }

std::optional<std::string> stage_link_counterexample(const ResolutionFamily& f) {
  const auto& tree = f.stages.at(0).tree();
  const std::size_t n = tree.size();
  for (std::size_t rho = 0; rho + 1 < f.stages.size(); ++rho) {
    const auto& r = f.stages[rho];
    const auto& next = f.stages[rho + 1];
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t s2 = 0; s2 < n; ++s2) {
        if (!next.related(s, s2)) continue;
        for (std::size_t s1 = 0; s1 < n; ++s1)
          if (tree.extends(s, s1) && r.related(s1, s2) && !next.related(s, s1))
            return "rho=" + std::to_string(rho) + " " + pair_text(tree, s, s1) + " " + word_literal(tree.word(s2));
      }
  }
  return std::nullopt;
}

}  // namespace dstk
