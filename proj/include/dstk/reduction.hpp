#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "dstk/codings.hpp"
#include "dstk/hierarchy.hpp"
#include "dstk/nat.hpp"
#include "dstk/testkit.hpp"

namespace dstk {

// u(q, l): every s of length l has N_{s u} inside the q-th dense open set.
struct DenseOpenOracle {
  std::string name;
  std::function<Word(std::uint64_t q, const Nat& l)> fn;
  Word operator()(std::uint64_t q, const Nat& l) const { return fn(q, l); }
};

DenseOpenOracle trivial_oracle();
// 0^max(0, q+1-l) 1: the q-th open set is "some 1 after position q".
DenseOpenOracle must_see_one_oracle();
// "trivial" or "one"
DenseOpenOracle oracle_by_name(std::string_view name);

enum class VChoice { automatic, closed_form, search };

struct ReductionOptions {
  VChoice v_choice = VChoice::automatic;
  std::uint64_t search_limit = std::uint64_t{1} << 14;  // highest level examined by the v search
  std::uint64_t max_rank = std::uint64_t{1} << 22;
};

// Rank R (w = psi(R)) owns the segment "0 u_R v_R" of alpha0, covering
// positions [len(R-1), len(R)) with len(-1) = 0.
struct Segment {
  Word u;
  Word v_bits;  // explicit head of v_R
  Nat v_zeros;  // zeros following v_bits
  Nat len;      // |s_w| = |t_w|
  Nat last;     // len - 1; a pairing node <m, <p, n>> when built in closed form
  std::int64_t parent_rank = -1;  // rank whose length is the branch level of (s_w, t_w); -1 for level 0
  Nat value;                      // s_w read in binary (closed form only)
};

class ReductionData {
 public:
  static constexpr std::uint64_t kMaxExplicit = std::uint64_t{1} << 24;

  ReductionData(Test test, DenseOpenOracle oracle, ReductionOptions opts = {});

  // Builds ranks 0..max_rank.
  void extend_to(std::uint64_t max_rank);
  // Builds ranks until len of the last one exceeds n.
  void extend_to_length(std::uint64_t n);

  std::uint64_t rank_count() const { return segs_.size(); }
  const Segment& segment(std::uint64_t rank) const;
  const Test& test() const { return test_; }
  const DenseOpenOracle& oracle() const { return oracle_; }
  bool closed_form() const { return closed_form_; }

  // Explicit words, assembled literally from the s/t recurrences.
  Word v_word(std::uint64_t rank) const;
  Word s_word(std::uint64_t rank) const;
  Word t_word(const Word& w) const;

  int alpha0_bit(std::uint64_t x) const;
  // Bit x of f(alpha) for any alpha extending alpha_prefix.
  int f_bit(const Word& alpha_prefix, std::uint64_t x) const;
  int f_bit(const EvConstSeq& alpha, std::uint64_t x) const;
  // (alpha0 xor f(alpha)) at position len(i - 1), the first position of segment i.
  int delta_at_segment_start(const EvConstSeq& alpha, std::uint64_t i) const;

  // Fault injection: flips bit `index` of v_rank.
  void corrupt_v(std::uint64_t rank, std::uint64_t index);

 private:
  struct Located {
    std::uint64_t rank;
    std::uint64_t offset;
  };
  Located locate(std::uint64_t x) const;
  int segment_bit(std::uint64_t rank, std::uint64_t offset) const;
  template <typename AlphaAt>
  int f_bit_impl(AlphaAt alpha_at, std::uint64_t known, std::uint64_t x) const;
  void append_closed_form();
  void append_by_search();

  Test test_;
  DenseOpenOracle oracle_;
  ReductionOptions opts_;
  bool closed_form_ = true;
  std::vector<Segment> segs_;
};

// psi-rank of w extended by a bit: 2 rank(w) + 1 + bit.
inline std::uint64_t child_rank(std::uint64_t rank, int bit) { return 2 * rank + 1 + static_cast<std::uint64_t>(bit); }

ReductionData build_reduction(const Test& test, const DenseOpenOracle& oracle, std::uint64_t max_rank,
                              ReductionOptions opts = {});

Word alpha0_prefix(const ReductionData& rd, std::uint64_t n);
Word f_prefix(const ReductionData& rd, const Word& alpha_prefix, std::uint64_t n);

struct ReductionCheckReport {
  bool ok = true;
  std::string clause;  // "eq1", "E", "alpha0-pattern", "t-pattern", "a", "b(i)", "b(ii)"
  std::string witness;
  std::uint64_t samples = 0;
  std::uint64_t a_checks = 0;
  std::uint64_t bi_checks = 0;
  std::uint64_t bii_checks = 0;
  std::uint64_t structural_checks = 0;
};

// All canonical eventually constant sequences with prefix length <= max_prefix, both tails.
std::vector<EvConstSeq> default_lemma34_samples(std::uint64_t max_prefix = 6);

ReductionCheckReport verify_lemma34(ReductionData& rd, std::uint64_t depth, std::uint64_t t_bound, std::uint64_t m_bound,
                             const std::vector<EvConstSeq>& samples = default_lemma34_samples());

// Shift of alpha0 xor f(alpha) for tail-0 alpha: tail 0 with ones at len(rank(alpha|m)) - 1 where alpha(m) = 1.
SparseSeq shifted_difference(ReductionData& rd, const EvConstSeq& alpha);

// xi >= 1: coordinatewise equality for k < coords.  xi = 0: alpha in H_1 iff the
// shifted difference is in H_1.
bool verify_thm35_identity(ReductionData& rd, const OrdinalExpr& xi, const EvConstSeq& alpha, std::uint64_t coords);

}  // namespace dstk
