#include "dstk/reduction.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "dstk/errors.hpp"

namespace dstk {

DenseOpenOracle trivial_oracle() {
  return {"trivial", [](std::uint64_t, const Nat&) { return Word(); }};
}

DenseOpenOracle must_see_one_oracle() {
  return {"one", [](std::uint64_t q, const Nat& l) {
            Word u;
            if (l.compare(q + 1) == std::strong_ordering::less) u = Word::zeros(q + 1 - *l.to_u64());
            u.push_back(1);
            return u;
          }};
}

DenseOpenOracle oracle_by_name(std::string_view name) {
  if (name == "trivial") return trivial_oracle();
  if (name == "one") return must_see_one_oracle();
  throw parse_error("unknown oracle '" + std::string(name) + "' (expected trivial or one)");
}

ReductionData::ReductionData(Test test, DenseOpenOracle oracle, ReductionOptions opts)
    : test_(std::move(test)), oracle_(std::move(oracle)), opts_(opts) {
  if (opts_.v_choice == VChoice::closed_form && !test_.is_canonical()) {
    throw precondition_error("closed-form v needs the canonical test");
  }
  closed_form_ = opts_.v_choice == VChoice::closed_form ||
                 (opts_.v_choice == VChoice::automatic && test_.is_canonical());
}

const Segment& ReductionData::segment(std::uint64_t rank) const {
  if (rank >= segs_.size()) {
    throw insufficient_materialization("rank " + std::to_string(rank) + " not built (have " +
                                       std::to_string(segs_.size()) + ")");
  }
  return segs_[rank];
}

void ReductionData::extend_to(std::uint64_t max_rank) {
  if (max_rank >= opts_.max_rank) {
    throw resource_limit("rank " + std::to_string(max_rank) + " beyond the configured bound");
  }
  while (segs_.size() <= max_rank) {
    if (closed_form_) {
      append_closed_form();
    } else {
      append_by_search();
    }
  }
}

void ReductionData::extend_to_length(std::uint64_t n) {
  while (segs_.empty() || segs_.back().len.compare(n) != std::strong_ordering::greater) extend_to(segs_.size());
}

void ReductionData::append_closed_form() {
  const std::uint64_t rank = segs_.size();
  const Word we = psi(rank);
  const Nat prev_len = rank == 0 ? Nat(0) : segs_[rank - 1].len;
  const Nat prev_value = rank == 0 ? Nat(0) : segs_[rank - 1].value;

  Segment seg;
  seg.u = oracle_(rank, prev_len + Nat(1));
  const Nat a_len = prev_len + Nat(1 + seg.u.size());
  const Nat a_value = Nat::shl(prev_value, Nat(1 + seg.u.size())) + Nat(seg.u.empty() ? 0 : seg.u.value());

  if (rank > 0) {
    const int eps = we[we.size() - 1];
    const std::uint64_t wr = psi_inv(we.prefix(we.size() - 1));
    seg.parent_rank = eps ? static_cast<std::int64_t>(wr) : segs_[wr].parent_rank;
  }
  const Nat p = seg.parent_rank < 0 ? Nat(0) : segs_[seg.parent_rank].len;
  const Nat p_value = seg.parent_rank < 0 ? Nat(0) : segs_[seg.parent_rank].value;

  // (s, t) = (s_p 0 y v, t_p 1 y v); witness n = psi^-1(y), q = <m, <p, n>>
  const Nat y_len = Nat::sub(Nat::sub(a_len, p), Nat(1));
  const Nat y_value = Nat::sub(a_value, Nat::shl(p_value, y_len + Nat(1)));
  const Nat n = Nat::sub(Nat::pow2(y_len), Nat(1)) + y_value;
  const std::uint64_t m = phi(we.size()).first;
  seg.last = Nat::pair(Nat(m), Nat::pair(p, n));
  seg.len = seg.last + Nat(1);
  seg.v_zeros = Nat::sub(seg.len, a_len);
  seg.value = Nat::shl(a_value, seg.v_zeros);
  segs_.push_back(std::move(seg));
}

void ReductionData::append_by_search() {
  const std::uint64_t rank = segs_.size();
  const Word we = psi(rank);
  const std::uint64_t prev_len = rank == 0 ? 0 : segs_[rank - 1].len.to_u64_checked("length");

  Segment seg;
  seg.u = oracle_(rank, Nat(prev_len + 1));
  const Word a = (rank == 0 ? Word() : s_word(rank - 1)) + "0"_w + seg.u;
  Word b;
  if (rank == 0) {
    b = "1"_w + seg.u;
  } else {
    const Word w = we.prefix(we.size() - 1);
    const std::uint64_t wr = psi_inv(w);
    b = t_word(w);
    b.push_back(we[we.size() - 1]);
    for (std::uint64_t i = wr + 1; i < rank; ++i) b += segs_[i].u + v_word(i) + "0"_w;
    b += seg.u;
  }
  const std::uint64_t m = phi(we.size()).first;
  std::uint64_t top = opts_.search_limit;
  if (auto d = test_.depth()) top = std::min(top, *d);
  for (std::uint64_t level = a.size(); level <= top; ++level) {
    if (phi(level - 1).first != m) continue;
    std::optional<Word> best;
    for (const NodePair& np : test_.entries(level)) {
      if (!a.is_prefix_of(np.s) || !b.is_prefix_of(np.t)) continue;
      const Word v = np.s.drop(a.size());
      if (np.t.drop(b.size()) != v) continue;
      if (!best || v < *best) best = v;
    }
    if (best) {
      seg.v_bits = *best;
      seg.v_zeros = Nat(0);
      seg.len = Nat(level);
      seg.last = Nat(level - 1);
      segs_.push_back(std::move(seg));
      return;
    }
  }
  throw search_exhausted("no v for w=" + we.str() + " up to level " + std::to_string(top));
}

Word ReductionData::v_word(std::uint64_t rank) const {
  const Segment& seg = segment(rank);
  const std::uint64_t z = seg.v_zeros.to_u64_checked("v length");
  if (z > kMaxExplicit) throw resource_limit("v word too long to materialize");
  return seg.v_bits + Word::zeros(z);
}

Word ReductionData::s_word(std::uint64_t rank) const {
  const std::uint64_t total = segment(rank).len.to_u64_checked("|s_w|");
  if (total > kMaxExplicit) throw resource_limit("s word too long to materialize");
  Word s;
  for (std::uint64_t i = 0; i <= rank; ++i) s += "0"_w + segs_[i].u + v_word(i);
  return s;
}

Word ReductionData::t_word(const Word& w) const {
  const std::uint64_t rank = psi_inv(w);
  const std::uint64_t total = segment(rank).len.to_u64_checked("|t_w|");
  if (total > kMaxExplicit) throw resource_limit("t word too long to materialize");
  if (w.empty()) return "1"_w + segs_[0].u + v_word(0);
  const Word parent = w.prefix(w.size() - 1);
  Word t = t_word(parent);
  t.push_back(w[w.size() - 1]);
  for (std::uint64_t i = psi_inv(parent) + 1; i < rank; ++i) t += segs_[i].u + v_word(i) + "0"_w;
  return t + segs_[rank].u + v_word(rank);
}

ReductionData::Located ReductionData::locate(std::uint64_t x) const {
  if (segs_.empty() || segs_.back().len.compare(x) != std::strong_ordering::greater) {
    throw insufficient_materialization("position " + std::to_string(x) + " beyond the built ranks");
  }
  std::size_t lo = 0, hi = segs_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (segs_[mid].len.compare(x) == std::strong_ordering::greater) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const std::uint64_t start = lo == 0 ? 0 : segs_[lo - 1].len.to_u64_checked("segment start");
  return {lo, x - start};
}

int ReductionData::segment_bit(std::uint64_t rank, std::uint64_t offset) const {
  if (offset == 0) return 0;
  const Segment& seg = segs_[rank];
  std::uint64_t j = offset - 1;
  if (j < seg.u.size()) return seg.u[static_cast<std::size_t>(j)];
  j -= seg.u.size();
  if (j < seg.v_bits.size()) return seg.v_bits[static_cast<std::size_t>(j)];
  return 0;
}

int ReductionData::alpha0_bit(std::uint64_t x) const {
  const Located at = locate(x);
  return segment_bit(at.rank, at.offset);
}

template <typename AlphaAt>
int ReductionData::f_bit_impl(AlphaAt alpha_at, std::uint64_t known, std::uint64_t x) const {
  const Located at = locate(x);
  if (at.offset != 0) return segment_bit(at.rank, at.offset);
  if (at.rank == 0) return 1;
  // x = len(i - 1) carries alpha(m) when i - 1 = rank(alpha|m), else the block separator 0
  const std::uint64_t target = at.rank - 1;
  std::uint64_t r = 0;
  for (std::uint64_t m = 0;; ++m) {
    if (r > target) return 0;
    if (m >= known) throw insufficient_materialization("f bit needs more of alpha");
    if (r == target) return alpha_at(m);
    r = child_rank(r, alpha_at(m));
  }
}

int ReductionData::f_bit(const Word& alpha_prefix, std::uint64_t x) const {
  const std::uint64_t rank = psi_inv(alpha_prefix);
  const Segment& bound = rank < segs_.size() ? segs_[rank] : segs_.empty() ? segment(0) : segs_.back();
  if (bound.len.compare(x) != std::strong_ordering::greater) {
    throw insufficient_materialization("f bit " + std::to_string(x) + " not determined by prefix " +
                                       alpha_prefix.str());
  }
  return f_bit_impl([&](std::uint64_t m) { return alpha_prefix[static_cast<std::size_t>(m)]; },
                    alpha_prefix.size(), x);
}

int ReductionData::f_bit(const EvConstSeq& alpha, std::uint64_t x) const {
  return f_bit_impl([&](std::uint64_t m) { return alpha.at(m); }, std::numeric_limits<std::uint64_t>::max(), x);
}

int ReductionData::delta_at_segment_start(const EvConstSeq& alpha, std::uint64_t i) const {
  if (i == 0) return 1;
  segment(i - 1);
  std::uint64_t r = 0;
  for (std::uint64_t m = 0; r <= i - 1; ++m) {
    if (r == i - 1) return alpha.at(m);
    r = child_rank(r, alpha.at(m));
  }
  return 0;
}

void ReductionData::corrupt_v(std::uint64_t rank, std::uint64_t index) {
  if (rank >= segs_.size()) throw precondition_error("corrupt_v: rank not built");
  Segment& seg = segs_[rank];
  if (index < seg.v_bits.size()) {
    std::string bits = seg.v_bits.bits();
    bits[index] = bits[index] == '1' ? '0' : '1';
    seg.v_bits = Word(bits);
    return;
  }
  const std::uint64_t extra = index - seg.v_bits.size() + 1;
  if (seg.v_zeros.compare(extra) == std::strong_ordering::less) throw precondition_error("corrupt_v: index past v");
  seg.v_bits += Word::zeros(extra - 1) + "1"_w;
  seg.v_zeros = Nat::sub(seg.v_zeros, Nat(extra));
}

ReductionData build_reduction(const Test& test, const DenseOpenOracle& oracle, std::uint64_t max_rank,
                              ReductionOptions opts) {
  ReductionData rd(test, oracle, opts);
  rd.extend_to(max_rank);
  return rd;
}

Word alpha0_prefix(const ReductionData& rd, std::uint64_t n) {
  Word w;
  for (std::uint64_t x = 0; x < n; ++x) w.push_back(rd.alpha0_bit(x));
  return w;
}

Word f_prefix(const ReductionData& rd, const Word& alpha_prefix, std::uint64_t n) {
  Word w;
  for (std::uint64_t x = 0; x < n; ++x) w.push_back(rd.f_bit(alpha_prefix, x));
  return w;
}

std::vector<EvConstSeq> default_lemma34_samples(std::uint64_t max_prefix) {
  std::vector<EvConstSeq> out;
  std::set<std::string> seen;
  for (int tail = 0; tail <= 1; ++tail) {
    for (std::uint64_t len = 0; len <= max_prefix; ++len) {
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
        EvConstSeq a(Word::from_value(v, len), tail);
        if (seen.insert(a.str()).second) out.push_back(a);
      }
    }
  }
  return out;
}

namespace {
std::vector<std::vector<std::uint64_t>> tuples_up_to(std::uint64_t bound) {
  std::vector<std::vector<std::uint64_t>> out{{}};
  for (std::uint64_t a = 0; a <= bound; ++a) out.push_back({a});
  for (std::uint64_t a = 0; a <= bound; ++a) {
    for (std::uint64_t b = 0; b <= bound; ++b) out.push_back({a, b});
  }
  return out;
}

std::string tuple_str(const std::vector<std::uint64_t>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

std::uint64_t code_with(std::vector<std::uint64_t> t, std::uint64_t m) {
  t.push_back(m);
  return pcode(t);
}

std::uint64_t rank_of_prefix(const EvConstSeq& alpha, std::uint64_t n) {
  if (n >= 63) throw resource_limit("prefix rank beyond 64 bits");
  return psi_inv(alpha.take(n));
}

constexpr std::uint64_t kExplicitCheck = std::uint64_t{1} << 20;

bool explicit_len(const Segment& seg) {
  auto l = seg.len.to_u64();
  return l && *l <= kExplicitCheck;
}
}  // namespace

ReductionCheckReport verify_lemma34(ReductionData& rd, std::uint64_t depth, std::uint64_t t_bound, std::uint64_t m_bound,
                             const std::vector<EvConstSeq>& samples) {
  ReductionCheckReport rep;
  rep.samples = samples.size();
  auto fail = [&rep](std::string clause, std::string witness) {
    rep.ok = false;
    rep.clause = std::move(clause);
    rep.witness = std::move(witness);
    return rep;
  };
  const auto tuples = tuples_up_to(t_bound);

  std::uint64_t need_rank = 0;
  for (const EvConstSeq& a : samples) {
    if (a.tail() != 0) continue;
    for (std::uint64_t x = 0; x < a.prefix().size(); ++x) {
      if (a.at(x)) need_rank = std::max(need_rank, rank_of_prefix(a, x));
    }
  }
  std::uint64_t max_pos = depth;
  for (const auto& t : tuples) max_pos = std::max(max_pos, code_with(t, m_bound) + 1);
  rd.extend_to(need_rank);
  rd.extend_to_length(max_pos);

  const Test& test = rd.test();
  for (std::uint64_t r = 0; r < rd.rank_count(); ++r) {
    const Segment& seg = rd.segment(r);
    const Word w = psi(r);
    auto d = seg.last.unpair();
    if (!d || d->first.equals(Nat(phi(w.size()).first)) != true) {
      return fail("eq1", "w=" + w.str() + " |t_w|-1=" + seg.last.str());
    }
    const Word u_expected = rd.oracle()(r, r == 0 ? Nat(1) : rd.segment(r - 1).len + Nat(1));
    if (u_expected != seg.u) return fail("alpha0-pattern", "rank=" + std::to_string(r) + " u=" + seg.u.str());
    if (explicit_len(seg)) {
      const Word s = rd.s_word(r);
      const Word t = rd.t_word(w);
      bool in_e = false;
      for (const NodePair& np : test.entries(s.size())) in_e = in_e || (np.s == s && np.t == t);
      if (!in_e) return fail("E", "w=" + w.str() + " s=" + s.str() + " t=" + t.str());
      if (r > 0 && !(rd.s_word(r - 1) + "0"_w + seg.u).is_prefix_of(s)) {
        return fail("alpha0-pattern", "rank=" + std::to_string(r));
      }
      ++rep.structural_checks;
    }
  }

  for (const EvConstSeq& a : samples) {
    // t side: s u_{q+1} is a prefix of t_{alpha|m+1} with |s| = len(q) + 1
    std::uint64_t lo = 0;
    for (std::uint64_t m = 0; m < 62; ++m) {
      const std::uint64_t hi = child_rank(lo, a.at(m));
      if (hi >= rd.rank_count() || !explicit_len(rd.segment(hi))) break;
      const Word t = rd.t_word(a.take(m + 1));
      for (std::uint64_t q = lo; q < hi; ++q) {
        const auto start = static_cast<std::size_t>(*rd.segment(q).len.to_u64() + 1);
        const Word u = rd.oracle()(q + 1, Nat(start));
        if (!(t.prefix(start) + u).is_prefix_of(t)) {
          return fail("t-pattern", "alpha=" + a.str() + " m=" + std::to_string(m) + " q=" + std::to_string(q));
        }
        ++rep.structural_checks;
      }
      lo = hi;
    }

    // (a)
    const Word s = alpha0_prefix(rd, depth);
    Word f;
    for (std::uint64_t x = 0; x < depth; ++x) f.push_back(rd.f_bit(a, x));
    for (std::uint64_t r = 0; r <= depth; ++r) {
      if (!prefix_in_T(s.prefix(r), f.prefix(r), test)) {
        return fail("a", "alpha=" + a.str() + " r=" + std::to_string(r) + " s=" + s.prefix(r).str() +
                             " t=" + f.prefix(r).str());
      }
      ++rep.a_checks;
    }

    for (const auto& t : tuples) {
      for (std::uint64_t m = 0; m <= m_bound; ++m) {
        const std::string tag = "alpha=" + a.str() + " t=" + tuple_str(t) + " m=" + std::to_string(m);
        const std::uint64_t x = code_with(t, m);
        // (b)(i)
        if (a.tail() == 0 && a.at(x) == 1) {
          const std::uint64_t r = rank_of_prefix(a, x);
          const Nat& last = rd.segment(r).last;
          Nat mprime = last;
          if (!t.empty()) {
            auto d = last.unpair();
            const Nat pt(pcode(t));
            if (!d || d->first.equals(pt) != true) return fail("b(i)", tag + " |t_w|-1=" + last.str());
            mprime = d->second;
            if (Nat::pair(pt, mprime).equals(last) != true) return fail("b(i)", tag + " re-encoding");
          }
          if (rd.delta_at_segment_start(a, r + 1) != 1) return fail("b(i)", tag + " m'=" + mprime.str());
          ++rep.bi_checks;
        }
        // (b)(ii)
        const std::uint64_t pos = x + 1;
        if ((rd.alpha0_bit(pos) ^ rd.f_bit(a, pos)) == 1) {
          bool found = false;
          for (std::uint64_t mp = 0;; ++mp) {
            const std::uint64_t y = code_with(t, mp);
            if (a.at(y) == 1) {
              found = true;
              break;
            }
            if (y >= a.prefix().size()) break;
          }
          if (!found) return fail("b(ii)", tag + " delta(" + std::to_string(pos) + ")=1");
          ++rep.bii_checks;
        }
      }
    }
  }
  return rep;
}

SparseSeq shifted_difference(ReductionData& rd, const EvConstSeq& alpha) {
  if (alpha.tail() != 0) throw precondition_error("shifted difference needs a tail-0 alpha");
  SparseSeq out;
  std::uint64_t r = 0;
  for (std::uint64_t m = 0; m < alpha.prefix().size(); ++m) {
    if (alpha.at(m) == 1) {
      rd.extend_to(r);
      if (rd.delta_at_segment_start(alpha, r + 1) != 1) throw std::logic_error("difference bit missing");
      out.exceptions.push_back(rd.segment(r).last);
    }
    if (m + 1 >= 63) throw resource_limit("alpha prefix too long for 64-bit ranks");
    r = child_rank(r, alpha.at(m));
  }
  return out;
}

bool verify_thm35_identity(ReductionData& rd, const OrdinalExpr& xi, const EvConstSeq& alpha, std::uint64_t coords) {
  if (xi.is_limit) throw precondition_error("verify_thm35_identity needs a finite xi");
  if (alpha.tail() != 0) throw precondition_error("verify_thm35_identity needs a tail-0 alpha");
  const SparseSeq d = shifted_difference(rd, alpha);
  if (xi.n == 0) return (alpha == EvConstSeq::constant(0)) == d.exceptions.empty();
  const CertifiedSeq lhs = rho0_pow(xi, CertifiedSeq(alpha));
  const CertifiedSeq rhs = rho0_pow(OrdinalExpr::finite(xi.n - 1), rho0_sparse(d));
  for (std::uint64_t k = 0; k < coords; ++k) {
    if (lhs.seq.at(k) != rhs.seq.at(k)) return false;
  }
  return true;
}

}  // namespace dstk
