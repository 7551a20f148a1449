#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "dstk/word.hpp"

namespace dstk {

struct NatPair {
  std::uint64_t first = 0;
  std::uint64_t second = 0;
  friend bool operator==(const NatPair&, const NatPair&) = default;
};

// k(k+1)/2; throws std::overflow_error when it does not fit.
std::uint64_t triangular(std::uint64_t k);

// Largest m with m(m+1)/2 <= q.
std::uint64_t big_m(std::uint64_t q);

// The diagonal enumeration (0,0), (1,0), (0,1), (2,0), ...
NatPair phi(std::uint64_t q);

// Inverse of phi: T(n+p) + p.  Throws std::overflow_error.
std::uint64_t pair(std::uint64_t n, std::uint64_t p);

// Length-then-lexicographic enumeration of finite words.
Word psi(std::uint64_t q);
std::uint64_t psi_inv(const Word& w);

// Tuple code: p((x)) = x, p(s x) = <p(s), x>.  Empty input rejected.
std::uint64_t pcode(std::span<const std::uint64_t> s);

// Eventually constant infinite binary sequence prefix . tail^inf, kept canonical
// (the prefix never ends with the tail bit).
class EvConstSeq {
 public:
  EvConstSeq() = default;
  EvConstSeq(Word prefix, int tail);

  static EvConstSeq constant(int bit) { return EvConstSeq(Word(), bit); }
  // "tail:prefix" with "-" for an empty prefix, e.g. "0:01".
  static EvConstSeq parse(std::string_view text);

  const Word& prefix() const { return prefix_; }
  int tail() const { return tail_; }
  int at(std::uint64_t m) const { return m < prefix_.size() ? prefix_[static_cast<std::size_t>(m)] : tail_; }
  Word take(std::uint64_t n) const;
  std::string str() const;

  friend bool operator==(const EvConstSeq&, const EvConstSeq&) = default;

 private:
  Word prefix_;
  int tail_ = 0;
};

EvConstSeq symdiff(const EvConstSeq& a, const EvConstSeq& b);
EvConstSeq shift(const EvConstSeq& a);
EvConstSeq prepend(int bit, const EvConstSeq& a);

}  // namespace dstk
