#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dstk/codings.hpp"
#include "dstk/nat.hpp"
#include "dstk/testkit.hpp"

namespace dstk {

// A natural number, or omega with a fundamental sequence of positive naturals:
// `lead` first, then `repeat` forever.
struct OrdinalExpr {
  bool is_limit = false;
  std::uint64_t n = 0;
  std::vector<std::uint64_t> lead;
  std::uint64_t repeat = 1;

  static OrdinalExpr finite(std::uint64_t n);
  static OrdinalExpr omega(std::vector<std::uint64_t> lead = {}, std::uint64_t repeat = 1);
  // "7", "omega", or "omega:2,1,2" (the last entry repeats).
  static OrdinalExpr parse(std::string_view text);

  std::uint64_t term(std::uint64_t k) const;
  std::string str() const;
};

// Eventually constant sequence with a bound N past which every coordinate equals the tail.
struct CertifiedSeq {
  EvConstSeq seq;
  std::uint64_t cert = 0;

  CertifiedSeq() = default;
  CertifiedSeq(EvConstSeq s, std::uint64_t n);
  explicit CertifiedSeq(EvConstSeq s);
};

// Coordinate i of rho0(e) straight from the definition.
int rho0_coordinate(const CertifiedSeq& e, std::uint64_t i);

CertifiedSeq rho0(const CertifiedSeq& e);

struct RhoOptions {
  std::uint64_t max_stages = 256;
};

// Throws certificate_unavailable in the limit case when stability is not established.
CertifiedSeq rho0_pow(const OrdinalExpr& xi, const CertifiedSeq& e, const RhoOptions& opts = {});

bool h_member(const OrdinalExpr& xi, const CertifiedSeq& e, const RhoOptions& opts = {});

// Throws undecided_error for unequal tails.
bool s_member(const OrdinalExpr& xi, const EvConstSeq& alpha, const EvConstSeq& beta, const Test& test,
              const RhoOptions& opts = {});

// Sequence equal to `tail` except at finitely many, possibly huge, positions.
struct SparseSeq {
  int tail = 0;
  std::vector<Nat> exceptions;
};

// One rho0 step on a sparse sequence; exceptions must decode through phi.
CertifiedSeq rho0_sparse(const SparseSeq& x);

}  // namespace dstk
