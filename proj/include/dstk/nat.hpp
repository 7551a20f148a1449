#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>

namespace dstk {

// Natural number that is exact (cpp_int) up to kExactBits bits and symbolic beyond.
//
// A symbolic value is either a pairing node <a, b> (so that phi stays exact on
// it) or an opaque value of which only a lower bound on floor(log2) is known.
// Opaque values compare equal only to themselves (same object).
class Nat {
 public:
  using Int = boost::multiprecision::cpp_int;
  static constexpr std::uint64_t kExactBits = 4096;

  Nat() = default;
  Nat(std::uint64_t v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Nat(Int v);

  bool is_exact() const { return node_ == nullptr; }
  bool is_pair_node() const;
  const Int& exact() const;
  std::optional<std::uint64_t> to_u64() const;
  std::uint64_t to_u64_checked(const char* what) const;

  // Lower bound on floor(log2(value)); 0 when the value may be 0.
  std::uint64_t log2_lower() const;
  bool known_positive() const;

  // Throws undecided_error when the order cannot be established.
  std::strong_ordering compare(std::uint64_t x) const;
  std::optional<std::strong_ordering> compare(const Nat& other) const;
  std::optional<bool> equals(const Nat& other) const;

  // phi on naturals: exact values are decoded, pairing nodes return their children.
  std::optional<std::pair<Nat, Nat>> unpair() const;

  std::string str() const;

  friend Nat operator+(const Nat& a, const Nat& b);
  // a - b for a >= b; throws std::domain_error if b > a is provable.
  static Nat sub(const Nat& a, const Nat& b);
  static Nat pair(const Nat& n, const Nat& p);
  static Nat pow2(const Nat& k);
  // a * 2^k
  static Nat shl(const Nat& a, const Nat& k);

 private:
  struct Node;
  static Nat opaque(std::uint64_t log2_lower, bool positive);
  static Nat from_int(Int v);

  Int value_;
  std::shared_ptr<const Node> node_;
};

}  // namespace dstk
