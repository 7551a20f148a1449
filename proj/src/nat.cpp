#include "dstk/nat.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "dstk/errors.hpp"

namespace dstk {

namespace {
constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSat - b ? kSat : a + b; }

std::uint64_t bit_length(const Nat::Int& v) {
  return v == 0 ? 0 : static_cast<std::uint64_t>(boost::multiprecision::msb(v)) + 1;
}
}  // namespace

struct Nat::Node {
  bool is_pair = false;
  Nat first;
  Nat second;
  std::uint64_t log2_lower = 0;
  bool positive = false;
};

Nat::Nat(Int v) { *this = from_int(std::move(v)); }

Nat Nat::from_int(Int v) {
  const std::uint64_t bits = bit_length(v);
  if (bits > kExactBits) return opaque(bits - 1, true);
  Nat n;
  n.value_ = std::move(v);
  return n;
}

Nat Nat::opaque(std::uint64_t log2_lower, bool positive) {
  auto node = std::make_shared<Node>();
  node->log2_lower = positive ? log2_lower : 0;
  node->positive = positive;
  Nat n;
  n.node_ = std::move(node);
  return n;
}

bool Nat::is_pair_node() const { return node_ && node_->is_pair; }

const Nat::Int& Nat::exact() const {
  if (node_) throw undecided_error("symbolic natural has no exact value");
  return value_;
}

std::optional<std::uint64_t> Nat::to_u64() const {
  if (node_ || bit_length(value_) > 64) return std::nullopt;
  return static_cast<std::uint64_t>(value_);
}

std::uint64_t Nat::to_u64_checked(const char* what) const {
  auto v = to_u64();
  if (!v) throw resource_limit(std::string(what) + " does not fit in 64 bits (" + str() + ")");
  return *v;
}

std::uint64_t Nat::log2_lower() const {
  if (node_) return node_->log2_lower;
  return value_ == 0 ? 0 : bit_length(value_) - 1;
}

bool Nat::known_positive() const { return node_ ? node_->positive : value_ != 0; }

std::strong_ordering Nat::compare(std::uint64_t x) const {
  if (!node_) {
    if (value_ < x) return std::strong_ordering::less;
    if (value_ > x) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  if (node_->positive && node_->log2_lower >= 64) return std::strong_ordering::greater;
  throw undecided_error("cannot compare symbolic natural " + str() + " with " + std::to_string(x));
}

std::optional<std::strong_ordering> Nat::compare(const Nat& other) const {
  if (!node_ && !other.node_) {
    if (value_ < other.value_) return std::strong_ordering::less;
    if (value_ > other.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  if (!node_) {
    if (other.node_->positive && other.node_->log2_lower >= bit_length(value_)) return std::strong_ordering::less;
    return std::nullopt;
  }
  if (!other.node_) {
    auto r = other.compare(*this);
    if (!r) return std::nullopt;
    return 0 <=> *r;
  }
  auto eq = equals(other);
  if (eq && *eq) return std::strong_ordering::equal;
  return std::nullopt;
}

std::optional<bool> Nat::equals(const Nat& other) const {
  if (!node_ && !other.node_) return value_ == other.value_;
  if (node_ == other.node_) return true;
  if (!node_ || !other.node_) {
    const Nat& e = node_ ? other : *this;
    const Nat& s = node_ ? *this : other;
    if (s.node_->positive && s.node_->log2_lower >= bit_length(e.value_)) return false;
    return std::nullopt;
  }
  if (node_->is_pair && other.node_->is_pair) {
    auto a = node_->first.equals(other.node_->first);
    auto b = node_->second.equals(other.node_->second);
    if ((a && !*a) || (b && !*b)) return false;
    if (a && b) return true;
  }
  return std::nullopt;
}

std::optional<std::pair<Nat, Nat>> Nat::unpair() const {
  if (node_) {
    if (!node_->is_pair) return std::nullopt;
    return std::make_pair(node_->first, node_->second);
  }
  // M = floor((sqrt(8q+1) - 1) / 2)
  Int m = (boost::multiprecision::sqrt(Int(8 * value_ + 1)) - 1) / 2;
  const Int t = m * (m + 1) / 2;
  return std::make_pair(from_int(m - (value_ - t)), from_int(value_ - t));
}

std::string Nat::str() const {
  if (!node_) {
    if (bit_length(value_) <= 192) return value_.str();
    return "~2^" + std::to_string(bit_length(value_) - 1);
  }
  if (node_->is_pair) return "<" + node_->first.str() + "," + node_->second.str() + ">";
  if (!node_->positive) return "[?]";
  if (node_->log2_lower >= (std::uint64_t{1} << 62)) return "[>=2^2^62]";
  return "[>=2^" + std::to_string(node_->log2_lower) + "]";
}

Nat operator+(const Nat& a, const Nat& b) {
  if (a.is_exact() && b.is_exact()) return Nat::from_int(a.value_ + b.value_);
  if (a.is_exact() && a.value_ == 0) return b;
  if (b.is_exact() && b.value_ == 0) return a;
  return Nat::opaque(std::max(a.log2_lower(), b.log2_lower()), a.known_positive() || b.known_positive());
}

Nat Nat::sub(const Nat& a, const Nat& b) {
  if (a.is_exact() && b.is_exact()) {
    if (b.value_ > a.value_) throw std::domain_error("negative natural difference");
    return from_int(a.value_ - b.value_);
  }
  if (b.is_exact() && b.value_ == 0) return a;
  if (a.is_exact()) {
    if (b.known_positive() && b.log2_lower() >= bit_length(a.value_)) {
      throw std::domain_error("negative natural difference");
    }
    return opaque(0, false);
  }
  if (b.is_exact()) {
    // a >= 2^L and b < 2^(L-1) give a - b >= 2^(L-1)
    const std::uint64_t bl = bit_length(b.value_);
    if (a.known_positive() && a.log2_lower() > bl) return opaque(a.log2_lower() - 1, true);
    return opaque(0, false);
  }
  auto eq = a.equals(b);
  if (eq && *eq) return Nat(0);
  return opaque(0, false);
}

Nat Nat::pair(const Nat& n, const Nat& p) {
  if (n.is_exact() && p.is_exact()) {
    const Int s = n.value_ + p.value_;
    if (2 * bit_length(s) <= kExactBits) return from_int(s * (s + 1) / 2 + p.value_);
  }
  const Nat s = n + p;
  std::uint64_t lower = p.log2_lower();
  bool positive = s.known_positive();
  if (positive && s.log2_lower() >= 1) lower = std::max(lower, sat_add(s.log2_lower(), s.log2_lower()) - 1);
  auto node = std::make_shared<Node>();
  node->is_pair = true;
  node->first = n;
  node->second = p;
  node->log2_lower = positive ? lower : 0;
  node->positive = positive;
  Nat out;
  out.node_ = std::move(node);
  return out;
}

Nat Nat::pow2(const Nat& k) {
  if (k.is_exact()) {
    if (k.value_ < kExactBits) return from_int(Int(1) << static_cast<unsigned>(k.value_));
    auto kk = k.to_u64();
    return opaque(kk ? *kk : kSat, true);
  }
  if (!k.known_positive()) return opaque(0, true);
  const std::uint64_t lk = k.log2_lower();
  return opaque(lk >= 64 ? kSat : (std::uint64_t{1} << lk), true);
}

Nat Nat::shl(const Nat& a, const Nat& k) {
  if (a.is_exact() && a.value_ == 0) return Nat(0);
  if (a.is_exact() && k.is_exact() && bit_length(a.value_) + bit_length(k.value_) <= 64) {
    const auto kk = static_cast<std::uint64_t>(k.value_);
    if (bit_length(a.value_) + kk <= kExactBits) return from_int(a.value_ << static_cast<unsigned>(kk));
  }
  if (!a.known_positive()) return opaque(0, false);
  std::uint64_t klow = 0;
  if (auto kk = k.to_u64()) {
    klow = *kk;
  } else if (k.is_exact() || (k.known_positive())) {
    const std::uint64_t lk = k.log2_lower();
    klow = lk >= 64 ? kSat : (std::uint64_t{1} << lk);
  }
  return opaque(sat_add(a.log2_lower(), klow), true);
}

}  // namespace dstk
