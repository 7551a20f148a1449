#include "dstk/codings.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dstk/errors.hpp"

namespace dstk {

namespace {
using u128 = unsigned __int128;
constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

u128 tri128(u128 k) { return k * (k + 1) / 2; }
}  // namespace

std::uint64_t triangular(std::uint64_t k) {
  const u128 t = tri128(k);
  if (t > kMax) throw std::overflow_error("triangular number exceeds 64 bits");
  return static_cast<std::uint64_t>(t);
}

std::uint64_t big_m(std::uint64_t q) {
  auto m = static_cast<std::uint64_t>((std::sqrt(8.0L * static_cast<long double>(q) + 1.0L) - 1.0L) / 2.0L);
  while (m > 0 && tri128(m) > q) --m;
  while (tri128(m + 1) <= q) ++m;
  return m;
}

NatPair phi(std::uint64_t q) {
  const std::uint64_t m = big_m(q);
  const auto t = static_cast<std::uint64_t>(tri128(m));
  return {m - (q - t), q - t};
}

std::uint64_t pair(std::uint64_t n, std::uint64_t p) {
  const u128 s = static_cast<u128>(n) + p;
  const u128 v = tri128(s) + p;
  if (s > kMax || v > kMax) throw std::overflow_error("pair(n, p) exceeds 64 bits");
  return static_cast<std::uint64_t>(v);
}

Word psi(std::uint64_t q) {
  // q + 1 = 2^L + value
  const u128 q1 = static_cast<u128>(q) + 1;
  std::size_t len = 0;
  while ((u128{1} << (len + 1)) <= q1) ++len;
  const auto value = static_cast<std::uint64_t>(q1 - (u128{1} << len));
  return Word::from_value(value, len);
}

std::uint64_t psi_inv(const Word& w) {
  if (w.size() >= 64) throw std::overflow_error("psi_inv: word too long for 64 bits");
  return ((std::uint64_t{1} << w.size()) - 1) + w.value();
}

std::uint64_t pcode(std::span<const std::uint64_t> s) {
  if (s.empty()) throw precondition_error("pcode: empty sequence");
  std::uint64_t v = s[0];
  for (std::size_t i = 1; i < s.size(); ++i) v = pair(v, s[i]);
  return v;
}

EvConstSeq::EvConstSeq(Word prefix, int tail) : tail_(tail ? 1 : 0) {
  std::size_t n = prefix.size();
  while (n > 0 && prefix[n - 1] == tail_) --n;
  prefix_ = prefix.prefix(n);
}

EvConstSeq EvConstSeq::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon != 1 || (text[0] != '0' && text[0] != '1')) {
    throw parse_error("sequence literal must be 'tail:prefix', got '" + std::string(text) + "'");
  }
  return EvConstSeq(Word::parse(text.substr(2)), text[0] - '0');
}

Word EvConstSeq::take(std::uint64_t n) const {
  Word w;
  for (std::uint64_t i = 0; i < n; ++i) w.push_back(at(i));
  return w;
}

std::string EvConstSeq::str() const { return std::to_string(tail_) + ":" + prefix_.str(); }

EvConstSeq symdiff(const EvConstSeq& a, const EvConstSeq& b) {
  const std::size_t n = std::max(a.prefix().size(), b.prefix().size());
  Word w;
  for (std::size_t i = 0; i < n; ++i) w.push_back(a.at(i) ^ b.at(i));
  return EvConstSeq(w, a.tail() ^ b.tail());
}

EvConstSeq shift(const EvConstSeq& a) { return EvConstSeq(a.prefix().drop(1), a.tail()); }

EvConstSeq prepend(int bit, const EvConstSeq& a) {
  Word w;
  w.push_back(bit);
  return EvConstSeq(w + a.prefix(), a.tail());
}

}  // namespace dstk
