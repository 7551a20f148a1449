#include "dstk/word.hpp"

#include <algorithm>

#include "dstk/errors.hpp"

namespace dstk {

Word::Word(std::string bits) : bits_(std::move(bits)) {
  if (bits_.find_first_not_of("01") != std::string::npos) {
    throw parse_error("word must consist of 0/1 characters: '" + bits_ + "'");
  }
}

Word Word::parse(std::string_view text) {
  if (text == "-") return Word();
  if (text.empty()) throw parse_error("empty word literal; use '-' for the empty word");
  return Word(std::string(text));
}

Word Word::zeros(std::size_t n) {
  Word w;
  w.bits_.assign(n, '0');
  return w;
}

Word Word::from_value(std::uint64_t value, std::size_t width) {
  Word w = zeros(width);
  for (std::size_t i = 0; i < width && i < 64; ++i) {
    if ((value >> i) & 1U) w.bits_[width - 1 - i] = '1';
  }
  return w;
}

Word& Word::operator+=(const Word& other) {
  bits_ += other.bits_;
  return *this;
}

Word Word::prefix(std::size_t n) const {
  Word w;
  w.bits_ = bits_.substr(0, std::min(n, bits_.size()));
  return w;
}

Word Word::drop(std::size_t n) const {
  Word w;
  if (n < bits_.size()) w.bits_ = bits_.substr(n);
  return w;
}

bool Word::is_prefix_of(const Word& other) const {
  return bits_.size() <= other.bits_.size() && other.bits_.compare(0, bits_.size(), bits_) == 0;
}

std::size_t Word::count_ones() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), '1')); }

std::uint64_t Word::value() const {
  if (bits_.size() > 64) throw std::overflow_error("word too long for a 64-bit value");
  std::uint64_t v = 0;
  for (char c : bits_) v = (v << 1) | (c == '1' ? 1U : 0U);
  return v;
}

std::ostream& operator<<(std::ostream& os, const Word& w) { return os << w.str(); }

}  // namespace dstk
