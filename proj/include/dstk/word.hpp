#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace dstk {

// Finite binary word, stored as a string of '0'/'1'.
class Word {
 public:
  Word() = default;
  explicit Word(std::string bits);

  // Accepts "-" for the empty word.
  static Word parse(std::string_view text);
  static Word zeros(std::size_t n);
  static Word from_value(std::uint64_t value, std::size_t width);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  int operator[](std::size_t i) const { return bits_[i] == '1' ? 1 : 0; }

  void push_back(int bit) { bits_.push_back(bit ? '1' : '0'); }
  Word& operator+=(const Word& other);
  friend Word operator+(Word a, const Word& b) { return a += b; }

  Word prefix(std::size_t n) const;
  Word drop(std::size_t n) const;
  bool is_prefix_of(const Word& other) const;
  std::size_t count_ones() const;
  // Big-endian value; requires size() <= 64.
  std::uint64_t value() const;

  const std::string& bits() const { return bits_; }
  std::string str() const { return bits_.empty() ? "-" : bits_; }

  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) { return a.bits_ <=> b.bits_; }

 private:
  std::string bits_;
};

inline Word operator""_w(const char* s, std::size_t n) { return Word(std::string(s, n)); }

std::ostream& operator<<(std::ostream& os, const Word& w);

struct NodePair {
  Word s;
  Word t;
  friend bool operator==(const NodePair&, const NodePair&) = default;
  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

}  // namespace dstk
