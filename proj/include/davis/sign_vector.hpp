#pragma once

// Points of the cube {-1, 0, +1}^72 as a pair of disjoint bitmasks.

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace davis {

inline constexpr int kDimension = 72;

class SignVector {
 public:
  SignVector() = default;

  int get(int i) const {
    const auto [w, b] = slot(i);
    if ((plus_[w] >> b) & 1U) return 1;
    if ((minus_[w] >> b) & 1U) return -1;
    return 0;
  }

  void set(int i, int value) {
    const auto [w, b] = slot(i);
    const std::uint64_t bit = std::uint64_t{1} << b;
    plus_[w] &= ~bit;
    minus_[w] &= ~bit;
    if (value > 0) plus_[w] |= bit;
    if (value < 0) minus_[w] |= bit;
  }

  int support() const {
    return std::popcount(plus_[0] | minus_[0]) + std::popcount(plus_[1] | minus_[1]);
  }

  bool is_zero() const { return (plus_[0] | minus_[0] | plus_[1] | minus_[1]) == 0; }

  SignVector operator-() const {
    SignVector out;
    out.plus_ = minus_;
    out.minus_ = plus_;
    return out;
  }

  const std::array<std::uint64_t, 2>& plus_mask() const { return plus_; }
  const std::array<std::uint64_t, 2>& minus_mask() const { return minus_; }

  friend bool operator==(const SignVector&, const SignVector&) = default;

  /// Lexicographic in coordinate order with -1 < 0 < +1.
  friend std::strong_ordering operator<=>(const SignVector& a, const SignVector& b) {
    for (int w = 0; w < 2; ++w) {
      const std::uint64_t diff = (a.plus_[w] ^ b.plus_[w]) | (a.minus_[w] ^ b.minus_[w]);
      if (diff == 0) continue;
      const int i = 64 * w + std::countr_zero(diff);
      return a.get(i) <=> b.get(i);
    }
    return std::strong_ordering::equal;
  }

  /// 72 characters over {-, 0, +}.
  std::string str() const {
    std::string out(kDimension, '0');
    for (int i = 0; i < kDimension; ++i) {
      const int v = get(i);
      if (v > 0) out[i] = '+';
      if (v < 0) out[i] = '-';
    }
    return out;
  }

  static SignVector parse(std::string_view text) {
    if (text.size() != kDimension) throw std::invalid_argument("sign vector needs 72 characters");
    SignVector x;
    for (int i = 0; i < kDimension; ++i) {
      switch (text[i]) {
        case '+':
          x.set(i, 1);
          break;
        case '-':
          x.set(i, -1);
          break;
        case '0':
          break;
        default:
          throw std::invalid_argument("bad sign vector character");
      }
    }
    return x;
  }

 private:
  static std::pair<int, int> slot(int i) { return {i >> 6, i & 63}; }

  std::array<std::uint64_t, 2> plus_{};
  std::array<std::uint64_t, 2> minus_{};
};

struct SignVectorHash {
  std::size_t operator()(const SignVector& x) const {
    std::size_t h = 0;
    for (int w = 0; w < 2; ++w) {
      h = h * 0x9E3779B97F4A7C15ULL + x.plus_mask()[w];
      h = h * 0x9E3779B97F4A7C15ULL + x.minus_mask()[w];
    }
    return h;
  }
};

}  // namespace davis
