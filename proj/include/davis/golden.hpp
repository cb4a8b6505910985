#pragma once

// Exact arithmetic in the real quadratic field Q(sqrt 5).
//
// Every coordinate of the 120-cell (facet centers, vertices, edge midpoints)
// lives in this field, so equality, sign and rank questions about the polytope
// are decided without rounding.

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

namespace davis {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

/// r + s * sqrt(5) with r, s exact rationals. GMP keeps both parts in
/// lowest terms with positive denominators, so the representation is canonical.
class Golden {
 public:
  Golden() = default;
  Golden(int r) : r_(r) {}  // NOLINT(google-explicit-constructor)
  Golden(long long r) : r_(r) {}  // NOLINT(google-explicit-constructor)
  Golden(Rational r, Rational s = Rational(0)) : r_(std::move(r)), s_(std::move(s)) {}

  static Golden sqrt5() { return Golden(Rational(0), Rational(1)); }
  /// The golden ratio (1 + sqrt 5) / 2.
  static Golden phi() { return Golden(Rational(1, 2), Rational(1, 2)); }

  const Rational& rational_part() const { return r_; }
  const Rational& sqrt5_part() const { return s_; }

  bool is_zero() const { return r_ == 0 && s_ == 0; }
  /// Exact sign of the real number r + s sqrt 5.
  int sign() const;

  Golden inverse() const;
  /// Galois conjugate r - s sqrt 5.
  Golden conjugate() const { return Golden(r_, -s_); }
  /// Field norm r^2 - 5 s^2.
  Rational norm() const { return r_ * r_ - 5 * s_ * s_; }

  /// Floating value. Used only for cross-checks, never for decisions.
  double to_double() const;

  /// "p/q+r/t*sqrt5" with reduced integers (the sign joins the two parts).
  std::string str() const;
  /// Inverse of str(). Throws std::invalid_argument on malformed text.
  static Golden parse(std::string_view text);

  Golden& operator+=(const Golden& o) {
    r_ += o.r_;
    s_ += o.s_;
    return *this;
  }
  Golden& operator-=(const Golden& o) {
    r_ -= o.r_;
    s_ -= o.s_;
    return *this;
  }
  Golden& operator*=(const Golden& o);
  Golden& operator/=(const Golden& o) { return *this *= o.inverse(); }

  friend Golden operator+(Golden a, const Golden& b) { return a += b; }
  friend Golden operator-(Golden a, const Golden& b) { return a -= b; }
  friend Golden operator*(Golden a, const Golden& b) { return a *= b; }
  friend Golden operator/(Golden a, const Golden& b) { return a /= b; }
  friend Golden operator-(const Golden& a) { return Golden(-a.r_, -a.s_); }

  friend bool operator==(const Golden& a, const Golden& b) {
    return a.r_ == b.r_ && a.s_ == b.s_;
  }
  friend std::strong_ordering operator<=>(const Golden& a, const Golden& b) {
    const int s = (a - b).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::size_t hash() const;

 private:
  Rational r_{0};
  Rational s_{0};
};

enum class ArithOp { kAdd, kSub, kMul, kDiv };

/// Single entry point for the four field operations; division by zero throws
/// std::domain_error.
Golden gf_arith(ArithOp op, const Golden& a, const Golden& b);
inline int gf_sign(const Golden& a) { return a.sign(); }

std::ostream& operator<<(std::ostream& os, const Golden& g);

// Free functions Eigen expects from a scalar type.
inline Golden abs(const Golden& g) { return g.sign() < 0 ? -g : g; }
inline Golden abs2(const Golden& g) { return g * g; }
inline const Golden& conj(const Golden& g) { return g; }
inline const Golden& real(const Golden& g) { return g; }
inline Golden imag(const Golden&) { return Golden(0); }

}  // namespace davis

template <>
struct std::hash<davis::Golden> {
  std::size_t operator()(const davis::Golden& g) const { return g.hash(); }
};

namespace Eigen {

template <>
struct NumTraits<davis::Golden> : GenericNumTraits<davis::Golden> {
  using Real = davis::Golden;
  using NonInteger = davis::Golden;
  using Nested = davis::Golden;
  using Literal = davis::Golden;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 16,
    MulCost = 64
  };

  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
