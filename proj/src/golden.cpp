#include "davis/golden.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace davis {

namespace {

int rational_sign(const Rational& q) { return q.sign(); }

std::string rational_str(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (text.empty() || slash == std::string_view::npos || slash == 0 ||
      slash + 1 == text.size()) {
    throw std::invalid_argument("malformed rational: " + std::string(text));
  }
  auto is_int = [](std::string_view t) {
    if (!t.empty() && (t.front() == '-' || t.front() == '+')) t.remove_prefix(1);
    if (t.empty()) return false;
    for (char c : t) {
      if (c < '0' || c > '9') return false;
    }
    return true;
  };
  const auto num = text.substr(0, slash);
  const auto den = text.substr(slash + 1);
  if (!is_int(num) || !is_int(den)) {
    throw std::invalid_argument("malformed rational: " + std::string(text));
  }
  const BigInt n{std::string(num)};
  const BigInt d{std::string(den)};
  if (d == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
  return Rational(n, d);
}

}  // namespace

int Golden::sign() const {
  const int sr = rational_sign(r_);
  const int ss = rational_sign(s_);
  if (ss == 0) return sr;
  if (sr == 0 || sr == ss) return ss;
  // Opposite signs: the part with larger square wins.
  const Rational lhs = r_ * r_;
  const Rational rhs = 5 * s_ * s_;
  if (lhs == rhs) return 0;  // unreachable: sqrt 5 is irrational
  return lhs > rhs ? sr : ss;
}

Golden& Golden::operator*=(const Golden& o) {
  Rational r = r_ * o.r_ + 5 * s_ * o.s_;
  Rational s = r_ * o.s_ + s_ * o.r_;
  r_ = std::move(r);
  s_ = std::move(s);
  return *this;
}

Golden Golden::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero in Q(sqrt5)");
  // 1 / (r + s sqrt5) = (r - s sqrt5) / (r^2 - 5 s^2)
  const Rational n = norm();
  return Golden(r_ / n, -s_ / n);
}

double Golden::to_double() const {
  return r_.convert_to<double>() + s_.convert_to<double>() * std::sqrt(5.0);
}

std::string Golden::str() const {
  std::string out = rational_str(r_);
  if (s_.sign() >= 0) out += "+";
  out += rational_str(s_);
  out += "*sqrt5";
  return out;
}

Golden Golden::parse(std::string_view text) {
  constexpr std::string_view kSuffix = "*sqrt5";
  if (text.size() <= kSuffix.size() ||
      text.substr(text.size() - kSuffix.size()) != kSuffix) {
    throw std::invalid_argument("missing *sqrt5 suffix: " + std::string(text));
  }
  text.remove_suffix(kSuffix.size());
  // The separator is the first '+' or '-' after the rational part's slash.
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw std::invalid_argument("malformed golden value: " + std::string(text));
  }
  const auto sep = text.find_first_of("+-", slash);
  if (sep == std::string_view::npos) {
    throw std::invalid_argument("malformed golden value: " + std::string(text));
  }
  Rational r = parse_rational(text.substr(0, sep));
  auto rest = text.substr(sep);
  if (rest.front() == '+') rest.remove_prefix(1);
  Rational s = parse_rational(rest);
  return Golden(std::move(r), std::move(s));
}

std::size_t Golden::hash() const {
  std::hash<std::string> h;
  return h(str());
}

Golden gf_arith(ArithOp op, const Golden& a, const Golden& b) {
  switch (op) {
    case ArithOp::kAdd:
      return a + b;
    case ArithOp::kSub:
      return a - b;
    case ArithOp::kMul:
      return a * b;
    case ArithOp::kDiv:
      return a / b;
  }
  throw std::logic_error("unknown arithmetic op");
}

std::ostream& operator<<(std::ostream& os, const Golden& g) { return os << g.str(); }

}  // namespace davis
