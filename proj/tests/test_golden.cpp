#include <cmath>
#include <random>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "davis/exact_linalg.hpp"
#include "davis/golden.hpp"

namespace davis {
namespace {

TEST(Golden, PhiIdentities) {
  const Golden phi = Golden::phi();
  EXPECT_EQ(phi * phi, phi + Golden(1));
  EXPECT_EQ(Golden(1) / phi, phi - Golden(1));
  EXPECT_EQ(phi.conjugate() * phi, Golden(-1));
  EXPECT_EQ(Golden::sqrt5() * Golden::sqrt5(), Golden(5));
}

TEST(Golden, SignOfMixedTerms) {
  EXPECT_EQ(Golden(Rational(9, 4), Rational(-1)).sign(), 1);   // 2.25 > sqrt5
  EXPECT_EQ(Golden(Rational(11, 5), Rational(-1)).sign(), -1);  // 2.2 < sqrt5
  EXPECT_EQ(Golden(Rational(-9, 4), Rational(1)).sign(), -1);
  EXPECT_EQ(Golden(0).sign(), 0);
  EXPECT_EQ(gf_sign(Golden::phi() - Golden(2)), -1);
}

TEST(Golden, DivisionByZeroThrows) {
  EXPECT_THROW(Golden(3) / Golden(0), std::domain_error);
  EXPECT_THROW(gf_arith(ArithOp::kDiv, Golden(1), Golden(0)), std::domain_error);
}

TEST(Golden, StringRoundTrip) {
  const Golden g(Rational(-7, 3), Rational(5, 2));
  EXPECT_EQ(g.str(), "-7/3+5/2*sqrt5");
  EXPECT_EQ(Golden::parse(g.str()), g);
  const Golden h(Rational(1, 2), Rational(-1, 2));
  EXPECT_EQ(h.str(), "1/2-1/2*sqrt5");
  EXPECT_EQ(Golden::parse(h.str()), h);
  EXPECT_THROW(Golden::parse("1/2+1/2"), std::invalid_argument);
  EXPECT_THROW(Golden::parse("1/0+1/2*sqrt5"), std::invalid_argument);
  EXPECT_THROW(Golden::parse("x/2+1/2*sqrt5"), std::invalid_argument);
}

Golden random_golden(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-40, 40);
  std::uniform_int_distribution<int> den(1, 12);
  return Golden(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
}

TEST(Golden, ArithmeticAgreesWithDoubles) {
  std::mt19937_64 rng(20260415);
  int sign_checks = 0;
  for (int i = 0; i < 1000; ++i) {
    const Golden a = random_golden(rng);
    const Golden b = random_golden(rng);
    const double da = a.to_double();
    const double db = b.to_double();
    EXPECT_NEAR((a + b).to_double(), da + db, 1e-9);
    EXPECT_NEAR((a - b).to_double(), da - db, 1e-9);
    EXPECT_NEAR((a * b).to_double(), da * db, 1e-7);
    if (!b.is_zero()) {
      EXPECT_NEAR((a / b).to_double(), da / db, 1e-6 * std::max(1.0, std::abs(da / db)));
    }
    if (std::abs(da) > 1e-9) {
      EXPECT_EQ(a.sign(), da > 0 ? 1 : -1);
      ++sign_checks;
    }
    EXPECT_EQ(Golden::parse(a.str()), a);
  }
  EXPECT_GT(sign_checks, 900);
}

TEST(ExactLinalg, DeterminantMatchesEliminationAndInverse) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> entry(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    DynMatrix<Golden> m(5, 5);
    DynMatrix<BigInt> z(5, 5);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        const int e = entry(rng);
        z(i, j) = e;
        m(i, j) = Golden(e) + Golden(entry(rng)) * Golden::sqrt5();
      }
    }
    const Golden det = bareiss_determinant(m);
    const auto inv = exact_inverse(m);
    ASSERT_EQ(inv.has_value(), !det.is_zero());
    if (inv) {
      const DynMatrix<Golden> id = m * *inv;
      EXPECT_TRUE(id == DynMatrix<Golden>::Identity(5, 5));
    }
    DynMatrix<double> d(5, 5);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) d(i, j) = z(i, j).convert_to<double>();
    }
    EXPECT_NEAR(bareiss_determinant(z).convert_to<double>(), d.determinant(), 1e-6);
  }
}

TEST(ExactLinalg, AffineSolveReportsKernel) {
  DynMatrix<Golden> a(2, 3);
  a << Golden(1), Golden(2), Golden(3), Golden(2), Golden(4), Golden(6);
  DynVector<Golden> b(2);
  b << Golden(1), Golden(2);
  const auto sol = solve_affine(a, b);
  ASSERT_TRUE(sol.consistent);
  EXPECT_EQ(sol.kernel.cols(), 2);
  EXPECT_TRUE((a * sol.particular) == b);
  EXPECT_TRUE((a * sol.kernel).isZero());
  b(1) = Golden(3);
  EXPECT_FALSE(solve_affine(a, b).consistent);
}

}  // namespace
}  // namespace davis
