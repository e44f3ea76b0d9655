#include <gtest/gtest.h>

#include "support.hpp"
#include "tdq/polynomial.hpp"

using namespace tdq;
using namespace tdq::testing;

namespace {

Polynomial var(char c) { return Polynomial::variable(variable_index(c)); }

TEST(Polynomial, GrlexOrderAndRendering) {
  const Polynomial p = var('q') * var('q') + var('a') * var('b') * var('b') - Polynomial(3);
  EXPECT_EQ(p.to_string(), "a*b^2+q^2-3");
  EXPECT_EQ(p.degree_in(variable_index('b')), 2);
  EXPECT_EQ((p - p), Polynomial(0));
}

TEST(Polynomial, ExactDivision) {
  const Polynomial f = var('q') * var('q') - Polynomial(1);
  const auto h = divide_exact(f, var('q') - Polynomial(1));
  ASSERT_TRUE(h.has_value());
  EXPECT_EQ(*h, var('q') + Polynomial(1));
  EXPECT_FALSE(divide_exact(f, var('a')).has_value());
}

TEST(Polynomial, GcdExamples) {
  const Polynomial q = var('q'), a = var('a');
  const Polynomial common = q * a - Polynomial(2);
  EXPECT_EQ(gcd(common * (q + Polynomial(1)), common * (a - q)), common);
  EXPECT_EQ(gcd(Polynomial(6) * q, Polynomial(4) * q * q), Polynomial(2) * q);
  EXPECT_EQ(gcd(Polynomial(0), -q), q);
  EXPECT_EQ(gcd(q + Polynomial(1), q - Polynomial(1)), Polynomial(1));
}

// The evaluation-based fast path must agree with the subresultant-free
// pseudo-remainder route whenever it answers.
TEST(PolynomialProperties, HeuristicGcdAgreesWithPrs) {
  Gen g(41);
  int answered = 0;
  for (int i = 0; i < 150; ++i) {
    const Polynomial common = g.polynomial(3, 2);
    if (common.is_zero()) continue;
    const Polynomial f = detail::primitive(detail::positive(common * g.polynomial(3, 2)));
    const Polynomial h = detail::primitive(detail::positive(common * g.polynomial(3, 2)));
    if (f.is_zero() || h.is_zero() || f.is_constant() || h.is_constant()) continue;
    const Polynomial prs = detail::positive(detail::gcd_prs(f, h));
    if (const auto heur = detail::gcd_heuristic(f, h)) {
      ++answered;
      EXPECT_EQ(detail::positive(*heur), prs) << f.to_string() << " | " << h.to_string();
    }
    // Both divide the inputs and the common factor divides the result.
    EXPECT_TRUE(divide_exact(f, prs).has_value());
    EXPECT_TRUE(divide_exact(h, prs).has_value());
    EXPECT_TRUE(divide_exact(prs, detail::primitive(detail::positive(common))).has_value() ||
                common.is_constant());
  }
  EXPECT_GT(answered, 50);
}

TEST(PolynomialProperties, RingAxioms) {
  Gen g(42);
  for (int i = 0; i < 100; ++i) {
    const Polynomial x = g.polynomial(), y = g.polynomial(), z = g.polynomial();
    EXPECT_EQ(x * (y + z), x * y + x * z);
    EXPECT_EQ((x * y) * z, x * (y * z));
    EXPECT_EQ(x * y, y * x);
    if (!y.is_zero()) {
      const auto back = divide_exact(x * y, y);
      ASSERT_TRUE(back.has_value());
      EXPECT_EQ(*back, x);
    }
  }
}

}  // namespace
