#include <gtest/gtest.h>

#include "support.hpp"
#include "tdq/leonard.hpp"
#include "tdq/qkit.hpp"

using namespace tdq;
using namespace tdq::testing;

namespace {

using M = Matrix<Q>;

TEST(QInt, Examples) {
  EXPECT_EQ(q_fact(0, Q(2)), Q(1));
  EXPECT_EQ(q_int(2, Q(2)), frac(5, 2));
  EXPECT_EQ(q_int(0, Q(3)), Q(0));
  EXPECT_EQ(q_int(-2, Q(2)), frac(-5, 2));
  EXPECT_THROW(q_int(1, Q(1)), DivisionByZero);
  EXPECT_THROW(q_fact(-1, Q(2)), PreconditionViolation);
}

TEST(QInt, SymbolicIsLaurentSum) {
  const R q = R::variable('q');
  for (long n = 1; n <= 6; ++n) {
    R expected(0);
    for (long k = n - 1; k >= 1 - n; k -= 2) expected += pow(q, k);
    EXPECT_EQ(q_int(n, q), expected);
  }
}

TEST(QBinom, LaurentPolynomialsUpToSix) {
  const R q = R::variable('q');
  for (long n = 0; n <= 6; ++n) {
    for (long k = 0; k <= n; ++k) {
      const R c = q_binom(n, k, q);
      // Clearing q^(k(n-k)) leaves a polynomial.
      EXPECT_TRUE((c * pow(q, k * (n - k))).is_polynomial()) << n << " " << k << " " << c.to_string();
    }
  }
  EXPECT_EQ(q_binom(4, 2, Q(2)), q_fact(4, Q(2)) / (q_fact(2, Q(2)) * q_fact(2, Q(2))));
  EXPECT_EQ(q_binom(3, 5, Q(2)), Q(0));
}

TEST(QExp, Examples) {
  EXPECT_EQ(q_exp(M(3, 3), QExpVariant::q, Q(2)), M::identity(3));
  const M psi = psi_hat(1, Q(2));
  EXPECT_EQ(psi, (M{{Q(0), frac(9, 4)}, {Q(0), Q(0)}}));
  const Q x = Q(3) / (Q(2) - frac(1, 2));
  EXPECT_EQ(x, Q(2));
  EXPECT_EQ(q_exp(x * psi, QExpVariant::q, Q(2)), (M{{Q(1), frac(9, 2)}, {Q(0), Q(1)}}));
  EXPECT_THROW(q_exp(M::identity(2), QExpVariant::q, Q(2)), NotNilpotent);
}

TEST(QExp, EntryFormulaMatchesSeries) {
  for (const auto& p : grid(6)) {
    for (const Q& x : {Q(1), p.a, p.a.inverse(), -p.a}) {
      for (auto variant : {QExpVariant::q, QExpVariant::q_inverse}) {
        EXPECT_EQ(q_exp(x * psi_hat(p.d, p.q), variant, p.q), q_exp_psi_hat_formula(p.d, x, variant, p.q));
      }
    }
  }
}

// Random strictly upper triangular T: exp_q(T) exp_{q^-1}(-T) = I, and
// summing past the nilpotency index changes nothing.
TEST(QExpProperties, InversePairAndTruncation) {
  Gen g(61);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 6));
    M t(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = r + 1; c < n; ++c) t(r, c) = g.rational(5);
    }
    const M s = g.invertible(n);
    t = s * t * inverse(s);
    Q q;
    do q = g.nonzero_rational(5);
    while (q * q == Q(1));
    const M e = q_exp(t, QExpVariant::q, q);
    EXPECT_EQ(e * q_exp(-t, QExpVariant::q_inverse, q), M::identity(n));
    EXPECT_EQ(q_exp(-t, QExpVariant::q_inverse, q) * e, M::identity(n));
    M longer = M::identity(n);
    M power_t = M::identity(n);
    for (long k = 1; k <= static_cast<long>(n) + 2; ++k) {
      power_t = power_t * t;
      longer = longer + q_exp_coefficient(k, QExpVariant::q, q) * power_t;
    }
    EXPECT_EQ(longer, e);
  }
}

TEST(QExpShift, Examples) {
  const M z(2, 2);
  EXPECT_TRUE(q_exp_shift_check(M::identity(2), z, Q(2)));
  // K = diag(q^d, ..., q^-d) and psi-hat satisfy K T = q^2 T K.
  for (int d = 1; d <= 4; ++d) {
    const Q q(3);
    const M k = q_diagonal(d, q);
    EXPECT_TRUE(q_exp_shift_check(k, psi_hat(d, q), q));
    EXPECT_TRUE(q_exp_shift_check(k, frac(2, 7) * psi_hat(d, q), q));
  }
  EXPECT_THROW(q_exp_shift_check(M{{Q(1), Q(1)}, {Q(0), Q(1)}}, M{{Q(0), Q(0)}, {Q(1), Q(0)}}, Q(2)),
               PreconditionViolation);
}

TEST(QExpShift, SymbolicWithM) {
  for (int d = 1; d <= 3; ++d) {
    const auto p = symbolic_params(d);
    const Matrix<R> m = operator_matrix_formula(OperatorKind::M, Basis::u, p);
    const R c = (p.q - p.q.inverse()).inverse();
    EXPECT_TRUE(q_exp_shift_check(m, (c * p.a.inverse()) * psi_hat(d, p.q), p.q));
  }
}

}  // namespace
