#include <gtest/gtest.h>

#include "support.hpp"
#include "tdq/leonard.hpp"

using namespace tdq;
using namespace tdq::testing;

namespace {

using M = Matrix<Q>;

const QRacahParams<Q> kD1{1, Q(2), Q(3), Q(5)};

TEST(EigenvalueSeq, Examples) {
  const auto s = eigenvalue_seq(QRacahParams<Q>{2, Q(2), Q(3), Q(5)});
  EXPECT_EQ(s.theta, (std::vector<Q>{frac(145, 12), frac(10, 3), frac(25, 12)}));
  EXPECT_EQ(s.theta_star, (std::vector<Q>{frac(401, 20), frac(26, 5), frac(41, 20)}));
  const auto d1 = eigenvalue_seq(kD1);
  EXPECT_EQ(d1.theta, (std::vector<Q>{frac(37, 6), frac(13, 6)}));
  EXPECT_TRUE(eigenvalue_seq(QRacahParams<Q>{1, Q(2), Q(3), std::nullopt}).theta_star.empty());
  EXPECT_THROW(eigenvalue_seq(QRacahParams<Q>{2, Q(2), Q(1), std::nullopt}), PreconditionViolation);
}

TEST(PsiHat, Entries) {
  EXPECT_EQ(psi_hat(1, Q(2)), (M{{Q(0), frac(9, 4)}, {Q(0), Q(0)}}));
  const M p2 = psi_hat(2, Q(2));
  EXPECT_EQ(p2(0, 1), frac(45, 8));
  EXPECT_EQ(p2(1, 2), frac(45, 8));
  EXPECT_EQ(p2(0, 2), Q(0));
  EXPECT_EQ(nilpotency_index(psi_hat(3, Q(2))), 4U);
}

TEST(OperatorMatrix, SpotValuesD1) {
  EXPECT_EQ(operator_matrix_formula(OperatorKind::M, Basis::u, kD1), (M{{Q(2), frac(3, 4)}, {Q(0), frac(1, 2)}}));
  EXPECT_EQ(operator_matrix_formula(OperatorKind::B, Basis::u, kD1), (M{{Q(2), Q(-6)}, {Q(0), frac(1, 2)}}));
  EXPECT_EQ(operator_matrix_formula(OperatorKind::Delta, Basis::u, kD1), (M{{Q(1), Q(4)}, {Q(0), Q(1)}}));
  EXPECT_EQ(operator_matrix_formula(OperatorKind::A, Basis::w, kD1),
            (M{{frac(20, 3), frac(-9, 4)}, {Q(1), frac(5, 3)}}));
  EXPECT_EQ(operator_matrix_formula(OperatorKind::K, Basis::u, kD1), M::diagonal({Q(2), frac(1, 2)}));
  EXPECT_EQ(operator_matrix_formula(OperatorKind::M, Basis::w, kD1), M::diagonal({Q(2), frac(1, 2)}));
}

TEST(Transition, SpotValuesD1) {
  EXPECT_EQ(transition_matrix(Basis::w, Basis::u, kD1), (M{{Q(1), frac(1, 2)}, {Q(0), Q(1)}}));
  EXPECT_EQ(transition_matrix(Basis::u, Basis::w, kD1), (M{{Q(1), frac(-1, 2)}, {Q(0), Q(1)}}));
  EXPECT_EQ(transition_matrix(Basis::u, Basis::udd, kD1), operator_matrix_formula(OperatorKind::Delta, Basis::u, kD1));
  EXPECT_EQ(transition_matrix(Basis::w, Basis::w, kD1), M::identity(2));
}

TEST(Transition, CompositionAcrossBases) {
  for (const auto& p : grid(4)) {
    for (auto x : kAllBases) {
      for (auto y : kAllBases) {
        for (auto z : kAllBases) {
          EXPECT_EQ(transition_matrix(x, y, p) * transition_matrix(y, z, p), transition_matrix(x, z, p));
        }
      }
    }
  }
}

TEST(ClosedForms, AgreeWithConstructionOnGrid) {
  for (const auto& p : grid(6)) {
    for (const auto& c : closed_form_checks(p)) {
      EXPECT_TRUE(c.ok) << c.name << " d=" << p.d << " q=" << p.q.to_string() << " a=" << p.a.to_string();
    }
  }
}

TEST(ClosedForms, SymbolicSmallDiameters) {
  for (int d = 1; d <= 3; ++d) {
    for (const auto& c : closed_form_checks(symbolic_params(d))) EXPECT_TRUE(c.ok) << c.name << " d=" << d;
  }
}

TEST(LeonardProperties, AInWBasisHasUnitSubdiagonal) {
  for (const auto& p : grid(6)) {
    const M a = operator_matrix_formula(OperatorKind::A, Basis::w, p);
    for (int i = 1; i <= p.d; ++i) EXPECT_EQ(a(i, i - 1), Q(1));
    // Tridiagonal.
    for (int i = 0; i <= p.d; ++i) {
      for (int j = 0; j <= p.d; ++j) {
        if (std::abs(i - j) > 1) EXPECT_TRUE(a(i, j).is_zero());
      }
    }
  }
}

// Change of basis preserves trace and determinant of every operator; the
// determinant is read off from an echelon computation with no shared code.
Q determinant(M m) {
  const std::size_t n = m.rows();
  Q det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && m(pivot, c).is_zero()) ++pivot;
    if (pivot == n) return Q(0);
    if (pivot != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(pivot, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const Q f = m(r, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

Q trace(const M& m) {
  Q t(0);
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

TEST(LeonardProperties, TraceAndDeterminantInvariant) {
  for (const auto& p : grid(5)) {
    for (auto kind : kAllKinds) {
      const M ref = operator_matrix_formula(kind, Basis::u, p);
      for (auto basis : {Basis::udd, Basis::w}) {
        const M other = operator_matrix_formula(kind, basis, p);
        EXPECT_EQ(trace(other), trace(ref)) << kind_name(kind) << "@" << basis_name(basis);
        EXPECT_EQ(determinant(other), determinant(ref)) << kind_name(kind) << "@" << basis_name(basis);
      }
    }
  }
}

TEST(LeonardProperties, SuiteMatchesChangeOfBasis) {
  for (const auto& p : grid(4)) {
    const auto u = leonard_suite(p, Basis::u);
    const auto w = leonard_suite(p, Basis::w);
    for (auto kind : kAllKinds) EXPECT_EQ(change_basis(u[kind], Basis::u, Basis::w, p), w[kind]);
    EXPECT_EQ(u.a_udd, w.a_udd);
  }
}

}  // namespace
