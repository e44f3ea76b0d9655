#include <gtest/gtest.h>

#include "support.hpp"
#include "tdq/engine.hpp"

using namespace tdq;
using namespace tdq::testing;

namespace {

using M = Matrix<Q>;
using S = Subspace<Q>;

const QRacahParams<Q> kD1{1, Q(2), Q(3), Q(5)};

EngineInput<Q> u_basis_input(const QRacahParams<Q>& p) {
  return {operator_matrix_formula(OperatorKind::A, Basis::u, p), operator_matrix_formula(OperatorKind::K, Basis::u, p),
          std::nullopt, p};
}

template <class F>
bool has_solution(const Detection<F>& det, const F& q, const F& a) {
  for (const auto& s : det.solutions) {
    if (s.first == q && s.second == a) return true;
  }
  return false;
}

TEST(Detect, Examples) {
  const auto det = detect_qracah<Q>({frac(145, 12), frac(10, 3), frac(25, 12)});
  ASSERT_TRUE(det.found());
  EXPECT_TRUE(has_solution(det, Q(2), Q(3)));
  EXPECT_TRUE(has_solution(det, frac(1, 2), frac(1, 3)));
  // Even diameter: q and -q give the same eigenvalues.
  EXPECT_TRUE(has_solution(det, Q(-2), Q(3)));
  EXPECT_EQ(det.solutions.size(), 4U);
  ASSERT_TRUE(det.representative.has_value());
  EXPECT_EQ(det.solutions[*det.representative], std::make_pair(frac(-1, 2), frac(1, 3)));

  const auto bad = detect_qracah<Q>({Q(1), Q(2), Q(3)});
  EXPECT_FALSE(bad.found());
  EXPECT_EQ(bad.reason, "q^4=1 forced");

  EXPECT_EQ(detect_qracah<Q>({Q(1)}).reason, "need at least two eigenvalues");
  EXPECT_EQ(detect_qracah<Q>({Q(1), Q(1)}).reason, "eigenvalues are not mutually distinct");
  EXPECT_EQ(detect_qracah<Q>({Q(1), Q(2), Q(4), Q(9)}).reason, "three-term recurrence is inconsistent");
}

TEST(Detect, OddDiameterHasNoSignFlip) {
  const auto theta = eigenvalue_seq(QRacahParams<Q>{3, Q(2), Q(3), std::nullopt}).theta;
  const auto det = detect_qracah(theta);
  ASSERT_TRUE(det.found());
  EXPECT_TRUE(has_solution(det, Q(2), Q(3)));
  EXPECT_TRUE(has_solution(det, frac(1, 2), frac(1, 3)));
  EXPECT_FALSE(has_solution(det, Q(-2), Q(3)));
  // Every reported solution reproduces the input.
  for (const auto& [q, a] : det.solutions) {
    EXPECT_EQ(eigenvalue_seq(QRacahParams<Q>{3, q, a, std::nullopt}).theta, theta);
  }
}

TEST(Detect, GridRecoversParameters) {
  for (const auto& p : grid(6)) {
    const auto det = detect_qracah(eigenvalue_seq(p).theta);
    ASSERT_TRUE(det.found()) << det.reason;
    EXPECT_TRUE(has_solution(det, p.q, p.a) || has_solution(det, p.q.inverse(), p.a.inverse()));
  }
}

TEST(Detect, Symbolic) {
  const auto p = symbolic_params(2);
  const auto det = detect_qracah(eigenvalue_seq(p).theta);
  ASSERT_TRUE(det.found());
  EXPECT_TRUE(has_solution(det, p.q, p.a));
}

TEST(SplitFromAK, ExampleD1) {
  const auto in = u_basis_input(kD1);
  const auto r = split_from_AK(in.A, *in.K, kD1);
  EXPECT_EQ(r.U[0], S::span(2, {{Q(1), Q(0)}}));
  EXPECT_EQ(r.U[1], S::span(2, {{Q(0), Q(1)}}));
  EXPECT_EQ(r.Udd[0], r.U[0]);
  EXPECT_EQ(r.Udd[1], S::span(2, {{Q(4), Q(1)}}));
  EXPECT_EQ(r.E[0], S::span(2, {{Q(4), Q(1)}}));
}

TEST(SplitFromAK, Errors) {
  const auto in = u_basis_input(kD1);
  try {
    split_from_AK(in.A, M::diagonal({Q(3), frac(1, 2)}), kD1);
    FAIL();
  } catch (const EngineError& e) {
    EXPECT_NE(std::string(e.what()).find("spectrum mismatch"), std::string::npos);
  }
  const auto theta = eigenvalue_seq(kD1).theta;
  try {
    split_from_AK(M{{theta[0], Q(1)}, {Q(0), theta[1]}}, *in.K, kD1);
    FAIL();
  } catch (const EngineError& e) {
    EXPECT_NE(std::string(e.what()).find("split-action violation"), std::string::npos);
  }
}

TEST(BuildKB, ExampleD1) {
  const auto in = u_basis_input(kD1);
  const auto r = split_from_AK(in.A, *in.K, kD1);
  const auto [k, b] = build_KB(r.U, r.Udd, Q(2), 1);
  EXPECT_EQ(k, M::diagonal({Q(2), frac(1, 2)}));
  EXPECT_EQ(b, (M{{Q(2), Q(-6)}, {Q(0), frac(1, 2)}}));
  EXPECT_EQ(psi_from_KB(k, b, kD1), (M{{Q(0), frac(9, 4)}, {Q(0), Q(0)}}));
  EXPECT_THROW(psi_from_KB(k, M{{Q(3), Q(-6)}, {Q(0), frac(1, 2)}}, kD1), EngineError);
}

TEST(DeriveSuite, ExampleD1) {
  const auto s = derive_suite(u_basis_input(kD1));
  EXPECT_EQ(s.M, (M{{Q(2), frac(3, 4)}, {Q(0), frac(1, 2)}}));
  EXPECT_EQ(s.Delta, (M{{Q(1), Q(4)}, {Q(0), Q(1)}}));
  EXPECT_EQ(s.W[1], S::span(2, {{Q(1), Q(-2)}}));
  EXPECT_EQ(s.rho, (std::vector<std::size_t>{1, 1}));
  EXPECT_FALSE(s.Estar.has_value());
}

// The derived suite from u-basis input reproduces every closed-form matrix.
TEST(DeriveSuite, MatchesClosedFormsOnGrid) {
  for (const auto& p : grid(6)) {
    const auto s = derive_suite(u_basis_input(p));
    const auto l = leonard_suite(p, Basis::u);
    EXPECT_EQ(s.K, l[OperatorKind::K]);
    EXPECT_EQ(s.B, l[OperatorKind::B]);
    EXPECT_EQ(s.psi, l[OperatorKind::psi]);
    EXPECT_EQ(s.M, l[OperatorKind::M]);
    EXPECT_EQ(s.Minv, l[OperatorKind::Minv]);
    EXPECT_EQ(s.Delta, l[OperatorKind::Delta]);
    EXPECT_EQ(s.Deltainv, l[OperatorKind::Deltainv]);
  }
}

TEST(DeriveSuite, FromWBasisInput) {
  for (const auto& p : grid(4)) {
    const auto l = leonard_suite(p, Basis::w);
    const auto s = derive_suite(EngineInput<Q>{l[OperatorKind::A], l[OperatorKind::K], std::nullopt, p});
    EXPECT_EQ(s.M, l[OperatorKind::M]);
    EXPECT_EQ(s.Delta, l[OperatorKind::Delta]);
    EXPECT_EQ(s.psi, l[OperatorKind::psi]);
  }
}

TEST(DeriveSuite, Errors) {
  auto in = u_basis_input(kD1);
  in.K.reset();
  EXPECT_THROW(derive_suite(in), EngineError);
  in = u_basis_input(kD1);
  EXPECT_THROW(derive_suite(in, Claims<Q>{{"M", M::identity(3)}}), EngineError);
  // A claimed Delta is taken as given; strict mode still checks its own routes.
  const auto s = derive_suite(in, Claims<Q>{{"Delta", M::identity(2)}});
  EXPECT_EQ(s.Delta, M::identity(2));
}

TEST(DeriveSuite, FromPairD1) {
  const auto f = full_fixture();
  const auto s = derive_suite(EngineInput<Q>{f.A, std::nullopt, f.Astar, f.params});
  ASSERT_TRUE(s.Estar.has_value());
  EXPECT_EQ(s.U[0], S::span(2, {{Q(1), Q(0)}}));
  EXPECT_EQ(s.M, (M{{Q(2), frac(3, 4)}, {Q(0), frac(1, 2)}}));
  EXPECT_EQ(s.Delta, (M{{Q(1), Q(4)}, {Q(0), Q(1)}}));
}

TEST(EngineProperties, EquivarianceUnderConjugation) {
  Gen g(71);
  for (int d = 1; d <= 5; ++d) {
    const QRacahParams<Q> p{d, Q(2), Q(3), Q(5)};
    const auto in = u_basis_input(p);
    const auto base = derive_suite(in);
    for (int k = 0; k < 3; ++k) {
      const M s = g.invertible(static_cast<std::size_t>(d + 1));
      const M sinv = inverse(s);
      const auto moved = derive_suite(EngineInput<Q>{s * in.A * sinv, s * *in.K * sinv, std::nullopt, p});
      EXPECT_EQ(moved, conjugate(base, s)) << "d=" << d << " k=" << k;
    }
  }
}

TEST(EngineProperties, DownarrowIsInvolution) {
  for (const auto& p : grid(5)) {
    const auto s = derive_suite(u_basis_input(p));
    const auto down = downarrow(s);
    EXPECT_EQ(down.K, s.B);
    EXPECT_EQ(down.B, s.K);
    EXPECT_EQ(down.M, s.M);
    EXPECT_EQ(down.Delta, s.Deltainv);
    EXPECT_EQ(down.W, s.W);
    EXPECT_EQ(downarrow(down), s);
  }
}

TEST(DeltaTriangular, RoutesAgreeOnGrid) {
  for (const auto& p : grid(6)) {
    const auto s = derive_suite(u_basis_input(p), {}, DeriveMode::lenient);
    EXPECT_EQ(delta_triangular(s.U, s.Udd), delta_power_series(s.psi, p.q, p.a, p.d));
    EXPECT_EQ(delta_triangular(s.U, s.Udd), delta_exp_product(s.psi, p.q, p.a));
    EXPECT_EQ(delta_triangular(s.Udd, s.U), inverse(s.Delta));
  }
}

TEST(ValidateAxioms, FullFixturePasses) {
  const auto f = full_fixture();
  const auto r = validate_axioms(f.A, f.Astar, f.params);
  EXPECT_EQ(r.status, AxiomStatus::pass);
  EXPECT_EQ(r.algebra_dim, 4U);
  EXPECT_EQ(r.d, 1);
  EXPECT_EQ(r.delta, 1);
}

TEST(ValidateAxioms, Failures) {
  // With x = 0, A* is diagonal and shares the eigenvector of A for theta_1.
  const auto f = full_fixture(Q(0));
  EXPECT_NE(validate_axioms(f.A, f.Astar, f.params).status, AxiomStatus::pass);
  EXPECT_LT(generated_algebra_dim<Q>({f.A, f.Astar}), 4U);
  // A = A* = I has none of the required eigenvalues.
  const auto r = validate_axioms(M::identity(2), M::identity(2), f.params);
  EXPECT_NE(r.status, AxiomStatus::pass);
  EXPECT_FALSE(r.messages.empty());
}

}  // namespace
