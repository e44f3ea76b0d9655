#include <gtest/gtest.h>

#include "support.hpp"
#include "tdq/matrix.hpp"
#include "tdq/subspace.hpp"

using namespace tdq;
using namespace tdq::testing;

namespace {

using M = Matrix<Q>;
using S = Subspace<Q>;

std::vector<Q> vec(std::initializer_list<long> xs) {
  std::vector<Q> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

TEST(Eigenspace, Examples) {
  const M diag = M::diagonal({Q(2), frac(1, 2)});
  EXPECT_EQ(eigenspace(diag, Q(2)), S::span(2, {vec({1, 0})}));
  EXPECT_EQ(eigenspace(M::identity(3), Q(1)), S::full(3));
  const M m{{Q(2), frac(3, 4)}, {Q(0), frac(1, 2)}};
  const S w = eigenspace(m, frac(1, 2));
  EXPECT_EQ(w, S::span(2, {{frac(-1, 2), Q(1)}}));
  EXPECT_EQ(w.basis(), (M{{Q(1), Q(-2)}}));
  EXPECT_TRUE(eigenspace(diag, Q(7)).is_zero());
  EXPECT_THROW(eigenspace(M(2, 3), Q(1)), DimensionMismatch);
}

TEST(SubspaceSum, Examples) {
  const S e0 = S::span(2, {vec({1, 0})});
  const S e1 = S::span(2, {vec({0, 1})});
  EXPECT_TRUE(subspace_sum<Q>({e0, e1}).is_full());
  EXPECT_EQ(e0 + S::zero(2), e0);
  EXPECT_TRUE((S::span(2, {vec({1, 1})}) + S::span(2, {vec({1, -1})})).is_full());
  EXPECT_THROW(e0 + S::zero(3), DimensionMismatch);
}

TEST(SubspaceIntersect, Examples) {
  const S x = S::span(3, {vec({1, 0, 0}), vec({0, 1, 0})});
  const S y = S::span(3, {vec({0, 1, 0}), vec({0, 0, 1})});
  EXPECT_EQ(intersect(x, x), x);
  EXPECT_TRUE(intersect(S::span(2, {vec({1, 0})}), S::span(2, {vec({0, 1})})).is_zero());
  EXPECT_EQ(intersect(x, y), S::span(3, {vec({0, 1, 0})}));
  EXPECT_THROW(intersect(x, S::zero(2)), DimensionMismatch);
}

TEST(DirectDecomposition, Examples) {
  const S e0 = S::span(2, {vec({1, 0})});
  const S e1 = S::span(2, {vec({0, 1})});
  EXPECT_TRUE(is_direct_decomposition<Q>({e0, e1}));
  EXPECT_FALSE(is_direct_decomposition<Q>({e0, e0}));
  EXPECT_FALSE(is_direct_decomposition<Q>({e0, e1, S::zero(2)}));
}

TEST(Nilpotency, Examples) {
  EXPECT_EQ(nilpotency_index(M(3, 3)), 1U);
  EXPECT_FALSE(nilpotency_index(M::identity(2)).has_value());
  const M shift{{Q(0), Q(1), Q(0)}, {Q(0), Q(0), Q(1)}, {Q(0), Q(0), Q(0)}};
  EXPECT_EQ(nilpotency_index(shift), 3U);
}

TEST(GeneratedAlgebra, Examples) {
  EXPECT_EQ(generated_algebra_dim<Q>({M::identity(2)}), 1U);
  EXPECT_EQ(generated_algebra_dim<Q>({M::diagonal({Q(1), Q(2)})}), 2U);
  const auto f = full_fixture();
  EXPECT_EQ(generated_algebra_dim<Q>({f.A, f.Astar}), 4U);
  // Upper triangular pair: the algebra is the 3-dimensional triangular one.
  EXPECT_EQ(generated_algebra_dim<Q>({M{{Q(1), Q(1)}, {Q(0), Q(2)}}, M{{Q(3), Q(0)}, {Q(0), Q(5)}}}), 3U);
  EXPECT_THROW(generated_algebra_dim<Q>({M::identity(2), M::identity(3)}), DimensionMismatch);
}

TEST(Inverse, ExamplesAndErrors) {
  const M m{{Q(2), Q(1)}, {Q(1), Q(1)}};
  EXPECT_EQ(inverse(m), (M{{Q(1), Q(-1)}, {Q(-1), Q(2)}}));
  EXPECT_THROW(inverse(M{{Q(1), Q(2)}, {Q(2), Q(4)}}), SingularMatrix);
  EXPECT_FALSE(try_inverse(M(2, 2)).has_value());
}

TEST(Rref, CanonicalForm) {
  const auto e = rref(M{{Q(2), Q(4), Q(2)}, {Q(1), Q(2), Q(3)}});
  EXPECT_EQ(e.reduced, (M{{Q(1), Q(2), Q(0)}, {Q(0), Q(0), Q(1)}}));
  EXPECT_EQ(e.pivots, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(rank(M{{Q(1), Q(2)}, {Q(2), Q(4)}}), 1U);
}

TEST(LinalgProperties, ModularLaw) {
  Gen g(51);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 5));
    const S x = S::from_rows(g.matrix(static_cast<std::size_t>(g.integer(0, 4)), n, 2));
    const S y = S::from_rows(g.matrix(static_cast<std::size_t>(g.integer(0, 4)), n, 2));
    EXPECT_EQ(x.dim() + y.dim(), (x + y).dim() + intersect(x, y).dim());
    EXPECT_TRUE(intersect(x, y).is_subspace_of(x));
    EXPECT_TRUE(intersect(x, y).is_subspace_of(y));
    EXPECT_TRUE(x.is_subspace_of(x + y));
  }
}

TEST(LinalgProperties, DistinctEigenspacesMeetTrivially) {
  Gen g(52);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = static_cast<std::size_t>(g.integer(2, 4));
    // Similar to a diagonal matrix with repeated small eigenvalues.
    std::vector<Q> diag;
    for (std::size_t k = 0; k < n; ++k) diag.emplace_back(g.integer(0, 2));
    const M s = g.invertible(n);
    const M m = s * M::diagonal(diag) * inverse(s);
    for (long l = 0; l <= 2; ++l) {
      for (long u = l + 1; u <= 2; ++u) {
        EXPECT_TRUE(intersect(eigenspace(m, Q(l)), eigenspace(m, Q(u))).is_zero());
      }
    }
    EXPECT_TRUE(subspace_sum<Q>({eigenspace(m, Q(0)), eigenspace(m, Q(1)), eigenspace(m, Q(2))}).is_full());
  }
}

TEST(LinalgProperties, InverseAndKernel) {
  Gen g(53);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 5));
    const M s = g.invertible(n);
    EXPECT_EQ(s * inverse(s), M::identity(n));
    const M m = g.matrix(n, n, 2);
    for (const auto& v : kernel_basis(m)) EXPECT_EQ(m * v, std::vector<Q>(n, Q(0)));
    EXPECT_EQ(rank(m) + kernel(m).dim(), n);
  }
}

}  // namespace
