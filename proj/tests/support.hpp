#pragma once

// Seeded generators and shared instances for the test suites.

#include <array>
#include <random>
#include <vector>

#include "tdq/leonard.hpp"
#include "tdq/matrix.hpp"
#include "tdq/params.hpp"
#include "tdq/polynomial.hpp"
#include "tdq/ratfunc.hpp"
#include "tdq/rational.hpp"

namespace tdq::testing {

using Q = Rational;
using R = RationalFunction;

inline Q frac(long n, long d = 1) { return Q(mpz_class(n), mpz_class(d)); }

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  Q rational(long bound = 9) {
    const long den = integer(1, bound);
    return frac(integer(-bound, bound), den);
  }

  Q nonzero_rational(long bound = 9) {
    Q x;
    do x = rational(bound);
    while (x.is_zero());
    return x;
  }

  // Polynomial in q, a, b with small degree and coefficients.
  Polynomial polynomial(int max_terms = 4, std::uint32_t max_degree = 2) {
    std::vector<Term> terms;
    const long count = integer(1, max_terms);
    for (long t = 0; t < count; ++t) {
      std::array<std::uint32_t, kVariableCount> e{};
      for (auto& x : e) x = static_cast<std::uint32_t>(integer(0, max_degree));
      terms.push_back({Monomial::from_exponents(e), mpz_class(integer(-5, 5))});
    }
    return Polynomial::from_terms(std::move(terms));
  }

  R ratfunc() {
    Polynomial den;
    do den = polynomial(3, 1);
    while (den.is_zero());
    return R(polynomial(), den);
  }

  R nonzero_ratfunc() {
    R x;
    do x = ratfunc();
    while (x.is_zero());
    return x;
  }

  // Unit upper triangular times unit lower triangular with small entries:
  // always invertible, usually dense.
  Matrix<Q> invertible(std::size_t n) {
    Matrix<Q> upper = Matrix<Q>::identity(n);
    Matrix<Q> lower = Matrix<Q>::identity(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        upper(i, j) = Q(integer(-3, 3));
        lower(j, i) = Q(integer(-3, 3));
      }
    }
    return upper * lower;
  }

  Matrix<Q> matrix(std::size_t rows, std::size_t cols, long bound = 4) {
    Matrix<Q> m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = Q(integer(-bound, bound));
    }
    return m;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// The (q, a, b) triples of the rational test grid.
inline std::vector<std::array<Q, 3>> grid_triples() {
  return {{Q(2), Q(3), Q(5)},
          {Q(3), Q(2), Q(7)},
          {Q(-2), Q(3), Q(5)},
          {frac(5, 2), frac(4, 3), frac(7, 5)},
          {Q(2), frac(1, 5), Q(3)}};
}

/// Every valid grid instance for d = 1..max_d.
inline std::vector<QRacahParams<Q>> grid(int max_d = 6) {
  std::vector<QRacahParams<Q>> out;
  for (int d = 1; d <= max_d; ++d) {
    for (const auto& [q, a, b] : grid_triples()) {
      if (validate_params<Q>(d, q, a, b).ok()) out.push_back({d, q, a, b});
    }
  }
  return out;
}

inline QRacahParams<R> symbolic_params(int d) {
  return {d, R::variable('q'), R::variable('a'), std::nullopt};
}

/// The d = 1 fixture with A*: A lower bidiagonal in the u-basis, A* upper
/// bidiagonal with superdiagonal x.
struct FullFixture {
  QRacahParams<Q> params{1, Q(2), Q(3), Q(5)};
  Matrix<Q> A;
  Matrix<Q> Astar;
};

inline FullFixture full_fixture(Q x = Q(1)) {
  FullFixture f;
  const auto seq = eigenvalue_seq(f.params);
  f.A = Matrix<Q>{{seq.theta[0], Q(0)}, {Q(1), seq.theta[1]}};
  f.Astar = Matrix<Q>{{seq.theta_star[0], x}, {Q(0), seq.theta_star[1]}};
  return f;
}

}  // namespace tdq::testing
