#pragma once

#include <cstddef>
#include <vector>

#include "tdq/errors.hpp"
#include "tdq/matrix.hpp"

namespace tdq {

enum class QExpVariant { q, q_inverse };

/// [n]_q = (q^n - q^{-n}) / (q - q^{-1}), defined for every integer n.
template <ExactField F>
F q_int(long n, const F& q) {
  const F denom = q - q.inverse();
  if (denom.is_zero()) throw DivisionByZero("q - q^-1 vanishes");
  return (pow(q, n) - pow(q, -n)) / denom;
}

template <ExactField F>
F q_fact(long n, const F& q) {
  if (n < 0) throw PreconditionViolation("q-factorial of a negative integer");
  F r(1);
  for (long k = 1; k <= n; ++k) r = r * q_int(k, q);
  return r;
}

template <ExactField F>
F q_binom(long n, long k, const F& q) {
  if (k < 0 || k > n) return F(0);
  const F denom = q_fact(k, q) * q_fact(n - k, q);
  if (denom.is_zero()) throw DivisionByZero("a q-integer in the denominator vanishes");
  return q_fact(n, q) / denom;
}

/// Coefficient q^{+-C(n,2)} / [n]_q! of T^n in the chosen exponential.
template <ExactField F>
F q_exp_coefficient(long n, QExpVariant variant, const F& q) {
  const long c = n * (n - 1) / 2;
  const F f = q_fact(n, q);
  if (f.is_zero()) throw DivisionByZero("[n]_q! vanishes");
  return pow(q, variant == QExpVariant::q ? c : -c) / f;
}

/// exp_q(T) = sum_n q^{C(n,2)}/[n]! T^n, or exp_{q^-1}(T) with q^{-C(n,2)}.
/// T must be nilpotent; the series stops at its nilpotency index.
template <ExactField F>
Matrix<F> q_exp(const Matrix<F>& t, QExpVariant variant, const F& q) {
  const auto index = nilpotency_index(t);
  if (!index) throw NotNilpotent();
  const std::size_t n = t.rows();
  Matrix<F> result = Matrix<F>::identity(n);
  Matrix<F> power = Matrix<F>::identity(n);
  for (std::size_t k = 1; k < *index; ++k) {
    power = power * t;
    result = result + q_exp_coefficient(static_cast<long>(k), variant, q) * power;
  }
  return result;
}

/// Checks S exp_q(T) = exp_q(q^2 T) S and (I - (q^2 - 1) T) exp_q(q^2 T) = exp_q(T)
/// for a pair with S T = q^2 T S. A pair violating that relation is a
/// precondition failure, not a false result.
template <ExactField F>
bool q_exp_shift_check(const Matrix<F>& s, const Matrix<F>& t, const F& q) {
  const F q2 = q * q;
  if (!(s * t == q2 * (t * s))) throw PreconditionViolation("S T != q^2 T S");
  const Matrix<F> e = q_exp(t, QExpVariant::q, q);
  const Matrix<F> e2 = q_exp(q2 * t, QExpVariant::q, q);
  const Matrix<F> id = Matrix<F>::identity(t.rows());
  return s * e == e2 * s && (id - (q2 - F(1)) * t) * e2 == e;
}

}  // namespace tdq
