#pragma once

#include <array>
#include <cstddef>

#include "tdq/matrix.hpp"
#include "tdq/qkit.hpp"

namespace tdq {

/// sum_{n=0}^{d} c^n X^n.
template <ExactField F>
Matrix<F> geometric_sum(const Matrix<F>& x, const F& c, int d) {
  std::vector<F> coeffs;
  F p(1);
  for (int n = 0; n <= d; ++n) {
    coeffs.push_back(p);
    p = p * c;
  }
  return polynomial_in(x, coeffs);
}

/// The four rational expressions in K, B that define psi, in the order
///   (I - BK^-1) / q(aI - a^-1 BK^-1),   (I - KB^-1) / q(a^-1 I - a KB^-1),
///   q(I - K^-1 B) / (aI - a^-1 K^-1 B), q(I - B^-1 K) / (a^-1 I - a B^-1 K).
/// Numerator and denominator commute, so X/Y is computed as X Y^-1.
/// Throws SingularMatrix when K, B or a denominator is singular.
template <ExactField F>
std::array<Matrix<F>, 4> psi_expressions(const Matrix<F>& k, const Matrix<F>& b, const F& q, const F& a) {
  const std::size_t n = k.rows();
  const Matrix<F> id = Matrix<F>::identity(n);
  const Matrix<F> kinv = inverse(k);
  const Matrix<F> binv = inverse(b);
  const F ainv = a.inverse();
  const Matrix<F> bk = b * kinv;
  const Matrix<F> kb = k * binv;
  const Matrix<F> kib = kinv * b;
  const Matrix<F> bik = binv * k;
  return {
      (id - bk) * inverse(q * (a * id - ainv * bk)),
      (id - kb) * inverse(q * (ainv * id - a * kb)),
      q * (id - kib) * inverse(a * id - ainv * kib),
      q * (id - bik) * inverse(ainv * id - a * bik),
  };
}

/// (aK - a^-1 B) / (a - a^-1).
template <ExactField F>
Matrix<F> m_from_kb(const Matrix<F>& k, const Matrix<F>& b, const F& a) {
  const F ainv = a.inverse();
  return (a - ainv).inverse() * (a * k - ainv * b);
}

/// prod_{j=1}^{i} (a q^{j-1} - a^-1 q^{1-j}) / (q^j - q^-j).
template <ExactField F>
F delta_series_coefficient(int i, const F& q, const F& a) {
  F c(1);
  const F ainv = a.inverse();
  for (int j = 1; j <= i; ++j) c = c * (a * pow(q, j - 1) - ainv * pow(q, 1 - j)) / (pow(q, j) - pow(q, -j));
  return c;
}

/// Delta as the power series in psi; with `inverse` set, the series for
/// Delta^-1 (a replaced by a^-1).
template <ExactField F>
Matrix<F> delta_power_series(const Matrix<F>& psi, const F& q, const F& a, int d, bool inverse = false) {
  const F aa = inverse ? a.inverse() : a;
  std::vector<F> coeffs;
  for (int i = 0; i <= d; ++i) coeffs.push_back(delta_series_coefficient(i, q, aa));
  return polynomial_in(psi, coeffs);
}

/// exp_q(c a psi) exp_{q^-1}(-c a^-1 psi) with c = 1/(q - q^-1); with
/// `inverse` set, a and a^-1 trade places.
template <ExactField F>
Matrix<F> delta_exp_product(const Matrix<F>& psi, const F& q, const F& a, bool inverse = false) {
  const F c = (q - q.inverse()).inverse();
  const F x = inverse ? a.inverse() : a;
  const F y = inverse ? a : a.inverse();
  return q_exp((c * x) * psi, QExpVariant::q, q) * q_exp((-(c * y)) * psi, QExpVariant::q_inverse, q);
}

/// M^{-1} via K^{-1}(I - a^-1 q psi).
template <ExactField F>
Matrix<F> m_inverse_from_k_psi(const Matrix<F>& k, const Matrix<F>& psi, const F& q, const F& a) {
  const Matrix<F> id = Matrix<F>::identity(k.rows());
  return inverse(k) * (id - (a.inverse() * q) * psi);
}

}  // namespace tdq
