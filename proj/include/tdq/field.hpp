#pragma once

#include <concepts>
#include <optional>
#include <string>
#include <string_view>

#include "tdq/errors.hpp"
#include "tdq/ratfunc.hpp"
#include "tdq/rational.hpp"

namespace tdq {

/// An exact field: arithmetic with canonical forms, so == decides equality.
template <class F>
concept ExactField = std::regular<F> && requires(const F x, const F y, long n) {
  F(n);
  { x + y } -> std::convertible_to<F>;
  { x - y } -> std::convertible_to<F>;
  { x * y } -> std::convertible_to<F>;
  { x / y } -> std::convertible_to<F>;
  { -x } -> std::convertible_to<F>;
  { x.inverse() } -> std::convertible_to<F>;
  { x.is_zero() } -> std::convertible_to<bool>;
  { x.to_string() } -> std::convertible_to<std::string>;
  { x.sqrt() } -> std::convertible_to<std::optional<F>>;
  { F::backend_name() } -> std::convertible_to<std::string_view>;
};

/// Fields that carry the indeterminates q, a, b.
template <class F>
concept SymbolicField = ExactField<F> && requires(char c) {
  { F::variable(c) } -> std::convertible_to<F>;
};

static_assert(ExactField<Rational>);
static_assert(SymbolicField<RationalFunction>);

/// x^n for any integer n (negative powers invert; 0^0 = 1).
template <ExactField F>
F pow(const F& x, long n) {
  if (n < 0) return pow(x.inverse(), -n);
  F result(1);
  F base = x;
  while (n > 0) {
    if ((n & 1) != 0) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

template <ExactField F>
F inverse(const F& x) {
  return x.inverse();
}

template <ExactField F>
std::string render(const F& x) {
  return x.to_string();
}

/// Rough size of a scalar, used to pick cheap pivots during elimination.
inline std::size_t scalar_size(const Rational& x) {
  return mpz_sizeinbase(x.value().get_num_mpz_t(), 2) + mpz_sizeinbase(x.value().get_den_mpz_t(), 2);
}

inline std::size_t scalar_size(const RationalFunction& x) {
  std::size_t s = 0;
  for (const auto* p : {&x.numerator(), &x.denominator()}) {
    for (const auto& t : p->terms()) s += 1 + mpz_sizeinbase(t.coeff.get_mpz_t(), 2) / 32;
  }
  return s;
}

}  // namespace tdq
