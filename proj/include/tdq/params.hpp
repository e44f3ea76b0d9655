#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tdq/field.hpp"

namespace tdq {

/// Diameter and q-Racah parameters. `b` only enters the dual eigenvalue
/// sequence, so it may be absent.
template <ExactField F>
struct QRacahParams {
  int d = 1;
  F q;
  F a;
  std::optional<F> b;

  /// Parameters of the second inversion: a is replaced by a^{-1}.
  QRacahParams inverted() const { return {d, q, a.inverse(), b}; }

  friend bool operator==(const QRacahParams&, const QRacahParams&) = default;
};

template <ExactField F>
struct ParamValidation {
  std::optional<QRacahParams<F>> params;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

namespace detail {

inline std::string power_text(const char* base, long e) {
  return std::string(base) + "^" + (e < 0 ? "(" + std::to_string(e) + ")" : std::to_string(e));
}

template <ExactField F>
void check_square_not_forbidden(const char* name, const F& value, const F& q, int d,
                                std::vector<std::string>& violations) {
  const F square = value * value;
  for (long e = 2L * d - 2; e >= 2 - 2L * d; e -= 2) {
    if (square == pow(q, e)) {
      violations.push_back(std::string(name) + "^2 = " + power_text("q", e) + " (need " + name +
                           "^2 not among q^(2d-2), q^(2d-4), ..., q^(2-2d))");
    }
  }
}

}  // namespace detail

/// Checks the non-degeneracy conditions on (d, q, a, b). These are exactly
/// the conditions for the eigenvalue and dual eigenvalue sequences to be
/// mutually distinct. Violations are returned as data; the list is complete.
template <ExactField F>
ParamValidation<F> validate_params(int d, const F& q, const F& a, const std::optional<F>& b = std::nullopt) {
  ParamValidation<F> out;
  auto& v = out.violations;
  if (d < 1) v.emplace_back("d = " + std::to_string(d) + " (need d >= 1)");
  if (q.is_zero()) v.emplace_back("q = 0 (need q != 0)");
  if (a.is_zero()) v.emplace_back("a = 0 (need a != 0)");
  if (b && b->is_zero()) v.emplace_back("b = 0 (need b != 0)");
  if (!v.empty()) return out;

  if (pow(q, 4) == F(1)) v.emplace_back("q^4 = 1 (need q^4 != 1)");
  for (int i = 1; i <= d; ++i) {
    if (pow(q, 2L * i) == F(1)) {
      v.push_back("q^" + std::to_string(2 * i) + " = 1 (need q^(2i) != 1 for 1 <= i <= d)");
    }
  }
  detail::check_square_not_forbidden("a", a, q, d, v);
  if (b) detail::check_square_not_forbidden("b", *b, q, d, v);
  if (v.empty()) out.params = QRacahParams<F>{d, q, a, b};
  return out;
}

}  // namespace tdq
