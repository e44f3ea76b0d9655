#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "tdq/errors.hpp"
#include "tdq/polynomial.hpp"
#include "tdq/rational.hpp"

namespace tdq {

/// Element of Q(q, a, b) stored as num/den with num, den in Z[q, a, b],
/// gcd(num, den) = 1 (integer content included) and den having a positive
/// leading coefficient. Equal values have identical representations.
class RationalFunction {
 public:
  RationalFunction() : den_(1) {}
  RationalFunction(long c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  explicit RationalFunction(const Rational& r)
      : num_(r.numerator()), den_(r.denominator()) {}
  explicit RationalFunction(Polynomial p) : num_(std::move(p)), den_(1) {}
  RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DivisionByZero();
    reduce();
  }

  static constexpr std::string_view backend_name() { return "ratfunc"; }

  static RationalFunction variable(char name) {
    const int v = variable_index(name);
    if (v < 0) throw Error(std::string("unknown indeterminate '") + name + "'");
    return RationalFunction(Polynomial::variable(v));
  }

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }

  RationalFunction operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend RationalFunction operator+(const RationalFunction& x, const RationalFunction& y) {
    return add(x, y, false);
  }
  friend RationalFunction operator-(const RationalFunction& x, const RationalFunction& y) {
    return add(x, y, true);
  }

  friend RationalFunction operator*(const RationalFunction& x, const RationalFunction& y) {
    if (x.is_zero() || y.is_zero()) return {};
    if (x.den_.is_one() && y.den_.is_one()) return raw(x.num_ * y.num_, Polynomial(1));
    const Polynomial g1 = gcd(x.num_, y.den_);
    const Polynomial g2 = gcd(y.num_, x.den_);
    Polynomial n1 = g1.is_one() ? x.num_ : *divide_exact(x.num_, g1);
    Polynomial d2 = g1.is_one() ? y.den_ : *divide_exact(y.den_, g1);
    Polynomial n2 = g2.is_one() ? y.num_ : *divide_exact(y.num_, g2);
    Polynomial d1 = g2.is_one() ? x.den_ : *divide_exact(x.den_, g2);
    return raw(n1 * n2, d1 * d2);
  }

  friend RationalFunction operator/(const RationalFunction& x, const RationalFunction& y) {
    return x * y.inverse();
  }

  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
  RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

  friend bool operator==(const RationalFunction& x, const RationalFunction& y) {
    return x.num_ == y.num_ && x.den_ == y.den_;
  }

  RationalFunction inverse() const {
    if (is_zero()) throw DivisionByZero();
    return raw(den_, num_);
  }

  /// Canonical rendering: the polynomial alone when den = 1, otherwise
  /// "(num)/(den)".
  std::string to_string() const {
    if (den_.is_one()) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
  }

  /// Specializes q, a, b to rationals. Throws DivisionByZero when the
  /// denominator vanishes at the point.
  Rational evaluate(const std::array<Rational, kVariableCount>& point) const {
    const std::array<mpq_class, kVariableCount> values{point[0].value(), point[1].value(), point[2].value()};
    const mpq_class d = den_.evaluate(values);
    if (sgn(d) == 0) throw DivisionByZero("denominator vanishes at the specialization point");
    return Rational(mpq_class(num_.evaluate(values) / d));
  }

  /// Exact square root when numerator and denominator are perfect squares.
  std::optional<RationalFunction> sqrt() const {
    auto n = polynomial_sqrt(num_);
    if (!n) return std::nullopt;
    auto d = polynomial_sqrt(den_);
    if (!d) return std::nullopt;
    return RationalFunction(std::move(*n), std::move(*d));
  }

 private:
  // Takes num/den already coprime; only fixes the sign convention.
  static RationalFunction raw(Polynomial num, Polynomial den) {
    RationalFunction r;
    if (num.is_zero()) return r;
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    if (r.den_.leading_sign() < 0) {
      r.num_ = -r.num_;
      r.den_ = -r.den_;
    }
    return r;
  }

  void reduce() {
    if (num_.is_zero()) {
      den_ = Polynomial(1);
      return;
    }
    const Polynomial g = gcd(num_, den_);
    if (!g.is_one()) {
      num_ = *divide_exact(num_, g);
      den_ = *divide_exact(den_, g);
    }
    if (den_.leading_sign() < 0) {
      num_ = -num_;
      den_ = -den_;
    }
  }

  static RationalFunction add(const RationalFunction& x, const RationalFunction& y, bool subtract) {
    if (y.is_zero()) return x;
    if (x.is_zero()) return subtract ? -y : y;
    if (x.den_ == y.den_) {
      Polynomial n = subtract ? x.num_ - y.num_ : x.num_ + y.num_;
      if (x.den_.is_one()) return raw(std::move(n), Polynomial(1));
      return RationalFunction(std::move(n), x.den_);
    }
    const Polynomial g = gcd(x.den_, y.den_);
    const Polynomial xs = g.is_one() ? x.den_ : *divide_exact(x.den_, g);
    const Polynomial ys = g.is_one() ? y.den_ : *divide_exact(y.den_, g);
    Polynomial n = subtract ? x.num_ * ys - y.num_ * xs : x.num_ * ys + y.num_ * xs;
    if (n.is_zero()) return {};
    Polynomial d = x.den_ * ys;
    if (g.is_one()) return raw(std::move(n), std::move(d));
    // With both operands reduced, any common factor of n and d divides g.
    const Polynomial h = gcd(n, g);
    if (!h.is_one()) {
      n = *divide_exact(n, h);
      d = *divide_exact(d, h);
    }
    return raw(std::move(n), std::move(d));
  }

  // Square root in Z[q, a, b] (up to sign), by peeling leading terms.
  static std::optional<Polynomial> polynomial_sqrt(const Polynomial& p) {
    if (p.is_zero()) return Polynomial();
    const Term& lt = p.leading();
    if (lt.coeff < 0 || mpz_perfect_square_p(lt.coeff.get_mpz_t()) == 0) return std::nullopt;
    std::array<std::uint32_t, kVariableCount> e{};
    for (int v = 0; v < kVariableCount; ++v) {
      if (lt.monomial.exponent(v) % 2 != 0) return std::nullopt;
      e[v] = lt.monomial.exponent(v) / 2;
    }
    mpz_class c;
    mpz_sqrt(c.get_mpz_t(), lt.coeff.get_mpz_t());
    const Term lead{Monomial::from_exponents(e), c};
    Polynomial root = Polynomial::monomial(lead.monomial, lead.coeff);
    Polynomial rest = p - root * root;
    std::size_t guard = p.size() * 4 + 8;
    while (!rest.is_zero() && guard-- > 0) {
      const Term& lr = rest.leading();
      if (!lead.monomial.divides(lr.monomial)) return std::nullopt;
      const mpz_class denom = 2 * lead.coeff;
      if (!mpz_divisible_p(lr.coeff.get_mpz_t(), denom.get_mpz_t())) return std::nullopt;
      mpz_class tc;
      mpz_divexact(tc.get_mpz_t(), lr.coeff.get_mpz_t(), denom.get_mpz_t());
      const Polynomial t = Polynomial::monomial(lr.monomial / lead.monomial, tc);
      if (t.leading().monomial >= lead.monomial) return std::nullopt;
      rest -= t * (root + root + t);
      root += t;
    }
    if (!rest.is_zero()) return std::nullopt;
    return root;
  }

  Polynomial num_;
  Polynomial den_;
};

}  // namespace tdq
