#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tdq/errors.hpp"

namespace tdq {

inline constexpr int kVariableCount = 3;
inline constexpr std::array<char, kVariableCount> kVariableNames{'q', 'a', 'b'};

/// Index of a named indeterminate, or -1.
inline int variable_index(char name) {
  for (int v = 0; v < kVariableCount; ++v) {
    if (kVariableNames[v] == name) return v;
  }
  return -1;
}

/// A power product q^i a^j b^k. The packed key compares as the graded
/// lexicographic order with q < a < b: total degree first, then the
/// exponent of b, then a, then q.
class Monomial {
 public:
  static constexpr unsigned kFieldBits = 16;
  static constexpr std::uint64_t kFieldMask = 0xFFFF;
  static constexpr std::uint32_t kMaxExponent = 0x7FFF;

  constexpr Monomial() = default;

  static Monomial from_exponents(const std::array<std::uint32_t, kVariableCount>& e) {
    std::uint64_t key = 0;
    std::uint64_t degree = 0;
    for (int v = 0; v < kVariableCount; ++v) {
      if (e[v] > kMaxExponent) throw Error("monomial exponent overflow");
      key |= static_cast<std::uint64_t>(e[v]) << (kFieldBits * v);
      degree += e[v];
    }
    if (degree > kMaxExponent) throw Error("monomial degree overflow");
    return Monomial(key | (degree << 48));
  }

  static Monomial variable(int var, std::uint32_t power = 1) {
    std::array<std::uint32_t, kVariableCount> e{};
    e[var] = power;
    return from_exponents(e);
  }

  std::uint32_t exponent(int var) const {
    return static_cast<std::uint32_t>((key_ >> (kFieldBits * var)) & kFieldMask);
  }
  std::uint32_t degree() const { return static_cast<std::uint32_t>(key_ >> 48); }
  bool is_one() const { return key_ == 0; }
  std::uint64_t key() const { return key_; }

  std::array<std::uint32_t, kVariableCount> exponents() const {
    return {exponent(0), exponent(1), exponent(2)};
  }

  bool divides(Monomial other) const {
    for (int v = 0; v < kVariableCount; ++v) {
      if (exponent(v) > other.exponent(v)) return false;
    }
    return true;
  }

  Monomial without(int var) const {
    auto e = exponents();
    e[var] = 0;
    return from_exponents(e);
  }

  friend Monomial operator*(Monomial x, Monomial y) {
    const Monomial r(x.key_ + y.key_);
    if (r.degree() > kMaxExponent) throw Error("monomial degree overflow");
    return r;
  }

  /// Requires y | x.
  friend Monomial operator/(Monomial x, Monomial y) { return Monomial(x.key_ - y.key_); }

  static Monomial gcd(Monomial x, Monomial y) {
    std::array<std::uint32_t, kVariableCount> e{};
    for (int v = 0; v < kVariableCount; ++v) e[v] = std::min(x.exponent(v), y.exponent(v));
    return from_exponents(e);
  }

  friend auto operator<=>(const Monomial&, const Monomial&) = default;

 private:
  explicit constexpr Monomial(std::uint64_t key) : key_(key) {}
  std::uint64_t key_ = 0;
};

struct Term {
  Monomial monomial;
  mpz_class coeff;
};

/// Sparse polynomial in Z[q, a, b]. Terms are kept sorted by strictly
/// decreasing monomial with no zero coefficients, so structural equality is
/// polynomial equality.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(long c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_.push_back({Monomial(), mpz_class(c)});
  }
  explicit Polynomial(mpz_class c) {
    if (c != 0) terms_.push_back({Monomial(), std::move(c)});
  }

  static Polynomial monomial(Monomial m, mpz_class c = 1) {
    Polynomial p;
    if (c != 0) p.terms_.push_back({m, std::move(c)});
    return p;
  }
  static Polynomial variable(int var) { return monomial(Monomial::variable(var)); }

  static Polynomial from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& x, const Term& y) { return x.monomial > y.monomial; });
    Polynomial p;
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().monomial == t.monomial) {
        p.terms_.back().coeff += t.coeff;
      } else {
        if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
        p.terms_.push_back(std::move(t));
      }
    }
    if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one()); }
  bool is_one() const { return terms_.size() == 1 && terms_[0].monomial.is_one() && terms_[0].coeff == 1; }
  const Term& leading() const { return terms_.front(); }
  int leading_sign() const { return terms_.empty() ? 0 : sgn(terms_.front().coeff); }

  mpz_class constant_value() const {
    if (terms_.empty()) return 0;
    return terms_.back().monomial.is_one() ? terms_.back().coeff : mpz_class(0);
  }

  int degree_in(int var) const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, static_cast<int>(t.monomial.exponent(var)));
    return d;
  }

  unsigned used_variables() const {
    unsigned mask = 0;
    for (const auto& t : terms_) {
      for (int v = 0; v < kVariableCount; ++v) {
        if (t.monomial.exponent(v) != 0) mask |= 1U << v;
      }
    }
    return mask;
  }

  /// Non-negative gcd of the integer coefficients.
  mpz_class content() const {
    mpz_class g = 0;
    for (const auto& t : terms_) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_mpz_t());
      if (g == 1) break;
    }
    return g;
  }

  mpz_class max_norm() const {
    mpz_class m = 0;
    for (const auto& t : terms_) {
      if (mpz_cmpabs(t.coeff.get_mpz_t(), m.get_mpz_t()) > 0) m = abs(t.coeff);
    }
    return m;
  }

  /// Largest monomial dividing every term.
  Monomial monomial_content() const {
    if (terms_.empty()) return Monomial();
    Monomial m = terms_.front().monomial;
    for (const auto& t : terms_) m = Monomial::gcd(m, t.monomial);
    return m;
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) { return *this = merge(*this, o, false); }
  Polynomial& operator-=(const Polynomial& o) { return *this = merge(*this, o, true); }
  Polynomial& operator*=(const Polynomial& o) { return *this = multiply(*this, o); }

  friend Polynomial operator+(const Polynomial& x, const Polynomial& y) { return merge(x, y, false); }
  friend Polynomial operator-(const Polynomial& x, const Polynomial& y) { return merge(x, y, true); }
  friend Polynomial operator*(const Polynomial& x, const Polynomial& y) { return multiply(x, y); }

  friend bool operator==(const Polynomial& x, const Polynomial& y) {
    if (x.terms_.size() != y.terms_.size()) return false;
    for (std::size_t i = 0; i < x.terms_.size(); ++i) {
      if (x.terms_[i].monomial != y.terms_[i].monomial || x.terms_[i].coeff != y.terms_[i].coeff) {
        return false;
      }
    }
    return true;
  }

  Polynomial scaled(const mpz_class& c, Monomial m = Monomial()) const {
    Polynomial r;
    if (c == 0) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.monomial * m, t.coeff * c});
    return r;
  }

  /// Exact division by an integer that divides every coefficient.
  Polynomial divided_exact(const mpz_class& c) const {
    Polynomial r = *this;
    for (auto& t : r.terms_) mpz_divexact(t.coeff.get_mpz_t(), t.coeff.get_mpz_t(), c.get_mpz_t());
    return r;
  }

  /// Exact division by a monomial dividing every term.
  Polynomial divided_exact(Monomial m) const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.monomial = t.monomial / m;
    return r;
  }

  /// Substitutes an integer for one indeterminate.
  Polynomial evaluate(int var, const mpz_class& value) const {
    std::vector<mpz_class> powers{1};
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      const auto e = t.monomial.exponent(var);
      while (powers.size() <= e) powers.push_back(powers.back() * value);
      out.push_back({t.monomial.without(var), t.coeff * powers[e]});
    }
    return from_terms(std::move(out));
  }

  /// Substitutes rationals for all three indeterminates.
  mpq_class evaluate(const std::array<mpq_class, kVariableCount>& values) const {
    mpq_class sum = 0;
    for (const auto& t : terms_) {
      mpq_class v = t.coeff;
      for (int var = 0; var < kVariableCount; ++var) {
        const auto e = t.monomial.exponent(var);
        if (e == 0) continue;
        mpz_class num;
        mpz_class den;
        mpz_pow_ui(num.get_mpz_t(), values[var].get_num_mpz_t(), e);
        mpz_pow_ui(den.get_mpz_t(), values[var].get_den_mpz_t(), e);
        v *= mpq_class(num, den);
      }
      sum += v;
    }
    sum.canonicalize();
    return sum;
  }

  /// Grammar-compatible rendering, e.g. "q^2*a-3*b+1".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : terms_) {
      const bool negative = t.coeff < 0;
      const mpz_class magnitude = abs(t.coeff);
      if (negative) {
        out += "-";
      } else if (!first) {
        out += "+";
      }
      first = false;
      std::string mono;
      for (int v = 0; v < kVariableCount; ++v) {
        const auto e = t.monomial.exponent(v);
        if (e == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += kVariableNames[v];
        if (e > 1) mono += "^" + std::to_string(e);
      }
      if (mono.empty()) {
        out += magnitude.get_str();
      } else if (magnitude == 1) {
        out += mono;
      } else {
        out += magnitude.get_str() + "*" + mono;
      }
    }
    return out;
  }

 private:
  static Polynomial merge(const Polynomial& x, const Polynomial& y, bool subtract) {
    Polynomial r;
    r.terms_.reserve(x.terms_.size() + y.terms_.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < x.terms_.size() || j < y.terms_.size()) {
      if (j == y.terms_.size() || (i < x.terms_.size() && x.terms_[i].monomial > y.terms_[j].monomial)) {
        r.terms_.push_back(x.terms_[i++]);
      } else if (i == x.terms_.size() || y.terms_[j].monomial > x.terms_[i].monomial) {
        r.terms_.push_back({y.terms_[j].monomial, subtract ? mpz_class(-y.terms_[j].coeff) : y.terms_[j].coeff});
        ++j;
      } else {
        mpz_class c = subtract ? mpz_class(x.terms_[i].coeff - y.terms_[j].coeff)
                               : mpz_class(x.terms_[i].coeff + y.terms_[j].coeff);
        if (c != 0) r.terms_.push_back({x.terms_[i].monomial, std::move(c)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  static Polynomial multiply(const Polynomial& x, const Polynomial& y) {
    if (x.is_zero() || y.is_zero()) return {};
    if (x.terms_.size() == 1) return y.scaled(x.terms_[0].coeff, x.terms_[0].monomial);
    if (y.terms_.size() == 1) return x.scaled(y.terms_[0].coeff, y.terms_[0].monomial);
    std::vector<Term> products;
    products.reserve(x.terms_.size() * y.terms_.size());
    for (const auto& s : x.terms_) {
      for (const auto& t : y.terms_) products.push_back({s.monomial * t.monomial, s.coeff * t.coeff});
    }
    return from_terms(std::move(products));
  }

  std::vector<Term> terms_;
};

/// f / g when g divides f exactly in Z[q, a, b], otherwise nullopt.
inline std::optional<Polynomial> divide_exact(const Polynomial& f, const Polynomial& g) {
  if (g.is_zero()) throw DivisionByZero();
  if (f.is_zero()) return Polynomial();
  if (g.size() == 1) {
    const Term& lt = g.leading();
    std::vector<Term> out;
    out.reserve(f.size());
    for (const auto& t : f.terms()) {
      if (!lt.monomial.divides(t.monomial) || !mpz_divisible_p(t.coeff.get_mpz_t(), lt.coeff.get_mpz_t())) {
        return std::nullopt;
      }
      mpz_class c;
      mpz_divexact(c.get_mpz_t(), t.coeff.get_mpz_t(), lt.coeff.get_mpz_t());
      out.push_back({t.monomial / lt.monomial, std::move(c)});
    }
    Polynomial r;
    r = Polynomial::from_terms(std::move(out));
    return r;
  }
  const Term& lg = g.leading();
  // Quick rejection: every variable degree of g must fit inside f.
  for (int v = 0; v < kVariableCount; ++v) {
    if (g.degree_in(v) > f.degree_in(v)) return std::nullopt;
  }
  std::vector<Term> quotient;
  Polynomial rest = f;
  while (!rest.is_zero()) {
    const Term& lr = rest.leading();
    if (!lg.monomial.divides(lr.monomial) || !mpz_divisible_p(lr.coeff.get_mpz_t(), lg.coeff.get_mpz_t())) {
      return std::nullopt;
    }
    mpz_class c;
    mpz_divexact(c.get_mpz_t(), lr.coeff.get_mpz_t(), lg.coeff.get_mpz_t());
    const Monomial m = lr.monomial / lg.monomial;
    rest -= g.scaled(c, m);
    quotient.push_back({m, std::move(c)});
  }
  return Polynomial::from_terms(std::move(quotient));
}

namespace detail {

inline Polynomial positive(Polynomial p) { return p.leading_sign() < 0 ? -p : p; }

/// Coefficients of p viewed as a univariate polynomial in `var`.
inline std::vector<Polynomial> coefficients_in(const Polynomial& p, int var) {
  const int deg = p.degree_in(var);
  std::vector<std::vector<Term>> buckets(static_cast<std::size_t>(std::max(deg, 0) + 1));
  for (const auto& t : p.terms()) {
    buckets[t.monomial.exponent(var)].push_back({t.monomial.without(var), t.coeff});
  }
  std::vector<Polynomial> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(Polynomial::from_terms(std::move(b)));
  return out;
}

inline Polynomial from_coefficients(const std::vector<Polynomial>& coeffs, int var) {
  Polynomial r;
  for (std::size_t e = 0; e < coeffs.size(); ++e) {
    if (coeffs[e].is_zero()) continue;
    r += coeffs[e].scaled(1, Monomial::variable(var, static_cast<std::uint32_t>(e)));
  }
  return r;
}

}  // namespace detail

Polynomial gcd(const Polynomial& f, const Polynomial& g);

namespace detail {

/// Symmetric xi-adic reconstruction of a polynomial in `var` from its image
/// at var = xi.
inline Polynomial interpolate(const Polynomial& image, const mpz_class& xi, int var) {
  std::vector<Term> out;
  const mpz_class half = xi / 2;
  for (const auto& t : image.terms()) {
    mpz_class c = t.coeff;
    std::uint32_t k = 0;
    while (c != 0) {
      mpz_class digit;
      mpz_fdiv_r(digit.get_mpz_t(), c.get_mpz_t(), xi.get_mpz_t());
      if (digit > half) digit -= xi;
      if (digit != 0) out.push_back({t.monomial * Monomial::variable(var, k), digit});
      c -= digit;
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), xi.get_mpz_t());
      ++k;
    }
  }
  return Polynomial::from_terms(std::move(out));
}

/// Primitive part over Z with positive leading coefficient.
inline Polynomial primitive(const Polynomial& p) {
  if (p.is_zero()) return p;
  const mpz_class c = p.content();
  return positive(c == 1 ? p : p.divided_exact(c));
}

/// Heuristic gcd of primitive polynomials by evaluation at a large integer
/// and xi-adic reconstruction. A candidate is returned only after it has
/// been verified to divide both inputs; xi always exceeds
/// 2 * min(|f|, |g|) + 2 so a verified candidate is the gcd.
inline std::optional<Polynomial> gcd_heuristic(const Polynomial& f, const Polynomial& g) {
  const unsigned vars = f.used_variables() | g.used_variables();
  int var = -1;
  int best = -1;
  for (int v = 0; v < kVariableCount; ++v) {
    if ((vars & (1U << v)) == 0) continue;
    const int d = std::max(f.degree_in(v), g.degree_in(v));
    if (d > best) {
      best = d;
      var = v;
    }
  }
  if (var < 0) return Polynomial(1);
  const mpz_class nf = f.max_norm();
  const mpz_class ng = g.max_norm();
  mpz_class xi = 2 * (nf < ng ? nf : ng) + 29;
  for (int attempt = 0; attempt < 6; ++attempt) {
    const Polynomial ff = f.evaluate(var, xi);
    const Polynomial gg = g.evaluate(var, xi);
    if (!ff.is_zero() && !gg.is_zero()) {
      const Polynomial h = gcd(ff, gg);
      const Polynomial candidate = primitive(interpolate(h, xi, var));
      if (!candidate.is_zero() && divide_exact(f, candidate) && divide_exact(g, candidate)) {
        return candidate;
      }
    }
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), xi.get_mpz_t());
    mpz_sqrt(root.get_mpz_t(), root.get_mpz_t());
    xi = (73794 * xi * root) / 27011;
  }
  return std::nullopt;
}

inline Polynomial content_in(const Polynomial& p, int var) {
  Polynomial c;
  for (const auto& coeff : coefficients_in(p, var)) {
    if (coeff.is_zero()) continue;
    c = gcd(c, coeff);
    if (c.is_one()) break;
  }
  return c;
}

inline Polynomial primitive_in(const Polynomial& p, int var) {
  const Polynomial c = content_in(p, var);
  if (c.is_one()) return p;
  return *divide_exact(p, c);
}

/// Pseudo-remainder of f by g as polynomials in `var` (g of positive degree).
inline Polynomial pseudo_remainder(const Polynomial& f, const Polynomial& g, int var) {
  const int dg = g.degree_in(var);
  const std::vector<Polynomial> gc = coefficients_in(g, var);
  const Polynomial& lg = gc.back();
  std::vector<Polynomial> r = coefficients_in(f, var);
  while (static_cast<int>(r.size()) - 1 >= dg) {
    if (r.back().is_zero()) {
      r.pop_back();
      continue;
    }
    const Polynomial lr = r.back();
    const std::size_t shift = r.size() - 1 - static_cast<std::size_t>(dg);
    for (auto& c : r) c = c * lg;
    for (std::size_t k = 0; k < gc.size(); ++k) r[shift + k] -= lr * gc[k];
    r.pop_back();
  }
  return from_coefficients(r, var);
}

/// Recursive primitive polynomial remainder sequence: content and primitive
/// part with respect to a main variable, recursing into the coefficients.
inline Polynomial gcd_prs(const Polynomial& f, const Polynomial& g) {
  const unsigned vars = f.used_variables() | g.used_variables();
  int var = -1;
  for (int v = 0; v < kVariableCount; ++v) {
    if ((vars & (1U << v)) != 0) {
      var = v;
      break;
    }
  }
  if (var < 0) {
    mpz_class c;
    mpz_gcd(c.get_mpz_t(), f.content().get_mpz_t(), g.content().get_mpz_t());
    return Polynomial(c);
  }
  const Polynomial cf = content_in(f, var);
  const Polynomial cg = content_in(g, var);
  const Polynomial c = gcd(cf, cg);
  Polynomial a = *divide_exact(f, cf);
  Polynomial b = *divide_exact(g, cg);
  if (a.degree_in(var) < b.degree_in(var)) std::swap(a, b);
  if (b.degree_in(var) <= 0) return positive(c);
  while (true) {
    const Polynomial r = pseudo_remainder(a, b, var);
    if (r.is_zero()) break;
    if (r.degree_in(var) <= 0) return positive(c);
    a = std::move(b);
    b = primitive_in(r, var);
  }
  return positive(c * primitive_in(b, var));
}

}  // namespace detail

/// Greatest common divisor in Z[q, a, b], normalized to a positive leading
/// coefficient (gcd(0, 0) = 0).
inline Polynomial gcd(const Polynomial& f, const Polynomial& g) {
  if (f.is_zero()) return detail::positive(g);
  if (g.is_zero()) return detail::positive(f);
  if (f == g) return detail::positive(f);
  const mpz_class cf = f.content();
  const mpz_class cg = g.content();
  mpz_class c;
  mpz_gcd(c.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());
  const Monomial mf = f.monomial_content();
  const Monomial mg = g.monomial_content();
  const Monomial m = Monomial::gcd(mf, mg);
  Polynomial a = f.divided_exact(cf).divided_exact(mf);
  Polynomial b = g.divided_exact(cg).divided_exact(mg);
  Polynomial core(1);
  if (!a.is_constant() && !b.is_constant()) {
    a = detail::positive(std::move(a));
    b = detail::positive(std::move(b));
    if (a == b) {
      core = a;
    } else if (auto h = detail::gcd_heuristic(a, b)) {
      core = std::move(*h);
    } else {
      core = detail::gcd_prs(a, b);
    }
  }
  return core.scaled(c, m);
}

}  // namespace tdq
