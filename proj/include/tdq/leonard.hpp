#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tdq/errors.hpp"
#include "tdq/matrix.hpp"
#include "tdq/operators.hpp"
#include "tdq/params.hpp"
#include "tdq/qkit.hpp"

namespace tdq {

enum class Basis { u, udd, w };
enum class OperatorKind { A, K, B, M, Minv, Delta, Deltainv, psi };

inline constexpr std::array<Basis, 3> kAllBases{Basis::u, Basis::udd, Basis::w};
inline constexpr std::array<OperatorKind, 8> kAllKinds{OperatorKind::A,    OperatorKind::K,     OperatorKind::B,
                                                       OperatorKind::M,    OperatorKind::Minv,  OperatorKind::Delta,
                                                       OperatorKind::Deltainv, OperatorKind::psi};

inline std::string_view basis_name(Basis b) {
  switch (b) {
    case Basis::u: return "u";
    case Basis::udd: return "udd";
    case Basis::w: return "w";
  }
  return "?";
}

inline std::optional<Basis> parse_basis(std::string_view s) {
  for (auto b : kAllBases) {
    if (basis_name(b) == s) return b;
  }
  return std::nullopt;
}

inline std::string_view kind_name(OperatorKind k) {
  switch (k) {
    case OperatorKind::A: return "A";
    case OperatorKind::K: return "K";
    case OperatorKind::B: return "B";
    case OperatorKind::M: return "M";
    case OperatorKind::Minv: return "Minv";
    case OperatorKind::Delta: return "Delta";
    case OperatorKind::Deltainv: return "Deltainv";
    case OperatorKind::psi: return "psi";
  }
  return "?";
}

inline std::optional<OperatorKind> parse_kind(std::string_view s) {
  for (auto k : kAllKinds) {
    if (kind_name(k) == s) return k;
  }
  return std::nullopt;
}

template <ExactField F>
struct EigenvalueSeq {
  std::vector<F> theta;
  std::vector<F> theta_star;  // empty when b is not given
};

/// x q^{d-2i} + x^-1 q^{2i-d}.
template <ExactField F>
F qracah_value(int d, int i, const F& q, const F& x) {
  return x * pow(q, d - 2 * i) + x.inverse() * pow(q, 2 * i - d);
}

template <ExactField F>
EigenvalueSeq<F> eigenvalue_seq(const QRacahParams<F>& p) {
  EigenvalueSeq<F> s;
  for (int i = 0; i <= p.d; ++i) {
    s.theta.push_back(qracah_value(p.d, i, p.q, p.a));
    if (p.b) s.theta_star.push_back(qracah_value(p.d, i, p.q, *p.b));
  }
  auto distinct = [](const std::vector<F>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = i + 1; j < v.size(); ++j) {
        if (v[i] == v[j]) return false;
      }
    }
    return true;
  };
  if (!distinct(s.theta) || !distinct(s.theta_star)) {
    throw PreconditionViolation("eigenvalue sequence has a repeated entry; parameters were not validated");
  }
  return s;
}

/// (i-1, i) entry of psi-hat: (q^i - q^-i)(q^{d-i+1} - q^{i-d-1}).
template <ExactField F>
F psi_hat_entry(int d, int i, const F& q) {
  return (pow(q, i) - pow(q, -i)) * (pow(q, d - i + 1) - pow(q, i - d - 1));
}

template <ExactField F>
Matrix<F> psi_hat(int d, const F& q) {
  if (d < 1) throw PreconditionViolation("psi-hat needs d >= 1");
  Matrix<F> m(static_cast<std::size_t>(d + 1), static_cast<std::size_t>(d + 1));
  for (int i = 1; i <= d; ++i) m(i - 1, i) = psi_hat_entry(d, i, q);
  return m;
}

template <ExactField F>
Matrix<F> q_diagonal(int d, const F& q, int sign = 1) {
  std::vector<F> e;
  for (int i = 0; i <= d; ++i) e.push_back(pow(q, sign * (d - 2 * i)));
  return Matrix<F>::diagonal(e);
}

namespace detail {

// (q - q^-1)^{2(j-i)} [j]! [d-i]! / ([i]! [d-j]!), the (i, j) entry of psi-hat^{j-i}.
template <ExactField F>
F psi_power_entry(int d, int i, int j, const F& q) {
  const F c = q - q.inverse();
  return pow(c, 2L * (j - i)) * q_fact(j, q) * q_fact(d - i, q) / (q_fact(i, q) * q_fact(d - j, q));
}

template <ExactField F, class Entry>
Matrix<F> upper_from(int d, Entry entry) {
  Matrix<F> m(static_cast<std::size_t>(d + 1), static_cast<std::size_t>(d + 1));
  for (int i = 0; i <= d; ++i) {
    for (int j = i; j <= d; ++j) m(i, j) = entry(i, j);
  }
  return m;
}

// Diagonal `diag(i)` plus superdiagonal `super(i)` at (i-1, i).
template <ExactField F, class Diag, class Super>
Matrix<F> bidiagonal_from(int d, Diag diag, Super super) {
  Matrix<F> m(static_cast<std::size_t>(d + 1), static_cast<std::size_t>(d + 1));
  for (int i = 0; i <= d; ++i) m(i, i) = diag(i);
  for (int i = 1; i <= d; ++i) m(i - 1, i) = super(i);
  return m;
}

// Coordinates, in the eigenbasis of A, of the vectors
// prod_{j<i} (A - theta_{order(j)} I) u0 with u0 = (1, ..., 1); returns the
// matrix of A in that basis. This is the defining construction of the u and
// u-down bases, carried out in a frame where A is diagonal.
template <ExactField F>
Matrix<F> a_from_krylov(const std::vector<F>& theta, const std::vector<F>& order) {
  const std::size_t n = theta.size();
  const Matrix<F> diag = Matrix<F>::diagonal(theta);
  std::vector<std::vector<F>> columns;
  std::vector<F> v(n, F(1));
  for (std::size_t i = 0; i < n; ++i) {
    columns.push_back(v);
    v = (diag - order[i] * Matrix<F>::identity(n)) * v;
  }
  const Matrix<F> p = Matrix<F>::from_columns(n, columns);
  return inverse(p) * diag * p;
}

}  // namespace detail

/// Entry of exp_q(x psi-hat) (variant q) or exp_{q^-1}(x psi-hat) at (i, j), i <= j.
template <ExactField F>
F q_exp_psi_hat_entry(int d, int i, int j, const F& x, QExpVariant variant, const F& q) {
  if (j < i) return F(0);
  const long n = j - i;
  const long c = n * (n - 1) / 2;
  return pow(x, n) * pow(q, variant == QExpVariant::q ? c : -c) * pow(q - q.inverse(), 2 * n) * q_fact(j, q) *
         q_fact(d - i, q) / (q_fact(i, q) * q_fact(n, q) * q_fact(d - j, q));
}

template <ExactField F>
Matrix<F> q_exp_psi_hat_formula(int d, const F& x, QExpVariant variant, const F& q) {
  return detail::upper_from<F>(d, [&](int i, int j) { return q_exp_psi_hat_entry(d, i, j, x, variant, q); });
}

/// Entry (i, j) of the matrix of Delta (or Delta^-1 when `inverse`).
template <ExactField F>
F delta_entry(int d, int i, int j, const F& q, const F& a, bool inverse = false) {
  if (j < i) return F(0);
  const int n = j - i;
  const F x = inverse ? a.inverse() : a;
  F prod(1);
  for (int k = 1; k <= n; ++k) prod = prod * (x * pow(q, k - 1) - x.inverse() * pow(q, 1 - k));
  return pow(q - q.inverse(), n) * q_fact(j, q) * q_fact(d - i, q) /
         (q_fact(i, q) * q_fact(n, q) * q_fact(d - j, q)) * prod;
}

/// Closed-form matrix of an operator with respect to one of the bases
/// u, u-down, w.
template <ExactField F>
Matrix<F> operator_matrix_formula(OperatorKind kind, Basis basis, const QRacahParams<F>& p) {
  const int d = p.d;
  const F& q = p.q;
  const F& a = p.a;
  const F ainv = a.inverse();
  const auto theta = eigenvalue_seq(QRacahParams<F>{d, q, a, std::nullopt}).theta;
  auto psi_entry = [&](int i) { return psi_hat_entry(d, i, q); };
  auto qd = [&](int i) { return pow(q, d - 2 * i); };
  auto qd_inv = [&](int i) { return pow(q, 2 * i - d); };
  const Matrix<F> diag = q_diagonal(d, q);

  switch (kind) {
    case OperatorKind::psi:
      return psi_hat(d, q);
    case OperatorKind::Delta:
    case OperatorKind::Deltainv: {
      const bool inv = kind == OperatorKind::Deltainv;
      return detail::upper_from<F>(d, [&](int i, int j) { return delta_entry(d, i, j, q, a, inv); });
    }
    case OperatorKind::A: {
      Matrix<F> m(static_cast<std::size_t>(d + 1), static_cast<std::size_t>(d + 1));
      for (int i = 1; i <= d; ++i) m(i, i - 1) = F(1);
      for (int i = 0; i <= d; ++i) {
        switch (basis) {
          case Basis::u: m(i, i) = theta[i]; break;
          case Basis::udd: m(i, i) = theta[d - i]; break;
          case Basis::w: m(i, i) = (a + ainv) * qd(i); break;
        }
      }
      if (basis == Basis::w) {
        for (int i = 1; i <= d; ++i) m(i - 1, i) = -pow(q, d - 2 * i + 1) * psi_entry(i);
      }
      return m;
    }
    case OperatorKind::K:
      switch (basis) {
        case Basis::u: return diag;
        case Basis::udd:
          return detail::upper_from<F>(d, [&](int i, int j) {
            if (i == j) return qd(i);
            return (F(1) - ainv * ainv) * pow(a, j - i) * pow(q, d - j - i) * detail::psi_power_entry(d, i, j, q);
          });
        case Basis::w:
          return detail::bidiagonal_from<F>(d, qd, [&](int i) { return -ainv * pow(q, d - 2 * i + 1) * psi_entry(i); });
      }
      break;
    case OperatorKind::B:
      switch (basis) {
        case Basis::u:
          return detail::upper_from<F>(d, [&](int i, int j) {
            if (i == j) return qd(i);
            return (F(1) - a * a) * pow(a, i - j) * pow(q, d - j - i) * detail::psi_power_entry(d, i, j, q);
          });
        case Basis::udd: return diag;
        case Basis::w:
          return detail::bidiagonal_from<F>(d, qd, [&](int i) { return -a * pow(q, d - 2 * i + 1) * psi_entry(i); });
      }
      break;
    case OperatorKind::M:
      switch (basis) {
        case Basis::u:
          return detail::upper_from<F>(
              d, [&](int i, int j) { return pow(a, i - j) * pow(q, d - j - i) * detail::psi_power_entry(d, i, j, q); });
        case Basis::udd:
          return detail::upper_from<F>(
              d, [&](int i, int j) { return pow(a, j - i) * pow(q, d - j - i) * detail::psi_power_entry(d, i, j, q); });
        case Basis::w: return diag;
      }
      break;
    case OperatorKind::Minv:
      switch (basis) {
        case Basis::u:
          return detail::bidiagonal_from<F>(d, qd_inv, [&](int i) { return -ainv * pow(q, 2 * i - d - 1) * psi_entry(i); });
        case Basis::udd:
          return detail::bidiagonal_from<F>(d, qd_inv, [&](int i) { return -a * pow(q, 2 * i - d - 1) * psi_entry(i); });
        case Basis::w: return q_diagonal(d, q, -1);
      }
      break;
  }
  throw PreconditionViolation("unknown operator kind or basis");
}

/// Transition matrix T with to_j = sum_i T(i, j) from_i, as exponentials of
/// psi-hat computed by the series.
template <ExactField F>
Matrix<F> transition_matrix(Basis from, Basis to, const QRacahParams<F>& p) {
  const std::size_t n = static_cast<std::size_t>(p.d + 1);
  if (from == to) return Matrix<F>::identity(n);
  const F c = (p.q - p.q.inverse()).inverse();
  const Matrix<F> psi = psi_hat(p.d, p.q);
  const F ainv = p.a.inverse();
  auto e = [&](const F& x, QExpVariant v) { return q_exp(x * psi, v, p.q); };
  if (from == Basis::u && to == Basis::w) return e(-(c * ainv), QExpVariant::q_inverse);
  if (from == Basis::w && to == Basis::u) return e(c * ainv, QExpVariant::q);
  if (from == Basis::udd && to == Basis::w) return e(-(c * p.a), QExpVariant::q_inverse);
  if (from == Basis::w && to == Basis::udd) return e(c * p.a, QExpVariant::q);
  if (from == Basis::u && to == Basis::udd) return delta_exp_product(psi, p.q, p.a, false);
  return delta_exp_product(psi, p.q, p.a, true);
}

/// The same table computed from the closed-form exponential entries.
template <ExactField F>
Matrix<F> transition_matrix_formula(Basis from, Basis to, const QRacahParams<F>& p) {
  const std::size_t n = static_cast<std::size_t>(p.d + 1);
  if (from == to) return Matrix<F>::identity(n);
  const F c = (p.q - p.q.inverse()).inverse();
  const F ainv = p.a.inverse();
  auto e = [&](const F& x, QExpVariant v) { return q_exp_psi_hat_formula(p.d, x, v, p.q); };
  if (from == Basis::u && to == Basis::w) return e(-(c * ainv), QExpVariant::q_inverse);
  if (from == Basis::w && to == Basis::u) return e(c * ainv, QExpVariant::q);
  if (from == Basis::udd && to == Basis::w) return e(-(c * p.a), QExpVariant::q_inverse);
  if (from == Basis::w && to == Basis::udd) return e(c * p.a, QExpVariant::q);
  const bool inv = !(from == Basis::u && to == Basis::udd);
  return operator_matrix_formula(inv ? OperatorKind::Deltainv : OperatorKind::Delta, Basis::u, p);
}

/// Change of frame: the matrix of an operator in basis `to`, given its matrix
/// in basis `from`.
template <ExactField F>
Matrix<F> change_basis(const Matrix<F>& x, Basis from, Basis to, const QRacahParams<F>& p) {
  if (from == to) return x;
  return transition_matrix(to, from, p) * x * transition_matrix(from, to, p);
}

/// The operator matrix built from defining relations rather than entry
/// formulas: sums in psi-hat, conjugation by transition matrices, or the
/// Krylov construction of the u and u-down bases.
template <ExactField F>
Matrix<F> operator_matrix_constructive(OperatorKind kind, Basis basis, const QRacahParams<F>& p) {
  const int d = p.d;
  const F& q = p.q;
  const F& a = p.a;
  const F ainv = a.inverse();
  const std::size_t n = static_cast<std::size_t>(d + 1);
  const Matrix<F> id = Matrix<F>::identity(n);
  const Matrix<F> psi = psi_hat(d, q);
  const Matrix<F> diag = q_diagonal(d, q);
  const Matrix<F> diag_inv = q_diagonal(d, q, -1);

  switch (kind) {
    case OperatorKind::psi: {
      // psi from the matrices of K and B in this basis.
      const Matrix<F> k = operator_matrix_constructive(OperatorKind::K, basis, p);
      const Matrix<F> b = operator_matrix_constructive(OperatorKind::B, basis, p);
      return psi_expressions(k, b, q, a)[0];
    }
    case OperatorKind::Delta:
    case OperatorKind::Deltainv: {
      const Matrix<F> at_u = delta_exp_product(psi, q, a, kind == OperatorKind::Deltainv);
      return change_basis(at_u, Basis::u, basis, p);
    }
    case OperatorKind::A: {
      const auto theta = eigenvalue_seq(QRacahParams<F>{d, q, a, std::nullopt}).theta;
      std::vector<F> reversed(theta.rbegin(), theta.rend());
      switch (basis) {
        case Basis::u: return detail::a_from_krylov(theta, theta);
        case Basis::udd: return detail::a_from_krylov(theta, reversed);
        case Basis::w: return change_basis(detail::a_from_krylov(theta, theta), Basis::u, Basis::w, p);
      }
      break;
    }
    case OperatorKind::M:
      switch (basis) {
        case Basis::u: return diag * geometric_sum(psi, ainv * q.inverse(), d);
        case Basis::udd: return diag * geometric_sum(psi, a * q.inverse(), d);
        case Basis::w:
          return m_from_kb(operator_matrix_constructive(OperatorKind::K, Basis::w, p),
                           operator_matrix_constructive(OperatorKind::B, Basis::w, p), a);
      }
      break;
    case OperatorKind::Minv:
      switch (basis) {
        case Basis::u: return diag_inv * (id - (ainv * q) * psi);
        case Basis::udd: return diag_inv * (id - (a * q) * psi);
        case Basis::w: return inverse(operator_matrix_constructive(OperatorKind::M, Basis::w, p));
      }
      break;
    case OperatorKind::K:
      switch (basis) {
        case Basis::u: return (id - (ainv * q) * psi) * operator_matrix_constructive(OperatorKind::M, Basis::u, p);
        case Basis::udd:
          return (ainv * ainv * id + (F(1) - ainv * ainv) * geometric_sum(psi, a * q, d)) * diag;
        case Basis::w: return change_basis(diag, Basis::u, Basis::w, p);
      }
      break;
    case OperatorKind::B:
      switch (basis) {
        case Basis::u: return (a * a * id + (F(1) - a * a) * geometric_sum(psi, ainv * q, d)) * diag;
        case Basis::udd: return (id - (a * q) * psi) * operator_matrix_constructive(OperatorKind::M, Basis::udd, p);
        case Basis::w: return change_basis(diag, Basis::udd, Basis::w, p);
      }
      break;
  }
  throw PreconditionViolation("unknown operator kind or basis");
}

/// One formula-versus-construction comparison.
struct ClosedFormCheck {
  std::string name;
  bool ok = false;
};

/// Compares every closed-form matrix with its constructive counterpart:
/// all (kind, basis) pairs, the transition table, and the exponential entry
/// formula for the four scalars a^{+-1}/(q - q^-1) in both variants.
template <ExactField F>
std::vector<ClosedFormCheck> closed_form_checks(const QRacahParams<F>& p) {
  std::vector<ClosedFormCheck> out;
  for (auto kind : kAllKinds) {
    for (auto basis : kAllBases) {
      const bool ok = operator_matrix_formula(kind, basis, p) == operator_matrix_constructive(kind, basis, p);
      out.push_back({std::string(kind_name(kind)) + "@" + std::string(basis_name(basis)), ok});
    }
  }
  for (auto from : kAllBases) {
    for (auto to : kAllBases) {
      const bool ok = transition_matrix(from, to, p) == transition_matrix_formula(from, to, p) &&
                      transition_matrix(from, to, p) * transition_matrix(to, from, p) ==
                          Matrix<F>::identity(static_cast<std::size_t>(p.d + 1));
      out.push_back({"T(" + std::string(basis_name(from)) + "->" + std::string(basis_name(to)) + ")", ok});
    }
  }
  const F c = (p.q - p.q.inverse()).inverse();
  const Matrix<F> psi = psi_hat(p.d, p.q);
  for (const F& x : {c * p.a, c * p.a.inverse(), -(c * p.a), -(c * p.a.inverse())}) {
    for (auto v : {QExpVariant::q, QExpVariant::q_inverse}) {
      const bool ok = q_exp(x * psi, v, p.q) == q_exp_psi_hat_formula(p.d, x, v, p.q);
      out.push_back({std::string("exp") + (v == QExpVariant::q ? "_q" : "_{q^-1}") + "(" + x.to_string() + " psi)", ok});
    }
  }
  return out;
}

/// The matrices of A, K, B, psi, M, M^-1, Delta, Delta^-1 in one basis,
/// together with the transition table and A in the u-down basis.
template <ExactField F>
struct LeonardSuite {
  QRacahParams<F> params;
  Basis basis = Basis::u;
  std::map<OperatorKind, Matrix<F>> matrices;
  Matrix<F> a_udd;
  std::map<std::pair<Basis, Basis>, Matrix<F>> transitions;

  const Matrix<F>& operator[](OperatorKind k) const { return matrices.at(k); }
};

/// Builds the suite from entry formulas and cross-checks every matrix
/// against its construction. A disagreement is an internal defect and is
/// raised as EngineError.
template <ExactField F>
LeonardSuite<F> leonard_suite(const QRacahParams<F>& p, Basis basis) {
  LeonardSuite<F> s{p, basis, {}, {}, {}};
  for (auto kind : kAllKinds) {
    Matrix<F> formula = operator_matrix_formula(kind, basis, p);
    if (!(formula == operator_matrix_constructive(kind, basis, p))) {
      throw EngineError("closed form and construction disagree for " + std::string(kind_name(kind)) + "@" +
                        std::string(basis_name(basis)));
    }
    s.matrices.emplace(kind, std::move(formula));
  }
  s.a_udd = operator_matrix_formula(OperatorKind::A, Basis::udd, p);
  for (auto from : kAllBases) {
    for (auto to : kAllBases) {
      Matrix<F> t = transition_matrix_formula(from, to, p);
      if (!(t == transition_matrix(from, to, p))) {
        throw EngineError("transition matrix disagrees with its exponential series");
      }
      s.transitions.emplace(std::pair{from, to}, std::move(t));
    }
  }
  const std::size_t n = static_cast<std::size_t>(p.d + 1);
  if (!(s[OperatorKind::M] * s[OperatorKind::Minv] == Matrix<F>::identity(n)) ||
      !(s[OperatorKind::Delta] * s[OperatorKind::Deltainv] == Matrix<F>::identity(n))) {
    throw EngineError("inverse pair mismatch in generated suite");
  }
  return s;
}

}  // namespace tdq
