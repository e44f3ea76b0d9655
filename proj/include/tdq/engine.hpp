#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tdq/errors.hpp"
#include "tdq/leonard.hpp"
#include "tdq/matrix.hpp"
#include "tdq/operators.hpp"
#include "tdq/params.hpp"
#include "tdq/subspace.hpp"

namespace tdq {

template <ExactField F>
using Decomposition = std::vector<Subspace<F>>;

/// Everything the engine reconstructs from (A, K) or (A, A*). Matrices act
/// on the coordinates of the input; subspaces are canonical.
template <ExactField F>
struct OperatorSuite {
  std::size_t n = 0;
  QRacahParams<F> params;
  Matrix<F> A;
  std::optional<Matrix<F>> Astar;
  Matrix<F> K, B, psi, M, Minv, Delta, Deltainv;
  Decomposition<F> U, Udd, W;
  Decomposition<F> E;  // eigenspaces of A in the standard order
  std::optional<Decomposition<F>> Estar;
  std::vector<std::size_t> rho;

  int d() const { return params.d; }
  friend bool operator==(const OperatorSuite&, const OperatorSuite&) = default;
};

/// Matrices supplied alongside the input that are to be used in place of
/// the derived ones (the battery then tests them against the definitions).
/// Recognized keys: B, psi, M, Minv, Delta, Deltainv.
template <ExactField F>
using Claims = std::map<std::string, Matrix<F>>;

enum class DeriveMode {
  strict,   // cross-route disagreements raise EngineError
  lenient,  // disagreements are left for the battery to report
};

template <ExactField F>
struct EngineInput {
  Matrix<F> A;
  std::optional<Matrix<F>> K;
  std::optional<Matrix<F>> Astar;
  QRacahParams<F> params;
};

// ---------------------------------------------------------------------------
// Parameter detection

template <ExactField F>
struct Detection {
  std::vector<std::pair<F, F>> solutions;  // (q, a)
  std::optional<std::size_t> representative;
  std::string reason;  // set when no solution exists

  bool found() const { return !solutions.empty(); }
};

namespace detail {

template <ExactField F>
bool matches_qracah(const std::vector<F>& theta, const F& q, const F& a) {
  const int d = static_cast<int>(theta.size()) - 1;
  for (int i = 0; i <= d; ++i) {
    if (!(qracah_value(d, i, q, a) == theta[static_cast<std::size_t>(i)])) return false;
  }
  return true;
}

// Roots of x^2 - s x + 1 in the field, if the discriminant is a square.
template <ExactField F>
std::optional<std::pair<F, F>> reciprocal_roots(const F& s) {
  auto root = (s * s - F(4)).sqrt();
  if (!root) return std::nullopt;
  const F half = F(2).inverse();
  return std::pair{(s + *root) * half, (s - *root) * half};
}

template <ExactField F>
void add_solution(Detection<F>& out, const std::vector<F>& theta, const F& q, const F& a) {
  if (q.is_zero() || a.is_zero() || pow(q, 4) == F(1)) return;
  if (!matches_qracah(theta, q, a)) return;
  if (!validate_params<F>(static_cast<int>(theta.size()) - 1, q, a).ok()) return;
  for (const auto& [q0, a0] : out.solutions) {
    if (q0 == q && a0 == a) return;
  }
  out.solutions.emplace_back(q, a);
}

}  // namespace detail

/// All (q, a) with theta_i = a q^{d-2i} + a^-1 q^{2i-d}. For d >= 2 the
/// three-term recurrence theta_{i-1} + theta_{i+1} = (q^2 + q^-2) theta_i
/// pins down q^2, after which (a, a^-1) solve a 2x2 system. For d = 1 the
/// substitution x = aq, y = a/q turns each equation into x + 1/x = theta.
template <ExactField F>
Detection<F> detect_qracah(const std::vector<F>& theta) {
  Detection<F> out;
  const int d = static_cast<int>(theta.size()) - 1;
  if (d < 1) {
    out.reason = "need at least two eigenvalues";
    return out;
  }
  for (std::size_t i = 0; i < theta.size(); ++i) {
    for (std::size_t j = i + 1; j < theta.size(); ++j) {
      if (theta[i] == theta[j]) {
        out.reason = "eigenvalues are not mutually distinct";
        return out;
      }
    }
  }

  if (d == 1) {
    const auto xs = detail::reciprocal_roots(theta[0]);
    const auto ys = detail::reciprocal_roots(theta[1]);
    if (!xs || !ys) {
      out.reason = "no solution in the working field";
      return out;
    }
    for (const F& x : {xs->first, xs->second}) {
      for (const F& y : {ys->first, ys->second}) {
        auto a = (x * y).sqrt();
        if (!a) continue;
        for (const F& aa : {*a, -*a}) {
          if (aa.is_zero()) continue;
          detail::add_solution(out, theta, x / aa, aa);
        }
      }
    }
    if (!out.found()) {
      bool forced = true;
      for (const F& x : {xs->first, xs->second}) {
        for (const F& y : {ys->first, ys->second}) {
          if (!y.is_zero() && !(pow(x / y, 2) == F(1))) forced = false;
        }
      }
      out.reason = forced ? "q^4=1 forced" : "no solution in the working field";
    }
  } else {
    std::optional<F> s;
    for (int i = 1; i < d && !s; ++i) {
      if (!theta[static_cast<std::size_t>(i)].is_zero()) {
        s = (theta[static_cast<std::size_t>(i - 1)] + theta[static_cast<std::size_t>(i + 1)]) /
            theta[static_cast<std::size_t>(i)];
      }
    }
    if (!s) {
      out.reason = "recurrence ratio undetermined (a^2 = -1 forced); no solution in the working field";
      return out;
    }
    for (int i = 1; i < d; ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (!(theta[k - 1] + theta[k + 1] == *s * theta[k])) {
        out.reason = "three-term recurrence is inconsistent";
        return out;
      }
    }
    if (*s == F(2) || *s == F(-2)) {
      out.reason = "q^4=1 forced";
      return out;
    }
    const auto ts = detail::reciprocal_roots(*s);
    if (!ts) {
      out.reason = "q^2 + q^-2 has no root q^2 in the working field";
      return out;
    }
    for (const F& t : {ts->first, ts->second}) {
      auto r = t.sqrt();
      if (!r) continue;
      for (const F& q : {*r, -*r}) {
        // theta_0 = a q^d + a^-1 q^-d, theta_1 = a q^{d-2} + a^-1 q^{2-d}.
        const F det = q * q - (q * q).inverse();
        const F alpha = (theta[0] * pow(q, 2 - d) - theta[1] * pow(q, -d)) / det;
        const F beta = (theta[1] * pow(q, d) - theta[0] * pow(q, d - 2)) / det;
        if (!(alpha * beta == F(1))) continue;
        detail::add_solution(out, theta, q, alpha);
      }
    }
    if (!out.found()) out.reason = "q^2 has no square root q in the working field";
  }

  if (out.found()) {
    auto render_pair = [](const std::pair<F, F>& s) { return "(" + s.first.to_string() + ", " + s.second.to_string() + ")"; };
    std::size_t best = 0;
    for (std::size_t i = 1; i < out.solutions.size(); ++i) {
      if (render_pair(out.solutions[i]) < render_pair(out.solutions[best])) best = i;
    }
    out.representative = best;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Split decompositions and the operators attached to them

/// Operator acting as eigenvalues[i] on spaces[i]; the spaces must form a
/// direct decomposition.
template <ExactField F>
Matrix<F> operator_with_eigenspaces(const Decomposition<F>& spaces, const std::vector<F>& eigenvalues) {
  const std::size_t n = spaces.front().ambient();
  std::vector<std::vector<F>> columns;
  std::vector<F> diag;
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    for (auto& v : spaces[i].vectors()) {
      columns.push_back(std::move(v));
      diag.push_back(eigenvalues[i]);
    }
  }
  if (columns.size() != n) throw EngineError("eigenspaces do not form a decomposition");
  const Matrix<F> p = Matrix<F>::from_columns(n, columns);
  auto pinv = try_inverse(p);
  if (!pinv) throw EngineError("eigenspaces do not form a decomposition");
  return p * Matrix<F>::diagonal(diag) * *pinv;
}

template <ExactField F>
std::vector<F> k_eigenvalues(int d, const F& q) {
  std::vector<F> v;
  for (int i = 0; i <= d; ++i) v.push_back(pow(q, d - 2 * i));
  return v;
}

/// K and B from the two split decompositions: eigenvalue q^{d-2i} on U_i
/// (resp. U_i-down).
template <ExactField F>
std::pair<Matrix<F>, Matrix<F>> build_KB(const Decomposition<F>& u, const Decomposition<F>& udd, const F& q, int d) {
  const auto ev = k_eigenvalues(d, q);
  return {operator_with_eigenspaces(u, ev), operator_with_eigenspaces(udd, ev)};
}

template <ExactField F>
Decomposition<F> eigenspaces(const Matrix<F>& m, const std::vector<F>& eigenvalues) {
  Decomposition<F> out;
  for (const auto& lambda : eigenvalues) out.push_back(eigenspace(m, lambda));
  return out;
}

template <ExactField F>
struct SplitResult {
  Decomposition<F> U, Udd, E;
  std::optional<Decomposition<F>> Estar;
};

namespace detail {

template <ExactField F>
Subspace<F> prefix_sum(const Decomposition<F>& xs, long last) {
  return range_sum(xs, 0, last, xs.front().ambient());
}

template <ExactField F>
Subspace<F> suffix_sum(const Decomposition<F>& xs, long first) {
  return range_sum(xs, first, static_cast<long>(xs.size()) - 1, xs.front().ambient());
}

template <ExactField F>
void require_decomposition(const Decomposition<F>& xs, const std::string& what) {
  if (!is_direct_decomposition(xs)) throw EngineError(what + " is not a decomposition of V");
}

}  // namespace detail

/// U_i and U_i-down as the displayed flag intersections of the eigenspaces
/// of A and A*.
template <ExactField F>
SplitResult<F> split_from_pair(const Matrix<F>& a, const Matrix<F>& astar, const std::vector<F>& theta,
                               const std::vector<F>& theta_star) {
  SplitResult<F> r;
  r.E = eigenspaces(a, theta);
  r.Estar = eigenspaces(astar, theta_star);
  detail::require_decomposition(r.E, "eigenspace sequence of A");
  detail::require_decomposition(*r.Estar, "eigenspace sequence of A*");
  const long d = static_cast<long>(theta.size()) - 1;
  for (long i = 0; i <= d; ++i) {
    const Subspace<F> star = detail::prefix_sum(*r.Estar, i);
    r.U.push_back(intersect(star, detail::suffix_sum(r.E, i)));
    r.Udd.push_back(intersect(star, detail::prefix_sum(r.E, d - i)));
  }
  detail::require_decomposition(r.U, "first split sequence");
  detail::require_decomposition(r.Udd, "second split sequence");
  return r;
}

/// Reconstruction without A*: U_i is the q^{d-2i}-eigenspace of K and
/// U_i-down = (U_0 + ... + U_i) cap (E_0 V + ... + E_{d-i} V).
template <ExactField F>
SplitResult<F> split_from_AK(const Matrix<F>& a, const Matrix<F>& k, const QRacahParams<F>& p) {
  SplitResult<F> r;
  const auto theta = eigenvalue_seq(QRacahParams<F>{p.d, p.q, p.a, std::nullopt}).theta;
  r.U = eigenspaces(k, k_eigenvalues(p.d, p.q));
  if (!is_direct_decomposition(r.U)) {
    throw EngineError("spectrum mismatch: K is not diagonalizable with eigenvalues q^d, q^(d-2), ..., q^(-d)");
  }
  r.E = eigenspaces(a, theta);
  if (!is_direct_decomposition(r.E)) {
    throw EngineError("spectrum mismatch: A is not diagonalizable with the q-Racah eigenvalues of the given parameters");
  }
  const std::size_t n = a.rows();
  const Matrix<F> id = Matrix<F>::identity(n);
  for (int i = 0; i <= p.d; ++i) {
    const auto k_i = static_cast<std::size_t>(i);
    const Subspace<F> image = r.U[k_i].image(a - theta[k_i] * id);
    const Subspace<F> target = i < p.d ? r.U[k_i + 1] : Subspace<F>::zero(n);
    if (!image.is_subspace_of(target)) {
      throw EngineError("split-action violation: (A - theta_" + std::to_string(i) + " I) U_" + std::to_string(i) +
                        " is not inside U_" + std::to_string(i + 1));
    }
  }
  for (long i = 0; i <= p.d; ++i) {
    r.Udd.push_back(intersect(detail::prefix_sum(r.U, i), detail::prefix_sum(r.E, p.d - i)));
  }
  detail::require_decomposition(r.Udd, "second split sequence");
  return r;
}

/// The four psi expressions must coincide; returns the common value.
template <ExactField F>
Matrix<F> psi_from_KB(const Matrix<F>& k, const Matrix<F>& b, const QRacahParams<F>& p) {
  std::array<Matrix<F>, 4> e;
  try {
    e = psi_expressions(k, b, p.q, p.a);
  } catch (const SingularMatrix&) {
    throw EngineError("a denominator of the psi expressions is singular");
  }
  for (std::size_t i = 1; i < e.size(); ++i) {
    if (!(e[i] == e[0])) {
      throw EngineError("psi expressions 1 and " + std::to_string(i + 1) + " disagree: " + e[0].to_string() + " vs " +
                        e[i].to_string());
    }
  }
  return e[0];
}

/// The unique operator X with X from_i inside to_i and (X - I) from_i inside
/// from_0 + ... + from_{i-1}: decompose each vector of from_i along the
/// `to` decomposition and keep the to_i component.
template <ExactField F>
Matrix<F> delta_triangular(const Decomposition<F>& from, const Decomposition<F>& to) {
  const std::size_t n = from.front().ambient();
  std::vector<std::vector<F>> to_columns;
  std::vector<std::size_t> block;
  for (std::size_t i = 0; i < to.size(); ++i) {
    for (auto& v : to[i].vectors()) {
      to_columns.push_back(std::move(v));
      block.push_back(i);
    }
  }
  const Matrix<F> p = Matrix<F>::from_columns(n, to_columns);
  auto pinv = try_inverse(p);
  if (!pinv) throw EngineError("target sequence is not a decomposition");
  std::vector<std::vector<F>> xs;
  std::vector<std::vector<F>> ys;
  for (std::size_t i = 0; i < from.size(); ++i) {
    for (auto& v : from[i].vectors()) {
      const std::vector<F> c = *pinv * v;
      std::vector<F> y(n, F(0));
      for (std::size_t k = 0; k < n; ++k) {
        if (c[k].is_zero()) continue;
        if (block[k] > i) throw EngineError("triangular characterization has no solution: flags differ");
        if (block[k] == i) {
          for (std::size_t r = 0; r < n; ++r) y[r] = y[r] + c[k] * to_columns[k][r];
        }
      }
      xs.push_back(std::move(v));
      ys.push_back(std::move(y));
    }
  }
  const Matrix<F> x = Matrix<F>::from_columns(n, xs);
  return Matrix<F>::from_columns(n, ys) * inverse(x);
}

namespace detail {

template <ExactField F>
const Matrix<F>* claim(const Claims<F>& claims, const char* key) {
  auto it = claims.find(key);
  return it == claims.end() ? nullptr : &it->second;
}

template <ExactField F>
OperatorSuite<F> assemble(const Matrix<F>& a, const std::optional<Matrix<F>>& astar, const QRacahParams<F>& p,
                          SplitResult<F> split, const std::optional<Matrix<F>>& k_input, const Claims<F>& claims,
                          DeriveMode mode) {
  OperatorSuite<F> s;
  s.n = a.rows();
  s.params = p;
  s.A = a;
  s.Astar = astar;
  s.U = std::move(split.U);
  s.Udd = std::move(split.Udd);
  s.E = std::move(split.E);
  s.Estar = std::move(split.Estar);
  for (const auto& e : s.E) s.rho.push_back(e.dim());

  auto [k, b] = build_KB(s.U, s.Udd, p.q, p.d);
  s.K = k_input ? *k_input : std::move(k);
  s.B = claim(claims, "B") ? *claim(claims, "B") : std::move(b);

  if (const auto* c = claim(claims, "psi")) {
    s.psi = *c;
  } else if (mode == DeriveMode::strict) {
    s.psi = psi_from_KB(s.K, s.B, p);
  } else {
    try {
      s.psi = psi_expressions(s.K, s.B, p.q, p.a)[0];
    } catch (const SingularMatrix&) {
      throw EngineError("a denominator of the psi expressions is singular");
    }
  }

  s.M = claim(claims, "M") ? *claim(claims, "M") : m_from_kb(s.K, s.B, p.a);
  if (const auto* c = claim(claims, "Minv")) {
    s.Minv = *c;
  } else {
    auto inv = try_inverse(s.M);
    if (!inv) throw EngineError("M is singular");
    s.Minv = std::move(*inv);
  }

  const Matrix<F> tri = delta_triangular(s.U, s.Udd);
  s.Delta = claim(claims, "Delta") ? *claim(claims, "Delta") : tri;
  s.Deltainv = claim(claims, "Deltainv") ? *claim(claims, "Deltainv") : delta_triangular(s.Udd, s.U);

  s.W = eigenspaces(s.M, k_eigenvalues(p.d, p.q));

  if (mode == DeriveMode::strict) {
    const Matrix<F> series = delta_power_series(s.psi, p.q, p.a, p.d);
    const Matrix<F> product = delta_exp_product(s.psi, p.q, p.a);
    if (!(series == tri)) {
      throw EngineError("Delta routes disagree: power series " + series.to_string() + " vs triangular " +
                        tri.to_string());
    }
    if (!(product == tri)) {
      throw EngineError("Delta routes disagree: exponential product " + product.to_string() + " vs triangular " +
                        tri.to_string());
    }
    if (!is_direct_decomposition(s.W)) throw EngineError("eigenspaces of M do not form a decomposition");
  }
  return s;
}

}  // namespace detail

/// Derives the full suite from (A, K) or (A, A*) by the defining relations.
/// When A* is given the split decompositions come from the flag
/// intersections and K (if also given) is treated as a claim.
template <ExactField F>
OperatorSuite<F> derive_suite(const EngineInput<F>& in, const Claims<F>& claims = {},
                              DeriveMode mode = DeriveMode::strict) {
  const std::size_t n = in.A.rows();
  if (!in.A.is_square()) throw EngineError("A is not square");
  if (in.K && (in.K->rows() != n || in.K->cols() != n)) throw EngineError("K and A differ in size");
  if (in.Astar && (in.Astar->rows() != n || in.Astar->cols() != n)) throw EngineError("A* and A differ in size");
  for (const auto& [name, m] : claims) {
    if (m.rows() != n || m.cols() != n) throw EngineError("claimed " + name + " has the wrong size");
  }

  SplitResult<F> split;
  if (in.Astar) {
    if (!in.params.b) throw EngineError("A* given without the parameter b");
    const auto seq = eigenvalue_seq(in.params);
    split = split_from_pair(in.A, *in.Astar, seq.theta, seq.theta_star);
  } else if (in.K) {
    split = split_from_AK(in.A, *in.K, in.params);
  } else {
    throw EngineError("input needs K or A*");
  }
  return detail::assemble(in.A, in.Astar, in.params, std::move(split), in.K, claims, mode);
}

/// The suite of the second inversion: E-ordering reversed, a replaced by
/// a^-1, so U and U-down trade places.
template <ExactField F>
OperatorSuite<F> downarrow(const OperatorSuite<F>& s) {
  SplitResult<F> split;
  split.U = s.Udd;
  split.Udd = s.U;
  split.E = Decomposition<F>(s.E.rbegin(), s.E.rend());
  split.Estar = s.Estar;
  return detail::assemble<F>(s.A, s.Astar, s.params.inverted(), std::move(split), std::optional<Matrix<F>>{}, Claims<F>{},
                          DeriveMode::lenient);
}

/// Every matrix conjugated by S (X -> S X S^-1) and every subspace mapped by S.
template <ExactField F>
OperatorSuite<F> conjugate(const OperatorSuite<F>& s, const Matrix<F>& S) {
  const Matrix<F> sinv = inverse(S);
  auto c = [&](const Matrix<F>& x) { return S * x * sinv; };
  auto img = [&](const Decomposition<F>& xs) {
    Decomposition<F> out;
    for (const auto& x : xs) out.push_back(x.image(S));
    return out;
  };
  OperatorSuite<F> t = s;
  t.A = c(s.A);
  if (s.Astar) t.Astar = c(*s.Astar);
  t.K = c(s.K);
  t.B = c(s.B);
  t.psi = c(s.psi);
  t.M = c(s.M);
  t.Minv = c(s.Minv);
  t.Delta = c(s.Delta);
  t.Deltainv = c(s.Deltainv);
  t.U = img(s.U);
  t.Udd = img(s.Udd);
  t.W = img(s.W);
  t.E = img(s.E);
  if (s.Estar) t.Estar = img(*s.Estar);
  return t;
}

// ---------------------------------------------------------------------------
// Axioms of a tridiagonal pair

enum class AxiomStatus { pass, fail, inconclusive };

inline std::string_view axiom_status_name(AxiomStatus s) {
  switch (s) {
    case AxiomStatus::pass: return "pass";
    case AxiomStatus::fail: return "fail";
    case AxiomStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

struct OrderingResult {
  bool diagonalizable = false;
  std::optional<std::vector<std::size_t>> standard;  // indices into the given eigenvalue list
  std::optional<std::vector<std::size_t>> alternative;
  std::size_t standard_count = 0;  // over all orderings examined
};

struct AxiomReport {
  AxiomStatus status = AxiomStatus::inconclusive;
  std::vector<std::string> messages;
  OrderingResult a_order;
  OrderingResult astar_order;
  std::size_t algebra_dim = 0;
  std::size_t n = 0;
  int d = -1;
  int delta = -1;
};

namespace detail {

// adjacent[i][j]: the component of X V_i along V_j is nonzero.
template <ExactField F>
std::vector<std::vector<bool>> cross_adjacency(const Matrix<F>& x, const Decomposition<F>& spaces) {
  const std::size_t m = spaces.size();
  const std::size_t n = x.rows();
  std::vector<std::vector<std::vector<F>>> basis(m);
  std::vector<std::vector<F>> columns;
  std::vector<std::size_t> block;
  for (std::size_t i = 0; i < m; ++i) {
    for (auto& v : spaces[i].vectors()) {
      columns.push_back(v);
      block.push_back(i);
      basis[i].push_back(std::move(v));
    }
  }
  const Matrix<F> pinv = inverse(Matrix<F>::from_columns(n, columns));
  std::vector<std::vector<bool>> adj(m, std::vector<bool>(m, false));
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& v : basis[i]) {
      const std::vector<F> c = pinv * (x * v);
      for (std::size_t k = 0; k < n; ++k) {
        if (!c[k].is_zero()) adj[i][block[k]] = true;
      }
    }
  }
  return adj;
}

inline bool is_tridiagonal_order(const std::vector<std::size_t>& order, const std::vector<std::vector<bool>>& adj) {
  for (std::size_t x = 0; x < order.size(); ++x) {
    for (std::size_t y = 0; y < order.size(); ++y) {
      const std::size_t gap = x > y ? x - y : y - x;
      if (gap > 1 && adj[order[x]][order[y]]) return false;
    }
  }
  return true;
}

template <ExactField F>
OrderingResult find_standard_ordering(const Matrix<F>& self, const Matrix<F>& other, const std::vector<F>& eigenvalues,
                                      Decomposition<F>& spaces) {
  OrderingResult r;
  spaces = eigenspaces(self, eigenvalues);
  r.diagonalizable = is_direct_decomposition(spaces);
  if (!r.diagonalizable) return r;
  const auto adj = cross_adjacency(other, spaces);
  std::vector<std::size_t> given(spaces.size());
  std::iota(given.begin(), given.end(), 0);
  constexpr std::size_t kMaxSearch = 8;
  if (is_tridiagonal_order(given, adj)) {
    r.standard = given;
  }
  if (spaces.size() <= kMaxSearch) {
    std::vector<std::size_t> perm = given;
    do {
      if (is_tridiagonal_order(perm, adj)) {
        ++r.standard_count;
        if (!r.standard) r.standard = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else if (r.standard) {
    r.standard_count = 2;
  }
  if (r.standard) r.alternative = std::vector<std::size_t>(r.standard->rbegin(), r.standard->rend());
  return r;
}

}  // namespace detail

/// Checks the tridiagonal pair axioms for (A, A*) with eigenvalues taken
/// from the q-Racah closed form of the given parameters (b required).
template <ExactField F>
AxiomReport validate_axioms(const Matrix<F>& a, const Matrix<F>& astar, const QRacahParams<F>& p) {
  AxiomReport r;
  if (!a.is_square() || !astar.is_square() || a.rows() != astar.rows()) {
    throw DimensionMismatch("A and A* must be square of the same size");
  }
  if (!p.b) throw PreconditionViolation("validate_axioms needs the parameter b");
  r.n = a.rows();
  const auto seq = eigenvalue_seq(p);
  Decomposition<F> e;
  Decomposition<F> es;
  r.a_order = detail::find_standard_ordering(a, astar, seq.theta, e);
  r.astar_order = detail::find_standard_ordering(astar, a, seq.theta_star, es);
  if (!r.a_order.diagonalizable || !r.astar_order.diagonalizable) {
    r.status = AxiomStatus::inconclusive;
    r.messages.emplace_back(
        "spectrum not exhausted by the q-Racah eigenvalues of the given parameters (diagonalizability undecided over "
        "the working field)");
    return r;
  }
  r.d = static_cast<int>(e.size()) - 1;
  r.delta = static_cast<int>(es.size()) - 1;
  bool ok = true;
  if (!r.a_order.standard) {
    ok = false;
    r.messages.emplace_back("no ordering of the eigenspaces of A is standard (A* V_i inside V_(i-1)+V_i+V_(i+1))");
  } else if (r.a_order.standard_count != 2 && r.d >= 1) {
    r.messages.emplace_back("unexpected number of standard orderings for A: " + std::to_string(r.a_order.standard_count));
  }
  if (!r.astar_order.standard) {
    ok = false;
    r.messages.emplace_back("no ordering of the eigenspaces of A* is standard (A V*_i inside V*_(i-1)+V*_i+V*_(i+1))");
  }
  r.algebra_dim = generated_algebra_dim<F>({a, astar});
  if (r.algebra_dim != r.n * r.n) {
    ok = false;
    r.messages.emplace_back("A, A* generate an algebra of dimension " + std::to_string(r.algebra_dim) + " < " +
                            std::to_string(r.n * r.n) + ": a proper common invariant subspace exists");
  }
  if (r.d != r.delta) {
    ok = false;
    r.messages.emplace_back("eigenspace counts differ: d = " + std::to_string(r.d) +
                            ", delta = " + std::to_string(r.delta));
  }
  r.status = ok ? AxiomStatus::pass : AxiomStatus::fail;
  return r;
}

}  // namespace tdq
