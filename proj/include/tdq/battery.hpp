#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tdq/engine.hpp"
#include "tdq/qkit.hpp"

namespace tdq {

enum class ItemStatus { pass, fail, skipped_needs_astar };

inline std::string_view item_status_name(ItemStatus s) {
  switch (s) {
    case ItemStatus::pass: return "pass";
    case ItemStatus::fail: return "fail";
    case ItemStatus::skipped_needs_astar: return "skipped-needs-Astar";
  }
  return "?";
}

/// Counterexample data attached to a failing item: a one-line message plus
/// named renderings of the offending matrices or subspaces.
struct Witness {
  std::string message;
  std::map<std::string, std::string> data;
};

struct ReportEntry {
  std::string id;
  std::string anchor;
  ItemStatus status = ItemStatus::pass;
  std::optional<Witness> witness;
};

struct VerificationReport {
  std::vector<ReportEntry> entries;

  std::size_t count(ItemStatus s) const {
    std::size_t c = 0;
    for (const auto& e : entries) c += e.status == s ? 1 : 0;
    return c;
  }
  bool all_passed() const { return count(ItemStatus::fail) == 0; }
};

struct BatteryItemInfo {
  std::string_view id;
  std::string_view anchor;
  bool needs_astar;
};

/// Every identity the battery checks, in report order.
inline const std::vector<BatteryItemInfo>& battery_items() {
  static const std::vector<BatteryItemInfo> items = {
      {"k-eigen", "(K - q^(d-2i) I) U_i = 0", false},
      {"b-eigen", "(B - q^(d-2i) I) Udd_i = 0", false},
      {"split-decomp", "U, Udd, E are decompositions with dim U_i = dim Udd_i = rho_i", false},
      {"e-sums-u", "E_i V + ... + E_d V = U_i + ... + U_d", false},
      {"e-sums-udd", "E_0 V + ... + E_(d-i) V = Udd_i + ... + Udd_d", false},
      {"u-sums-udd", "U_0 + ... + U_i = Udd_0 + ... + Udd_i", false},
      {"a-split-action", "(A - theta_i I) U_i in U_(i+1); (A - theta_(d-i) I) Udd_i in Udd_(i+1)", false},
      {"b-on-u", "(B - q^(d-2i) I) U_i in U_0 + ... + U_(i-1)", false},
      {"k-on-udd", "(K - q^(d-2i) I) Udd_i in Udd_0 + ... + Udd_(i-1)", false},
      {"q-weyl-ak", "(qKA - q^-1 AK)/(q - q^-1) = aK^2 + a^-1 I", false},
      {"q-weyl-ab", "(qBA - q^-1 AB)/(q - q^-1) = a^-1 B^2 + aI", false},
      {"kb-quadratic",
       "aK^2 - (a^-1 q - a q^-1)/(q - q^-1) KB - (aq - a^-1 q^-1)/(q - q^-1) BK + a^-1 B^2 = 0", false},
      {"kb-denominators-invertible",
       "aI - a^-1 BK^-1, a^-1 I - aKB^-1, aI - a^-1 K^-1 B, a^-1 I - aB^-1 K and I - a^(+-1) q^(+-1) psi invertible",
       false},
      {"psi-four-expressions", "psi = (I - BK^-1)/q(aI - a^-1 BK^-1) and the three companion forms", false},
      {"k-psi-commutation", "K psi = q^2 psi K, B psi = q^2 psi B", false},
      {"psi-lowers-u", "psi U_i in U_(i-1), psi Udd_i in Udd_(i-1), psi U_0 = psi Udd_0 = 0", false},
      {"psi-nilpotent", "psi^(d+1) = 0", false},
      {"psi-inverses", "(I - a^e q^f psi)^-1 = sum_i a^(ei) q^(fi) psi^i for e, f in {1, -1}", false},
      {"bk-ratios", "BK^-1 = (I - aq psi)/(I - a^-1 q psi) and the three companion ratios", false},
      {"psi-a-commutator", "(psi A - A psi)/(q - q^-1) = (I - aq psi) K - (I - a^-1 q^-1 psi) K^-1", false},
      {"delta-characterization", "Delta U_i in Udd_i, (Delta - I) U_i in U_0 + ... + U_(i-1)", false},
      {"delta-inverse-downarrow", "Delta^-1 = Delta of the reversed system, (Delta^-1 - I) U_i in U_0 + ... + U_(i-1)",
       false},
      {"delta-unipotent", "Delta - I nilpotent, Delta K = B Delta", false},
      {"delta-power-series", "Delta = sum_i prod_(j<=i) (a q^(j-1) - a^-1 q^(1-j))/(q^j - q^-j) psi^i (and Delta^-1)",
       false},
      {"delta-exp-factorization", "Delta = exp_q(a psi/(q - q^-1)) exp_(q^-1)(-a^-1 psi/(q - q^-1)) (and Delta^-1)",
       false},
      {"delta-triangular", "Delta equals the solution of the triangular characterization on U, Udd", false},
      {"m-definition", "M = (aK - a^-1 B)/(a - a^-1)", false},
      {"m-product-forms", "M = (I - a^-1 q psi)^-1 K = K (I - a^-1 q^-1 psi)^-1 = (I - aq psi)^-1 B = B (I - a q^-1 psi)^-1",
       false},
      {"k-m-forms", "K = (I - a^-1 q psi) M = M (I - a^-1 q^-1 psi), B = (I - aq psi) M = M (I - a q^-1 psi)", false},
      {"m-inverse-forms",
       "M^-1 = K^-1 (I - a^-1 q psi) = (I - a^-1 q^-1 psi) K^-1 = B^-1 (I - aq psi) = (I - a q^-1 psi) B^-1", false},
      {"m-sum-forms",
       "M = K sum a^-n q^-n psi^n = sum a^-n q^n psi^n K = B sum a^n q^-n psi^n = sum a^n q^n psi^n B", false},
      {"m-psi-commutation", "M psi = q^2 psi M", false},
      {"m-inverse-k-weyl", "(q M^-1 K - q^-1 K M^-1)/(q - q^-1) = I and the same with B", false},
      {"a-m-inverse", "(q A M^-1 - q^-1 M^-1 A)/(q - q^-1) = (a + a^-1) I - (q + q^-1) psi", false},
      {"m-inverse-squared-a", "M^-2 A - (q^2 + q^-2) M^-1 A M^-1 + A M^-2 = -(q - q^-1)^2 (a + a^-1) M^-1", false},
      {"q-exp-identities", "exp_q(T) exp_(q^-1)(-T) = I; S exp_q(T) = exp_q(q^2 T) S; (I - (q^2 - 1) T) exp_q(q^2 T) = exp_q(T)",
       false},
      {"k-exp-m", "K exp_q(a^-1 psi/(q - q^-1)) = exp_q(a^-1 psi/(q - q^-1)) M, same for B with a", false},
      {"q-binomial-corollary", "exp_q(a psi/(q - q^-1)) exp_(q^-1)(-a^-1 psi/(q - q^-1)) = power series in psi", false},
      {"m-spectrum", "M diagonalizable with eigenvalues q^d, q^(d-2), ..., q^-d", false},
      {"w-dims", "dim W_i = rho_i", false},
      {"u-from-w", "U_i = exp_q(a^-1 psi/(q - q^-1)) W_i, Udd_i = exp_q(a psi/(q - q^-1)) W_i and inverses", false},
      {"w-sums", "W_0 + ... + W_i = U_0 + ... + U_i = Udd_0 + ... + Udd_i", false},
      {"psi-on-w", "psi W_i in W_(i-1)", false},
      {"k-b-on-w", "(K - q^(d-2i) I) W_i in W_(i-1), (B - q^(d-2i) I) W_i in W_(i-1)", false},
      {"delta-on-w", "(Delta^(+-1) - I) W_i in W_0 + ... + W_(i-1)", false},
      {"a-on-w", "(A - (a + a^-1) q^(d-2i) I) W_i in W_(i-1) + W_(i+1)", false},
      {"m-on-u", "(M - q^(d-2i) I) U_i in U_0 + ... + U_(i-1), same for Udd", false},
      {"m-inverse-on-u", "(M^-1 - q^(2i-d) I) U_i in U_(i-1), same for Udd", false},
      {"m-inverse-on-ev", "M^-1 E_i V in E_(i-1) V + E_i V + E_(i+1) V", false},
      {"downarrow-invariants", "B = K of the reversed system, M, psi, W unchanged, Delta and Delta^-1 swapped", false},
      {"astar-split-action", "(A* - theta*_i I) U_i in U_(i-1), same for Udd", true},
      {"estar-sums", "E*_0 V + ... + E*_i V = U_0 + ... + U_i", true},
      {"delta-estar",
       "(Delta - I) E*_i V in E*_0 V + ... + E*_(i-1) V, Delta (E_i V + ... + E_d V) = E_0 V + ... + E_(d-i) V", true},
      {"astar-on-w", "(A* - theta*_i I) W_i in W_0 + ... + W_(i-1)", true},
      {"m-on-estar", "(M^(+-1) - q^(+-(d-2i)) I) E*_i V in E*_0 V + ... + E*_(i-1) V", true},
  };
  return items;
}

inline bool is_battery_id(std::string_view id) {
  for (const auto& it : battery_items()) {
    if (it.id == id) return true;
  }
  return false;
}

namespace battery_detail {

using Check = std::optional<Witness>;

template <ExactField F>
struct Ctx {
  const OperatorSuite<F>& s;
  const std::size_t n;
  const int d;
  const F q, a, ainv, qinv, c;
  const Matrix<F> id;

  explicit Ctx(const OperatorSuite<F>& suite)
      : s(suite),
        n(suite.n),
        d(suite.params.d),
        q(suite.params.q),
        a(suite.params.a),
        ainv(suite.params.a.inverse()),
        qinv(suite.params.q.inverse()),
        c((suite.params.q - suite.params.q.inverse()).inverse()),
        id(Matrix<F>::identity(suite.n)) {}

  F qd(int i) const { return pow(q, d - 2 * i); }
  // sum_{k=0}^{d} (x)^k psi^k
  Matrix<F> series(const F& x) const { return geometric_sum(s.psi, x, d); }
  Matrix<F> exp_q(const F& x) const { return q_exp(x * s.psi, QExpVariant::q, q); }
  Matrix<F> exp_qinv(const F& x) const { return q_exp(x * s.psi, QExpVariant::q_inverse, q); }
};

template <ExactField F>
Check eq(const std::string& label, const Matrix<F>& lhs, const Matrix<F>& rhs) {
  if (lhs == rhs) return std::nullopt;
  Witness w;
  w.message = label + ": sides differ";
  w.data["lhs"] = lhs.to_string();
  w.data["rhs"] = rhs.to_string();
  if (lhs.rows() == rhs.rows() && lhs.cols() == rhs.cols()) {
    for (std::size_t i = 0; i < lhs.rows(); ++i) {
      for (std::size_t j = 0; j < lhs.cols(); ++j) {
        if (!(lhs(i, j) == rhs(i, j))) {
          w.data["first_differing_entry"] = "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
          return w;
        }
      }
    }
  }
  return w;
}

template <ExactField F>
Check sub_eq(const std::string& label, const Subspace<F>& lhs, const Subspace<F>& rhs) {
  if (lhs == rhs) return std::nullopt;
  Witness w;
  w.message = label + ": subspaces differ";
  w.data["lhs"] = lhs.to_string();
  w.data["rhs"] = rhs.to_string();
  return w;
}

template <ExactField F>
Check inside(const std::string& label, const Subspace<F>& x, const Subspace<F>& y) {
  if (x.is_subspace_of(y)) return std::nullopt;
  Witness w;
  w.message = label + ": not contained";
  w.data["subspace"] = x.to_string();
  w.data["container"] = y.to_string();
  return w;
}

inline Check fail(const std::string& message) { return Witness{message, {}}; }

// Runs checks in order and returns the first failure.
inline Check first(std::initializer_list<std::function<Check()>> checks) {
  for (const auto& f : checks) {
    if (auto w = f()) return w;
  }
  return std::nullopt;
}

template <ExactField F>
Subspace<F> prefix(const Decomposition<F>& xs, long last) {
  return range_sum(xs, 0, last, xs.front().ambient());
}

template <ExactField F>
Subspace<F> suffix(const Decomposition<F>& xs, long first) {
  return range_sum(xs, first, static_cast<long>(xs.size()) - 1, xs.front().ambient());
}

template <ExactField F>
Subspace<F> at(const Decomposition<F>& xs, long i) {
  if (i < 0 || i >= static_cast<long>(xs.size())) return Subspace<F>::zero(xs.front().ambient());
  return xs[static_cast<std::size_t>(i)];
}

inline std::string idx(const char* name, int i) { return std::string(name) + "_" + std::to_string(i); }

template <ExactField F>
using ItemFn = std::function<Check(const Ctx<F>&)>;

// (X - lambda_i I) S_i inside T(i) for every i.
template <ExactField F, class Lambda, class Target>
Check shifted_action(const std::string& label, const Ctx<F>& c, const Matrix<F>& x, const Decomposition<F>& spaces,
                     Lambda lambda, Target target) {
  for (int i = 0; i <= c.d; ++i) {
    const Subspace<F> img = spaces[static_cast<std::size_t>(i)].image(x - lambda(i) * c.id);
    if (auto w = inside(label + " at i = " + std::to_string(i), img, target(i))) return w;
  }
  return std::nullopt;
}

template <ExactField F>
std::map<std::string, ItemFn<F>> item_functions() {
  using M = Matrix<F>;
  std::map<std::string, ItemFn<F>> f;

  f["k-eigen"] = [](const Ctx<F>& c) {
    return shifted_action<F>("K on U", c, c.s.K, c.s.U, [&](int i) { return c.qd(i); },
                             [&](int) { return Subspace<F>::zero(c.n); });
  };
  f["b-eigen"] = [](const Ctx<F>& c) {
    return shifted_action<F>("B on Udd", c, c.s.B, c.s.Udd, [&](int i) { return c.qd(i); },
                             [&](int) { return Subspace<F>::zero(c.n); });
  };
  f["split-decomp"] = [](const Ctx<F>& c) -> Check {
    if (!is_direct_decomposition(c.s.U)) return fail("U is not a decomposition");
    if (!is_direct_decomposition(c.s.Udd)) return fail("Udd is not a decomposition");
    if (!is_direct_decomposition(c.s.E)) return fail("E is not a decomposition");
    for (int i = 0; i <= c.d; ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (c.s.U[k].dim() != c.s.rho[k] || c.s.Udd[k].dim() != c.s.rho[k]) {
        Witness w{"dimension mismatch at i = " + std::to_string(i), {}};
        w.data["dim U_i"] = std::to_string(c.s.U[k].dim());
        w.data["dim Udd_i"] = std::to_string(c.s.Udd[k].dim());
        w.data["rho_i"] = std::to_string(c.s.rho[k]);
        return w;
      }
    }
    return std::nullopt;
  };
  f["e-sums-u"] = [](const Ctx<F>& c) -> Check {
    for (int i = 0; i <= c.d; ++i) {
      if (auto w = sub_eq(idx("E-suffix = U-suffix at i", i), suffix(c.s.E, i), suffix(c.s.U, i))) return w;
    }
    return std::nullopt;
  };
  f["e-sums-udd"] = [](const Ctx<F>& c) -> Check {
    for (int i = 0; i <= c.d; ++i) {
      if (auto w = sub_eq(idx("E-prefix = Udd-suffix at i", i), prefix(c.s.E, c.d - i), suffix(c.s.Udd, i))) return w;
    }
    return std::nullopt;
  };
  f["u-sums-udd"] = [](const Ctx<F>& c) -> Check {
    for (int i = 0; i <= c.d; ++i) {
      if (auto w = sub_eq(idx("U-prefix = Udd-prefix at i", i), prefix(c.s.U, i), prefix(c.s.Udd, i))) return w;
    }
    return std::nullopt;
  };
  f["a-split-action"] = [](const Ctx<F>& c) -> Check {
    const auto theta = eigenvalue_seq(QRacahParams<F>{c.d, c.q, c.a, std::nullopt}).theta;
    return first({
        [&] {
          return shifted_action<F>("A on U", c, c.s.A, c.s.U, [&](int i) { return theta[static_cast<std::size_t>(i)]; },
                                   [&](int i) { return at(c.s.U, i + 1); });
        },
        [&] {
          return shifted_action<F>("A on Udd", c, c.s.A, c.s.Udd,
                                   [&](int i) { return theta[static_cast<std::size_t>(c.d - i)]; },
                                   [&](int i) { return at(c.s.Udd, i + 1); });
        },
    });
  };
  f["b-on-u"] = [](const Ctx<F>& c) {
    return shifted_action<F>("B on U", c, c.s.B, c.s.U, [&](int i) { return c.qd(i); },
                             [&](int i) { return prefix(c.s.U, i - 1); });
  };
  f["k-on-udd"] = [](const Ctx<F>& c) {
    return shifted_action<F>("K on Udd", c, c.s.K, c.s.Udd, [&](int i) { return c.qd(i); },
                             [&](int i) { return prefix(c.s.Udd, i - 1); });
  };
  f["q-weyl-ak"] = [](const Ctx<F>& c) {
    const auto& k = c.s.K;
    const auto& a = c.s.A;
    return eq<F>("q-Weyl relation for K, A", c.q * (k * a) - c.qinv * (a * k),
                 (c.q - c.qinv) * (c.a * (k * k) + c.ainv * c.id));
  };
  f["q-weyl-ab"] = [](const Ctx<F>& c) {
    const auto& b = c.s.B;
    const auto& a = c.s.A;
    return eq<F>("q-Weyl relation for B, A", c.q * (b * a) - c.qinv * (a * b),
                 (c.q - c.qinv) * (c.ainv * (b * b) + c.a * c.id));
  };
  f["kb-quadratic"] = [](const Ctx<F>& c) {
    const auto& k = c.s.K;
    const auto& b = c.s.B;
    const M lhs = c.a * (k * k) - ((c.ainv * c.q - c.a * c.qinv) * c.c) * (k * b) -
                  ((c.a * c.q - c.ainv * c.qinv) * c.c) * (b * k) + c.ainv * (b * b);
    return eq<F>("quadratic relation in K, B", lhs, M(c.n, c.n));
  };
  f["kb-denominators-invertible"] = [](const Ctx<F>& c) -> Check {
    const auto kinv = try_inverse(c.s.K);
    const auto binv = try_inverse(c.s.B);
    if (!kinv) return fail("K is singular");
    if (!binv) return fail("B is singular");
    const std::vector<std::pair<std::string, M>> ms = {
        {"aI - a^-1 BK^-1", c.a * c.id - c.ainv * (c.s.B * *kinv)},
        {"a^-1 I - aKB^-1", c.ainv * c.id - c.a * (c.s.K * *binv)},
        {"aI - a^-1 K^-1 B", c.a * c.id - c.ainv * (*kinv * c.s.B)},
        {"a^-1 I - aB^-1 K", c.ainv * c.id - c.a * (*binv * c.s.K)},
        {"I - aq psi", c.id - (c.a * c.q) * c.s.psi},
        {"I - a^-1 q psi", c.id - (c.ainv * c.q) * c.s.psi},
        {"I - aq^-1 psi", c.id - (c.a * c.qinv) * c.s.psi},
        {"I - a^-1 q^-1 psi", c.id - (c.ainv * c.qinv) * c.s.psi},
    };
    for (const auto& [name, m] : ms) {
      if (!try_inverse(m)) return Witness{name + " is singular", {{"matrix", m.to_string()}}};
    }
    return std::nullopt;
  };
  f["psi-four-expressions"] = [](const Ctx<F>& c) -> Check {
    const auto e = psi_expressions(c.s.K, c.s.B, c.q, c.a);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (auto w = eq<F>("psi against expression " + std::to_string(i + 1), c.s.psi, e[i])) return w;
    }
    return std::nullopt;
  };
  f["k-psi-commutation"] = [](const Ctx<F>& c) {
    const F q2 = c.q * c.q;
    return first({
        [&] { return eq<F>("K psi = q^2 psi K", c.s.K * c.s.psi, q2 * (c.s.psi * c.s.K)); },
        [&] { return eq<F>("B psi = q^2 psi B", c.s.B * c.s.psi, q2 * (c.s.psi * c.s.B)); },
    });
  };
  f["psi-lowers-u"] = [](const Ctx<F>& c) {
    return first({
        [&] {
          return shifted_action<F>("psi on U", c, c.s.psi, c.s.U, [](int) { return F(0); },
                                   [&](int i) { return at(c.s.U, i - 1); });
        },
        [&] {
          return shifted_action<F>("psi on Udd", c, c.s.psi, c.s.Udd, [](int) { return F(0); },
                                   [&](int i) { return at(c.s.Udd, i - 1); });
        },
    });
  };
  f["psi-nilpotent"] = [](const Ctx<F>& c) {
    return eq<F>("psi^(d+1)", power(c.s.psi, static_cast<unsigned>(c.d + 1)), M(c.n, c.n));
  };
  f["psi-inverses"] = [](const Ctx<F>& c) -> Check {
    for (const F& x : {c.a * c.q, c.ainv * c.q, c.a * c.qinv, c.ainv * c.qinv}) {
      const M lhs = (c.id - x * c.s.psi) * c.series(x);
      if (auto w = eq<F>("(I - x psi) sum x^i psi^i with x = " + x.to_string(), lhs, c.id)) return w;
    }
    return std::nullopt;
  };
  f["bk-ratios"] = [](const Ctx<F>& c) {
    const M kinv = inverse(c.s.K);
    const M binv = inverse(c.s.B);
    auto lin = [&](const F& x) { return c.id - x * c.s.psi; };
    const M p1 = lin(c.a * c.q), m1 = lin(c.ainv * c.q), p2 = lin(c.a * c.qinv), m2 = lin(c.ainv * c.qinv);
    return first({
        [&] { return eq<F>("BK^-1", c.s.B * kinv * m1, p1); },
        [&] { return eq<F>("KB^-1", c.s.K * binv * p1, m1); },
        [&] { return eq<F>("K^-1 B", kinv * c.s.B * m2, p2); },
        [&] { return eq<F>("B^-1 K", binv * c.s.K * p2, m2); },
    });
  };
  f["psi-a-commutator"] = [](const Ctx<F>& c) {
    const M lhs = c.s.psi * c.s.A - c.s.A * c.s.psi;
    const M rhs = (c.q - c.qinv) * ((c.id - (c.a * c.q) * c.s.psi) * c.s.K -
                                    (c.id - (c.ainv * c.qinv) * c.s.psi) * inverse(c.s.K));
    return eq<F>("psi A - A psi", lhs, rhs);
  };
  f["delta-characterization"] = [](const Ctx<F>& c) {
    return first({
        [&] {
          for (int i = 0; i <= c.d; ++i) {
            const auto k = static_cast<std::size_t>(i);
            if (auto w = inside(idx("Delta U_i in Udd_i, i", i), c.s.U[k].image(c.s.Delta), c.s.Udd[k])) return w;
          }
          return Check{};
        },
        [&] {
          return shifted_action<F>("Delta - I on U", c, c.s.Delta, c.s.U, [](int) { return F(1); },
                                   [&](int i) { return prefix(c.s.U, i - 1); });
        },
    });
  };
  f["delta-inverse-downarrow"] = [](const Ctx<F>& c) {
    return first({
        [&] { return eq<F>("Delta Delta^-1", c.s.Delta * c.s.Deltainv, c.id); },
        [&] { return eq<F>("Delta^-1 against the reversed-system Delta", c.s.Deltainv, delta_triangular(c.s.Udd, c.s.U)); },
        [&] {
          return shifted_action<F>("Delta^-1 - I on U", c, c.s.Deltainv, c.s.U, [](int) { return F(1); },
                                   [&](int i) { return prefix(c.s.U, i - 1); });
        },
    });
  };
  f["delta-unipotent"] = [](const Ctx<F>& c) -> Check {
    if (!nilpotency_index(c.s.Delta - c.id)) {
      return Witness{"Delta - I is not nilpotent", {{"Delta", c.s.Delta.to_string()}}};
    }
    return eq<F>("Delta K = B Delta", c.s.Delta * c.s.K, c.s.B * c.s.Delta);
  };
  f["delta-power-series"] = [](const Ctx<F>& c) {
    return first({
        [&] { return eq<F>("Delta against its power series", c.s.Delta, delta_power_series(c.s.psi, c.q, c.a, c.d)); },
        [&] {
          return eq<F>("Delta^-1 against its power series", c.s.Deltainv,
                       delta_power_series(c.s.psi, c.q, c.a, c.d, true));
        },
    });
  };
  f["delta-exp-factorization"] = [](const Ctx<F>& c) {
    return first({
        [&] { return eq<F>("Delta against the exponential product", c.s.Delta, delta_exp_product(c.s.psi, c.q, c.a)); },
        [&] {
          return eq<F>("Delta^-1 against the exponential product", c.s.Deltainv,
                       delta_exp_product(c.s.psi, c.q, c.a, true));
        },
    });
  };
  f["delta-triangular"] = [](const Ctx<F>& c) {
    return eq<F>("Delta against the triangular solution", c.s.Delta, delta_triangular(c.s.U, c.s.Udd));
  };
  f["m-definition"] = [](const Ctx<F>& c) {
    return eq<F>("(a - a^-1) M = aK - a^-1 B", (c.a - c.ainv) * c.s.M, c.a * c.s.K - c.ainv * c.s.B);
  };
  f["m-product-forms"] = [](const Ctx<F>& c) {
    auto lin = [&](const F& x) { return c.id - x * c.s.psi; };
    return first({
        [&] { return eq<F>("(I - a^-1 q psi) M = K", lin(c.ainv * c.q) * c.s.M, c.s.K); },
        [&] { return eq<F>("M (I - a^-1 q^-1 psi) = K", c.s.M * lin(c.ainv * c.qinv), c.s.K); },
        [&] { return eq<F>("(I - aq psi) M = B", lin(c.a * c.q) * c.s.M, c.s.B); },
        [&] { return eq<F>("M (I - aq^-1 psi) = B", c.s.M * lin(c.a * c.qinv), c.s.B); },
    });
  };
  f["k-m-forms"] = [](const Ctx<F>& c) {
    auto lin = [&](const F& x) { return c.id - x * c.s.psi; };
    return first({
        [&] { return eq<F>("K = (I - a^-1 q psi) M", c.s.K, lin(c.ainv * c.q) * c.s.M); },
        [&] { return eq<F>("K = M (I - a^-1 q^-1 psi)", c.s.K, c.s.M * lin(c.ainv * c.qinv)); },
        [&] { return eq<F>("B = (I - aq psi) M", c.s.B, lin(c.a * c.q) * c.s.M); },
        [&] { return eq<F>("B = M (I - aq^-1 psi)", c.s.B, c.s.M * lin(c.a * c.qinv)); },
    });
  };
  f["m-inverse-forms"] = [](const Ctx<F>& c) {
    auto lin = [&](const F& x) { return c.id - x * c.s.psi; };
    const M kinv = inverse(c.s.K);
    const M binv = inverse(c.s.B);
    return first({
        [&] { return eq<F>("M M^-1 = I", c.s.M * c.s.Minv, c.id); },
        [&] { return eq<F>("M^-1 = K^-1 (I - a^-1 q psi)", c.s.Minv, kinv * lin(c.ainv * c.q)); },
        [&] { return eq<F>("M^-1 = (I - a^-1 q^-1 psi) K^-1", c.s.Minv, lin(c.ainv * c.qinv) * kinv); },
        [&] { return eq<F>("M^-1 = B^-1 (I - aq psi)", c.s.Minv, binv * lin(c.a * c.q)); },
        [&] { return eq<F>("M^-1 = (I - aq^-1 psi) B^-1", c.s.Minv, lin(c.a * c.qinv) * binv); },
    });
  };
  f["m-sum-forms"] = [](const Ctx<F>& c) {
    return first({
        [&] { return eq<F>("M = K sum a^-n q^-n psi^n", c.s.M, c.s.K * c.series(c.ainv * c.qinv)); },
        [&] { return eq<F>("M = sum a^-n q^n psi^n K", c.s.M, c.series(c.ainv * c.q) * c.s.K); },
        [&] { return eq<F>("M = B sum a^n q^-n psi^n", c.s.M, c.s.B * c.series(c.a * c.qinv)); },
        [&] { return eq<F>("M = sum a^n q^n psi^n B", c.s.M, c.series(c.a * c.q) * c.s.B); },
    });
  };
  f["m-psi-commutation"] = [](const Ctx<F>& c) {
    return eq<F>("M psi = q^2 psi M", c.s.M * c.s.psi, (c.q * c.q) * (c.s.psi * c.s.M));
  };
  f["m-inverse-k-weyl"] = [](const Ctx<F>& c) {
    const M& mi = c.s.Minv;
    const F s = c.q - c.qinv;
    return first({
        [&] { return eq<F>("q M^-1 K - q^-1 K M^-1", c.q * (mi * c.s.K) - c.qinv * (c.s.K * mi), s * c.id); },
        [&] { return eq<F>("q M^-1 B - q^-1 B M^-1", c.q * (mi * c.s.B) - c.qinv * (c.s.B * mi), s * c.id); },
    });
  };
  f["a-m-inverse"] = [](const Ctx<F>& c) {
    const M& mi = c.s.Minv;
    const M lhs = c.q * (c.s.A * mi) - c.qinv * (mi * c.s.A);
    const M rhs = (c.q - c.qinv) * ((c.a + c.ainv) * c.id - (c.q + c.qinv) * c.s.psi);
    return eq<F>("q A M^-1 - q^-1 M^-1 A", lhs, rhs);
  };
  f["m-inverse-squared-a"] = [](const Ctx<F>& c) {
    const M& mi = c.s.Minv;
    const M& a = c.s.A;
    const M lhs = mi * mi * a - (c.q * c.q + c.qinv * c.qinv) * (mi * a * mi) + a * mi * mi;
    const F s = c.q - c.qinv;
    return eq<F>("M^-2 A - (q^2 + q^-2) M^-1 A M^-1 + A M^-2", lhs, (-(s * s) * (c.a + c.ainv)) * mi);
  };
  f["q-exp-identities"] = [](const Ctx<F>& c) -> Check {
    for (const F& x : {c.c * c.a, c.c * c.ainv, c.c * c.a * -F(1), c.c * c.ainv * -F(1)}) {
      const M t = x * c.s.psi;
      if (auto w = eq<F>("exp_q(T) exp_(q^-1)(-T) with T = " + x.to_string() + " psi",
                         q_exp(t, QExpVariant::q, c.q) * q_exp(-t, QExpVariant::q_inverse, c.q), c.id)) {
        return w;
      }
    }
    const std::vector<std::pair<std::string, std::pair<M, M>>> pairs = {
        {"S = M, T = a^-1 psi/(q - q^-1)", {c.s.M, (c.c * c.ainv) * c.s.psi}},
        {"S = M, T = a psi/(q - q^-1)", {c.s.M, (c.c * c.a) * c.s.psi}},
        {"S = K, T = psi", {c.s.K, c.s.psi}},
        {"S = B, T = psi", {c.s.B, c.s.psi}},
    };
    for (const auto& [name, st] : pairs) {
      try {
        if (!q_exp_shift_check(st.first, st.second, c.q)) return fail("shift identities fail for " + name);
      } catch (const PreconditionViolation&) {
        return Witness{"S T != q^2 T S for " + name,
                       {{"ST", (st.first * st.second).to_string()}, {"TS", (st.second * st.first).to_string()}}};
      }
    }
    return std::nullopt;
  };
  f["k-exp-m"] = [](const Ctx<F>& c) {
    const M e1 = c.exp_q(c.c * c.ainv);
    const M e2 = c.exp_q(c.c * c.a);
    return first({
        [&] { return eq<F>("K exp_q(a^-1 psi/(q - q^-1)) = exp_q(..) M", c.s.K * e1, e1 * c.s.M); },
        [&] { return eq<F>("B exp_q(a psi/(q - q^-1)) = exp_q(..) M", c.s.B * e2, e2 * c.s.M); },
    });
  };
  f["q-binomial-corollary"] = [](const Ctx<F>& c) {
    return first({
        [&] {
          return eq<F>("exponential product for Delta against its power series", delta_exp_product(c.s.psi, c.q, c.a),
                       delta_power_series(c.s.psi, c.q, c.a, c.d));
        },
        [&] {
          return eq<F>("exponential product for Delta^-1 against its power series",
                       delta_exp_product(c.s.psi, c.q, c.a, true), delta_power_series(c.s.psi, c.q, c.a, c.d, true));
        },
    });
  };
  f["m-spectrum"] = [](const Ctx<F>& c) -> Check {
    for (int i = 0; i <= c.d; ++i) {
      if (c.s.W[static_cast<std::size_t>(i)].is_zero()) {
        return Witness{"q^(d-2i) is not an eigenvalue of M at i = " + std::to_string(i), {{"M", c.s.M.to_string()}}};
      }
    }
    if (!is_direct_decomposition(c.s.W)) {
      return Witness{"eigenspaces of M do not span V", {{"M", c.s.M.to_string()}}};
    }
    return std::nullopt;
  };
  f["w-dims"] = [](const Ctx<F>& c) -> Check {
    for (int i = 0; i <= c.d; ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (c.s.W[k].dim() != c.s.rho[k]) {
        return Witness{"dim W_i != rho_i at i = " + std::to_string(i),
                       {{"dim W_i", std::to_string(c.s.W[k].dim())}, {"rho_i", std::to_string(c.s.rho[k])}}};
      }
    }
    return std::nullopt;
  };
  f["u-from-w"] = [](const Ctx<F>& c) -> Check {
    const M e1 = c.exp_q(c.c * c.ainv);
    const M e2 = c.exp_q(c.c * c.a);
    const M f1 = c.exp_qinv(-(c.c * c.ainv));
    const M f2 = c.exp_qinv(-(c.c * c.a));
    for (int i = 0; i <= c.d; ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (auto w = sub_eq(idx("U_i = exp_q(a^-1 psi/(q - q^-1)) W_i, i", i), c.s.U[k], c.s.W[k].image(e1))) return w;
      if (auto w = sub_eq(idx("Udd_i = exp_q(a psi/(q - q^-1)) W_i, i", i), c.s.Udd[k], c.s.W[k].image(e2))) return w;
      if (auto w = sub_eq(idx("W_i = exp_(q^-1)(-a^-1 psi/(q - q^-1)) U_i, i", i), c.s.W[k], c.s.U[k].image(f1))) {
        return w;
      }
      if (auto w = sub_eq(idx("W_i = exp_(q^-1)(-a psi/(q - q^-1)) Udd_i, i", i), c.s.W[k], c.s.Udd[k].image(f2))) {
        return w;
      }
    }
    return std::nullopt;
  };
  f["w-sums"] = [](const Ctx<F>& c) -> Check {
    for (int i = 0; i <= c.d; ++i) {
      if (auto w = sub_eq(idx("W-prefix = U-prefix at i", i), prefix(c.s.W, i), prefix(c.s.U, i))) return w;
      if (auto w = sub_eq(idx("W-prefix = Udd-prefix at i", i), prefix(c.s.W, i), prefix(c.s.Udd, i))) return w;
    }
    return std::nullopt;
  };
  f["psi-on-w"] = [](const Ctx<F>& c) {
    return shifted_action<F>("psi on W", c, c.s.psi, c.s.W, [](int) { return F(0); },
                             [&](int i) { return at(c.s.W, i - 1); });
  };
  f["k-b-on-w"] = [](const Ctx<F>& c) {
    return first({
        [&] {
          return shifted_action<F>("K on W", c, c.s.K, c.s.W, [&](int i) { return c.qd(i); },
                                   [&](int i) { return at(c.s.W, i - 1); });
        },
        [&] {
          return shifted_action<F>("B on W", c, c.s.B, c.s.W, [&](int i) { return c.qd(i); },
                                   [&](int i) { return at(c.s.W, i - 1); });
        },
    });
  };
  f["delta-on-w"] = [](const Ctx<F>& c) {
    return first({
        [&] {
          return shifted_action<F>("Delta - I on W", c, c.s.Delta, c.s.W, [](int) { return F(1); },
                                   [&](int i) { return prefix(c.s.W, i - 1); });
        },
        [&] {
          return shifted_action<F>("Delta^-1 - I on W", c, c.s.Deltainv, c.s.W, [](int) { return F(1); },
                                   [&](int i) { return prefix(c.s.W, i - 1); });
        },
    });
  };
  f["a-on-w"] = [](const Ctx<F>& c) {
    return shifted_action<F>("A on W", c, c.s.A, c.s.W, [&](int i) { return (c.a + c.ainv) * c.qd(i); },
                             [&](int i) { return at(c.s.W, i - 1) + at(c.s.W, i + 1); });
  };
  f["m-on-u"] = [](const Ctx<F>& c) {
    return first({
        [&] {
          return shifted_action<F>("M on U", c, c.s.M, c.s.U, [&](int i) { return c.qd(i); },
                                   [&](int i) { return prefix(c.s.U, i - 1); });
        },
        [&] {
          return shifted_action<F>("M on Udd", c, c.s.M, c.s.Udd, [&](int i) { return c.qd(i); },
                                   [&](int i) { return prefix(c.s.Udd, i - 1); });
        },
    });
  };
  f["m-inverse-on-u"] = [](const Ctx<F>& c) {
    return first({
        [&] {
          return shifted_action<F>("M^-1 on U", c, c.s.Minv, c.s.U, [&](int i) { return c.qd(i).inverse(); },
                                   [&](int i) { return at(c.s.U, i - 1); });
        },
        [&] {
          return shifted_action<F>("M^-1 on Udd", c, c.s.Minv, c.s.Udd, [&](int i) { return c.qd(i).inverse(); },
                                   [&](int i) { return at(c.s.Udd, i - 1); });
        },
    });
  };
  f["m-inverse-on-ev"] = [](const Ctx<F>& c) {
    return shifted_action<F>("M^-1 on E", c, c.s.Minv, c.s.E, [](int) { return F(0); },
                             [&](int i) { return at(c.s.E, i - 1) + at(c.s.E, i) + at(c.s.E, i + 1); });
  };
  f["downarrow-invariants"] = [](const Ctx<F>& c) -> Check {
    const OperatorSuite<F> down = downarrow(c.s);
    return first({
        [&] { return eq<F>("B against K of the reversed system", c.s.B, down.K); },
        [&] { return eq<F>("M against M of the reversed system", c.s.M, down.M); },
        [&] { return eq<F>("psi against psi of the reversed system", c.s.psi, down.psi); },
        [&] { return eq<F>("Delta^-1 against Delta of the reversed system", c.s.Deltainv, down.Delta); },
        [&] { return eq<F>("Delta against Delta^-1 of the reversed system", c.s.Delta, down.Deltainv); },
        [&]() -> Check {
          for (int i = 0; i <= c.d; ++i) {
            const auto k = static_cast<std::size_t>(i);
            if (auto w = sub_eq(idx("W_i of the reversed system, i", i), c.s.W[k], down.W[k])) return w;
          }
          return std::nullopt;
        },
    });
  };

  // Items below need A*.
  f["astar-split-action"] = [](const Ctx<F>& c) {
    const auto ts = eigenvalue_seq(c.s.params).theta_star;
    return first({
        [&] {
          return shifted_action<F>("A* on U", c, *c.s.Astar, c.s.U, [&](int i) { return ts[static_cast<std::size_t>(i)]; },
                                   [&](int i) { return at(c.s.U, i - 1); });
        },
        [&] {
          return shifted_action<F>("A* on Udd", c, *c.s.Astar, c.s.Udd,
                                   [&](int i) { return ts[static_cast<std::size_t>(i)]; },
                                   [&](int i) { return at(c.s.Udd, i - 1); });
        },
    });
  };
  f["estar-sums"] = [](const Ctx<F>& c) -> Check {
    for (int i = 0; i <= c.d; ++i) {
      if (auto w = sub_eq(idx("E*-prefix = U-prefix at i", i), prefix(*c.s.Estar, i), prefix(c.s.U, i))) return w;
    }
    return std::nullopt;
  };
  f["delta-estar"] = [](const Ctx<F>& c) -> Check {
    if (auto w = shifted_action<F>("Delta - I on E*", c, c.s.Delta, *c.s.Estar, [](int) { return F(1); },
                                   [&](int i) { return prefix(*c.s.Estar, i - 1); })) {
      return w;
    }
    for (int i = 0; i <= c.d; ++i) {
      if (auto w = sub_eq(idx("Delta (E_i V + ... + E_d V) at i", i), suffix(c.s.E, i).image(c.s.Delta),
                          prefix(c.s.E, c.d - i))) {
        return w;
      }
    }
    return std::nullopt;
  };
  f["astar-on-w"] = [](const Ctx<F>& c) {
    const auto ts = eigenvalue_seq(c.s.params).theta_star;
    return shifted_action<F>("A* on W", c, *c.s.Astar, c.s.W, [&](int i) { return ts[static_cast<std::size_t>(i)]; },
                             [&](int i) { return prefix(c.s.W, i - 1); });
  };
  f["m-on-estar"] = [](const Ctx<F>& c) {
    return first({
        [&] {
          return shifted_action<F>("M on E*", c, c.s.M, *c.s.Estar, [&](int i) { return c.qd(i); },
                                   [&](int i) { return prefix(*c.s.Estar, i - 1); });
        },
        [&] {
          return shifted_action<F>("M^-1 on E*", c, c.s.Minv, *c.s.Estar, [&](int i) { return c.qd(i).inverse(); },
                                   [&](int i) { return prefix(*c.s.Estar, i - 1); });
        },
    });
  };
  return f;
}

template <ExactField F>
ReportEntry run_item(const BatteryItemInfo& info, const ItemFn<F>& fn, const OperatorSuite<F>& s) {
  ReportEntry e{std::string(info.id), std::string(info.anchor), ItemStatus::pass, std::nullopt};
  if (info.needs_astar && (!s.Astar || !s.Estar || !s.params.b)) {
    e.status = ItemStatus::skipped_needs_astar;
    return e;
  }
  try {
    const Ctx<F> ctx(s);
    if (auto w = fn(ctx)) {
      e.status = ItemStatus::fail;
      e.witness = std::move(*w);
    }
  } catch (const std::exception& ex) {
    e.status = ItemStatus::fail;
    e.witness = Witness{std::string("evaluation failed: ") + ex.what(), {}};
  }
  return e;
}

}  // namespace battery_detail

struct BatteryOptions {
  std::optional<std::set<std::string>> only;  // ids to run; all when empty
  bool parallel = false;
};

/// Runs the identity battery on a suite. Failures become report entries;
/// nothing is thrown for a mathematical failure.
template <ExactField F>
VerificationReport verify_battery(const OperatorSuite<F>& s, const BatteryOptions& opts = {}) {
  static const auto fns = battery_detail::item_functions<F>();
  std::vector<const BatteryItemInfo*> selected;
  for (const auto& info : battery_items()) {
    if (!opts.only || opts.only->contains(std::string(info.id))) selected.push_back(&info);
  }
  VerificationReport report;
  if (opts.parallel) {
    std::vector<std::future<ReportEntry>> futures;
    for (const auto* info : selected) {
      futures.push_back(std::async(std::launch::async, [&s, info] {
        return battery_detail::run_item<F>(*info, fns.at(std::string(info->id)), s);
      }));
    }
    for (auto& fut : futures) report.entries.push_back(fut.get());
  } else {
    for (const auto* info : selected) {
      report.entries.push_back(battery_detail::run_item<F>(*info, fns.at(std::string(info->id)), s));
    }
  }
  return report;
}

}  // namespace tdq
