#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tdq/errors.hpp"
#include "tdq/matrix.hpp"

namespace tdq {

/// Subspace of F^n stored as the nonzero rows of a reduced row echelon
/// matrix. Because the basis is canonical, == decides subspace equality.
template <ExactField F>
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient) : ambient_(ambient), basis_(0, ambient) {}

  /// Span of the given vectors (each of length `ambient`).
  static Subspace span(std::size_t ambient, const std::vector<std::vector<F>>& vectors) {
    Matrix<F> m(vectors.size(), ambient);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (vectors[i].size() != ambient) throw DimensionMismatch("vector length differs from ambient dimension");
      for (std::size_t j = 0; j < ambient; ++j) m(i, j) = vectors[i][j];
    }
    return from_rows(std::move(m));
  }

  /// Row space of m.
  static Subspace from_rows(Matrix<F> m) {
    Subspace s;
    s.ambient_ = m.cols();
    auto ech = rref(std::move(m));
    const std::size_t r = ech.pivots.size();
    s.basis_ = Matrix<F>(r, s.ambient_);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < s.ambient_; ++j) s.basis_(i, j) = ech.reduced(i, j);
    }
    return s;
  }

  /// Column space of m.
  static Subspace column_space(const Matrix<F>& m) { return from_rows(m.transpose()); }

  static Subspace zero(std::size_t ambient) { return Subspace(ambient); }
  static Subspace full(std::size_t ambient) { return from_rows(Matrix<F>::identity(ambient)); }

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == ambient_; }

  /// Canonical basis, one vector per row.
  const Matrix<F>& basis() const { return basis_; }
  std::vector<std::vector<F>> vectors() const {
    std::vector<std::vector<F>> out;
    for (std::size_t i = 0; i < dim(); ++i) out.push_back(basis_.row(i));
    return out;
  }

  bool contains(const std::vector<F>& v) const {
    if (v.size() != ambient_) throw DimensionMismatch("vector length differs from ambient dimension");
    return (*this + span(ambient_, {v})).dim() == dim();
  }

  /// x is a subspace of y, tested as x + y == y.
  bool is_subspace_of(const Subspace& y) const { return *this + y == y; }

  /// m applied to every vector of the subspace.
  Subspace image(const Matrix<F>& m) const {
    if (m.cols() != ambient_) throw DimensionMismatch("operator does not act on this space");
    return from_rows(basis_ * m.transpose());
  }

  friend Subspace operator+(const Subspace& x, const Subspace& y) {
    x.require_same_ambient(y);
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    Matrix<F> stacked(x.dim() + y.dim(), x.ambient_);
    for (std::size_t i = 0; i < x.dim(); ++i) {
      for (std::size_t j = 0; j < x.ambient_; ++j) stacked(i, j) = x.basis_(i, j);
    }
    for (std::size_t i = 0; i < y.dim(); ++i) {
      for (std::size_t j = 0; j < x.ambient_; ++j) stacked(x.dim() + i, j) = y.basis_(i, j);
    }
    return from_rows(std::move(stacked));
  }

  /// Zassenhaus: reduce [[X, X], [Y, 0]]; rows whose left half vanishes
  /// carry a basis of the intersection in their right half.
  friend Subspace intersect(const Subspace& x, const Subspace& y) {
    x.require_same_ambient(y);
    const std::size_t n = x.ambient_;
    if (x.is_zero() || y.is_zero()) return zero(n);
    if (x.is_full()) return y;
    if (y.is_full()) return x;
    Matrix<F> z(x.dim() + y.dim(), 2 * n);
    for (std::size_t i = 0; i < x.dim(); ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        z(i, j) = x.basis_(i, j);
        z(i, n + j) = x.basis_(i, j);
      }
    }
    for (std::size_t i = 0; i < y.dim(); ++i) {
      for (std::size_t j = 0; j < n; ++j) z(x.dim() + i, j) = y.basis_(i, j);
    }
    const auto ech = rref(std::move(z));
    std::vector<std::vector<F>> rows;
    for (std::size_t k = 0; k < ech.pivots.size(); ++k) {
      if (ech.pivots[k] < n) continue;
      std::vector<F> v(n);
      for (std::size_t j = 0; j < n; ++j) v[j] = ech.reduced(k, n + j);
      rows.push_back(std::move(v));
    }
    return span(n, rows);
  }

  friend bool operator==(const Subspace& x, const Subspace& y) {
    return x.ambient_ == y.ambient_ && x.basis_ == y.basis_;
  }

  std::string to_string() const {
    return "span" + (dim() == 0 ? std::string("[]") : basis_.to_string());
  }

 private:
  void require_same_ambient(const Subspace& o) const {
    if (ambient_ != o.ambient_) throw DimensionMismatch("subspaces live in different ambient spaces");
  }

  std::size_t ambient_ = 0;
  Matrix<F> basis_;
};

template <ExactField F>
Subspace<F> kernel(const Matrix<F>& m) {
  return Subspace<F>::span(m.cols(), kernel_basis(m));
}

template <ExactField F>
Subspace<F> eigenspace(const Matrix<F>& m, const F& lambda) {
  if (!m.is_square()) throw DimensionMismatch("eigenspace of a non-square matrix");
  return kernel(m - lambda * Matrix<F>::identity(m.rows()));
}

template <ExactField F>
Subspace<F> subspace_sum(const std::vector<Subspace<F>>& xs, std::size_t ambient) {
  Subspace<F> s = Subspace<F>::zero(ambient);
  for (const auto& x : xs) s = s + x;
  return s;
}

template <ExactField F>
Subspace<F> subspace_sum(const std::vector<Subspace<F>>& xs) {
  if (xs.empty()) throw DimensionMismatch("sum of an empty list needs an ambient dimension");
  return subspace_sum(xs, xs.front().ambient());
}

/// Sum of xs[first..last] inclusive; zero when the range is empty.
template <ExactField F>
Subspace<F> range_sum(const std::vector<Subspace<F>>& xs, long first, long last, std::size_t ambient) {
  Subspace<F> s = Subspace<F>::zero(ambient);
  for (long i = std::max(first, 0L); i <= last && i < static_cast<long>(xs.size()); ++i) s = s + xs[static_cast<std::size_t>(i)];
  return s;
}

template <ExactField F>
bool is_direct_decomposition(const std::vector<Subspace<F>>& xs) {
  if (xs.empty()) return false;
  const std::size_t n = xs.front().ambient();
  std::size_t total = 0;
  for (const auto& x : xs) {
    if (x.ambient() != n) throw DimensionMismatch("subspaces live in different ambient spaces");
    if (x.is_zero()) return false;
    total += x.dim();
  }
  return total == n && subspace_sum(xs, n).is_full();
}

/// Dimension of the unital algebra generated by ms. Words are added by
/// increasing length; a word is extended only if it was independent of the
/// span so far, which is enough because the span is closed under left
/// multiplication by generators once no new word appears.
template <ExactField F>
std::size_t generated_algebra_dim(const std::vector<Matrix<F>>& ms) {
  if (ms.empty()) throw DimensionMismatch("no generators given");
  const std::size_t n = ms.front().rows();
  for (const auto& m : ms) {
    if (m.rows() != n || m.cols() != n) throw DimensionMismatch("generators differ in size");
  }
  const std::size_t n2 = n * n;
  // Echelon rows of flattened matrices, kept reduced against each other.
  std::vector<std::vector<F>> echelon;
  std::vector<std::size_t> pivots;
  auto insert = [&](const Matrix<F>& w) {
    std::vector<F> v(w.data().begin(), w.data().end());
    for (std::size_t k = 0; k < echelon.size(); ++k) {
      const F c = v[pivots[k]];
      if (c.is_zero()) continue;
      for (std::size_t j = 0; j < n2; ++j) {
        if (!echelon[k][j].is_zero()) v[j] = v[j] - c * echelon[k][j];
      }
    }
    std::size_t p = 0;
    while (p < n2 && v[p].is_zero()) ++p;
    if (p == n2) return false;
    const F inv = v[p].inverse();
    for (auto& x : v) x = x * inv;
    for (std::size_t k = 0; k < echelon.size(); ++k) {
      const F c = echelon[k][p];
      if (c.is_zero()) continue;
      for (std::size_t j = 0; j < n2; ++j) echelon[k][j] = echelon[k][j] - c * v[j];
    }
    echelon.push_back(std::move(v));
    pivots.push_back(p);
    return true;
  };

  std::vector<Matrix<F>> frontier{Matrix<F>::identity(n)};
  insert(frontier.front());
  while (!frontier.empty() && echelon.size() < n2) {
    std::vector<Matrix<F>> next;
    for (const auto& w : frontier) {
      for (const auto& g : ms) {
        Matrix<F> gw = g * w;
        if (insert(gw)) next.push_back(std::move(gw));
      }
    }
    frontier = std::move(next);
  }
  return echelon.size();
}

}  // namespace tdq
