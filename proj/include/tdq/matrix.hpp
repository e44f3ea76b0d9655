#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tdq/errors.hpp"
#include "tdq/field.hpp"

namespace tdq {

template <ExactField F>
using Vector = std::vector<F>;

/// Dense row-major matrix over an exact field. Matrices act on column
/// vectors: (T v)_i = sum_j T(i, j) v_j.
template <ExactField F>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, F(0)) {}
  Matrix(std::initializer_list<std::initializer_list<F>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = F(1);
    return m;
  }

  static Matrix diagonal(const std::vector<F>& entries) {
    Matrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<F>>& rows) {
    const std::size_t c = rows.empty() ? 0 : rows.front().size();
    Matrix m(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) throw DimensionMismatch("ragged row list");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  /// Matrix whose j-th column is columns[j].
  static Matrix from_columns(std::size_t n, const std::vector<std::vector<F>>& columns) {
    Matrix m(n, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != n) throw DimensionMismatch("column length mismatch");
      for (std::size_t i = 0; i < n; ++i) m(i, j) = columns[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  std::span<const F> data() const { return data_; }

  F& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const F& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<F> row(std::size_t i) const {
    return std::vector<F>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  std::vector<F> column(std::size_t j) const {
    std::vector<F> c;
    c.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c.push_back((*this)(i, j));
    return c;
  }

  bool is_zero() const {
    for (const auto& x : data_) {
      if (!x.is_zero()) return false;
    }
    return true;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    }
    return t;
  }

  Matrix operator-() const {
    Matrix r = *this;
    for (auto& x : r.data_) x = -x;
    return r;
  }

  friend Matrix operator+(const Matrix& x, const Matrix& y) {
    x.require_same_shape(y);
    Matrix r = x;
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = r.data_[k] + y.data_[k];
    return r;
  }

  friend Matrix operator-(const Matrix& x, const Matrix& y) {
    x.require_same_shape(y);
    Matrix r = x;
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = r.data_[k] - y.data_[k];
    return r;
  }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols_ != y.rows_) throw DimensionMismatch("matrix product shape mismatch");
    Matrix r(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i) {
      for (std::size_t k = 0; k < x.cols_; ++k) {
        const F& xik = x(i, k);
        if (xik.is_zero()) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) {
          const F& ykj = y(k, j);
          if (ykj.is_zero()) continue;
          r(i, j) = r(i, j) + xik * ykj;
        }
      }
    }
    return r;
  }

  friend Matrix operator*(const F& s, const Matrix& m) {
    Matrix r = m;
    if (s == F(1)) return r;
    for (auto& x : r.data_) {
      if (!x.is_zero()) x = s * x;
    }
    return r;
  }

  friend std::vector<F> operator*(const Matrix& m, const std::vector<F>& v) {
    if (m.cols_ != v.size()) throw DimensionMismatch("matrix-vector shape mismatch");
    std::vector<F> r(m.rows_, F(0));
    for (std::size_t i = 0; i < m.rows_; ++i) {
      for (std::size_t j = 0; j < m.cols_; ++j) {
        if (!m(i, j).is_zero() && !v[j].is_zero()) r[i] = r[i] + m(i, j) * v[j];
      }
    }
    return r;
  }

  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.data_ == y.data_;
  }

  /// Rows rendered as "[[x, y], [z, w]]".
  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      s += i == 0 ? "[" : ", [";
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j != 0) s += ", ";
        s += (*this)(i, j).to_string();
      }
      s += "]";
    }
    return s + "]";
  }

 private:
  void require_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<F> data_;
};

template <ExactField F>
Matrix<F> power(const Matrix<F>& m, std::size_t k) {
  if (!m.is_square()) throw DimensionMismatch("power of a non-square matrix");
  Matrix<F> r = Matrix<F>::identity(m.rows());
  for (std::size_t i = 0; i < k; ++i) r = r * m;
  return r;
}

/// Polynomial sum_k coeffs[k] * m^k.
template <ExactField F>
Matrix<F> polynomial_in(const Matrix<F>& m, const std::vector<F>& coeffs) {
  Matrix<F> r(m.rows(), m.cols());
  Matrix<F> p = Matrix<F>::identity(m.rows());
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (k > 0) p = p * m;
    if (!coeffs[k].is_zero()) r = r + coeffs[k] * p;
  }
  return r;
}

template <ExactField F>
struct EchelonForm {
  Matrix<F> reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row, increasing
};

/// Reduced row echelon form (pivots equal to 1) by Gauss-Jordan elimination.
template <ExactField F>
EchelonForm<F> rref(Matrix<F> m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t best = rows;
    std::size_t best_size = 0;
    for (std::size_t i = r; i < rows; ++i) {
      if (m(i, c).is_zero()) continue;
      const std::size_t s = scalar_size(m(i, c));
      if (best == rows || s < best_size) {
        best = i;
        best_size = s;
      }
    }
    if (best == rows) continue;
    if (best != r) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(best, j), m(r, j));
    }
    const F inv = m(r, c).inverse();
    for (std::size_t j = c; j < cols; ++j) {
      if (!m(r, j).is_zero()) m(r, j) = m(r, j) * inv;
    }
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const F factor = m(i, c);
      for (std::size_t j = c; j < cols; ++j) {
        if (!m(r, j).is_zero()) m(i, j) = m(i, j) - factor * m(r, j);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

template <ExactField F>
std::size_t rank(const Matrix<F>& m) {
  return rref(m).pivots.size();
}

/// Basis of {v : m v = 0}, one vector per free column.
template <ExactField F>
std::vector<std::vector<F>> kernel_basis(const Matrix<F>& m) {
  const auto [reduced, pivots] = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<F>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<F> v(m.cols(), F(0));
    v[f] = F(1);
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -reduced(k, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <ExactField F>
std::optional<Matrix<F>> try_inverse(const Matrix<F>& m) {
  if (!m.is_square()) throw DimensionMismatch("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix<F> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = F(1);
  }
  const auto [reduced, pivots] = rref(std::move(aug));
  if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
  Matrix<F> inv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = reduced(i, n + j);
  }
  return inv;
}

template <ExactField F>
Matrix<F> inverse(const Matrix<F>& m) {
  auto inv = try_inverse(m);
  if (!inv) throw SingularMatrix();
  return std::move(*inv);
}

/// Least k >= 1 with m^k = 0, or nullopt when m is not nilpotent.
template <ExactField F>
std::optional<std::size_t> nilpotency_index(const Matrix<F>& m) {
  if (!m.is_square()) throw DimensionMismatch("nilpotency index of a non-square matrix");
  Matrix<F> p = m;
  for (std::size_t k = 1; k <= m.rows(); ++k) {
    if (p.is_zero()) return k;
    p = p * m;
  }
  return std::nullopt;
}

}  // namespace tdq
