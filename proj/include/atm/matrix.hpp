#pragma once

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "atm/errors.hpp"

namespace atm {

template <class T>
using Vector = std::vector<T>;

/// Row-major dense matrix. Used for the linear test systems (double) and the
/// Butcher array (exact rationals).
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw ShapeError("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_zero() const {
    for (const auto& x : data_)
      if (x != 0) return false;
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T>
Vector<T> operator*(const Matrix<T>& a, const Vector<T>& x) {
  if (a.cols() != x.size()) throw ShapeError("matrix-vector dimension mismatch");
  Vector<T> y(a.rows(), T(0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    T acc(0);
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    y[i] = std::move(acc);
  }
  return y;
}

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw ShapeError("matrix-matrix dimension mismatch");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;  // Butcher arrays are mostly zeros
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

/// Rank by plain Gaussian elimination. Exact for rational T.
template <class T>
std::size_t rank(Matrix<T> m) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < m.cols() && r < m.rows(); ++col) {
    std::size_t pivot = r;
    while (pivot < m.rows() && m(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(r, j));
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, col) == 0) continue;
      T factor = m(i, col) / m(r, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= factor * m(r, j);
    }
    ++r;
  }
  return r;
}

/// Solves the square system a·x = rhs by Gaussian elimination with
/// first-nonzero pivoting. Intended for exact rational T; throws DomainError
/// when a is singular.
template <class T>
Vector<T> solve(Matrix<T> a, Vector<T> rhs) {
  const std::size_t n = a.rows();
  if (!a.square() || rhs.size() != n) throw ShapeError("solve: dimension mismatch");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) throw DomainError("solve: singular matrix");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      std::swap(rhs[pivot], rhs[col]);
    }
    for (std::size_t i = col + 1; i < n; ++i) {
      if (a(i, col) == 0) continue;
      T factor = a(i, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(i, j) -= factor * a(col, j);
      rhs[i] -= factor * rhs[col];
    }
  }
  Vector<T> x(n);
  for (std::size_t i = n; i-- > 0;) {
    T acc = rhs[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a(i, j) * x[j];
    x[i] = acc / a(i, i);
  }
  return x;
}

}  // namespace atm
