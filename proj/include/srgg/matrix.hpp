#pragma once

#include <cstddef>
#include <vector>

#include "srgg/errors.hpp"

namespace srgg {

// Dense row-major matrix of doubles. Small and boring on purpose; all the
// numerics that care about structure (SPD, triangular) live in linalg.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return a_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }
  const std::vector<double>& values() const { return a_; }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matmul: inner dimensions differ");
  Matrix c(a.rows(), b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline double max_abs(const Matrix& m) {
  double v = 0.0;
  for (double x : m.values()) {
    const double a = x < 0 ? -x : x;
    if (a > v) v = a;
  }
  return v;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw DimensionMismatch("max_abs_diff: shapes differ");
  double v = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    double d = a.values()[i] - b.values()[i];
    if (d < 0) d = -d;
    if (d > v) v = d;
  }
  return v;
}

// Index of unordered pair (i,j), i<j, in the flattened upper triangle of a
// p x p matrix, row-major over pairs: (0,1),(0,2),...,(0,p-1),(1,2),...
inline std::size_t pair_index(std::size_t i, std::size_t j, std::size_t p) {
  return i * p - i * (i + 1) / 2 + (j - i - 1);
}

inline std::size_t pair_count(std::size_t p) { return p * (p - 1) / 2; }

}  // namespace srgg
