#include "srgg/linalg.hpp"

#include <cmath>
#include <string>

namespace srgg {

bool try_cholesky(const Matrix& m, double pivot_floor, Matrix& lower_out) {
  const std::size_t n = m.rows();
  Matrix L(n, n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
    if (!(d > pivot_floor)) return false;
    const double ljj = std::sqrt(d);
    L(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      L(i, j) = s / ljj;
    }
  }
  lower_out = std::move(L);
  return true;
}

CholeskyFactor cholesky_with_ridge(const Matrix& m, const RidgeConfig& cfg) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw DimensionMismatch("cholesky_with_ridge: matrix must be square and non-empty");
  const std::size_t n = m.rows();

  const double scale = 1.0 + max_abs(m);
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::abs(m(i, j) - m(j, i));
      if (d > asym) asym = d;
    }
  if (asym > cfg.symmetry_tol * scale)
    throw NotSymmetric("cholesky_with_ridge: asymmetry " + std::to_string(asym) +
                       " exceeds tolerance");

  Matrix sym(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sym(i, j) = 0.5 * (m(i, j) + m(j, i));

  Matrix work = sym;
  for (double eps : cfg.schedule) {
    if (eps != 0.0)
      for (std::size_t i = 0; i < n; ++i) work(i, i) = sym(i, i) + eps;
    Matrix L;
    if (try_cholesky(work, cfg.pivot_floor, L)) return CholeskyFactor{std::move(L), eps};
  }
  throw RidgeExhausted("cholesky_with_ridge: no scheduled ridge yields positive pivots");
}

void solve_lower_inplace(const Matrix& L, std::span<double> b) {
  const std::size_t n = L.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= L(i, k) * b[k];
    b[i] = s / L(i, i);
  }
}

void solve_lower_transpose_inplace(const Matrix& L, std::span<double> b) {
  const std::size_t n = L.rows();
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= L(k, ii) * b[k];
    b[ii] = s / L(ii, ii);
  }
}

namespace {

void require_positive_diagonal(const Matrix& L, double pivot_floor) {
  for (std::size_t i = 0; i < L.rows(); ++i)
    if (!(L(i, i) > pivot_floor))
      throw SingularFactor("factor diagonal " + std::to_string(L(i, i)) +
                           " at row " + std::to_string(i) + " below pivot floor");
}

}  // namespace

Matrix invert_spd(const CholeskyFactor& f, double pivot_floor) {
  const Matrix& L = f.lower;
  require_positive_diagonal(L, pivot_floor);
  const std::size_t n = L.rows();
  Matrix inv(n, n, 0.0);
  std::vector<double> col(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(col.begin(), col.end(), 0.0);
    col[j] = 1.0;
    solve_lower_inplace(L, col);
    solve_lower_transpose_inplace(L, col);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (inv(i, j) + inv(j, i));
      inv(i, j) = v;
      inv(j, i) = v;
    }
  return inv;
}

double log_det_spd(const CholeskyFactor& f, double pivot_floor) {
  require_positive_diagonal(f.lower, pivot_floor);
  double s = 0.0;
  for (std::size_t i = 0; i < f.lower.rows(); ++i) s += std::log(f.lower(i, i));
  return 2.0 * s;
}

}  // namespace srgg
