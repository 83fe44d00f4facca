#include "srgg/posterior.hpp"

#include <cmath>
#include <string>

#include "srgg/log.hpp"
#include "srgg/parallel.hpp"
#include "srgg/rng.hpp"

namespace srgg {

namespace {

// ||L^{-1} A||_F^2 column by column; A is consumed.
double frobenius_sq_of_lower_solve(const Matrix& L, Matrix& a) {
  double acc = 0.0;
  std::vector<double> col(a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) col[i] = a(i, j);
    solve_lower_inplace(L, col);
    for (double v : col) acc += v * v;
  }
  return acc;
}

CholeskyFactor factor_or_singular(const Matrix& m, const RidgeConfig& ridge, const char* what) {
  try {
    return cholesky_with_ridge(m, ridge);
  } catch (const NumericError& e) {
    throw SingularCorrelation(std::string(what) + ": " + e.what());
  }
}

}  // namespace

double matrix_normal_loglik(const StandardizedDataset& data, const Matrix& sigma_r,
                            const Matrix& sigma_c, bool textbook_exponents) {
  const std::size_t n = data.rows;
  const std::size_t p = data.cols;
  if (sigma_r.rows() != n || sigma_r.cols() != n)
    throw DimensionMismatch("matrix_normal_loglik: sigma_r must be n x n");
  if (sigma_c.rows() != p || sigma_c.cols() != p)
    throw DimensionMismatch("matrix_normal_loglik: sigma_c must be p x p");

  const RidgeConfig ridge{};
  const CholeskyFactor fr = factor_or_singular(sigma_r, ridge, "matrix_normal_loglik(sigma_r)");
  const CholeskyFactor fc = factor_or_singular(sigma_c, ridge, "matrix_normal_loglik(sigma_c)");

  // tr(Sigma_R^{-1} D Sigma_C^{-1} D^T) = ||L_R^{-1} D L_C^{-T}||_F^2
  Matrix y(n, p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) y(i, j) = data.at(i, j);
  {
    std::vector<double> col(n);
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t i = 0; i < n; ++i) col[i] = y(i, j);
      solve_lower_inplace(fr.lower, col);
      for (std::size_t i = 0; i < n; ++i) y(i, j) = col[i];
    }
  }
  Matrix yt = y.transposed();  // p x n
  const double trace_term = frobenius_sq_of_lower_solve(fc.lower, yt);

  const double ldc = log_det_spd(fc);
  const double ldr = log_det_spd(fr);
  const double np = static_cast<double>(n) * static_cast<double>(p);
  const double c_exp = textbook_exponents ? static_cast<double>(n) : static_cast<double>(p);
  const double r_exp = textbook_exponents ? static_cast<double>(p) : static_cast<double>(n);
  return -0.5 * np * std::log(2.0 * M_PI) - 0.5 * c_exp * ldc - 0.5 * r_exp * ldr -
         0.5 * trace_term;
}

namespace {

// log|G + eps I| for the n x n Gram G = C C^T of C = D L^{-T} (n x p).
// Direct Cholesky when n <= p; eigenvalue identity through the p x p side
// when n > p. Returns the ridge actually used.
double gram_log_det(const StandardizedDataset& data, const CholeskyFactor& fc, double noise,
                    const RidgeConfig& ridge, double* ridge_used) {
  const std::size_t n = data.rows;
  const std::size_t p = data.cols;

  // C = D L^{-T}: solve L C^T = D^T column-wise, i.e. per data row.
  Matrix c(n, p);
  {
    std::vector<double> row(p);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < p; ++j) row[j] = data.at(i, j);
      solve_lower_inplace(fc.lower, row);
      for (std::size_t j = 0; j < p; ++j) c(i, j) = row[j];
    }
  }

  if (n <= p) {
    Matrix g(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < p; ++k) s += c(i, k) * c(j, k);
        g(i, j) = s;
        g(j, i) = s;
      }
    if (noise > 0.0)
      for (std::size_t i = 0; i < n; ++i) g(i, i) += noise;
    const CholeskyFactor fg = cholesky_with_ridge(g, ridge);
    *ridge_used = fg.ridge;
    return log_det_spd(fg);
  }

  // n > p: G has exactly p nonzero eigenvalues, shared with
  // M = C^T C, so |G + eps I| = eps^{n-p} |M + eps I|.
  Matrix m(p, p, 0.0);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += c(k, i) * c(k, j);
      m(i, j) = s;
      m(j, i) = s;
    }

  for (double eps : ridge.schedule) {
    const double shift = eps + noise;
    if (!(shift > 0.0)) continue;  // the rank-deficient part needs a positive shift
    Matrix work = m;
    for (std::size_t i = 0; i < p; ++i) work(i, i) += shift;
    Matrix lower;
    if (!try_cholesky(work, ridge.pivot_floor, lower)) continue;
    *ridge_used = eps;
    double ld = static_cast<double>(n - p) * std::log(shift);
    for (std::size_t i = 0; i < p; ++i) ld += 2.0 * std::log(lower(i, i));
    return ld;
  }
  throw RidgeExhausted("gram determinant: no scheduled ridge yields positive pivots");
}

double noise_inflation(const MarginalPosteriorConfig& cfg, std::size_t p) {
  if (cfg.column_noise_sd.empty()) return 0.0;
  if (cfg.column_noise_sd.size() != p)
    throw DimensionMismatch("column_noise_sd must have one entry per column");
  double s = 0.0;
  for (double v : cfg.column_noise_sd) s += v * v;
  return s / static_cast<double>(p);
}

}  // namespace

MarginalPosteriorEval marginalized_log_posterior_detail(const StandardizedDataset& data,
                                                        const Matrix& sigma_c,
                                                        const MarginalPosteriorConfig& cfg) {
  const std::size_t n = data.rows;
  const std::size_t p = data.cols;
  if (sigma_c.rows() != p || sigma_c.cols() != p)
    throw DimensionMismatch("marginalized_log_posterior: sigma_c must be p x p");

  const CholeskyFactor fc =
      factor_or_singular(sigma_c, cfg.ridge, "marginalized_log_posterior(sigma_c)");

  MarginalPosteriorEval out;
  out.ridge_sigma_c = fc.ridge;
  const double ldc = log_det_spd(fc);
  const double ldg = gram_log_det(data, fc, noise_inflation(cfg, p), cfg.ridge, &out.ridge_gram);

  out.log_posterior = -0.5 * static_cast<double>(p) * ldc -
                      0.5 * (static_cast<double>(n) + 1.0) * ldg;
  if (cfg.use_normalization) out.log_posterior -= std::log(estimate_normalization(sigma_c, cfg));
  return out;
}

double marginalized_log_posterior(const StandardizedDataset& data, const Matrix& sigma_c,
                                  const MarginalPosteriorConfig& cfg) {
  return marginalized_log_posterior_detail(data, sigma_c, cfg).log_posterior;
}

RowIndependentEval row_independent_loglik_detail(const StandardizedDataset& data,
                                                 const Matrix& sigma_c,
                                                 const RidgeConfig& ridge) {
  const std::size_t n = data.rows;
  const std::size_t p = data.cols;
  if (sigma_c.rows() != p || sigma_c.cols() != p)
    throw DimensionMismatch("row_independent_loglik: sigma_c must be p x p");
  const CholeskyFactor fc = factor_or_singular(sigma_c, ridge, "row_independent_loglik");

  Matrix k(p, p, 0.0);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a; b < p; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += data.at(i, a) * data.at(i, b);
      k(a, b) = s;
      k(b, a) = s;
    }
  // tr(sigma_c^{-1} K) via two triangular solves per column of K
  double trace_term = 0.0;
  std::vector<double> col(p);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < p; ++i) col[i] = k(i, j);
    solve_lower_inplace(fc.lower, col);
    solve_lower_transpose_inplace(fc.lower, col);
    trace_term += col[j];
  }

  RowIndependentEval out;
  out.ridge_sigma_c = fc.ridge;
  out.log_likelihood = -0.5 * static_cast<double>(n * p) * std::log(2.0 * M_PI) -
                       0.5 * static_cast<double>(n) * log_det_spd(fc) - 0.5 * trace_term;
  return out;
}

double row_independent_loglik(const StandardizedDataset& data, const Matrix& sigma_c,
                              const RidgeConfig& ridge) {
  return row_independent_loglik_detail(data, sigma_c, ridge).log_likelihood;
}

double estimate_normalization(const Matrix& sigma_c, const MarginalPosteriorConfig& cfg) {
  const std::size_t p = sigma_c.rows();
  const std::size_t nrep = cfg.replicate_rows;
  const std::size_t k_count = cfg.replicate_count;
  if (nrep < 2) throw ShapeError("estimate_normalization: replicate_rows must be >= 2");
  if (k_count < 1) throw ShapeError("estimate_normalization: replicate_count must be >= 1");

  const CholeskyFactor fc = factor_or_singular(sigma_c, cfg.ridge, "estimate_normalization");
  const double power = -(static_cast<double>(nrep) + 1.0) / 2.0;

  std::vector<double> terms(k_count, 0.0);
  std::vector<int> failed(k_count, 0);
  std::vector<int> redraws(k_count, 0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(k_count); ++k) {
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(k)));
    bool ok = false;
    for (int redraw = 0; redraw <= 10 && !ok; ++redraw) {
      redraws[k] = redraw;
      // replicate rows i.i.d. N(0, sigma_c): z row times L^T
      Matrix z(nrep, p);
      for (std::size_t i = 0; i < nrep; ++i)
        for (std::size_t j = 0; j < p; ++j) z(i, j) = rng.normal();
      Matrix rep(nrep, p, 0.0);
      for (std::size_t i = 0; i < nrep; ++i)
        for (std::size_t j = 0; j < p; ++j) {
          double s = 0.0;
          for (std::size_t t = 0; t <= j; ++t) s += z(i, t) * fc.lower(j, t);
          rep(i, j) = s;
        }
      // C = D' L^{-T}, then the Gram on its smaller side
      Matrix c(nrep, p);
      {
        std::vector<double> row(p);
        for (std::size_t i = 0; i < nrep; ++i) {
          for (std::size_t j = 0; j < p; ++j) row[j] = rep(i, j);
          solve_lower_inplace(fc.lower, row);
          for (std::size_t j = 0; j < p; ++j) c(i, j) = row[j];
        }
      }
      const std::size_t side = std::min(nrep, p);
      Matrix gram(side, side, 0.0);
      if (nrep <= p) {
        for (std::size_t i = 0; i < side; ++i)
          for (std::size_t j = i; j < side; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < p; ++t) s += c(i, t) * c(j, t);
            gram(i, j) = s;
            gram(j, i) = s;
          }
      } else {
        for (std::size_t i = 0; i < side; ++i)
          for (std::size_t j = i; j < side; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < nrep; ++t) s += c(t, i) * c(t, j);
            gram(i, j) = s;
            gram(j, i) = s;
          }
      }
      Matrix lower;
      if (!try_cholesky(gram, cfg.ridge.pivot_floor, lower)) continue;
      double ld = 0.0;
      for (std::size_t i = 0; i < side; ++i) ld += 2.0 * std::log(lower(i, i));
      terms[k] = std::exp(power * ld);
      ok = true;
    }
    if (!ok) failed[k] = 1;
  }
  for (std::size_t k = 0; k < k_count; ++k)
    if (failed[k])
      throw RidgeExhausted("estimate_normalization: replicate " + std::to_string(k) +
                           " degenerate after 10 redraws");
  int total_redraws = 0;
  for (int r : redraws) total_redraws += r;
  if (total_redraws > 0)
    log_info("estimate_normalization: " + std::to_string(total_redraws) +
             " degenerate replicate(s) redrawn");

  double sum = 0.0;  // fixed index order
  for (double t : terms) sum += t;
  return sum / static_cast<double>(k_count);
}

GraphParams GraphParams::init(const Matrix& edge_matrix, double variance_fill) {
  GraphParams g;
  g.edges = edge_matrix;
  g.variances = Matrix(edge_matrix.rows(), edge_matrix.cols(), variance_fill);
  for (std::size_t i = 0; i < edge_matrix.rows(); ++i) {
    g.edges(i, i) = 0.0;
    g.variances(i, i) = 0.0;
  }
  return g;
}

double graph_log_likelihood(const GraphParams& g, const Matrix& partial_corr) {
  const std::size_t p = g.edges.rows();
  if (g.variances.rows() != p || partial_corr.rows() != p || partial_corr.cols() != p)
    throw DimensionMismatch("graph_log_likelihood: shapes differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      const double v = g.variances(i, j);
      if (!(v > 0.0))
        throw NonpositiveVariance("variance at (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") is " + std::to_string(v));
      const double d = g.edges(i, j) - std::abs(partial_corr(i, j));
      acc += -0.5 * std::log(2.0 * M_PI * v) - d * d / (2.0 * v);
    }
  return acc;
}

}  // namespace srgg
