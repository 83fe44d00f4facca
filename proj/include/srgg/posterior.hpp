#pragma once

#include <cstdint>
#include <vector>

#include "srgg/data.hpp"
#include "srgg/linalg.hpp"
#include "srgg/matrix.hpp"

namespace srgg {

struct MarginalPosteriorConfig {
  bool use_normalization = false;
  std::size_t replicate_count = 64;  // K
  std::size_t replicate_rows = 4;    // n'
  std::uint64_t seed = 0;
  // Matrix-Normal determinant convention. false follows the printed
  // |Sigma_C|^{p/2} |Sigma_R|^{n/2}; true uses the textbook
  // |Sigma_C|^{n/2} |Sigma_R|^{p/2}. The two coincide when n == p.
  bool textbook_exponents = false;
  // Measurement-error hook, off when empty: per-column noise standard
  // deviations whose mean square inflates the Gram diagonal before the
  // determinant is taken.
  std::vector<double> column_noise_sd{};
  RidgeConfig ridge{};
};

// Log of the zero-mean matrix-Normal density of the standardized data given
// row covariance sigma_r (n x n) and column covariance sigma_c (p x p).
double matrix_normal_loglik(const StandardizedDataset& data, const Matrix& sigma_r,
                            const Matrix& sigma_c, bool textbook_exponents = false);

// Marginal log posterior of sigma_c given the data, up to an additive
// constant that cancels in Metropolis ratios:
//   -ln c_hat(sigma_c)  [only when use_normalization]
//   - (p/2) ln|sigma_c| - ((n+1)/2) ln|D sigma_c^{-1} D^T|.
// The n x n Gram has rank at most p; when n > p its ridge-adjusted
// determinant is evaluated through the p x p reduction
//   ln|G + eps I| = (n - p) ln eps + ln|M + eps I|,
// M = L^{-1} D^T D L^{-T}, which is exact for the eigenvalues and O(p^3).
double marginalized_log_posterior(const StandardizedDataset& data, const Matrix& sigma_c,
                                  const MarginalPosteriorConfig& cfg = {});

struct MarginalPosteriorEval {
  double log_posterior = 0.0;
  double ridge_sigma_c = 0.0;
  double ridge_gram = 0.0;
};

MarginalPosteriorEval marginalized_log_posterior_detail(const StandardizedDataset& data,
                                                        const Matrix& sigma_c,
                                                        const MarginalPosteriorConfig& cfg = {});

// Log likelihood of sigma_c under the matrix-Normal model with independent
// rows (row covariance pinned at the identity):
//   -(np/2) ln 2pi - (n/2) ln|sigma_c| - 1/2 tr(sigma_c^{-1} D^T D).
// Concentrates at the empirical column correlation as n grows, which the
// ridge-regularized marginal posterior does not once n exceeds p (its Gram
// determinant then factors as |D^T D| / |sigma_c| and the data shape drops
// out). The two-block sampler uses this as its default block-1 target.
double row_independent_loglik(const StandardizedDataset& data, const Matrix& sigma_c,
                              const RidgeConfig& ridge = {});

struct RowIndependentEval {
  double log_likelihood = 0.0;
  double ridge_sigma_c = 0.0;
};

RowIndependentEval row_independent_loglik_detail(const StandardizedDataset& data,
                                                 const Matrix& sigma_c,
                                                 const RidgeConfig& ridge = {});

// Monte-Carlo estimator of the likelihood normalization:
// mean over K replicate n' x p datasets (rows i.i.d. N(0, sigma_c) via
// Cholesky coloring) of |D' sigma_c^{-1} D'^T|^{-(n'+1)/2}. The determinant
// is taken on the smaller side of the Gram pair (the n' x n' matrix is
// identically singular when n' > p). Deterministic per seed; replicate k
// draws from substream k, so results do not depend on evaluation order.
double estimate_normalization(const Matrix& sigma_c, const MarginalPosteriorConfig& cfg);

// One soft graph draw: binary edges plus per-pair variance parameters.
struct GraphParams {
  Matrix edges;      // p x p, entries in {0,1}, zero diagonal, symmetric
  Matrix variances;  // p x p, entries in (0,1], symmetric

  static GraphParams init(const Matrix& edge_matrix, double variance_fill);
};

// Sum over unordered pairs i<j of the Normal log density of the edge value
// at |rho_ij| with variance v_ij:
//   -1/2 ln(2 pi v_ij) - (g_ij - |rho_ij|)^2 / (2 v_ij).
double graph_log_likelihood(const GraphParams& g, const Matrix& partial_corr);

}  // namespace srgg
