#pragma once

#include <span>
#include <vector>

#include "srgg/matrix.hpp"

namespace srgg {

// Ridge escalation ladder for nearly singular symmetric matrices: the first
// epsilon whose Cholesky succeeds with all pivots above pivot_floor wins.
struct RidgeConfig {
  std::vector<double> schedule{0.0, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2};
  double pivot_floor = 1e-12;
  double symmetry_tol = 1e-12;  // relative, scaled by (1 + max|m|)
};

// Lower-triangular factor with the ridge that was applied:
// lower * lower^T = m + ridge * I.
struct CholeskyFactor {
  Matrix lower;
  double ridge = 0.0;
};

// Symmetrizes (m + m^T)/2, then walks the ridge schedule.
// Throws NotSymmetric or RidgeExhausted.
CholeskyFactor cholesky_with_ridge(const Matrix& m, const RidgeConfig& cfg = {});

// Plain Cholesky attempt, no symmetry check, no ridge. Returns false if a
// pivot falls at or below pivot_floor. Exposed for hot paths that manage
// their own ridge (and for the ridge walker itself).
bool try_cholesky(const Matrix& m, double pivot_floor, Matrix& lower_out);

// (L L^T)^-1 via forward substitution per unit column, then back
// substitution; result symmetrized by averaging. Throws SingularFactor.
Matrix invert_spd(const CholeskyFactor& f, double pivot_floor = 1e-12);

// 2 * sum(ln L_ii). Throws SingularFactor on a non-positive diagonal.
double log_det_spd(const CholeskyFactor& f, double pivot_floor = 1e-12);

// Triangular kernels (L is lower-triangular, unit columns not assumed).
void solve_lower_inplace(const Matrix& L, std::span<double> b);            // L x = b
void solve_lower_transpose_inplace(const Matrix& L, std::span<double> b);  // L^T x = b

}  // namespace srgg
