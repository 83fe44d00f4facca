#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "srgg/linalg.hpp"
#include "srgg/matrix.hpp"

namespace srgg {

// Global scale of the connection function; a constant, not a knob.
inline constexpr double kGlobalScaleK = 1.0;

// One (edge value, absolute correlation) evaluation point. abs_rho may
// overshoot [0,1] by at most 1e-9 (clamped); larger violations are errors.
struct EdgeInput {
  int g;
  double abs_rho;

  EdgeInput(int g_value, double abs_rho_value);
  double separation() const;  // |g - abs_rho|
};

// Connection function: the closed-form edge marginal
//   K * [ sqrt(2/pi) exp(-d^2/2) - |d| erfc(|d|/sqrt(2)) ],  d = g - abs_rho.
// Strictly positive for |d| <= 1 and strictly decreasing in |d|.
double edge_marginal(const EdgeInput& e);
double edge_marginal_from_separation(double abs_d);

// Node separation sqrt(2/pi) exp(-d^2/2) + |d| erf(|d|/sqrt(2));
// equals edge_marginal + |d| exactly.
double node_distance(const EdgeInput& e);
double node_distance_from_separation(double abs_d);

// Mean absolute difference of two Normals with common sigma:
//   (2 sigma / sqrt(pi)) exp(-(mu_i-mu_j)^2 / 4 sigma^2)
//     + |mu_i-mu_j| erf(|mu_i-mu_j| / 2 sigma).
// At sigma = 1/sqrt(2) this coincides with node_distance of the separation.
double normal_pair_distance(double mu_i, double mu_j, double sigma);

// Partial correlations from the precision matrix:
//   rho_ij = -psi_ij / sqrt(psi_ii psi_jj), rho_ii = 1.
// Entries outside [-1,1] by more than 1e-9 raise SingularCorrelation;
// smaller excursions are clamped.
Matrix partial_correlation(const Matrix& sigma_c, const RidgeConfig& ridge = {});

struct EdgeSet {
  std::size_t p = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // i < j

  Matrix as_matrix() const;
};

// Undirected edge (i,j), i<j, included iff marginals(i,j) >= tau. No self
// loops; ties at tau are in (inclusive threshold).
EdgeSet threshold_edge_set(const Matrix& marginals, double tau);

struct PointProcessParams {
  std::vector<double> means;
  double sigma = 1.0;
  double tau = 0.05;
};

// lambda_i(x) = Normal density at x, centered at means[node], times the
// number Q of entries in marginals_row that reach tau (Heaviside with
// H(0) = 1).
double poisson_intensity(const PointProcessParams& params, std::size_t node,
                         std::span<const double> marginals_row, double x);

struct SimulationReport {
  double empirical_mean = 0.0;
  double predicted = 0.0;
  double std_error = 0.0;
  double z_score = 0.0;
  std::size_t trials = 0;
  std::size_t eligible = 0;  // Q
};

// Monte-Carlo check of the intensity bookkeeping: every node whose marginal
// reaches tau contributes a Poisson(f * pi * a^2) count inside the ball of
// radius a around the focal node, where f is the Normal density at the ball
// center. Empirical mean of the total count is compared against
// f * pi * a^2 * Q and reported with a z-score.
SimulationReport validate_point_process(const PointProcessParams& params, const Matrix& marginals,
                                        std::size_t node, double radius, std::size_t trials,
                                        std::uint64_t seed);

}  // namespace srgg
