#include "srgg/metric_space.hpp"

#include <cmath>
#include <string>

#include "srgg/rng.hpp"

namespace srgg {

namespace {

constexpr double kAbsRhoTolerance = 1e-9;
const double kSqrt2OverPi = std::sqrt(2.0 / M_PI);
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

EdgeInput::EdgeInput(int g_value, double abs_rho_value) : g(g_value), abs_rho(abs_rho_value) {
  if (g != 0 && g != 1) throw InvalidCorrelationEntry("edge value must be 0 or 1");
  if (abs_rho < -kAbsRhoTolerance || abs_rho > 1.0 + kAbsRhoTolerance)
    throw InvalidCorrelationEntry("|rho| = " + std::to_string(abs_rho) + " outside [0,1]");
  if (abs_rho < 0.0) abs_rho = 0.0;
  if (abs_rho > 1.0) abs_rho = 1.0;
}

double EdgeInput::separation() const { return std::abs(static_cast<double>(g) - abs_rho); }

double edge_marginal_from_separation(double abs_d) {
  return kGlobalScaleK * (kSqrt2OverPi * std::exp(-0.5 * abs_d * abs_d) -
                          abs_d * std::erfc(abs_d * kInvSqrt2));
}

double edge_marginal(const EdgeInput& e) { return edge_marginal_from_separation(e.separation()); }

double node_distance_from_separation(double abs_d) {
  return kSqrt2OverPi * std::exp(-0.5 * abs_d * abs_d) + abs_d * std::erf(abs_d * kInvSqrt2);
}

double node_distance(const EdgeInput& e) { return node_distance_from_separation(e.separation()); }

double normal_pair_distance(double mu_i, double mu_j, double sigma) {
  if (!(sigma > 0.0)) throw NumericError("normal_pair_distance: sigma must be positive");
  const double gap = std::abs(mu_i - mu_j);
  return (2.0 * sigma / std::sqrt(M_PI)) * std::exp(-gap * gap / (4.0 * sigma * sigma)) +
         gap * std::erf(gap / (2.0 * sigma));
}

Matrix partial_correlation(const Matrix& sigma_c, const RidgeConfig& ridge) {
  CholeskyFactor f;
  try {
    f = cholesky_with_ridge(sigma_c, ridge);
  } catch (const NumericError& e) {
    throw SingularCorrelation(std::string("partial_correlation: ") + e.what());
  }
  const Matrix psi = invert_spd(f, ridge.pivot_floor);
  const std::size_t p = psi.rows();
  Matrix rho(p, p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    if (!(psi(i, i) > 0.0))
      throw SingularCorrelation("precision diagonal non-positive at " + std::to_string(i));
    rho(i, i) = 1.0;
  }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      double r = -psi(i, j) / std::sqrt(psi(i, i) * psi(j, j));
      if (r > 1.0 + kAbsRhoTolerance || r < -1.0 - kAbsRhoTolerance)
        throw SingularCorrelation("partial correlation " + std::to_string(r) + " at (" +
                                  std::to_string(i) + "," + std::to_string(j) +
                                  ") outside [-1,1]");
      if (r > 1.0) r = 1.0;
      if (r < -1.0) r = -1.0;
      rho(i, j) = r;
      rho(j, i) = r;
    }
  return rho;
}

Matrix EdgeSet::as_matrix() const {
  Matrix m(p, p, 0.0);
  for (const auto& [i, j] : edges) {
    m(i, j) = 1.0;
    m(j, i) = 1.0;
  }
  return m;
}

EdgeSet threshold_edge_set(const Matrix& marginals, double tau) {
  if (marginals.rows() != marginals.cols())
    throw DimensionMismatch("threshold_edge_set: matrix must be square");
  EdgeSet s;
  s.p = marginals.rows();
  for (std::size_t i = 0; i < s.p; ++i)
    for (std::size_t j = i + 1; j < s.p; ++j)
      if (marginals(i, j) >= tau)
        s.edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
  return s;
}

namespace {

double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
}

std::size_t count_reaching(std::span<const double> row, double tau) {
  std::size_t q = 0;
  for (double m : row)
    if (m >= tau) ++q;  // H(0) = 1
  return q;
}

}  // namespace

namespace {

void validate_params(const PointProcessParams& params, const char* who) {
  if (!(params.sigma > 0.0)) throw NumericError(std::string(who) + ": sigma must be positive");
  if (params.tau < 0.0 || params.tau > 1.0)
    throw ShapeError(std::string(who) + ": tau must be a probability");
}

}  // namespace

double poisson_intensity(const PointProcessParams& params, std::size_t node,
                         std::span<const double> marginals_row, double x) {
  validate_params(params, "poisson_intensity");
  if (node >= params.means.size()) throw DimensionMismatch("poisson_intensity: node out of range");
  const std::size_t q = count_reaching(marginals_row, params.tau);
  return normal_pdf(x, params.means[node], params.sigma) * static_cast<double>(q);
}

SimulationReport validate_point_process(const PointProcessParams& params, const Matrix& marginals,
                                        std::size_t node, double radius, std::size_t trials,
                                        std::uint64_t seed) {
  validate_params(params, "validate_point_process");
  if (trials == 0) throw ShapeError("validate_point_process: need at least one trial");
  if (radius < 0.0 || radius > 1.0)
    throw ShapeError("validate_point_process: radius is a probability in [0,1]");
  if (node >= marginals.rows()) throw DimensionMismatch("validate_point_process: node out of range");
  std::vector<double> row(marginals.cols());
  for (std::size_t j = 0; j < marginals.cols(); ++j) row[j] = marginals(node, j);
  const std::size_t q = count_reaching(row, params.tau);

  const double f = normal_pdf(params.means[node], params.means[node], params.sigma);
  const double per_node_mean = f * M_PI * radius * radius;

  Rng rng(seed);
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::uint64_t count = 0;
    for (std::size_t j = 0; j < q; ++j) count += rng.poisson(per_node_mean);
    const double c = static_cast<double>(count);
    sum += c;
    sumsq += c * c;
  }

  SimulationReport r;
  r.trials = trials;
  r.eligible = q;
  r.predicted = per_node_mean * static_cast<double>(q);
  r.empirical_mean = sum / static_cast<double>(trials);
  const double var = sumsq / static_cast<double>(trials) - r.empirical_mean * r.empirical_mean;
  r.std_error = var > 0.0 ? std::sqrt(var / static_cast<double>(trials)) : 0.0;
  r.z_score = r.std_error > 0.0 ? (r.empirical_mean - r.predicted) / r.std_error : 0.0;
  return r;
}

}  // namespace srgg
