#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "srgg/metric_space.hpp"

using namespace srgg;

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fb, double fm, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, fm, flm, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, fb, frm, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  return adaptive_simpson(f, a, b, f(a), f(b), f(m), tol, 48);
}

// Quadrature oracle for the connection function. The printed integral
// int_0^1 (2 pi v)^{-1/2} exp(-d^2 / 2v) dv becomes, after v = w^2,
// sqrt(2/pi) int_0^1 exp(-d^2 / 2w^2) dw, which is smooth on [0,1].
double marginal_quadrature(double d) {
  auto f = [d](double w) {
    if (w == 0.0) return d == 0.0 ? 1.0 : 0.0;
    return std::exp(-d * d / (2.0 * w * w));
  };
  return std::sqrt(2.0 / M_PI) * integrate(f, 0.0, 1.0, 1e-12);
}

}  // namespace

TEST_CASE("edge_marginal closed form at separation 0 and 1") {
  CHECK(edge_marginal(EdgeInput(1, 1.0)) == doctest::Approx(0.7978845608).epsilon(1e-9));
  CHECK(edge_marginal(EdgeInput(0, 0.0)) == doctest::Approx(0.7978845608).epsilon(1e-9));
  CHECK(edge_marginal(EdgeInput(1, 0.0)) == doctest::Approx(0.1666309367).epsilon(1e-6));
}

TEST_CASE("edge_marginal agrees with the pre-integration quadrature") {
  for (int gi = 0; gi <= 1; ++gi)
    for (int k = 0; k <= 20; ++k) {
      const double r = k / 20.0;
      const EdgeInput e(gi, r);
      CHECK(std::abs(edge_marginal(e) - marginal_quadrature(e.separation())) < 1e-8);
    }
}

TEST_CASE("edge_marginal strictly decreases in the separation") {
  double prev = edge_marginal_from_separation(0.0);
  for (int k = 1; k <= 50; ++k) {
    const double cur = edge_marginal_from_separation(k / 50.0);
    CHECK(cur < prev);
    CHECK(cur > 0.0);
    prev = cur;
  }
}

TEST_CASE("EdgeInput validation and clamping") {
  CHECK_THROWS_AS(EdgeInput(2, 0.5), InvalidCorrelationEntry);
  CHECK_THROWS_AS(EdgeInput(1, 1.1), InvalidCorrelationEntry);
  CHECK_THROWS_AS(EdgeInput(1, -0.1), InvalidCorrelationEntry);
  CHECK(EdgeInput(1, 1.0 + 5e-10).abs_rho == 1.0);
  CHECK(EdgeInput(1, -5e-10).abs_rho == 0.0);
}

TEST_CASE("node_distance values and the complementarity identity") {
  CHECK(node_distance(EdgeInput(1, 1.0)) == doctest::Approx(0.7978845608).epsilon(1e-9));
  CHECK(node_distance(EdgeInput(1, 0.0)) == doctest::Approx(1.1666309367).epsilon(1e-6));
  for (int k = 0; k <= 40; ++k) {
    const double d = k / 40.0;
    CHECK(std::abs(node_distance_from_separation(d) - edge_marginal_from_separation(d) - d) <
          1e-12);
  }
}

TEST_CASE("normal_pair_distance closed form") {
  CHECK(normal_pair_distance(0.3, 0.3, 1.0) == doctest::Approx(1.1283791671).epsilon(1e-10));
  CHECK_THROWS_AS(normal_pair_distance(0, 1, 0.0), NumericError);
}

TEST_CASE("normal_pair_distance matches 2D quadrature of E|X - Y|") {
  // mu_i - mu_j = 2, sigma = 1. Independent derivation: X - Y ~ N(2, 2), so
  // E|X - Y| = sqrt(2) sqrt(2/pi) e^{-1} + 2 erf(1) = 2.1005091.
  const double mu_i = 2.0, mu_j = 0.0, sigma = 1.0;
  auto pdf = [](double x, double mu) {
    return std::exp(-0.5 * (x - mu) * (x - mu)) / std::sqrt(2.0 * M_PI);
  };
  auto inner = [&](double x) {
    auto f = [&](double y) { return std::abs(x - y) * pdf(y, mu_j); };
    // split at the kink y = x
    return integrate(f, -9.0, x, 1e-10) + integrate(f, x, 9.0, 1e-10);
  };
  auto outer = [&](double x) { return inner(x) * pdf(x, mu_i); };
  const double quad = integrate(outer, -7.0, 11.0, 1e-9);
  const double impl = normal_pair_distance(mu_i, mu_j, sigma);
  CHECK(impl == doctest::Approx(2.1005091).epsilon(1e-6));
  CHECK(std::abs(impl - quad) < 1e-6);
}

TEST_CASE("soft-graph correspondence at sigma = 1/sqrt(2)") {
  const double sigma = 1.0 / std::sqrt(2.0);
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const double mu_i = u(gen);
    const double mu_j = u(gen);
    const double gap = std::abs(mu_i - mu_j);
    CHECK(std::abs(normal_pair_distance(mu_i, mu_j, sigma) - node_distance_from_separation(gap)) <
          1e-12);
  }
}

TEST_CASE("partial_correlation exact cases") {
  CHECK(max_abs_diff(partial_correlation(Matrix::identity(4)), Matrix::identity(4)) < 1e-14);

  Matrix two = Matrix::identity(2);
  two(0, 1) = 0.6;
  two(1, 0) = 0.6;
  CHECK(partial_correlation(two)(0, 1) == doctest::Approx(0.6).epsilon(1e-12));

  Matrix three = Matrix::identity(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) three(i, j) = 0.5;
  CHECK(partial_correlation(three)(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("partial_correlation of block-diagonal input is block-diagonal") {
  Matrix m = Matrix::identity(5);
  m(0, 1) = m(1, 0) = 0.7;
  m(2, 3) = m(3, 2) = -0.4;
  m(3, 4) = m(4, 3) = 0.3;
  const Matrix rho = partial_correlation(m);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 2; j < 5; ++j) {
      CHECK(std::abs(rho(i, j)) < 1e-12);
      CHECK(std::abs(rho(j, i)) < 1e-12);
    }
}

TEST_CASE("partial_correlation matches adjugate oracle on random SPD") {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t p = 2 + rep % 4;
    Matrix b(p, p);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) b(i, j) = u(gen);
    Matrix a = matmul(b, b.transposed());
    for (std::size_t i = 0; i < p; ++i) a(i, i) += 1.0;

    const Matrix rho = partial_correlation(a);
    const Matrix psi = invert_spd(cholesky_with_ridge(a));
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j)
        CHECK(rho(i, j) ==
              doctest::Approx(-psi(i, j) / std::sqrt(psi(i, i) * psi(j, j))).epsilon(1e-12));
  }
}

TEST_CASE("threshold_edge_set inclusive threshold") {
  Matrix m(3, 3, 0.0);
  CHECK(threshold_edge_set(m, 0.05).edges.empty());

  m(0, 1) = m(1, 0) = 0.05;
  const EdgeSet s = threshold_edge_set(m, 0.05);
  REQUIRE(s.edges.size() == 1);
  CHECK(s.edges[0] == std::pair<std::uint32_t, std::uint32_t>{0, 1});

  Matrix full(4, 4, 1.0);
  CHECK(threshold_edge_set(full, 0.5).edges.size() == 6);
}

TEST_CASE("poisson_intensity") {
  PointProcessParams params;
  params.means = {0.0, 1.0};
  params.sigma = 1.0 / std::sqrt(2.0);
  params.tau = 0.3;

  const std::vector<double> none{0.1, 0.2};
  CHECK(poisson_intensity(params, 0, none, 0.0) == 0.0);

  const std::vector<double> one{0.9, 0.1};
  CHECK(poisson_intensity(params, 0, one, 0.0) ==
        doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-12));

  const std::vector<double> two{0.9, 0.9};
  CHECK(poisson_intensity(params, 0, two, 0.4) ==
        doctest::Approx(2.0 * poisson_intensity(params, 0, one, 0.4)).epsilon(1e-12));

  // tau reached exactly counts (H(0) = 1)
  const std::vector<double> at{0.3, 0.0};
  CHECK(poisson_intensity(params, 0, at, 0.0) > 0.0);
}

TEST_CASE("validate_point_process") {
  PointProcessParams params;
  params.means = {0.0, 0.5, 1.0, 0.2, 0.8};
  params.sigma = 1.0 / std::sqrt(2.0);

  SUBCASE("no eligible nodes means zero counts") {
    params.tau = 0.99;
    const Matrix marg(5, 5, 0.1);
    const auto rep = validate_point_process(params, marg, 0, 0.5, 200, 1);
    CHECK(rep.eligible == 0);
    CHECK(rep.empirical_mean == 0.0);
    CHECK(rep.predicted == 0.0);
  }

  SUBCASE("tau 0 radius 1 hits f pi p within 4 standard errors") {
    params.tau = 0.0;
    const Matrix marg(5, 5, 0.5);
    const auto rep = validate_point_process(params, marg, 0, 1.0, 10000, 7);
    CHECK(rep.eligible == 5);
    CHECK(rep.predicted ==
          doctest::Approx(M_PI * 5.0 / std::sqrt(2.0 * M_PI * 0.5)).epsilon(1e-12));
    CHECK(std::abs(rep.z_score) < 4.0);
  }

  SUBCASE("quadrupling trials roughly halves the standard error") {
    params.tau = 0.0;
    const Matrix marg(5, 5, 0.5);
    const auto small = validate_point_process(params, marg, 0, 0.8, 10000, 11);
    const auto big = validate_point_process(params, marg, 0, 0.8, 40000, 12);
    const double ratio = small.std_error / big.std_error;
    CHECK(ratio > 1.5);
    CHECK(ratio < 2.7);
  }
}
