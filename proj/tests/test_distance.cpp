#include <doctest.h>

#include <cmath>
#include <random>

#include "srgg/distance.hpp"

using namespace srgg;

namespace {

ChainTrace make_trace(std::vector<double> log_u) {
  ChainTrace t;
  t.p = 2;
  t.n_iter = log_u.empty() ? 0 : log_u.size() - 1;
  t.log_u = std::move(log_u);
  return t;
}

ChainTrace random_trace(std::size_t len, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(len);
  for (double& x : v) x = u(gen);
  return make_trace(std::move(v));
}

}  // namespace

TEST_CASE("global scale is the max over both full traces") {
  CHECK(global_scale(make_trace({3.0}), make_trace({5.0})) == 5.0);
  CHECK(global_scale(make_trace({-8.0, -2.5}), make_trace({-4.0, -9.0})) == -2.5);
  CHECK_THROWS_AS(global_scale(make_trace({}), make_trace({1.0})), EmptyTrace);
}

TEST_CASE("hellinger distance frozen cases") {
  const auto a = make_trace({0.0, 0.0, 0.0, 0.0});
  CHECK(hellinger_distance(a, a, 0, 2.0) == 0.0);

  // scaled u1 = 1, u2 = 0.25 at every post-burnin t: D_H = 0.5
  const double s = 2.0;
  const auto b = make_trace(std::vector<double>(4, s * std::log(0.25)));
  CHECK(hellinger_distance(a, b, 0, s) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("hellinger scale modes") {
  const auto t1 = random_trace(50, 1, -40.0, -5.0);
  const auto t2 = random_trace(50, 2, -40.0, -5.0);
  const double s = global_scale(t1, t2);
  REQUIRE(s < 0.0);
  // divide mode inverts the sign and must refuse
  CHECK_THROWS_AS(hellinger_distance(t1, t2, 5, s, ScaleMode::Divide), ScaleOverflow);
  // shift mode stays inside (0,1] and the discretized bound holds
  const double dh = hellinger_distance(t1, t2, 5, s, ScaleMode::Shift);
  CHECK(dh >= 0.0);
  CHECK(dh <= 1.0);
}

TEST_CASE("bhattacharyya distance frozen cases") {
  const auto ones = make_trace(std::vector<double>(5, 0.0));
  CHECK(bhattacharyya_distance(ones, ones, 0, 1.0) == doctest::Approx(0.0));
  const auto other = make_trace(std::vector<double>(5, -2.0));
  CHECK(bhattacharyya_distance(ones, other, 0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("model uncertainty") {
  CHECK(model_uncertainty(make_trace(std::vector<double>(7, -3.0)), 2.0) == 0.0);
  const auto t = make_trace({-1.0, -2.0, -4.0});
  const double s = 1.0;
  const double expected = std::exp(-1.0) - std::exp(-4.0);
  CHECK(model_uncertainty(t, s) == doctest::Approx(expected).epsilon(1e-12));
  // duplicating an existing entry changes nothing
  const auto dup = make_trace({-1.0, -2.0, -4.0, -2.0});
  CHECK(model_uncertainty(dup, s) == model_uncertainty(t, s));
}

TEST_CASE("delta metric arithmetic") {
  CHECK(delta_metric(0.37, 0.2, 0.2) == 0.0);
  CHECK(delta_metric(0.1153, 0.0694, 0.05521) == doctest::Approx(0.427).epsilon(1e-3));
  CHECK(delta_metric(0.1153, 0.05521, 0.0694) ==
        doctest::Approx(delta_metric(0.1153, 0.0694, 0.05521)).epsilon(1e-15));
  CHECK_THROWS_AS(delta_metric(0.1, 0.0, 0.5), ZeroUncertainty);
}

TEST_CASE("absolute correlation") {
  CHECK(absolute_correlation(0.0) == 1.0);
  CHECK(absolute_correlation(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(absolute_correlation(0.427) == doctest::Approx(0.652).epsilon(1e-3));
  CHECK_THROWS_AS(absolute_correlation(-0.1), NumericError);
  // strictly decreasing
  double prev = absolute_correlation(0.0);
  for (int k = 1; k <= 20; ++k) {
    const double cur = absolute_correlation(0.3 * k);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("log odds divergence") {
  const auto a = random_trace(101, 3, -30.0, -10.0);
  const auto same = log_odds_divergence(a, a, 0);
  CHECK(same.sum == 0.0);

  std::vector<double> lu2(a.log_u.size());
  for (std::size_t i = 0; i < lu2.size(); ++i) lu2[i] = a.log_u[i] - 2.0;
  const auto r = log_odds_divergence(a, make_trace(lu2), 0);
  CHECK(r.sum == doctest::Approx(200.0).epsilon(1e-10));
  CHECK(r.mean == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("length mismatch is surfaced, truncate-min aligns") {
  const auto a = random_trace(60, 4, -20.0, -5.0);
  const auto b = random_trace(50, 5, -20.0, -5.0);
  CHECK_THROWS_AS(hellinger_distance(a, b, 10, -5.0, ScaleMode::Shift), LengthMismatch);
  CHECK_THROWS_AS(compare_chains(a, 10, b, 10, ScaleMode::Shift, false), LengthMismatch);
  const auto rep = compare_chains(a, 10, b, 10, ScaleMode::Shift, true);
  CHECK(rep.truncated);
  CHECK(rep.post_burnin_length == 39);
}

TEST_CASE("network hellinger") {
  Matrix m1(2, 2, 0.0);
  m1(0, 1) = m1(1, 0) = 0.81;
  Matrix m2(2, 2, 0.0);
  m2(0, 1) = m2(1, 0) = 0.36;
  CHECK(network_hellinger(m1, m1) == 0.0);
  CHECK(network_hellinger(m1, m2) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK_THROWS_AS(network_hellinger(m1, Matrix(3, 3, 0.1)), DimensionMismatch);

  // disjoint block structure sits farther away than a small perturbation
  const std::size_t p = 8;
  Matrix blockA(p, p, 0.05), blockB(p, p, 0.05), perturbed(p, p, 0.05);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      const bool inA = i < 4 && j < 4;
      const bool inB = i >= 4;
      if (inA) blockA(i, j) = blockA(j, i) = 0.7;
      if (inB) blockB(i, j) = blockB(j, i) = 0.7;
      perturbed(i, j) = perturbed(j, i) = blockA(i, j) + 0.01;
    }
  const double far = network_hellinger(blockA, blockB);
  const double near = network_hellinger(blockA, perturbed);
  CHECK(far > 0.0);
  CHECK(far > near);
}

TEST_CASE("compare_chains report invariants over random trace pairs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto t1 = random_trace(80, 100 + seed, -60.0, -10.0);
    const auto t2 = random_trace(80, 200 + seed, -60.0, -10.0);
    const auto r = compare_chains(t1, 20, t2, 20, ScaleMode::Shift, false);
    CHECK(r.delta >= 0.0);
    CHECK(r.delta ==
          doctest::Approx(r.d_hellinger * std::abs(1.0 / r.d_max_1 - 1.0 / r.d_max_2))
              .epsilon(1e-12));
    CHECK(r.abs_corr == doctest::Approx(std::exp(-r.delta)).epsilon(1e-12));
    CHECK(r.abs_corr > 0.0);
    CHECK(r.abs_corr <= 1.0);
    CHECK(r.scale == global_scale(t1, t2));

    // symmetry and self-distance of the metric
    const auto sym = compare_chains(t2, 20, t1, 20, ScaleMode::Shift, false);
    CHECK(r.delta == doctest::Approx(sym.delta).epsilon(1e-12));
    const auto self = compare_chains(t1, 20, t1, 20, ScaleMode::Shift, false);
    CHECK(self.delta == 0.0);
    CHECK(self.abs_corr == 1.0);
  }
}
