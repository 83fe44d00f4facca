#include <doctest.h>

#include <cmath>

#include "srgg/rng.hpp"

using namespace srgg;

TEST_CASE("normal cdf anchors") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-12));
  CHECK(normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-10));
}

TEST_CASE("normal quantile inverts the cdf to near machine precision") {
  for (double p : {1e-12, 1e-6, 0.01, 0.025, 0.3, 0.5, 0.7, 0.975, 0.99, 1.0 - 1e-6}) {
    const double x = normal_quantile(p);
    CHECK(normal_cdf(x) == doctest::Approx(p).epsilon(1e-11));
  }
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(std::isinf(normal_quantile(0.0)));
  CHECK(std::isinf(normal_quantile(1.0)));
}

TEST_CASE("uniform01 stays strictly inside the unit interval") {
  Rng rng(1);
  for (int k = 0; k < 100000; ++k) {
    const double u = rng.uniform01();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("streams are reproducible and seed-sensitive") {
  Rng a(42), b(42), c(43);
  bool same = true, differ = false;
  for (int k = 0; k < 64; ++k) {
    const double va = a.normal();
    same = same && va == b.normal();
    differ = differ || va != c.normal();
  }
  CHECK(same);
  CHECK(differ);
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
}

TEST_CASE("normal draws have the right first two moments") {
  Rng rng(7);
  const int n = 200000;
  double sum = 0, sumsq = 0;
  for (int k = 0; k < n; ++k) {
    const double z = rng.normal();
    sum += z;
    sumsq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("uniform_below is unbiased across a small range") {
  Rng rng(3);
  int counts[5] = {0, 0, 0, 0, 0};
  const int n = 100000;
  for (int k = 0; k < n; ++k) ++counts[rng.uniform_below(5)];
  for (int c : counts) CHECK(std::abs(c - n / 5.0) < 5.0 * std::sqrt(n * 0.2 * 0.8));
}

TEST_CASE("poisson mean and variance track the rate") {
  Rng rng(11);
  for (double mean : {0.4, 3.0, 75.0}) {
    const int n = 60000;
    double sum = 0, sumsq = 0;
    for (int k = 0; k < n; ++k) {
      const double x = static_cast<double>(rng.poisson(mean));
      sum += x;
      sumsq += x * x;
    }
    const double m = sum / n;
    const double v = sumsq / n - m * m;
    CHECK(m == doctest::Approx(mean).epsilon(0.03));
    CHECK(v == doctest::Approx(mean).epsilon(0.05));
  }
  CHECK(Rng(1).poisson(0.0) == 0);
}

TEST_CASE("truncated normal respects its support and its density shape") {
  Rng rng(13);
  // support
  for (int k = 0; k < 20000; ++k) {
    const double x = truncated_normal(rng, 0.9, 0.5, -1.0, 1.0);
    CHECK(x > -1.0);
    CHECK(x < 1.0);
  }
  // tail-heavy case still lands inside
  for (int k = 0; k < 2000; ++k) {
    const double x = truncated_normal(rng, 5.0, 1.0, -1.0, 1.0);
    CHECK(x > -1.0);
    CHECK(x < 1.0);
  }
  // empirical mean of TN(0.5, 0.4, (0,1)) against the closed form
  const double mu = 0.5, sd = 0.4;
  const double a = (0.0 - mu) / sd, b = (1.0 - mu) / sd;
  auto phi = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); };
  const double z = normal_cdf(b) - normal_cdf(a);
  const double expected_mean = mu + sd * (phi(a) - phi(b)) / z;
  double sum = 0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) sum += truncated_normal(rng, mu, sd, 0.0, 1.0);
  CHECK(sum / n == doctest::Approx(expected_mean).epsilon(0.005));
}

TEST_CASE("log truncation constant") {
  // wide support collapses to the full mass
  CHECK(log_truncnorm_z(0.0, 0.05, -1.0, 1.0) == 0.0);
  // mean near the edge loses about half the mass
  CHECK(log_truncnorm_z(1.0, 0.05, -1.0, 1.0) == doctest::Approx(std::log(0.5)).epsilon(1e-12));
}
