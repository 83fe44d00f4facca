// Times the OpenMP kernels against their serial reference implementations,
// and the same parallel kernels at 1 thread vs all threads.

#include <chrono>
#include <cstdio>
#include <random>

#include "srgg/bignet.hpp"
#include "srgg/data.hpp"
#include "srgg/parallel.hpp"

using namespace srgg;

namespace {

template <typename F>
double time_once(F&& fn) {
  const auto tic = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - tic).count();
}

Matrix random_values(std::size_t n, std::size_t p, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(n, p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) m(i, j) = u(gen);
  return m;
}

Matrix factor_correlation(std::size_t p, std::size_t rank, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<std::vector<double>> v(p, std::vector<double>(rank));
  for (auto& row : v) {
    double norm = 0;
    for (double& x : row) {
      x = nd(gen);
      norm += x * x;
    }
    norm = std::sqrt(norm);
    for (double& x : row) x /= norm;
  }
  Matrix c(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      double dot = 0;
      for (std::size_t k = 0; k < rank; ++k) dot += v[i][k] * v[j][k];
      c(i, j) = i == j ? 1.0 : dot;
    }
  return c;
}

}  // namespace

int main() {
  const int threads = max_threads();
  std::printf("threads available: %d\n\n", threads);

  {
    const std::size_t n = 600, p = 400;
    const Matrix values = random_values(n, p, 1);
    const double t_ref = time_once([&] { all_pairs_spearman_serial(values); });
    set_thread_cap(1);
    const double t_one = time_once([&] { all_pairs_spearman(values); });
    set_thread_cap(threads);
    const double t_all = time_once([&] { all_pairs_spearman(values); });
    std::printf("all-pairs spearman %zux%zu (%.2f Mpairs)\n", p, n,
                static_cast<double>(pair_count(p)) / 1e6);
    std::printf("  per-pair serial reference  %8.3fs\n", t_ref);
    std::printf("  tiled kernel, 1 thread     %8.3fs\n", t_one);
    std::printf("  tiled kernel, %d threads    %8.3fs  (thread speedup %.2fx)\n\n", threads,
                t_all, t_one / t_all);
  }

  {
    const std::size_t p = 3000;
    const Matrix corr = factor_correlation(p, 5, 2);
    const double tau = 0.55;  // sparse regime: marginal evaluation dominates
    const double t_ref = time_once([&] { build_large_network(corr, tau, {}, BuildPath::Dense); });
    set_thread_cap(1);
    const double t_one =
        time_once([&] { build_large_network(corr, tau, {}, BuildPath::Streaming); });
    set_thread_cap(threads);
    const double t_all =
        time_once([&] { build_large_network(corr, tau, {}, BuildPath::Streaming); });
    std::printf("large network p=%zu, tau %.2f (%.2f Mpairs)\n", p, tau,
                static_cast<double>(pair_count(p)) / 1e6);
    std::printf("  dense reference            %8.3fs\n", t_ref);
    std::printf("  streaming, 1 thread        %8.3fs\n", t_one);
    std::printf("  streaming, %d threads       %8.3fs  (thread speedup %.2fx)\n", threads, t_all,
                t_one / t_all);
  }

  return 0;
}
