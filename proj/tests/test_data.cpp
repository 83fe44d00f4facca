#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "srgg/data.hpp"

using namespace srgg;

TEST_CASE("csv parsing basics") {
  const RawDataset d = parse_matrix_csv("1,2\n3,4\n");
  CHECK(d.rows == 2);
  CHECK(d.cols == 2);
  CHECK(d.at(0, 1) == 2.0);
  CHECK(d.at(1, 0) == 3.0);
}

TEST_CASE("csv header auto-detection and delimiters") {
  const RawDataset d = parse_matrix_csv("alpha;beta\n1.5;2\n3;4\n");
  CHECK(d.column_names[0] == "alpha");
  CHECK(d.rows == 2);
  const RawDataset t = parse_matrix_csv("1\t2\n3\t4\n");
  CHECK(t.cols == 2);
}

TEST_CASE("csv tolerates a UTF-8 byte-order mark and CRLF endings") {
  const RawDataset d = parse_matrix_csv("\xEF\xBB\xBF" "a,b\r\n1,2\r\n3,4\r\n");
  CHECK(d.column_names[0] == "a");
  CHECK(d.rows == 2);
  CHECK(d.at(1, 1) == 4.0);
}

TEST_CASE("csv rejection cases") {
  CHECK_THROWS_AS(parse_matrix_csv(""), EmptyData);
  CHECK_THROWS_AS(parse_matrix_csv("a,b\n"), EmptyData);
  CHECK_THROWS_AS(parse_matrix_csv("1,2\n3\n"), ParseError);
  try {
    parse_matrix_csv("1,2\n3,abc\n");
    CHECK(false);
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("col 2") != std::string::npos);
    CHECK(msg.find("abc") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_matrix_csv("1,2\n3,inf\n"), ParseError);
}

TEST_CASE("standardize two-point column") {
  const RawDataset d = parse_matrix_csv("0,5\n2,7\n");
  const StandardizedDataset s = standardize(d);
  CHECK(s.at(0, 0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(s.at(1, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.column_mean[0] == doctest::Approx(1.0));
  CHECK(s.column_sd[0] == doctest::Approx(1.0));
}

TEST_CASE("standardize rejects constant column") {
  const RawDataset d = parse_matrix_csv("5,1\n5,2\n5,3\n");
  CHECK_THROWS_AS(standardize(d), ZeroVariance);
}

TEST_CASE("standardize moment oracle and idempotence") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-5.0, 12.0);
  RawDataset d;
  d.rows = 101;
  d.cols = 3;
  d.column_names = {"a", "b", "c"};
  for (std::size_t i = 0; i < d.rows * d.cols; ++i) d.values.push_back(u(gen));
  const StandardizedDataset s = standardize(d);
  for (std::size_t j = 0; j < 3; ++j) {
    double mean = 0, sumsq = 0;
    for (std::size_t i = 0; i < s.rows; ++i) mean += s.at(i, j);
    mean /= static_cast<double>(s.rows);
    for (std::size_t i = 0; i < s.rows; ++i) sumsq += s.at(i, j) * s.at(i, j);
    const double popsd = std::sqrt(sumsq / static_cast<double>(s.rows) - mean * mean);
    CHECK(std::abs(mean) < 1e-10);
    CHECK(std::abs(popsd - 1.0) < 1e-10);
  }
  // standardizing again changes nothing beyond 1e-10
  RawDataset again;
  again.rows = s.rows;
  again.cols = s.cols;
  again.column_names = s.column_names;
  again.values = s.values;
  const StandardizedDataset s2 = standardize(again);
  for (std::size_t i = 0; i < s.values.size(); ++i)
    CHECK(std::abs(s2.values[i] - s.values[i]) < 1e-10);
}

TEST_CASE("subsample_rows") {
  const RawDataset d = parse_matrix_csv("1,10\n2,20\n3,30\n4,40\n5,50\n");
  SUBCASE("full subsample is a permutation") {
    const RawDataset s = subsample_rows(d, 5, 9);
    std::vector<double> c0{s.at(0, 0), s.at(1, 0), s.at(2, 0), s.at(3, 0), s.at(4, 0)};
    std::sort(c0.begin(), c0.end());
    CHECK(c0 == std::vector<double>{1, 2, 3, 4, 5});
  }
  SUBCASE("reproducible per seed, differs across seeds") {
    const RawDataset a = subsample_rows(d, 3, 1234);
    const RawDataset b = subsample_rows(d, 3, 1234);
    CHECK(a.values == b.values);
    bool any_diff = false;
    for (std::uint64_t s = 0; s < 8 && !any_diff; ++s)
      any_diff = subsample_rows(d, 3, s).values != a.values;
    CHECK(any_diff);
  }
  SUBCASE("too many rows") { CHECK_THROWS_AS(subsample_rows(d, 6, 0), TooManyRows); }
}

TEST_CASE("empirical correlation exact cases") {
  RawDataset d;
  d.rows = 4;
  d.cols = 3;
  d.column_names = {"x", "same", "neg"};
  const double xs[4] = {1, 2, 3, 4};
  for (std::size_t i = 0; i < 4; ++i) {
    d.values.push_back(xs[i]);
    d.values.push_back(xs[i]);
    d.values.push_back(-xs[i]);
  }
  const Matrix c = empirical_column_correlation(d);
  CHECK(c(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c(0, 2) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(c(0, 0) == 1.0);
}

TEST_CASE("empirical correlation hand-computed product moment") {
  // x=(1,2,3,4), y=(1,3,2,4): cov = 29/4 - 6.25 = 1, var = 1.25 each
  const RawDataset d = parse_matrix_csv("1,1\n2,3\n3,2\n4,4\n");
  const Matrix c = empirical_column_correlation(d);
  CHECK(c(0, 1) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("empirical correlation properties") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(-2, 2);
  RawDataset d;
  d.rows = 40;
  d.cols = 5;
  d.column_names.assign(5, "c");
  for (std::size_t i = 0; i < d.rows * d.cols; ++i) d.values.push_back(u(gen));
  const Matrix c = empirical_column_correlation(d);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(c(i, i) == 1.0);
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(c(i, j) == c(j, i));
      CHECK(c(i, j) >= -1.0);
      CHECK(c(i, j) <= 1.0);
    }
  }
  // invariant under row permutation
  RawDataset perm = d;
  std::vector<std::size_t> order(d.rows);
  for (std::size_t i = 0; i < d.rows; ++i) order[i] = (i * 7 + 3) % d.rows;
  for (std::size_t i = 0; i < d.rows; ++i)
    for (std::size_t j = 0; j < d.cols; ++j) perm.values[i * d.cols + j] = d.at(order[i], j);
  CHECK(max_abs_diff(empirical_column_correlation(perm), c) < 1e-12);
}

TEST_CASE("average ranks with ties keep the rank-sum invariant") {
  const std::vector<double> x{3.0, 1.0, 3.0, 2.0, 3.0};
  const auto r = average_ranks(x);
  CHECK(r[1] == 1.0);
  CHECK(r[3] == 2.0);
  CHECK(r[0] == doctest::Approx(4.0));  // three-way tie over ranks 3,4,5
  double sum = 0;
  for (double v : r) sum += v;
  CHECK(sum == doctest::Approx(5.0 * 6.0 / 2.0));
}

TEST_CASE("spearman exact cases") {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> rev{5, 4, 3, 2, 1};
  CHECK(spearman_rank_correlation(a, a) == doctest::Approx(1.0));
  CHECK(spearman_rank_correlation(a, rev) == doctest::Approx(-1.0));

  // 1 - 6*sum(d^2)/(n(n^2-1)) with d^2 = (1,1,1,1,0): 1 - 24/120
  const std::vector<double> b{2, 1, 4, 3, 5};
  double sum_d2 = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    const double d = a[i] - b[i];
    sum_d2 += d * d;
  }
  const double oracle = 1.0 - 6.0 * sum_d2 / (5.0 * (25.0 - 1.0));
  CHECK(oracle == doctest::Approx(0.8));
  CHECK(spearman_rank_correlation(a, b) == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("spearman error and invariance properties") {
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{1, 2};
  CHECK_THROWS_AS(spearman_rank_correlation(a, b), LengthMismatch);
  const std::vector<double> c{2, 2, 2};
  CHECK_THROWS_AS(spearman_rank_correlation(a, c), DegenerateRanks);

  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.1, 4.0);
  std::vector<double> x(30), y(30), xt(30), yt(30);
  for (std::size_t i = 0; i < 30; ++i) {
    x[i] = u(gen);
    y[i] = u(gen);
    xt[i] = std::exp(x[i]);        // strictly increasing transform
    yt[i] = y[i] * y[i] * y[i];    // strictly increasing on positives
  }
  CHECK(spearman_rank_correlation(x, y) ==
        doctest::Approx(spearman_rank_correlation(xt, yt)).epsilon(1e-12));
}

TEST_CASE("all-pairs spearman parallel path matches the serial reference") {
  std::mt19937_64 gen(21);
  std::uniform_int_distribution<int> u(0, 9);  // ints force ties
  Matrix cols(30, 8);
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t j = 0; j < 8; ++j) cols(i, j) = u(gen);
  const Matrix fast = all_pairs_spearman(cols);
  const Matrix ref = all_pairs_spearman_serial(cols);
  CHECK(max_abs_diff(fast, ref) < 1e-12);
}

TEST_CASE("npmi triples densify with missing policies") {
  const std::string text =
      "d1\tp1\t0.9\n"
      "d1\tp2\t0.4\n"
      "d2\tp2\t-0.2\n"
      "d3\tp3\t0.7\n";
  const NpmiTable z = parse_npmi_table(text, MissingPolicy::ZeroScore);
  CHECK(z.disease_labels == std::vector<std::string>{"d1", "d2", "d3"});
  CHECK(z.phenotype_labels == std::vector<std::string>{"p1", "p2", "p3"});
  CHECK(z.scores.rows() == 3);
  CHECK(z.scores.cols() == 3);
  CHECK(z.scores(0, 0) == 0.9);
  CHECK(z.scores(1, 1) == -0.2);
  CHECK(z.scores(2, 0) == 0.0);  // missing -> 0

  const NpmiTable b = parse_npmi_table(text, MissingPolicy::BottomRank);
  CHECK(b.scores(2, 0) == doctest::Approx(-1.2));  // min score - 1

  // comma-separated works too
  const NpmiTable c = parse_npmi_table("d1,p1,0.5\nd2,p1,0.25\n");
  CHECK(c.scores.cols() == 2);
  CHECK_THROWS_AS(parse_npmi_table("d1,p1\n"), ParseError);
}
