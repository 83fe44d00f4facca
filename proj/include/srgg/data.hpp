#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "srgg/matrix.hpp"

namespace srgg {

struct RawDataset {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major
  std::vector<std::string> column_names;

  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

// Column-standardized data: z_ij = (x_ij - mean_j) / sd_j with the
// population (divide-by-n) standard deviation. Keeps the moments it used.
struct StandardizedDataset {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<std::string> column_names;
  std::vector<double> column_mean;
  std::vector<double> column_sd;

  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

struct IngestConfig {
  enum class Header { Auto, Yes, No };
  Header header = Header::Auto;
  // 0 = auto-detect among comma / semicolon / tab on the first line.
  char delimiter = 0;
};

// Parses a delimited numeric table. Rejects ragged rows, non-numeric cells
// (naming the cell), NaN/Inf values, and tables smaller than 2x2.
RawDataset load_matrix_csv(const std::string& path, const IngestConfig& options = {});
RawDataset parse_matrix_csv(const std::string& text, const IngestConfig& options = {});

StandardizedDataset standardize(const RawDataset& d);

// Uniform sample of n_sub rows without replacement, reproducible per seed.
// n_sub == rows yields a permuted copy.
RawDataset subsample_rows(const RawDataset& d, std::size_t n_sub, std::uint64_t seed);

// Product-moment column correlation, population form, normalized to unit
// diagonal. Parallel over pairs.
Matrix empirical_column_correlation(const RawDataset& d);
Matrix empirical_column_correlation(const StandardizedDataset& d);

// Average ranks in 1..n, ties share their mean rank.
std::vector<double> average_ranks(std::span<const double> x);

// Pearson correlation of the average-ranked values.
double spearman_rank_correlation(std::span<const double> a, std::span<const double> b);

// All-pairs Spearman over the columns of an n x p value matrix. The OpenMP
// path ranks each column once and runs the pair dot products in parallel;
// the serial variant applies spearman_rank_correlation per pair and is kept
// as the reference implementation.
Matrix all_pairs_spearman(const Matrix& columns);
Matrix all_pairs_spearman_serial(const Matrix& columns);

// How absent (disease, phenotype) scores are filled before ranking.
enum class MissingPolicy {
  ZeroScore,   // treat missing as score 0
  BottomRank,  // below every observed score, so they share the bottom rank
};

// Dense phenotype x disease score matrix built from (disease, phenotype,
// score) triples; diseases become columns so downstream column-correlation
// machinery applies unchanged.
struct NpmiTable {
  std::vector<std::string> phenotype_labels;  // rows
  std::vector<std::string> disease_labels;    // columns
  Matrix scores;
  MissingPolicy missing = MissingPolicy::ZeroScore;
};

NpmiTable load_npmi_table(const std::string& path, MissingPolicy missing = MissingPolicy::ZeroScore);
NpmiTable parse_npmi_table(const std::string& text, MissingPolicy missing = MissingPolicy::ZeroScore);

}  // namespace srgg
