#include "srgg/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "srgg/parallel.hpp"
#include "srgg/rng.hpp"

namespace srgg {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == delim) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '"')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '"')) --e;
  return s.substr(b, e - b);
}

bool parse_double(const std::string& tok, double& out) {
  const std::string t = trim(tok);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

char detect_delimiter(const std::string& line) {
  const std::size_t commas = std::count(line.begin(), line.end(), ',');
  const std::size_t semis = std::count(line.begin(), line.end(), ';');
  const std::size_t tabs = std::count(line.begin(), line.end(), '\t');
  if (semis > commas && semis >= tabs) return ';';
  if (tabs > commas && tabs > semis) return '\t';
  return ',';
}

std::vector<std::string> split_lines(const std::string& text_in) {
  std::string_view text(text_in);
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);  // UTF-8 BOM
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  // drop trailing blank lines
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

}  // namespace

RawDataset parse_matrix_csv(const std::string& text, const IngestConfig& options) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw EmptyData("empty table");

  const char delim = options.delimiter ? options.delimiter : detect_delimiter(lines[0]);

  const auto first = split_line(lines[0], delim);
  bool has_header;
  switch (options.header) {
    case IngestConfig::Header::Yes:
      has_header = true;
      break;
    case IngestConfig::Header::No:
      has_header = false;
      break;
    default: {
      double tmp;
      has_header = false;
      for (const auto& tok : first)
        if (!parse_double(tok, tmp)) {
          has_header = true;
          break;
        }
    }
  }

  RawDataset d;
  d.cols = first.size();
  if (has_header) {
    for (const auto& tok : first) d.column_names.push_back(trim(tok));
  } else {
    for (std::size_t j = 0; j < d.cols; ++j) d.column_names.push_back("col" + std::to_string(j + 1));
  }

  const std::size_t start = has_header ? 1 : 0;
  for (std::size_t r = start; r < lines.size(); ++r) {
    if (trim(lines[r]).empty()) continue;
    const auto toks = split_line(lines[r], delim);
    if (toks.size() != d.cols)
      throw ParseError("row " + std::to_string(r + 1) + " has " + std::to_string(toks.size()) +
                       " cells, expected " + std::to_string(d.cols));
    for (std::size_t j = 0; j < toks.size(); ++j) {
      double v;
      if (!parse_double(toks[j], v))
        throw ParseError("cell at row " + std::to_string(r + 1) + ", col " + std::to_string(j + 1) +
                         " is not numeric: '" + trim(toks[j]) + "'");
      if (!std::isfinite(v))
        throw ParseError("cell at row " + std::to_string(r + 1) + ", col " + std::to_string(j + 1) +
                         " is not finite");
      d.values.push_back(v);
    }
    ++d.rows;
  }

  if (d.rows == 0) throw EmptyData("no data rows");
  if (d.rows < 2 || d.cols < 2)
    throw EmptyData("table is " + std::to_string(d.rows) + "x" + std::to_string(d.cols) +
                    "; need at least 2x2");
  return d;
}

RawDataset load_matrix_csv(const std::string& path, const IngestConfig& options) {
  return parse_matrix_csv(read_file(path), options);
}

StandardizedDataset standardize(const RawDataset& d) {
  StandardizedDataset out;
  out.rows = d.rows;
  out.cols = d.cols;
  out.column_names = d.column_names;
  out.values.resize(d.values.size());
  out.column_mean.resize(d.cols);
  out.column_sd.resize(d.cols);

  const double n = static_cast<double>(d.rows);
  for (std::size_t j = 0; j < d.cols; ++j) {
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < d.rows; ++i) {
      const double x = d.at(i, j);
      sum += x;
      sumsq += x * x;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    if (!(var > 0.0))
      throw ZeroVariance("column " + std::to_string(j + 1) + " (" + d.column_names[j] +
                         ") has zero variance");
    const double sd = std::sqrt(var);
    out.column_mean[j] = mean;
    out.column_sd[j] = sd;
    for (std::size_t i = 0; i < d.rows; ++i) out.values[i * d.cols + j] = (d.at(i, j) - mean) / sd;
  }
  return out;
}

RawDataset subsample_rows(const RawDataset& d, std::size_t n_sub, std::uint64_t seed) {
  if (n_sub > d.rows)
    throw TooManyRows("requested " + std::to_string(n_sub) + " rows from " +
                      std::to_string(d.rows));
  std::vector<std::size_t> idx(d.rows);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < n_sub; ++i) {
    const std::size_t k = i + static_cast<std::size_t>(rng.uniform_below(d.rows - i));
    std::swap(idx[i], idx[k]);
  }
  RawDataset out;
  out.rows = n_sub;
  out.cols = d.cols;
  out.column_names = d.column_names;
  out.values.reserve(n_sub * d.cols);
  for (std::size_t i = 0; i < n_sub; ++i)
    for (std::size_t j = 0; j < d.cols; ++j) out.values.push_back(d.at(idx[i], j));
  return out;
}

namespace {

// Shared population-moment core: values is n x p row-major.
Matrix correlation_core(const std::vector<double>& values, std::size_t n, std::size_t p) {
  const double dn = static_cast<double>(n);
  std::vector<double> mean(p, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) mean[j] += values[i * p + j];
  for (std::size_t j = 0; j < p; ++j) mean[j] /= dn;

  Matrix cov(p, p, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t a = 0; a < static_cast<std::ptrdiff_t>(p); ++a) {
    for (std::size_t b = a; b < p; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += values[i * p + a] * values[i * p + b];
      const double c = s / dn - mean[a] * mean[b];
      cov(a, b) = c;
      cov(b, a) = c;
    }
  }

  Matrix corr(p, p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    if (!(cov(j, j) > 0.0))
      throw ZeroVariance("column " + std::to_string(j + 1) + " has zero variance");
    corr(j, j) = 1.0;
  }
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a + 1; b < p; ++b) {
      double r = cov(a, b) / std::sqrt(cov(a, a) * cov(b, b));
      r = std::clamp(r, -1.0, 1.0);
      corr(a, b) = r;
      corr(b, a) = r;
    }
  return corr;
}

}  // namespace

Matrix empirical_column_correlation(const RawDataset& d) {
  return correlation_core(d.values, d.rows, d.cols);
}

Matrix empirical_column_correlation(const StandardizedDataset& d) {
  return correlation_core(d.values, d.rows, d.cols);
}

std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

namespace {

double pearson(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double saa = 0, sbb = 0, sab = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) throw DegenerateRanks("constant input vector");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

}  // namespace

double spearman_rank_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw LengthMismatch("spearman: lengths " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  if (a.size() < 2) throw LengthMismatch("spearman: need at least 2 observations");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  return pearson(ra, rb);
}

Matrix all_pairs_spearman_serial(const Matrix& columns) {
  const std::size_t n = columns.rows();
  const std::size_t p = columns.cols();
  Matrix out(p, p, 0.0);
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < p; ++i) {
    out(i, i) = 1.0;
    for (std::size_t j = i + 1; j < p; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        a[k] = columns(k, i);
        b[k] = columns(k, j);
      }
      const double r = spearman_rank_correlation(a, b);
      out(i, j) = r;
      out(j, i) = r;
    }
  }
  return out;
}

Matrix all_pairs_spearman(const Matrix& columns) {
  const std::size_t n = columns.rows();
  const std::size_t p = columns.cols();
  if (n < 2) throw LengthMismatch("all_pairs_spearman: need at least 2 rows");

  // Rank every column once, center, and pre-normalize so each pair reduces
  // to a single dot product.
  std::vector<double> ranked(n * p);  // column-major for contiguous pair scans
  std::vector<std::uint8_t> degenerate(p, 0);
#pragma omp parallel
  {
    std::vector<double> col(n);
#pragma omp for schedule(dynamic)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(p); ++j) {
      for (std::size_t i = 0; i < n; ++i) col[i] = columns(i, j);
      auto r = average_ranks(col);
      double mean = 0;
      for (double v : r) mean += v;
      mean /= static_cast<double>(n);
      double ss = 0;
      for (double v : r) ss += (v - mean) * (v - mean);
      if (!(ss > 0.0)) {
        degenerate[j] = 1;
        continue;
      }
      const double inv = 1.0 / std::sqrt(ss);
      for (std::size_t i = 0; i < n; ++i) ranked[j * n + i] = (r[i] - mean) * inv;
    }
  }
  for (std::size_t j = 0; j < p; ++j)
    if (degenerate[j]) throw DegenerateRanks("constant column " + std::to_string(j + 1));

  Matrix out(p, p, 0.0);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(p); ++i) {
    out(i, i) = 1.0;
    const double* ci = &ranked[static_cast<std::size_t>(i) * n];
    for (std::size_t j = i + 1; j < p; ++j) {
      const double* cj = &ranked[j * n];
      double dot = 0.0;
      for (std::size_t k = 0; k < n; ++k) dot += ci[k] * cj[k];
      const double r = std::clamp(dot, -1.0, 1.0);
      out(i, j) = r;
      out(j, i) = r;
    }
  }
  return out;
}

NpmiTable parse_npmi_table(const std::string& text, MissingPolicy missing) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw EmptyData("empty score file");

  struct Triple {
    std::size_t disease, phenotype;
    double score;
  };
  std::vector<Triple> triples;
  std::unordered_map<std::string, std::size_t> disease_id, phenotype_id;
  NpmiTable t;
  t.missing = missing;

  double min_score = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const std::string& line = lines[r];
    if (trim(line).empty()) continue;
    const char delim = line.find('\t') != std::string::npos ? '\t' : ',';
    const auto toks = split_line(line, delim);
    if (toks.size() != 3)
      throw ParseError("row " + std::to_string(r + 1) + " has " + std::to_string(toks.size()) +
                       " fields, expected 3 (disease, phenotype, score)");
    double score;
    if (!parse_double(toks[2], score))
      throw ParseError("row " + std::to_string(r + 1) + ": score is not numeric: '" +
                       trim(toks[2]) + "'");
    const std::string dis = trim(toks[0]);
    const std::string phe = trim(toks[1]);
    auto [di, dnew] = disease_id.try_emplace(dis, t.disease_labels.size());
    if (dnew) t.disease_labels.push_back(dis);
    auto [pi, pnew] = phenotype_id.try_emplace(phe, t.phenotype_labels.size());
    if (pnew) t.phenotype_labels.push_back(phe);
    triples.push_back({di->second, pi->second, score});
    min_score = std::min(min_score, score);
  }
  if (triples.empty()) throw EmptyData("no score triples");

  const double fill = missing == MissingPolicy::ZeroScore ? 0.0 : min_score - 1.0;
  t.scores = Matrix(t.phenotype_labels.size(), t.disease_labels.size(), fill);
  for (const auto& tr : triples) t.scores(tr.phenotype, tr.disease) = tr.score;
  return t;
}

NpmiTable load_npmi_table(const std::string& path, MissingPolicy missing) {
  return parse_npmi_table(read_file(path), missing);
}

}  // namespace srgg
