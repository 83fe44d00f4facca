#include "srgg/distance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace srgg {

namespace {

void require_nonempty(const ChainTrace& t, const char* who) {
  if (t.log_u.empty()) throw EmptyTrace(std::string(who) + ": empty trace");
}

double scale_one(double log_u, double s, ScaleMode mode) {
  if (mode == ScaleMode::Shift) return std::exp(log_u - s);
  if (s == 0.0) throw ScaleOverflow("global scale is zero; divide mode undefined");
  const double u = std::exp(log_u / s);
  if (u > 1.0 + 1e-9)
    throw ScaleOverflow("scaled posterior " + std::to_string(u) +
                        " exceeds 1; use shift scaling for traces with this sign pattern");
  return u;
}

std::vector<double> post_burnin(const ChainTrace& t, std::size_t n_burnin, const char* who) {
  require_nonempty(t, who);
  const std::size_t n_iter = t.log_u.size() - 1;
  if (n_burnin >= n_iter)
    throw EmptyPostBurnin(std::string(who) + ": burn-in " + std::to_string(n_burnin) +
                          " leaves no samples of " + std::to_string(n_iter));
  return std::vector<double>(t.log_u.begin() + static_cast<std::ptrdiff_t>(n_burnin) + 1,
                             t.log_u.end());
}

double hellinger_core(const std::vector<double>& lu1, const std::vector<double>& lu2, double s,
                      ScaleMode mode) {
  double acc = 0.0;
  for (std::size_t t = 0; t < lu1.size(); ++t) {
    const double d = std::sqrt(scale_one(lu1[t], s, mode)) - std::sqrt(scale_one(lu2[t], s, mode));
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(lu1.size()));
}

double bhattacharyya_core(const std::vector<double>& lu1, const std::vector<double>& lu2, double s,
                          ScaleMode mode) {
  double acc = 0.0;
  for (std::size_t t = 0; t < lu1.size(); ++t)
    acc += std::sqrt(scale_one(lu1[t], s, mode) * scale_one(lu2[t], s, mode));
  return -std::log(acc / static_cast<double>(lu1.size()));
}

void require_equal_lengths(std::size_t a, std::size_t b, const char* who) {
  if (a != b)
    throw LengthMismatch(std::string(who) + ": post-burnin lengths " + std::to_string(a) +
                         " vs " + std::to_string(b) + " (use truncate-min to align)");
}

}  // namespace

double global_scale(const ChainTrace& t1, const ChainTrace& t2) {
  require_nonempty(t1, "global_scale");
  require_nonempty(t2, "global_scale");
  double s = t1.log_u[0];
  for (double v : t1.log_u) s = std::max(s, v);
  for (double v : t2.log_u) s = std::max(s, v);
  return s;
}

double hellinger_distance(const ChainTrace& t1, const ChainTrace& t2, std::size_t n_burnin,
                          double s, ScaleMode mode) {
  const auto lu1 = post_burnin(t1, n_burnin, "hellinger_distance");
  const auto lu2 = post_burnin(t2, n_burnin, "hellinger_distance");
  require_equal_lengths(lu1.size(), lu2.size(), "hellinger_distance");
  return hellinger_core(lu1, lu2, s, mode);
}

double bhattacharyya_distance(const ChainTrace& t1, const ChainTrace& t2, std::size_t n_burnin,
                              double s, ScaleMode mode) {
  const auto lu1 = post_burnin(t1, n_burnin, "bhattacharyya_distance");
  const auto lu2 = post_burnin(t2, n_burnin, "bhattacharyya_distance");
  require_equal_lengths(lu1.size(), lu2.size(), "bhattacharyya_distance");
  return bhattacharyya_core(lu1, lu2, s, mode);
}

double model_uncertainty(const ChainTrace& t, double s, ScaleMode mode) {
  require_nonempty(t, "model_uncertainty");
  double lo = HUGE_VAL, hi = -HUGE_VAL;
  for (double v : t.log_u) {
    const double u = scale_one(v, s, mode);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  return hi - lo;
}

double delta_metric(double d_h, double d_max1, double d_max2) {
  if (!(d_max1 > 0.0) || !(d_max2 > 0.0))
    throw ZeroUncertainty("delta_metric: both model uncertainties must be positive");
  return d_h * std::abs(1.0 / d_max1 - 1.0 / d_max2);
}

double absolute_correlation(double delta) {
  if (delta < 0.0) throw NumericError("absolute_correlation: delta must be non-negative");
  return std::exp(-delta);
}

LogOddsReport log_odds_divergence(const ChainTrace& t1, const ChainTrace& t2,
                                  std::size_t n_burnin) {
  const auto lu1 = post_burnin(t1, n_burnin, "log_odds_divergence");
  const auto lu2 = post_burnin(t2, n_burnin, "log_odds_divergence");
  require_equal_lengths(lu1.size(), lu2.size(), "log_odds_divergence");
  LogOddsReport r;
  for (std::size_t t = 0; t < lu1.size(); ++t) r.sum += lu1[t] - lu2[t];
  r.mean = r.sum / static_cast<double>(lu1.size());
  return r;
}

double network_hellinger(const Matrix& marginals1, const Matrix& marginals2) {
  if (marginals1.rows() != marginals1.cols() || marginals2.rows() != marginals2.cols())
    throw DimensionMismatch("network_hellinger: marginal matrices must be square");
  if (marginals1.rows() != marginals2.rows())
    throw DimensionMismatch("network_hellinger: sizes " + std::to_string(marginals1.rows()) +
                            " vs " + std::to_string(marginals2.rows()));
  const std::size_t p = marginals1.rows();
  if (p < 2) throw DimensionMismatch("network_hellinger: need at least 2 nodes");
  double acc = 0.0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      const double a = marginals1(i, j);
      const double b = marginals2(i, j);
      if (a < 0.0 || b < 0.0) throw NumericError("network_hellinger: negative marginal");
      const double d = std::sqrt(a) - std::sqrt(b);
      acc += d * d;
    }
  return std::sqrt(acc / static_cast<double>(pair_count(p)));
}

DistanceReport compare_chains(const ChainTrace& t1, std::size_t burnin1, const ChainTrace& t2,
                              std::size_t burnin2, ScaleMode mode, bool truncate_min) {
  auto lu1 = post_burnin(t1, burnin1, "compare_chains");
  auto lu2 = post_burnin(t2, burnin2, "compare_chains");
  DistanceReport r;
  if (lu1.size() != lu2.size()) {
    if (!truncate_min)
      throw LengthMismatch("compare_chains: post-burnin lengths " + std::to_string(lu1.size()) +
                           " vs " + std::to_string(lu2.size()) + " (use truncate-min to align)");
    const std::size_t keep = std::min(lu1.size(), lu2.size());
    lu1.resize(keep);
    lu2.resize(keep);
    r.truncated = true;
  }

  // One shared scale for every scaled quantity below.
  const double s = global_scale(t1, t2);
  r.scale = s;
  r.mode = mode;
  r.post_burnin_length = lu1.size();
  r.d_hellinger = hellinger_core(lu1, lu2, s, mode);
  r.d_bhattacharyya = bhattacharyya_core(lu1, lu2, s, mode);
  r.d_max_1 = model_uncertainty(t1, s, mode);
  r.d_max_2 = model_uncertainty(t2, s, mode);
  r.delta = delta_metric(r.d_hellinger, r.d_max_1, r.d_max_2);
  r.abs_corr = absolute_correlation(r.delta);
  double sum = 0.0;
  for (std::size_t t = 0; t < lu1.size(); ++t) sum += lu1[t] - lu2[t];
  r.log_odds_sum = sum;
  r.log_odds_mean = sum / static_cast<double>(lu1.size());
  return r;
}

}  // namespace srgg
