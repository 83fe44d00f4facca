#pragma once

#include <cstddef>
#include <vector>

#include "srgg/matrix.hpp"
#include "srgg/mcmc.hpp"

namespace srgg {

// How log posterior values are mapped into (0, 1] before the Hellinger sums.
// Divide follows the printed definition exp(ln u / s) and refuses scaled
// values above 1 + 1e-9 (a negative s inverts the map and trips this);
// Shift uses exp(ln u - s), which is always inside (0, 1].
enum class ScaleMode { Divide, Shift };

// s = max over both full traces of ln u^(t).
double global_scale(const ChainTrace& t1, const ChainTrace& t2);

// Discretized Hellinger distance over the post-burnin iterations:
// sqrt( mean_t ( sqrt(u1) - sqrt(u2) )^2 ) on the scaled values.
double hellinger_distance(const ChainTrace& t1, const ChainTrace& t2, std::size_t n_burnin,
                          double s, ScaleMode mode = ScaleMode::Divide);

// -ln( mean_t sqrt(u1 u2) ) on the scaled values.
double bhattacharyya_distance(const ChainTrace& t1, const ChainTrace& t2, std::size_t n_burnin,
                              double s, ScaleMode mode = ScaleMode::Divide);

// max - min of the scaled posterior over the whole trace, burn-in included.
double model_uncertainty(const ChainTrace& t, double s, ScaleMode mode = ScaleMode::Divide);

// delta = d_h |1/d_max1 - 1/d_max2|. Zero uncertainties are surfaced, not
// patched.
double delta_metric(double d_h, double d_max1, double d_max2);

// exp(-delta), the modeled absolute correlation between the two datasets.
double absolute_correlation(double delta);

struct LogOddsReport {
  double sum = 0.0;
  double mean = 0.0;
};

// Post-burnin sum (and mean) of ln u1 - ln u2; no scaling involved.
LogOddsReport log_odds_divergence(const ChainTrace& t1, const ChainTrace& t2,
                                  std::size_t n_burnin);

// Single-shot network variant: Hellinger over the p(p-1)/2 unordered pairs
// of two edge-marginal matrices.
double network_hellinger(const Matrix& marginals1, const Matrix& marginals2);

struct DistanceReport {
  double scale = 0.0;
  ScaleMode mode = ScaleMode::Divide;
  double d_hellinger = 0.0;
  double d_bhattacharyya = 0.0;
  double d_max_1 = 0.0;
  double d_max_2 = 0.0;
  double delta = 0.0;
  double abs_corr = 1.0;
  double log_odds_sum = 0.0;
  double log_odds_mean = 0.0;
  std::size_t post_burnin_length = 0;
  bool truncated = false;
};

// Full pairwise report. One shared scale drives every scaled quantity. Each
// trace brings its own burn-in; unequal post-burnin lengths are an error
// unless truncate_min keeps the leading min-length stretch of each.
DistanceReport compare_chains(const ChainTrace& t1, std::size_t burnin1, const ChainTrace& t2,
                              std::size_t burnin2, ScaleMode mode = ScaleMode::Divide,
                              bool truncate_min = false);

}  // namespace srgg
