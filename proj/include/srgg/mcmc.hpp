#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srgg/data.hpp"
#include "srgg/matrix.hpp"
#include "srgg/posterior.hpp"
#include "srgg/rng.hpp"

namespace srgg {

struct McmcConfig {
  std::size_t n_iter = 10000;
  std::size_t n_burnin = 5000;
  double proposal_sd_corr = 0.05;  // sigma_0 of the truncated-Normal proposal
  double proposal_sd_var = 0.05;   // w of the variance proposal
  double tau = 0.05;
  std::uint64_t seed = 0;
  // Both proposal families are asymmetric, so corrections are on by
  // default; turning them off reproduces the plain-Metropolis reading.
  bool hastings = true;
  // Block-1 target. The default scores sigma_c by the independent-row
  // matrix-Normal likelihood, which concentrates at the empirical column
  // correlation. The marginalized posterior is available as an alternative;
  // for n > p its ridge-regularized Gram determinant no longer depends on
  // the data's correlation shape and the chain drifts to the identity.
  bool marginalized_block1 = false;
  // Diagnostics. flat_targets substitutes a constant target in both blocks;
  // target_shift adds a constant to the block-1 target. Neither belongs in
  // a production run; both exist so invariance claims are testable.
  bool flat_targets = false;
  double target_shift = 0.0;
  MarginalPosteriorConfig normalization{};
};

// Per-iteration history, including the initial state at t = 0.
struct ChainTrace {
  std::size_t p = 0;
  std::size_t n_iter = 0;
  std::size_t n_burnin = 0;
  std::vector<double> log_u;                // ln u^(t) = sum_{i<j} ln m(g_ij | rho_ij)
  std::vector<std::uint64_t> sigma_hash;    // accepted-state fingerprint
  std::vector<std::uint8_t> accept_corr;
  std::vector<std::uint8_t> accept_graph;
  std::vector<std::uint8_t> edge_bits;      // (n_iter+1) x pair_count, flattened i<j
  std::vector<double> variance_vals;        // same layout

  std::size_t n_pairs() const { return pair_count(p); }
  std::size_t length() const { return log_u.size(); }
  std::uint8_t edge(std::size_t t, std::size_t pair) const {
    return edge_bits[t * n_pairs() + pair];
  }
};

struct ChainDiagnostics {
  double accept_rate_corr = 0.0;
  double accept_rate_graph = 0.0;
  std::size_t ridge_events_sigma = 0;   // accepted evaluations needing a positive ridge
  std::size_t rejected_nonpd = 0;       // proposals rejected for failing the ridge policy
  double gram_ridge_epsilon = 0.0;      // largest Gram ridge seen
};

struct McmcResult {
  ChainTrace trace;
  Matrix edge_marginals;
  ChainDiagnostics diag;
};

struct CorrelationProposal {
  Matrix proposed;
  double log_hastings = 0.0;  // ln q(cur | prop) - ln q(prop | cur)
};

// Every off-diagonal entry from TruncNormal(current, sigma_0^2) on (-1, 1)
// by inverse CDF; the diagonal stays 1. The Hastings term collects the
// normalizing-constant asymmetry of the truncation.
CorrelationProposal propose_correlation_block(const Matrix& current, const McmcConfig& cfg,
                                              Rng& rng);

struct GraphProposal {
  GraphParams proposed;
  double log_hastings = 0.0;
};

// Independence log-Hastings of one Bernoulli(q) edge draw:
// ln q(g_cur) - ln q(g_prop); zero when the values agree.
double bernoulli_log_hastings(double g_cur, double g_prop, double q);

// Edges ~ Bernoulli(|rho_ij|) independently; variances Normal(current, w^2)
// redrawn into (0, 1].
GraphProposal propose_graph_block(const Matrix& abs_rho_source, const GraphParams& current,
                                  const McmcConfig& cfg, Rng& rng);

// The 2-block update: the correlation matrix moves against its marginal
// posterior, the partial correlations are refreshed on acceptance, then the
// graph and variance parameters move against the edge likelihood.
McmcResult run_two_block_chain(const StandardizedDataset& data, const McmcConfig& cfg);

// n_ij = (post-burnin count of g_ij = 1) / (n_iter - n_burnin).
Matrix edge_marginal_matrix(const ChainTrace& trace, std::size_t n_burnin);

struct GraphicalModel {
  std::vector<std::string> labels;
  struct Edge {
    std::uint32_t i, j;
    double weight;  // n_ij
  };
  std::vector<Edge> edges;
  double tau = 0.05;
};

// Keeps exactly the edges with n_ij >= tau (inclusive).
GraphicalModel build_graphical_model(const Matrix& edge_marginals,
                                     const std::vector<std::string>& labels, double tau);

std::uint64_t fnv1a64(const void* bytes, std::size_t len);

}  // namespace srgg
