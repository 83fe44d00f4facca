#include "srgg/mcmc.hpp"

#include <cmath>
#include <cstring>

#include "srgg/log.hpp"
#include "srgg/metric_space.hpp"

namespace srgg {

std::uint64_t fnv1a64(const void* bytes, std::size_t len) {
  const auto* b = static_cast<const unsigned char*>(bytes);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= b[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::uint64_t hash_upper_triangle(const Matrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const double v = m(i, j);
      unsigned char buf[sizeof(double)];
      std::memcpy(buf, &v, sizeof(double));
      for (unsigned char c : buf) {
        h ^= c;
        h *= 0x100000001b3ULL;
      }
    }
  return h;
}

double log_joint_edge_marginal(const GraphParams& g, const Matrix& rho) {
  double acc = 0.0;
  const std::size_t p = rho.rows();
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      const EdgeInput e(static_cast<int>(g.edges(i, j)), std::abs(rho(i, j)));
      acc += std::log(edge_marginal(e));
    }
  return acc;
}

}  // namespace

CorrelationProposal propose_correlation_block(const Matrix& current, const McmcConfig& cfg,
                                              Rng& rng) {
  const std::size_t p = current.rows();
  const double sd = cfg.proposal_sd_corr;
  CorrelationProposal out;
  out.proposed = current;
  for (std::size_t i = 0; i < p; ++i) out.proposed(i, i) = 1.0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      const double cur = current(i, j);
      const double prop = truncated_normal(rng, cur, sd, -1.0, 1.0);
      out.proposed(i, j) = prop;
      out.proposed(j, i) = prop;
      // ln q(cur|prop) - ln q(prop|cur) = ln Z(cur) - ln Z(prop)
      out.log_hastings +=
          log_truncnorm_z(cur, sd, -1.0, 1.0) - log_truncnorm_z(prop, sd, -1.0, 1.0);
    }
  return out;
}

double bernoulli_log_hastings(double g_cur, double g_prop, double q) {
  if (g_cur == g_prop) return 0.0;
  const double lp_cur = g_cur > 0.5 ? std::log(q) : std::log1p(-q);
  const double lp_prop = g_prop > 0.5 ? std::log(q) : std::log1p(-q);
  return lp_cur - lp_prop;
}

GraphProposal propose_graph_block(const Matrix& abs_rho_source, const GraphParams& current,
                                  const McmcConfig& cfg, Rng& rng) {
  const std::size_t p = abs_rho_source.rows();
  const double w = cfg.proposal_sd_var;
  GraphProposal out;
  out.proposed = current;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      const double q = std::abs(abs_rho_source(i, j));
      const double g_prop = rng.bernoulli(q) ? 1.0 : 0.0;
      out.log_hastings += bernoulli_log_hastings(current.edges(i, j), g_prop, q);
      out.proposed.edges(i, j) = g_prop;
      out.proposed.edges(j, i) = g_prop;

      const double v_cur = current.variances(i, j);
      double v_prop = v_cur + w * rng.normal();
      int guard = 0;
      while (!(v_prop > 0.0 && v_prop <= 1.0)) {
        v_prop = v_cur + w * rng.normal();
        if (++guard > 1000) {
          v_prop = truncated_normal(rng, v_cur, w, 0.0, 1.0);
          break;
        }
      }
      out.log_hastings +=
          log_truncnorm_z(v_cur, w, 0.0, 1.0) - log_truncnorm_z(v_prop, w, 0.0, 1.0);
      out.proposed.variances(i, j) = v_prop;
      out.proposed.variances(j, i) = v_prop;
    }
  return out;
}

McmcResult run_two_block_chain(const StandardizedDataset& data, const McmcConfig& cfg) {
  const std::size_t p = data.cols;
  if (cfg.n_burnin >= cfg.n_iter)
    throw ShapeError("run_two_block_chain: n_burnin must be below n_iter");
  if (!(cfg.proposal_sd_corr > 0.0) || !(cfg.proposal_sd_var > 0.0))
    throw ShapeError("run_two_block_chain: proposal standard deviations must be positive");
  if (p > 20)
    log_warn("chain over " + std::to_string(pair_count(p)) +
             " correlation parameters (p = " + std::to_string(p) +
             "); iterative learning beyond p = 20 mixes poorly");

  Rng rng(cfg.seed);
  ChainTrace trace;
  trace.p = p;
  trace.n_iter = cfg.n_iter;
  trace.n_burnin = cfg.n_burnin;
  const std::size_t pairs = trace.n_pairs();
  trace.log_u.reserve(cfg.n_iter + 1);
  trace.sigma_hash.reserve(cfg.n_iter + 1);
  trace.accept_corr.reserve(cfg.n_iter + 1);
  trace.accept_graph.reserve(cfg.n_iter + 1);
  trace.edge_bits.reserve((cfg.n_iter + 1) * pairs);
  trace.variance_vals.reserve((cfg.n_iter + 1) * pairs);

  ChainDiagnostics diag;

  // Warm start: empirical correlation, edges where the implied partial
  // correlation is strong, mid-range variances.
  Matrix sigma = empirical_column_correlation(data);
  Matrix rho = partial_correlation(sigma, cfg.normalization.ridge);
  Matrix abs_rho(p, p, 0.0);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) abs_rho(i, j) = std::abs(rho(i, j));
  GraphParams graph = GraphParams::init(threshold_edge_set(abs_rho, 0.5).as_matrix(), 0.5);

  auto block1_target = [&](const Matrix& s, double* ridge_sigma, double* ridge_gram) {
    if (cfg.flat_targets) return cfg.target_shift;
    if (cfg.marginalized_block1) {
      const auto eval = marginalized_log_posterior_detail(data, s, cfg.normalization);
      if (ridge_sigma) *ridge_sigma = eval.ridge_sigma_c;
      if (ridge_gram) *ridge_gram = eval.ridge_gram;
      return eval.log_posterior + cfg.target_shift;
    }
    const auto eval = row_independent_loglik_detail(data, s, cfg.normalization.ridge);
    if (ridge_sigma) *ridge_sigma = eval.ridge_sigma_c;
    if (ridge_gram) *ridge_gram = 0.0;
    return eval.log_likelihood + cfg.target_shift;
  };
  auto block2_target = [&](const GraphParams& g) {
    if (cfg.flat_targets) return 0.0;
    return graph_log_likelihood(g, rho);
  };

  double ridge_sigma = 0.0, ridge_gram = 0.0;
  double cur_logpost = block1_target(sigma, &ridge_sigma, &ridge_gram);
  if (ridge_sigma > 0.0) ++diag.ridge_events_sigma;
  diag.gram_ridge_epsilon = std::max(diag.gram_ridge_epsilon, ridge_gram);
  double cur_loglik = block2_target(graph);

  auto record = [&](std::uint8_t acc_c, std::uint8_t acc_g) {
    trace.log_u.push_back(log_joint_edge_marginal(graph, rho));
    trace.sigma_hash.push_back(hash_upper_triangle(sigma));
    trace.accept_corr.push_back(acc_c);
    trace.accept_graph.push_back(acc_g);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j) {
        trace.edge_bits.push_back(static_cast<std::uint8_t>(graph.edges(i, j)));
        trace.variance_vals.push_back(graph.variances(i, j));
      }
  };
  record(0, 0);

  std::size_t accepted_corr = 0, accepted_graph = 0;
  for (std::size_t t = 1; t <= cfg.n_iter; ++t) {
    try {
      // block 1: correlation matrix
      CorrelationProposal cp = propose_correlation_block(sigma, cfg, rng);
      bool eval_ok = true;
      double prop_logpost = 0.0, prop_ridge_sigma = 0.0, prop_ridge_gram = 0.0;
      try {
        prop_logpost = block1_target(cp.proposed, &prop_ridge_sigma, &prop_ridge_gram);
      } catch (const NumericError&) {
        eval_ok = false;
        ++diag.rejected_nonpd;
      }
      std::uint8_t acc_c = 0;
      const double u1 = rng.uniform01();
      if (eval_ok) {
        const double delta = prop_logpost - cur_logpost + (cfg.hastings ? cp.log_hastings : 0.0);
        if (std::log(u1) < delta) {
          sigma = std::move(cp.proposed);
          cur_logpost = prop_logpost;
          if (prop_ridge_sigma > 0.0) ++diag.ridge_events_sigma;
          diag.gram_ridge_epsilon = std::max(diag.gram_ridge_epsilon, prop_ridge_gram);
          rho = partial_correlation(sigma, cfg.normalization.ridge);
          cur_loglik = block2_target(graph);  // coupling enters through the refreshed rho
          acc_c = 1;
          ++accepted_corr;
        }
      }

      // block 2: graph and variances
      GraphProposal gp = propose_graph_block(rho, graph, cfg, rng);
      const double prop_loglik = block2_target(gp.proposed);
      std::uint8_t acc_g = 0;
      const double u2 = rng.uniform01();
      const double delta2 = prop_loglik - cur_loglik + (cfg.hastings ? gp.log_hastings : 0.0);
      if (std::log(u2) < delta2) {
        graph = std::move(gp.proposed);
        cur_loglik = prop_loglik;
        acc_g = 1;
        ++accepted_graph;
      }

      record(acc_c, acc_g);
    } catch (const Error& e) {
      throw NumericError("chain aborted at iteration " + std::to_string(t) + ": " + e.what());
    }
  }

  diag.accept_rate_corr = static_cast<double>(accepted_corr) / static_cast<double>(cfg.n_iter);
  diag.accept_rate_graph = static_cast<double>(accepted_graph) / static_cast<double>(cfg.n_iter);

  McmcResult result;
  result.edge_marginals = edge_marginal_matrix(trace, cfg.n_burnin);
  result.trace = std::move(trace);
  result.diag = diag;
  return result;
}

Matrix edge_marginal_matrix(const ChainTrace& trace, std::size_t n_burnin) {
  if (n_burnin >= trace.n_iter)
    throw EmptyPostBurnin("edge_marginal_matrix: burn-in " + std::to_string(n_burnin) +
                          " leaves no post-burnin samples of " + std::to_string(trace.n_iter));
  const std::size_t p = trace.p;
  const std::size_t pairs = trace.n_pairs();
  const std::size_t n_post = trace.n_iter - n_burnin;
  std::vector<std::size_t> counts(pairs, 0);
  for (std::size_t t = n_burnin + 1; t <= trace.n_iter; ++t)
    for (std::size_t k = 0; k < pairs; ++k) counts[k] += trace.edge(t, k);
  Matrix nm(p, p, 0.0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j, ++k) {
      const double v = static_cast<double>(counts[k]) / static_cast<double>(n_post);
      nm(i, j) = v;
      nm(j, i) = v;
    }
  return nm;
}

GraphicalModel build_graphical_model(const Matrix& edge_marginals,
                                     const std::vector<std::string>& labels, double tau) {
  if (edge_marginals.rows() != edge_marginals.cols())
    throw DimensionMismatch("build_graphical_model: marginal matrix must be square");
  if (!labels.empty() && labels.size() != edge_marginals.rows())
    throw DimensionMismatch("build_graphical_model: label count mismatch");
  GraphicalModel m;
  m.tau = tau;
  if (labels.empty()) {
    for (std::size_t i = 0; i < edge_marginals.rows(); ++i)
      m.labels.push_back("v" + std::to_string(i + 1));
  } else {
    m.labels = labels;
  }
  for (std::size_t i = 0; i < edge_marginals.rows(); ++i)
    for (std::size_t j = i + 1; j < edge_marginals.cols(); ++j)
      if (edge_marginals(i, j) >= tau)
        m.edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                           edge_marginals(i, j)});
  return m;
}

}  // namespace srgg
