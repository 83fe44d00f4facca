#include "srgg/bignet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "srgg/metric_space.hpp"
#include "srgg/parallel.hpp"

namespace srgg {

namespace {

constexpr double kEntryTolerance = 1e-9;
constexpr std::size_t kDenseLimit = 2000;

void validate_correlation(const Matrix& corr) {
  if (corr.rows() != corr.cols())
    throw DimensionMismatch("build_large_network: correlation matrix must be square");
  const std::size_t p = corr.rows();
  if (p < 2) throw DimensionMismatch("build_large_network: need at least 2 nodes");
  for (std::size_t i = 0; i < p; ++i) {
    if (std::abs(corr(i, i) - 1.0) > kEntryTolerance)
      throw InvalidCorrelationEntry("diagonal entry " + std::to_string(corr(i, i)) + " at " +
                                    std::to_string(i) + " is not 1");
    for (std::size_t j = i + 1; j < p; ++j) {
      if (std::abs(corr(i, j)) > 1.0 + kEntryTolerance)
        throw InvalidCorrelationEntry("entry " + std::to_string(corr(i, j)) + " at (" +
                                      std::to_string(i) + "," + std::to_string(j) +
                                      ") outside [-1,1]");
      if (std::abs(corr(i, j) - corr(j, i)) > kEntryTolerance)
        throw InvalidCorrelationEntry("asymmetric entries at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
    }
  }
}

double inclusion_marginal(double s) {
  return edge_marginal_from_separation(std::abs(1.0 - std::min(std::abs(s), 1.0)));
}

std::vector<std::string> default_labels(std::size_t p, const std::vector<std::string>& labels) {
  if (!labels.empty()) {
    if (labels.size() != p)
      throw DimensionMismatch("build_large_network: label count mismatch");
    return labels;
  }
  std::vector<std::string> out;
  out.reserve(p);
  for (std::size_t i = 0; i < p; ++i) out.push_back("n" + std::to_string(i + 1));
  return out;
}

}  // namespace

LargeNetwork build_large_network(const Matrix& corr, double tau,
                                 const std::vector<std::string>& labels, BuildPath path) {
  validate_correlation(corr);
  const std::size_t p = corr.rows();

  LargeNetwork net;
  net.tau = tau;
  net.labels = default_labels(p, labels);
  net.nodes.resize(p);
  for (std::size_t i = 0; i < p; ++i) net.nodes[i] = static_cast<std::uint32_t>(i);
  net.class_of.assign(p, -1);

  const bool streaming =
      path == BuildPath::Streaming || (path == BuildPath::Auto && p > kDenseLimit);

  if (!streaming) {
    Matrix marginals(p, p, 0.0);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j) {
        const double m = inclusion_marginal(corr(i, j));
        marginals(i, j) = m;
        marginals(j, i) = m;
      }
    for (const auto& [i, j] : threshold_edge_set(marginals, tau).edges)
      net.edges.push_back({i, j, marginals(i, j)});
    return net;
  }

  std::vector<std::vector<LargeNetwork::Edge>> buckets(max_threads());
#pragma omp parallel
  {
    auto& local = buckets[omp_get_thread_num()];
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(p); ++i) {
      for (std::size_t j = static_cast<std::size_t>(i) + 1; j < p; ++j) {
        const double m = inclusion_marginal(corr(i, j));
        if (m >= tau)
          local.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), m});
      }
    }
  }
  std::size_t total = 0;
  for (const auto& b : buckets) total += b.size();
  net.edges.reserve(total);
  for (auto& b : buckets) net.edges.insert(net.edges.end(), b.begin(), b.end());
  std::sort(net.edges.begin(), net.edges.end(), [](const auto& a, const auto& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  return net;
}

LargeNetwork prune_zero_degree(const LargeNetwork& net) {
  std::vector<std::uint8_t> connected(net.labels.size(), 0);
  for (const auto& e : net.edges) {
    connected[e.i] = 1;
    connected[e.j] = 1;
  }
  LargeNetwork out = net;
  out.nodes.clear();
  for (std::uint32_t id : net.nodes)
    if (connected[id]) out.nodes.push_back(id);
  return out;
}

std::map<std::size_t, std::size_t> degree_histogram(const LargeNetwork& net) {
  std::vector<std::size_t> degree(net.labels.size(), 0);
  for (const auto& e : net.edges) {
    ++degree[e.i];
    ++degree[e.j];
  }
  std::map<std::size_t, std::size_t> hist;
  for (std::uint32_t id : net.nodes) ++hist[degree[id]];
  return hist;
}

ClassStats class_variance_ratio(const Matrix& similarity, const std::vector<int>& class_of,
                                const std::vector<std::string>& class_names) {
  const std::size_t p = similarity.rows();
  if (similarity.cols() != p)
    throw DimensionMismatch("class_variance_ratio: similarity matrix must be square");
  if (class_of.size() != p)
    throw DimensionMismatch("class_variance_ratio: class map size mismatch");

  const int n_classes = static_cast<int>(class_names.size());
  if (n_classes < 2) throw DegenerateClass("need at least 2 classes");
  std::vector<std::size_t> members(n_classes, 0);
  std::size_t classified = 0;
  for (int c : class_of) {
    if (c < -1 || c >= n_classes) throw DegenerateClass("class id out of range");
    if (c >= 0) {
      ++members[c];
      ++classified;
    }
  }
  for (int c = 0; c < n_classes; ++c)
    if (members[c] < 2)
      throw DegenerateClass("class '" + class_names[c] + "' has fewer than 2 members");

  struct Acc {
    double sum = 0.0, sumsq = 0.0;
    std::size_t n = 0;
    void add(double v) {
      sum += v;
      sumsq += v * v;
      ++n;
    }
    double variance() const {
      if (n == 0) return 0.0;
      const double mean = sum / static_cast<double>(n);
      const double v = sumsq / static_cast<double>(n) - mean * mean;
      return v > 0.0 ? v : 0.0;
    }
  };
  std::vector<Acc> intra(n_classes), inter(n_classes);
  for (std::size_t i = 0; i < p; ++i) {
    const int ci = class_of[i];
    if (ci < 0) continue;
    for (std::size_t j = i + 1; j < p; ++j) {
      const int cj = class_of[j];
      if (cj < 0) continue;
      const double s = similarity(i, j);
      if (ci == cj) {
        intra[ci].add(s);
      } else {
        inter[ci].add(s);
        inter[cj].add(s);
      }
    }
  }

  ClassStats stats;
  stats.classified_nodes = classified;
  for (int c = 0; c < n_classes; ++c) {
    ClassStats::PerClass pc;
    pc.name = class_names[c];
    pc.members = members[c];
    pc.intra_variance = intra[c].variance();
    pc.inter_variance = inter[c].variance();
    if (pc.intra_variance == 0.0) {
      pc.ratio = 0.0;
    } else if (pc.inter_variance == 0.0) {
      throw DegenerateClass("class '" + pc.name + "' has zero inter-class variance");
    } else {
      pc.ratio = pc.intra_variance / pc.inter_variance;
    }
    stats.classes.push_back(pc);
  }
  return stats;
}

}  // namespace srgg
