#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "srgg/matrix.hpp"

namespace srgg {

// Single-shot SRGG over an empirical or rank correlation matrix: edge (i,j)
// exists iff the connection function at g = 1 and |s_ij| reaches tau.
struct LargeNetwork {
  std::vector<std::string> labels;
  struct Edge {
    std::uint32_t i, j;  // i < j
    double marginal;
  };
  std::vector<Edge> edges;           // sorted by (i, j)
  std::vector<std::uint32_t> nodes;  // surviving node ids
  double tau = 0.1;
  std::vector<int> class_of;         // -1 when unclassified / absent

  std::size_t node_count() const { return nodes.size(); }
  std::size_t edge_count() const { return edges.size(); }
  double average_degree() const {
    return nodes.empty() ? 0.0
                         : 2.0 * static_cast<double>(edges.size()) /
                               static_cast<double>(nodes.size());
  }
};

enum class BuildPath {
  Auto,       // dense up to p = 2000, streaming beyond
  Dense,      // materialize the marginal matrix, then threshold (reference)
  Streaming,  // tiled pass over pairs, no dense marginal matrix
};

LargeNetwork build_large_network(const Matrix& corr, double tau,
                                 const std::vector<std::string>& labels = {},
                                 BuildPath path = BuildPath::Auto);

// Drops isolated nodes; the edge list is untouched.
LargeNetwork prune_zero_degree(const LargeNetwork& net);

std::map<std::size_t, std::size_t> degree_histogram(const LargeNetwork& net);

struct ClassStats {
  struct PerClass {
    std::string name;
    std::size_t members = 0;
    double intra_variance = 0.0;
    double inter_variance = 0.0;
    double ratio = 0.0;  // intra / inter; 0 when the class is internally exact
  };
  std::vector<PerClass> classes;
  std::size_t classified_nodes = 0;
};

// Pairwise-similarity variance ratios per class: intra is the variance of
// the similarities within the class, inter the variance of similarities
// between the class and other classified nodes, ratio their quotient.
// Needs at least two classes with at least two members each.
ClassStats class_variance_ratio(const Matrix& similarity, const std::vector<int>& class_of,
                                const std::vector<std::string>& class_names);

}  // namespace srgg
