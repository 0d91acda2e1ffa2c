#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace qssp::matching {

/// Directed network with integral capacities and real costs.
class FlowNetwork {
 public:
  struct Arc {
    int from;
    int to;
    std::int64_t capacity;
    double cost;
  };

  explicit FlowNetwork(int nodes = 0) : nodes_(nodes) {}

  int add_node() { return nodes_++; }
  /// Returns the arc index; arcs keep insertion order.
  int add_arc(int from, int to, std::int64_t capacity, double cost);

  int node_count() const { return nodes_; }
  const std::vector<Arc>& arcs() const { return arcs_; }

 private:
  int nodes_;
  std::vector<Arc> arcs_;
};

struct FlowResult {
  std::vector<std::int64_t> arc_flow;  // parallel to FlowNetwork::arcs()
  std::int64_t value = 0;              // units shipped from sources to sinks
  double cost = 0.0;
};

class InfeasibleFlow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimum-cost flow meeting `supplies` exactly (positive = source, negative
/// = demand). Successive shortest paths with Dijkstra on reduced costs;
/// initial potentials from Bellman-Ford, so negative arc costs are allowed as
/// long as no negative cycle has residual capacity. Throws InfeasibleFlow.
FlowResult min_cost_flow(const FlowNetwork& network, std::span<const std::int64_t> supplies);

/// Ships flow from `source` to `sink` along successive shortest paths while
/// the path cost is negative, i.e. the minimum-cost flow of free value.
FlowResult min_cost_free_flow(const FlowNetwork& network, int source, int sink);

struct BipartiteEdge {
  int left;
  int right;
  double weight;
};

struct CapacitatedBipartiteGraph {
  std::vector<std::int64_t> left_capacity;
  std::vector<std::int64_t> right_capacity;
  std::vector<BipartiteEdge> edges;

  /// Capacities >= 1, endpoints in range, no duplicate edges, finite weights.
  void validate() const;
};

struct BMatching {
  std::vector<std::int64_t> multiplicity;  // parallel to the graph's edges
  double total_weight = 0.0;
};

/// Maximum-weight (not maximum-cardinality) b-matching. Edges with
/// non-positive weight are never used.
BMatching max_weight_b_matching(const CapacitatedBipartiteGraph& graph);

}  // namespace qssp::matching
