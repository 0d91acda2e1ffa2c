#include "qssp/matching.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <utility>

namespace qssp::matching {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCostTolerance = 1e-12;

// Residual graph: arc k of the network becomes edge 2k (forward) and 2k+1 (reverse).
class Residual {
 public:
  Residual(const FlowNetwork& net, int extra_nodes)
      : adj_(static_cast<std::size_t>(net.node_count() + extra_nodes)) {
    for (const auto& a : net.arcs()) add(a.from, a.to, a.capacity, a.cost);
  }

  int add(int from, int to, std::int64_t cap, double cost) {
    const int id = static_cast<int>(to_.size());
    to_.push_back(to);
    cap_.push_back(cap);
    cost_.push_back(cost);
    to_.push_back(from);
    cap_.push_back(0);
    cost_.push_back(-cost);
    adj_[static_cast<std::size_t>(from)].push_back(id);
    adj_[static_cast<std::size_t>(to)].push_back(id + 1);
    return id;
  }

  int nodes() const { return static_cast<int>(adj_.size()); }

  // Flow on the forward edge `id` equals the reverse edge's capacity.
  std::int64_t flow(int id) const { return cap_[static_cast<std::size_t>(id) + 1]; }

  // Successive shortest paths from s to t. With `only_negative`, stop at the
  // first path whose cost is not negative.
  void ship(int s, int t, bool only_negative, std::int64_t& value, double& cost) {
    const auto n = static_cast<std::size_t>(nodes());
    std::vector<double> pot = bellman_ford(s);
    for (auto& p : pot) {
      if (p == kInf) p = 0.0;
    }
    std::vector<double> dist(n);
    std::vector<int> via(n);
    while (true) {
      std::fill(dist.begin(), dist.end(), kInf);
      std::fill(via.begin(), via.end(), -1);
      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      dist[static_cast<std::size_t>(s)] = 0.0;
      pq.emplace(0.0, s);
      while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[static_cast<std::size_t>(u)]) continue;
        for (const int e : adj_[static_cast<std::size_t>(u)]) {
          const auto ue = static_cast<std::size_t>(e);
          if (cap_[ue] <= 0) continue;
          const int v = to_[ue];
          const auto uv = static_cast<std::size_t>(v);
          // Reduced costs are non-negative in exact arithmetic; clamp rounding noise.
          const double rc = std::max(0.0, cost_[ue] + pot[static_cast<std::size_t>(u)] - pot[uv]);
          const double nd = d + rc;
          if (nd < dist[uv]) {
            dist[uv] = nd;
            via[uv] = e;
            pq.emplace(nd, v);
          }
        }
      }
      const auto ut = static_cast<std::size_t>(t);
      if (dist[ut] == kInf) return;

      double path_cost = 0.0;
      std::int64_t bottleneck = std::numeric_limits<std::int64_t>::max();
      for (int v = t; v != s;) {
        const auto e = static_cast<std::size_t>(via[static_cast<std::size_t>(v)]);
        path_cost += cost_[e];
        bottleneck = std::min(bottleneck, cap_[e]);
        v = to_[e ^ 1U];
      }
      if (only_negative && path_cost >= -kCostTolerance) return;

      // min(d(v), d(t)) keeps every residual reduced cost non-negative,
      // including nodes the search did not reach.
      for (std::size_t v = 0; v < n; ++v) pot[v] += std::min(dist[v], dist[ut]);

      for (int v = t; v != s;) {
        const auto e = static_cast<std::size_t>(via[static_cast<std::size_t>(v)]);
        cap_[e] -= bottleneck;
        cap_[e ^ 1U] += bottleneck;
        v = to_[e ^ 1U];
      }
      value += bottleneck;
      cost += static_cast<double>(bottleneck) * path_cost;
    }
  }

 private:
  std::vector<double> bellman_ford(int s) const {
    const auto n = static_cast<std::size_t>(nodes());
    std::vector<double> d(n, kInf);
    d[static_cast<std::size_t>(s)] = 0.0;
    for (std::size_t round = 0; round <= n; ++round) {
      bool changed = false;
      for (std::size_t e = 0; e < to_.size(); ++e) {
        if (cap_[e] <= 0) continue;
        const auto u = static_cast<std::size_t>(to_[e ^ 1U]);
        const auto v = static_cast<std::size_t>(to_[e]);
        if (d[u] == kInf) continue;
        if (d[u] + cost_[e] < d[v] - kCostTolerance) {
          d[v] = d[u] + cost_[e];
          changed = true;
        }
      }
      if (!changed) return d;
    }
    throw std::invalid_argument("flow network has a negative-cost cycle");
  }

  std::vector<int> to_;
  std::vector<std::int64_t> cap_;
  std::vector<double> cost_;
  std::vector<std::vector<int>> adj_;
};

FlowResult collect(const FlowNetwork& net, const Residual& r) {
  FlowResult out;
  out.arc_flow.resize(net.arcs().size());
  for (std::size_t k = 0; k < net.arcs().size(); ++k) {
    out.arc_flow[k] = r.flow(static_cast<int>(2 * k));
    out.cost += static_cast<double>(out.arc_flow[k]) * net.arcs()[k].cost;
  }
  return out;
}

}  // namespace

int FlowNetwork::add_arc(int from, int to, std::int64_t capacity, double cost) {
  if (from < 0 || from >= nodes_ || to < 0 || to >= nodes_) {
    throw std::out_of_range("arc endpoint out of range");
  }
  if (capacity < 0) throw std::invalid_argument("arc capacity must be non-negative");
  if (!std::isfinite(cost)) throw std::invalid_argument("arc cost must be finite");
  arcs_.push_back({from, to, capacity, cost});
  return static_cast<int>(arcs_.size()) - 1;
}

FlowResult min_cost_flow(const FlowNetwork& network, std::span<const std::int64_t> supplies) {
  if (supplies.size() != static_cast<std::size_t>(network.node_count())) {
    throw std::invalid_argument("one supply value per node is required");
  }
  if (std::accumulate(supplies.begin(), supplies.end(), std::int64_t{0}) != 0) {
    throw InfeasibleFlow("supplies do not sum to zero");
  }
  Residual r(network, 2);
  const int s = network.node_count();
  const int t = s + 1;
  std::int64_t required = 0;
  for (int v = 0; v < network.node_count(); ++v) {
    const auto b = supplies[static_cast<std::size_t>(v)];
    if (b > 0) {
      r.add(s, v, b, 0.0);
      required += b;
    } else if (b < 0) {
      r.add(v, t, -b, 0.0);
    }
  }
  std::int64_t value = 0;
  double cost = 0.0;
  r.ship(s, t, false, value, cost);
  if (value < required) {
    throw InfeasibleFlow("only " + std::to_string(value) + " of " + std::to_string(required) +
                         " supply units can be routed");
  }
  auto out = collect(network, r);
  out.value = value;
  return out;
}

FlowResult min_cost_free_flow(const FlowNetwork& network, int source, int sink) {
  if (source < 0 || source >= network.node_count() || sink < 0 || sink >= network.node_count()) {
    throw std::out_of_range("source or sink out of range");
  }
  Residual r(network, 0);
  std::int64_t value = 0;
  double cost = 0.0;
  r.ship(source, sink, true, value, cost);
  auto out = collect(network, r);
  out.value = value;
  return out;
}

void CapacitatedBipartiteGraph::validate() const {
  for (const auto c : left_capacity) {
    if (c < 1) throw std::invalid_argument("left capacities must be >= 1");
  }
  for (const auto c : right_capacity) {
    if (c < 1) throw std::invalid_argument("right capacities must be >= 1");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    if (e.left < 0 || static_cast<std::size_t>(e.left) >= left_capacity.size() || e.right < 0 ||
        static_cast<std::size_t>(e.right) >= right_capacity.size()) {
      throw std::out_of_range("edge endpoint out of range");
    }
    if (!std::isfinite(e.weight)) throw std::invalid_argument("edge weights must be finite");
    if (!seen.emplace(e.left, e.right).second) throw std::invalid_argument("duplicate edge");
  }
}

BMatching max_weight_b_matching(const CapacitatedBipartiteGraph& graph) {
  graph.validate();
  const int nl = static_cast<int>(graph.left_capacity.size());
  const int nr = static_cast<int>(graph.right_capacity.size());
  FlowNetwork net(nl + nr + 2);
  const int s = nl + nr;
  const int t = s + 1;
  for (int i = 0; i < nl; ++i) net.add_arc(s, i, graph.left_capacity[static_cast<std::size_t>(i)], 0.0);

  // Arcs in (left, right) order so equal-weight alternatives resolve the same way everywhere.
  std::vector<std::size_t> order(graph.edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = graph.edges[a];
    const auto& y = graph.edges[b];
    return std::pair(x.left, x.right) < std::pair(y.left, y.right);
  });
  std::vector<int> arc_of_edge(graph.edges.size(), -1);
  for (const auto k : order) {
    const auto& e = graph.edges[k];
    if (!(e.weight > 0.0)) continue;
    const auto cap = std::min(graph.left_capacity[static_cast<std::size_t>(e.left)],
                              graph.right_capacity[static_cast<std::size_t>(e.right)]);
    arc_of_edge[k] = net.add_arc(e.left, nl + e.right, cap, -e.weight);
  }
  for (int j = 0; j < nr; ++j) {
    net.add_arc(nl + j, t, graph.right_capacity[static_cast<std::size_t>(j)], 0.0);
  }

  const auto flow = min_cost_free_flow(net, s, t);
  BMatching out;
  out.multiplicity.assign(graph.edges.size(), 0);
  for (std::size_t k = 0; k < graph.edges.size(); ++k) {
    if (arc_of_edge[k] < 0) continue;
    out.multiplicity[k] = flow.arc_flow[static_cast<std::size_t>(arc_of_edge[k])];
    out.total_weight += static_cast<double>(out.multiplicity[k]) * graph.edges[k].weight;
  }
  return out;
}

}  // namespace qssp::matching
