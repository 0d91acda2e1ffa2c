#pragma once

#include "qssp/capacity.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace qssp::scheduler {

struct Satellite {
  std::string id;
  std::int64_t transmitters = 1;  // T_i
};

struct Station {
  std::string id;
  Capacity receivers{1};  // R_g
};

struct Pair {
  std::string id;
  int station_a = 0;  // indices into QsspInstance::stations()
  int station_b = 0;
  Capacity max_connections{1};  // L_j
};

/// (satellite index, pair index); ordering is lexicographic by id because
/// entities are stored sorted by id.
struct ConnectionKey {
  int satellite = 0;
  int pair = 0;
  friend auto operator<=>(const ConnectionKey&, const ConnectionKey&) = default;
};

/// One slot's scheduling input. Entities are kept sorted by id; weights are
/// sparse and strictly positive (absent means w_ij = 0).
class QsspInstance {
 public:
  class Builder {
   public:
    Builder& satellite(std::string id, std::int64_t transmitters);
    Builder& station(std::string id, Capacity receivers);
    Builder& pair(std::string id, std::string station_a, std::string station_b,
                  Capacity max_connections);
    Builder& weight(std::string satellite_id, std::string pair_id, double w);
    /// Validates and returns the instance; throws std::invalid_argument.
    QsspInstance build() const;

   private:
    struct PairSpec {
      std::string id, a, b;
      Capacity cap;
    };
    struct WeightSpec {
      std::string satellite, pair;
      double w;
    };
    std::vector<Satellite> satellites_;
    std::vector<Station> stations_;
    std::vector<PairSpec> pairs_;
    std::vector<WeightSpec> weights_;
  };

  QsspInstance() = default;

  const std::vector<Satellite>& satellites() const { return satellites_; }
  const std::vector<Station>& stations() const { return stations_; }
  const std::vector<Pair>& pairs() const { return pairs_; }
  const std::map<ConnectionKey, double>& weights() const { return weights_; }

  double weight(ConnectionKey k) const;

  std::optional<int> satellite_index(std::string_view id) const;
  std::optional<int> station_index(std::string_view id) const;
  std::optional<int> pair_index(std::string_view id) const;

 private:
  std::vector<Satellite> satellites_;
  std::vector<Station> stations_;
  std::vector<Pair> pairs_;
  std::map<ConnectionKey, double> weights_;
};

/// Sparse decision variables x_ij; only positive entries are stored.
struct Assignment {
  std::map<ConnectionKey, std::int64_t> x;
  double objective = 0.0;
};

double objective(const QsspInstance& inst, const Assignment& a);

struct Violation {
  enum class Kind { Transmitters, PairConnections, Receivers, Negative };
  Kind kind;
  std::string entity_id;
  std::int64_t used = 0;
  std::int64_t limit = 0;

  std::string describe() const;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;
};

/// Checks sum_j x_ij <= T_i, sum_i x_ij <= L_j, receiver load <= R_g and
/// x_ij >= 0. Entries on (i,j) without a weight are allowed (x is free there;
/// they earn nothing). Throws std::out_of_range for indices outside the instance.
FeasibilityReport verify_feasible(const QsspInstance& inst, const Assignment& a);

/// Residual capacities, live connection set C and the growing assignment, as
/// manipulated by the greedy heuristics.
class WorkingState {
 public:
  explicit WorkingState(const QsspInstance& inst);

  /// Adds one unit on (i,j), consumes T_i, L_j and both receivers, then drops
  /// every connection of an entity whose residual reached zero.
  void update_state(ConnectionKey k);

  const std::set<ConnectionKey>& live() const { return live_; }
  bool done() const { return live_.empty(); }

  std::int64_t residual_transmitters(int sat) const { return transmitters_[static_cast<std::size_t>(sat)]; }
  Capacity residual_pair(int pair) const { return pair_caps_[static_cast<std::size_t>(pair)]; }
  Capacity residual_receivers(int station) const { return receivers_[static_cast<std::size_t>(station)]; }

  const QsspInstance& instance() const { return *inst_; }
  Assignment assignment() const;

 private:
  const QsspInstance* inst_;
  std::vector<std::int64_t> transmitters_;
  std::vector<Capacity> pair_caps_;
  std::vector<Capacity> receivers_;
  std::set<ConnectionKey> live_;
  std::map<ConnectionKey, std::int64_t> x_;
};

enum class SolverKind { Random, LocalGreedy, GlobalGreedy, GreedyBackoff, Exact };

std::string_view to_string(SolverKind k);
/// Accepts random, local_greedy, global_greedy, greedy_backoff, exact.
std::optional<SolverKind> parse_solver(std::string_view name);

Assignment solve_random(const QsspInstance& inst, std::uint64_t seed);
Assignment solve_local_greedy(const QsspInstance& inst, std::uint64_t seed);
Assignment solve_global_greedy(const QsspInstance& inst);
Assignment solve_greedy_backoff(const QsspInstance& inst);

inline constexpr std::int64_t kExactNodeBudget = 10'000'000;
/// Depth-first branch and bound over connection multiplicities. Throws
/// qssp::SolverRefusal once the search exceeds `node_budget` nodes.
Assignment solve_exact(const QsspInstance& inst, std::int64_t node_budget = kExactNodeBudget);

Assignment solve(const QsspInstance& inst, SolverKind kind, std::uint64_t seed = 0);

// --- 3-dimensional matching ---------------------------------------------------

struct ThreeDMInstance {
  std::vector<std::string> v1, v2, v3;
  std::vector<std::array<std::string, 3>> edges;

  void validate() const;
};

struct Reduction {
  QsspInstance instance;
  /// correspondence[k] is the connection standing for hyperedge k.
  std::vector<ConnectionKey> correspondence;
};

/// One satellite per V1 vertex used by a hyperedge, one station per used V2/V3
/// vertex, one pair per (V2, V3) combination; every w, T, L, R equals 1.
/// Ids are "v1:<name>", "v2:<name>", "v3:<name>" and pair "v2:<a>|v3:<b>".
Reduction reduce_3dm_to_qssp(const ThreeDMInstance& h);

inline constexpr std::size_t kMax3dmEdges = 20;
/// Largest set of pairwise vertex-disjoint hyperedges by subset search.
/// Throws qssp::SolverRefusal above kMax3dmEdges hyperedges.
int brute_force_3dm(const ThreeDMInstance& h);

}  // namespace qssp::scheduler
