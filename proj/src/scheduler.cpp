#include "qssp/scheduler.hpp"

#include "qssp/error.hpp"
#include "qssp/matching.hpp"
#include "qssp/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iterator>
#include <stdexcept>
#include <tuple>

namespace qssp::scheduler {

// --- instance ---------------------------------------------------------------

QsspInstance::Builder& QsspInstance::Builder::satellite(std::string id, std::int64_t transmitters) {
  satellites_.push_back({std::move(id), transmitters});
  return *this;
}

QsspInstance::Builder& QsspInstance::Builder::station(std::string id, Capacity receivers) {
  stations_.push_back({std::move(id), receivers});
  return *this;
}

QsspInstance::Builder& QsspInstance::Builder::pair(std::string id, std::string station_a,
                                                   std::string station_b, Capacity max_connections) {
  pairs_.push_back({std::move(id), std::move(station_a), std::move(station_b), max_connections});
  return *this;
}

QsspInstance::Builder& QsspInstance::Builder::weight(std::string satellite_id, std::string pair_id,
                                                     double w) {
  weights_.push_back({std::move(satellite_id), std::move(pair_id), w});
  return *this;
}

namespace {

template <class T>
void sort_unique_by_id(std::vector<T>& v, const char* what) {
  std::sort(v.begin(), v.end(), [](const T& a, const T& b) { return a.id < b.id; });
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k].id.empty()) throw std::invalid_argument(std::string("empty ") + what + " id");
    if (k > 0 && v[k].id == v[k - 1].id) {
      throw std::invalid_argument(std::string("duplicate ") + what + " id '" + v[k].id + "'");
    }
  }
}

template <class T>
std::optional<int> find_by_id(const std::vector<T>& v, std::string_view id) {
  const auto it = std::lower_bound(v.begin(), v.end(), id,
                                   [](const T& e, std::string_view x) { return e.id < x; });
  if (it == v.end() || it->id != id) return std::nullopt;
  return static_cast<int>(std::distance(v.begin(), it));
}

}  // namespace

QsspInstance QsspInstance::Builder::build() const {
  QsspInstance inst;
  inst.satellites_ = satellites_;
  inst.stations_ = stations_;
  sort_unique_by_id(inst.satellites_, "satellite");
  sort_unique_by_id(inst.stations_, "station");
  for (const auto& s : inst.satellites_) {
    if (s.transmitters < 0) throw std::invalid_argument("satellite '" + s.id + "' has negative T_i");
  }

  for (const auto& p : pairs_) {
    const auto a = inst.station_index(p.a);
    const auto b = inst.station_index(p.b);
    if (!a || !b) throw std::invalid_argument("pair '" + p.id + "' references an unknown station");
    if (*a == *b) throw std::invalid_argument("pair '" + p.id + "' joins a station to itself");
    inst.pairs_.push_back({p.id, std::min(*a, *b), std::max(*a, *b), p.cap});
  }
  sort_unique_by_id(inst.pairs_, "pair");

  for (const auto& w : weights_) {
    const auto i = inst.satellite_index(w.satellite);
    const auto j = inst.pair_index(w.pair);
    if (!i) throw std::invalid_argument("weight references unknown satellite '" + w.satellite + "'");
    if (!j) throw std::invalid_argument("weight references unknown pair '" + w.pair + "'");
    if (!(w.w > 0.0) || !std::isfinite(w.w)) {
      throw std::invalid_argument("weight of (" + w.satellite + ", " + w.pair +
                                  ") must be positive and finite");
    }
    if (!inst.weights_.emplace(ConnectionKey{*i, *j}, w.w).second) {
      throw std::invalid_argument("duplicate weight for (" + w.satellite + ", " + w.pair + ")");
    }
  }
  return inst;
}

double QsspInstance::weight(ConnectionKey k) const {
  const auto it = weights_.find(k);
  return it == weights_.end() ? 0.0 : it->second;
}

std::optional<int> QsspInstance::satellite_index(std::string_view id) const {
  return find_by_id(satellites_, id);
}
std::optional<int> QsspInstance::station_index(std::string_view id) const {
  return find_by_id(stations_, id);
}
std::optional<int> QsspInstance::pair_index(std::string_view id) const {
  return find_by_id(pairs_, id);
}

double objective(const QsspInstance& inst, const Assignment& a) {
  double total = 0.0;
  for (const auto& [k, x] : a.x) total += inst.weight(k) * static_cast<double>(x);
  return total;
}

// --- feasibility ------------------------------------------------------------

std::string Violation::describe() const {
  const char* what = "";
  switch (kind) {
    case Kind::Transmitters: what = "transmitters of satellite"; break;
    case Kind::PairConnections: what = "connections of pair"; break;
    case Kind::Receivers: what = "receivers of station"; break;
    case Kind::Negative: return "negative multiplicity on " + entity_id;
  }
  return std::string(what) + " '" + entity_id + "': used " + std::to_string(used) + ", limit " +
         std::to_string(limit);
}

FeasibilityReport verify_feasible(const QsspInstance& inst, const Assignment& a) {
  const auto& sats = inst.satellites();
  const auto& pairs = inst.pairs();
  const auto& stations = inst.stations();
  std::vector<std::int64_t> sat_load(sats.size(), 0), pair_load(pairs.size(), 0),
      station_load(stations.size(), 0);
  FeasibilityReport report;
  for (const auto& [k, x] : a.x) {
    if (k.satellite < 0 || static_cast<std::size_t>(k.satellite) >= sats.size() || k.pair < 0 ||
        static_cast<std::size_t>(k.pair) >= pairs.size()) {
      throw std::out_of_range("assignment references an unknown satellite or pair");
    }
    if (x < 0) {
      report.violations.push_back({Violation::Kind::Negative,
                                   sats[static_cast<std::size_t>(k.satellite)].id + "/" +
                                       pairs[static_cast<std::size_t>(k.pair)].id,
                                   x, 0});
      continue;
    }
    const auto& p = pairs[static_cast<std::size_t>(k.pair)];
    sat_load[static_cast<std::size_t>(k.satellite)] += x;
    pair_load[static_cast<std::size_t>(k.pair)] += x;
    station_load[static_cast<std::size_t>(p.station_a)] += x;
    station_load[static_cast<std::size_t>(p.station_b)] += x;
  }
  for (std::size_t i = 0; i < sats.size(); ++i) {
    if (sat_load[i] > sats[i].transmitters) {
      report.violations.push_back(
          {Violation::Kind::Transmitters, sats[i].id, sat_load[i], sats[i].transmitters});
    }
  }
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    const auto& cap = pairs[j].max_connections;
    if (!cap.is_unbounded() && pair_load[j] > cap.value()) {
      report.violations.push_back(
          {Violation::Kind::PairConnections, pairs[j].id, pair_load[j], cap.value()});
    }
  }
  for (std::size_t g = 0; g < stations.size(); ++g) {
    const auto& cap = stations[g].receivers;
    if (!cap.is_unbounded() && station_load[g] > cap.value()) {
      report.violations.push_back(
          {Violation::Kind::Receivers, stations[g].id, station_load[g], cap.value()});
    }
  }
  report.feasible = report.violations.empty();
  return report;
}

// --- working state ----------------------------------------------------------

WorkingState::WorkingState(const QsspInstance& inst) : inst_(&inst) {
  for (const auto& s : inst.satellites()) transmitters_.push_back(s.transmitters);
  for (const auto& p : inst.pairs()) pair_caps_.push_back(p.max_connections);
  for (const auto& g : inst.stations()) receivers_.push_back(g.receivers);
  for (const auto& [k, w] : inst.weights()) {
    const auto& p = inst.pairs()[static_cast<std::size_t>(k.pair)];
    if (transmitters_[static_cast<std::size_t>(k.satellite)] > 0 &&
        !pair_caps_[static_cast<std::size_t>(k.pair)].exhausted() &&
        !receivers_[static_cast<std::size_t>(p.station_a)].exhausted() &&
        !receivers_[static_cast<std::size_t>(p.station_b)].exhausted()) {
      live_.insert(live_.end(), k);
    }
  }
}

void WorkingState::update_state(ConnectionKey k) {
  if (!live_.contains(k)) throw std::logic_error("update_state on a connection outside C");
  const auto& pairs = inst_->pairs();
  const auto& p = pairs[static_cast<std::size_t>(k.pair)];
  auto& t = transmitters_[static_cast<std::size_t>(k.satellite)];
  auto& l = pair_caps_[static_cast<std::size_t>(k.pair)];
  auto& ra = receivers_[static_cast<std::size_t>(p.station_a)];
  auto& rb = receivers_[static_cast<std::size_t>(p.station_b)];
  if (t < 1 || l.exhausted() || ra.exhausted() || rb.exhausted()) {
    throw std::logic_error("update_state without residual capacity");
  }

  ++x_[k];
  --t;
  l.consume();
  ra.consume();
  rb.consume();

  const auto n_sats = static_cast<int>(inst_->satellites().size());
  if (t == 0) {
    live_.erase(live_.lower_bound(ConnectionKey{k.satellite, 0}),
                live_.lower_bound(ConnectionKey{k.satellite + 1, 0}));
  }
  if (l.exhausted()) {
    for (int i = 0; i < n_sats; ++i) live_.erase(ConnectionKey{i, k.pair});
  }
  for (const int g : {p.station_a, p.station_b}) {
    if (!receivers_[static_cast<std::size_t>(g)].exhausted()) continue;
    std::erase_if(live_, [&](const ConnectionKey& c) {
      const auto& q = pairs[static_cast<std::size_t>(c.pair)];
      return q.station_a == g || q.station_b == g;
    });
  }
}

Assignment WorkingState::assignment() const {
  Assignment a;
  a.x = x_;
  a.objective = objective(*inst_, a);
  return a;
}

// --- heuristics -------------------------------------------------------------

std::string_view to_string(SolverKind k) {
  switch (k) {
    case SolverKind::Random: return "random";
    case SolverKind::LocalGreedy: return "local_greedy";
    case SolverKind::GlobalGreedy: return "global_greedy";
    case SolverKind::GreedyBackoff: return "greedy_backoff";
    case SolverKind::Exact: return "exact";
  }
  return "?";
}

std::optional<SolverKind> parse_solver(std::string_view name) {
  for (const auto k : {SolverKind::Random, SolverKind::LocalGreedy, SolverKind::GlobalGreedy,
                       SolverKind::GreedyBackoff, SolverKind::Exact}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

Assignment solve_random(const QsspInstance& inst, std::uint64_t seed) {
  WorkingState st(inst);
  SplitMix64 rng(seed);
  while (!st.done()) {
    auto it = st.live().begin();
    std::advance(it, static_cast<std::ptrdiff_t>(rng.index(st.live().size())));
    st.update_state(*it);
  }
  return st.assignment();
}

Assignment solve_local_greedy(const QsspInstance& inst, std::uint64_t seed) {
  WorkingState st(inst);
  SplitMix64 rng(seed);
  while (!st.done()) {
    // F' in pair-id order, and the best satellite of each pair.
    std::map<int, ConnectionKey> best;
    for (const auto& k : st.live()) {
      auto [it, inserted] = best.emplace(k.pair, k);
      // live() iterates satellites in ascending order, so '>' keeps the lowest id on ties.
      if (!inserted && inst.weight(k) > inst.weight(it->second)) it->second = k;
    }
    auto it = best.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(rng.index(best.size())));
    st.update_state(it->second);
  }
  return st.assignment();
}

Assignment solve_global_greedy(const QsspInstance& inst) {
  std::vector<std::pair<ConnectionKey, double>> order(inst.weights().begin(), inst.weights().end());
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  WorkingState st(inst);
  for (const auto& [k, w] : order) {
    while (st.live().contains(k)) st.update_state(k);
    if (st.done()) break;
  }
  return st.assignment();
}

Assignment solve_greedy_backoff(const QsspInstance& inst) {
  WorkingState st(inst);
  const auto& pairs = inst.pairs();
  bool done = false;
  while (!done && !st.done()) {
    // Relaxation without receiver limits: satellites x pairs, b = residual T_i, L_j.
    matching::CapacitatedBipartiteGraph g;
    std::map<int, int> left_of, right_of;
    std::vector<ConnectionKey> keys;
    std::int64_t total_t = 0;
    for (const auto& k : st.live()) {
      if (left_of.emplace(k.satellite, static_cast<int>(left_of.size())).second) {
        g.left_capacity.push_back(st.residual_transmitters(k.satellite));
        total_t += st.residual_transmitters(k.satellite);
      }
    }
    for (const auto& k : st.live()) {
      if (right_of.emplace(k.pair, static_cast<int>(right_of.size())).second) {
        g.right_capacity.push_back(0);
      }
    }
    for (const auto& [pair, r] : right_of) {
      g.right_capacity[static_cast<std::size_t>(r)] = st.residual_pair(pair).value_or(total_t);
    }
    for (const auto& k : st.live()) {
      g.edges.push_back({left_of.at(k.satellite), right_of.at(k.pair), inst.weight(k)});
      keys.push_back(k);
    }
    const auto bm = matching::max_weight_b_matching(g);

    std::map<ConnectionKey, std::int64_t> tentative;
    for (std::size_t e = 0; e < keys.size(); ++e) {
      if (bm.multiplicity[e] > 0) tentative[keys[e]] = bm.multiplicity[e];
    }
    std::vector<std::int64_t> load(inst.stations().size(), 0);
    for (const auto& [k, m] : tentative) {
      load[static_cast<std::size_t>(pairs[static_cast<std::size_t>(k.pair)].station_a)] += m;
      load[static_cast<std::size_t>(pairs[static_cast<std::size_t>(k.pair)].station_b)] += m;
    }
    auto over = [&](int s) {
      const auto cap = st.residual_receivers(s);
      return !cap.is_unbounded() && load[static_cast<std::size_t>(s)] > cap.value();
    };

    done = true;
    while (true) {
      // Lowest-weight unit touching an over-subscribed station; ties by (i,j).
      std::optional<ConnectionKey> victim;
      for (const auto& [k, m] : tentative) {
        const auto& p = pairs[static_cast<std::size_t>(k.pair)];
        if (!over(p.station_a) && !over(p.station_b)) continue;
        if (!victim || inst.weight(k) < inst.weight(*victim)) victim = k;
      }
      if (!victim) break;
      done = false;
      const auto& p = pairs[static_cast<std::size_t>(victim->pair)];
      --load[static_cast<std::size_t>(p.station_a)];
      --load[static_cast<std::size_t>(p.station_b)];
      if (--tentative[*victim] == 0) tentative.erase(*victim);
    }

    for (const auto& [k, m] : tentative) {
      for (std::int64_t u = 0; u < m; ++u) st.update_state(k);
    }
  }
  return st.assignment();
}

// --- exact ------------------------------------------------------------------

namespace {

class BranchAndBound {
 public:
  BranchAndBound(const QsspInstance& inst, std::int64_t budget) : inst_(inst), budget_(budget) {
    for (const auto& [k, w] : inst.weights()) conns_.push_back({k, w});
    for (const auto& s : inst.satellites()) t_.push_back(s.transmitters);
    for (const auto& p : inst.pairs()) l_.push_back(p.max_connections);
    for (const auto& g : inst.stations()) r_.push_back(g.receivers);
    x_.assign(conns_.size(), 0);
    best_x_ = x_;
  }

  Assignment run() {
    search(0, 0.0);
    Assignment a;
    for (std::size_t c = 0; c < conns_.size(); ++c) {
      if (best_x_[c] > 0) a.x[conns_[c].key] = best_x_[c];
    }
    a.objective = objective(inst_, a);
    return a;
  }

 private:
  struct Conn {
    ConnectionKey key;
    double w;
  };

  std::int64_t upper(std::size_t c) const {
    const auto& k = conns_[c].key;
    const auto& p = inst_.pairs()[static_cast<std::size_t>(k.pair)];
    std::int64_t ub = t_[static_cast<std::size_t>(k.satellite)];
    for (const auto& cap : {l_[static_cast<std::size_t>(k.pair)],
                            r_[static_cast<std::size_t>(p.station_a)],
                            r_[static_cast<std::size_t>(p.station_b)]}) {
      ub = std::min(ub, cap.value_or(ub));
    }
    return ub;
  }

  // Optimistic completion value: each remaining connection at its own upper
  // bound, capped by each satellite's residual transmitters times its best weight.
  double bound(std::size_t from) const {
    double per_conn = 0.0;
    std::map<int, double> best_w;
    for (std::size_t c = from; c < conns_.size(); ++c) {
      const auto ub = upper(c);
      if (ub <= 0) continue;
      per_conn += conns_[c].w * static_cast<double>(ub);
      auto& b = best_w[conns_[c].key.satellite];
      b = std::max(b, conns_[c].w);
    }
    double per_sat = 0.0;
    for (const auto& [i, w] : best_w) per_sat += w * static_cast<double>(t_[static_cast<std::size_t>(i)]);
    return std::min(per_conn, per_sat);
  }

  void apply(std::size_t c, std::int64_t m) {
    const auto& k = conns_[c].key;
    const auto& p = inst_.pairs()[static_cast<std::size_t>(k.pair)];
    t_[static_cast<std::size_t>(k.satellite)] -= m;
    l_[static_cast<std::size_t>(k.pair)].consume(m);
    r_[static_cast<std::size_t>(p.station_a)].consume(m);
    r_[static_cast<std::size_t>(p.station_b)].consume(m);
  }

  void undo(std::size_t c, std::int64_t m) {
    const auto& k = conns_[c].key;
    const auto& p = inst_.pairs()[static_cast<std::size_t>(k.pair)];
    auto restore = [m](Capacity& cap) {
      if (!cap.is_unbounded()) cap = Capacity{cap.value() + m};
    };
    t_[static_cast<std::size_t>(k.satellite)] += m;
    restore(l_[static_cast<std::size_t>(k.pair)]);
    restore(r_[static_cast<std::size_t>(p.station_a)]);
    restore(r_[static_cast<std::size_t>(p.station_b)]);
  }

  void search(std::size_t c, double value) {
    if (++nodes_ > budget_) {
      throw SolverRefusal("exact solver refused: search exceeded " + std::to_string(budget_) +
                          " nodes (" + std::to_string(conns_.size()) + " connections)");
    }
    if (value > best_) {
      best_ = value;
      best_x_ = x_;
    }
    if (c == conns_.size()) return;
    if (value + bound(c) <= best_) return;
    for (std::int64_t m = upper(c); m >= 0; --m) {
      if (m > 0) apply(c, m);
      x_[c] = m;
      search(c + 1, value + conns_[c].w * static_cast<double>(m));
      x_[c] = 0;
      if (m > 0) undo(c, m);
    }
  }

  const QsspInstance& inst_;
  std::int64_t budget_;
  std::int64_t nodes_ = 0;
  std::vector<Conn> conns_;
  std::vector<std::int64_t> t_;
  std::vector<Capacity> l_;
  std::vector<Capacity> r_;
  std::vector<std::int64_t> x_;
  std::vector<std::int64_t> best_x_;
  double best_ = 0.0;
};

}  // namespace

Assignment solve_exact(const QsspInstance& inst, std::int64_t node_budget) {
  return BranchAndBound(inst, node_budget).run();
}

Assignment solve(const QsspInstance& inst, SolverKind kind, std::uint64_t seed) {
  switch (kind) {
    case SolverKind::Random: return solve_random(inst, seed);
    case SolverKind::LocalGreedy: return solve_local_greedy(inst, seed);
    case SolverKind::GlobalGreedy: return solve_global_greedy(inst);
    case SolverKind::GreedyBackoff: return solve_greedy_backoff(inst);
    case SolverKind::Exact: return solve_exact(inst);
  }
  throw std::invalid_argument("unknown solver");
}

// --- 3-dimensional matching ---------------------------------------------------

void ThreeDMInstance::validate() const {
  const std::array<const std::vector<std::string>*, 3> sets{&v1, &v2, &v3};
  std::array<std::set<std::string>, 3> members;
  for (std::size_t s = 0; s < 3; ++s) {
    for (const auto& v : *sets[s]) {
      if (!members[s].insert(v).second) {
        throw std::invalid_argument("duplicate vertex '" + v + "' in V" + std::to_string(s + 1));
      }
    }
  }
  std::set<std::array<std::string, 3>> seen;
  for (const auto& e : edges) {
    for (std::size_t s = 0; s < 3; ++s) {
      if (!members[s].contains(e[s])) {
        throw std::invalid_argument("hyperedge component '" + e[s] + "' is not in V" +
                                    std::to_string(s + 1));
      }
    }
    if (!seen.insert(e).second) throw std::invalid_argument("duplicate hyperedge");
  }
}

Reduction reduce_3dm_to_qssp(const ThreeDMInstance& h) {
  h.validate();
  std::set<std::string> sats, stations, pairs;
  QsspInstance::Builder b;
  auto pid = [](const std::array<std::string, 3>& e) { return "v2:" + e[1] + "|v3:" + e[2]; };
  for (const auto& e : h.edges) {
    if (sats.insert("v1:" + e[0]).second) b.satellite("v1:" + e[0], 1);
    if (stations.insert("v2:" + e[1]).second) b.station("v2:" + e[1], Capacity{1});
    if (stations.insert("v3:" + e[2]).second) b.station("v3:" + e[2], Capacity{1});
    if (pairs.insert(pid(e)).second) b.pair(pid(e), "v2:" + e[1], "v3:" + e[2], Capacity{1});
    b.weight("v1:" + e[0], pid(e), 1.0);
  }
  Reduction out{b.build(), {}};
  for (const auto& e : h.edges) {
    out.correspondence.push_back({*out.instance.satellite_index("v1:" + e[0]),
                                  *out.instance.pair_index(pid(e))});
  }
  return out;
}

int brute_force_3dm(const ThreeDMInstance& h) {
  h.validate();
  if (h.edges.size() > kMax3dmEdges) {
    throw SolverRefusal("brute-force 3D matching is limited to " + std::to_string(kMax3dmEdges) +
                        " hyperedges");
  }
  int best = 0;
  const auto m = h.edges.size();
  for (std::uint32_t mask = 0; mask < (1U << m); ++mask) {
    const int size = std::popcount(mask);
    if (size <= best) continue;
    std::array<std::set<std::string>, 3> used;
    bool ok = true;
    for (std::size_t k = 0; k < m && ok; ++k) {
      if (!(mask & (1U << k))) continue;
      for (std::size_t s = 0; s < 3 && ok; ++s) ok = used[s].insert(h.edges[k][s]).second;
    }
    if (ok) best = size;
  }
  return best;
}

}  // namespace qssp::scheduler
