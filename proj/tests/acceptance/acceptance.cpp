// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "../oracles.hpp"
#include "qssp/channel.hpp"
#include "qssp/harness.hpp"
#include "qssp/io.hpp"
#include "qssp/matching.hpp"
#include "qssp/orbital.hpp"
#include "qssp/scheduler.hpp"

#include <unistd.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace qssp;
using scheduler::SolverKind;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

struct Criterion {
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

constexpr std::array kHeuristics{SolverKind::Random, SolverKind::LocalGreedy, SolverKind::GlobalGreedy,
                                 SolverKind::GreedyBackoff};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

bool approx(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

Outcome solver_vs_oracle() {
  Outcome o;
  std::mt19937_64 rng(500);
  for (int k = 0; k < 500 && o.pass; ++k) {
    const auto p = oracle::random_problem(rng);
    const auto inst = oracle::to_instance(p);
    const double expected = oracle::enumerate_optimum(p);
    const double got = scheduler::solve_exact(inst).objective;
    o.require(got == expected, "instance " + std::to_string(k) + ": exact " + fmt(got) + " vs oracle " + fmt(expected));
    for (const auto kind : kHeuristics) {
      const double h = scheduler::solve(inst, kind, static_cast<std::uint64_t>(k)).objective;
      o.require(h <= got, "instance " + std::to_string(k) + ": " + std::string(scheduler::to_string(kind)) +
                              " exceeds exact");
    }
  }
  if (o.pass) o.detail = "500 instances";
  return o;
}

Outcome backoff_unbounded() {
  Outcome o;
  std::mt19937_64 rng(200);
  oracle::ProblemShape shape;
  shape.unbounded_receivers = true;
  for (int k = 0; k < 200 && o.pass; ++k) {
    const auto inst = oracle::to_instance(oracle::random_problem(rng, shape));
    const double b = scheduler::solve_greedy_backoff(inst).objective;
    const double e = scheduler::solve_exact(inst).objective;
    o.require(b == e, "instance " + std::to_string(k) + ": backoff " + fmt(b) + " vs exact " + fmt(e));
  }
  if (o.pass) o.detail = "200 instances";
  return o;
}

Outcome three_dm_equivalence() {
  Outcome o;
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200 && o.pass; ++k) {
    const auto h = oracle::random_hypergraph(rng);
    const int brute = scheduler::brute_force_3dm(h);
    const double via = scheduler::solve_exact(scheduler::reduce_3dm_to_qssp(h).instance).objective;
    const int independent = oracle::max_3d_matching(h);
    o.require(brute == independent, "hypergraph " + std::to_string(k) + ": brute force disagrees with oracle");
    o.require(via == static_cast<double>(brute),
              "hypergraph " + std::to_string(k) + ": reduction " + fmt(via) + " vs " + std::to_string(brute));
  }
  if (o.pass) o.detail = "200 hypergraphs";
  return o;
}

Outcome b_matching() {
  Outcome o;
  std::mt19937_64 rng(5000);
  for (int k = 0; k < 500 && o.pass; ++k) {
    const auto g = oracle::random_bipartite(rng, k % 2 == 0);
    const double got = matching::max_weight_b_matching(g).total_weight;
    const double expected = oracle::brute_force_b_matching(g);
    o.require(std::abs(got - expected) <= 1e-9, "graph " + std::to_string(k) + ": " + fmt(got, 12) + " vs " +
                                                    fmt(expected, 12));
  }
  if (o.pass) o.detail = "500 graphs";
  return o;
}

Outcome geometry() {
  Outcome o;
  const double r = orbital::kEarthRadius;
  const double fp = orbital::footprint_radius(550e3, 20.0);
  o.require(std::abs(fp - 1125e3) <= 10e3, "footprint " + fmt(fp / 1e3, 6) + " km");
  o.require(approx(2 * fp, 2250e3, 0.05), "pair separation " + fmt(2 * fp / 1e3, 6) + " km");
  const auto shell = orbital::generate_walker_constellation(1, 1, 53.0, 550e3, 0, 0.0);
  const double period_min = shell.front().period_s() / 60.0;
  const double kepler_min = 2 * std::numbers::pi * std::sqrt(std::pow(r + 550e3, 3) / orbital::kEarthMu) / 60.0;
  o.require(period_min >= 94.0 && period_min <= 102.0, "period " + fmt(period_min) + " min");
  o.require(approx(period_min, kepler_min, 1e-9), "period disagrees with Kepler's third law");
  if (o.pass) o.detail = "footprint " + fmt(fp / 1e3, 6) + " km, period " + fmt(period_min) + " min";
  return o;
}

Outcome photon_statistics() {
  Outcome o;
  for (double ns : {0.01, 0.078, 0.5, 1.0}) {
    double sum = 0.0;
    for (int n = 0; n <= 300; ++n) sum += channel::photon_number_dist(ns, n);
    o.require(std::abs(sum - 1.0) <= 1e-12, "sum for N_s=" + fmt(ns) + " is " + fmt(sum, 17));
  }
  const double direct = 1.0 / ((1.078) * (1.078));
  const double p0 = channel::photon_number_dist(0.078, 0);
  o.require(std::abs(p0 - direct) <= 1e-12, "p(0) " + fmt(p0, 17) + " vs " + fmt(direct, 17));
  if (o.pass) o.detail = "p(0; 0.078) = " + fmt(p0, 10);
  return o;
}

Outcome feasibility_fuzz() {
  Outcome o;
  std::mt19937_64 rng(1000);
  oracle::ProblemShape shape;
  shape.max_satellites = 8;
  shape.max_pairs = 8;
  shape.max_stations = 6;
  shape.max_capacity = 3;
  for (int k = 0; k < 1000 && o.pass; ++k) {
    shape.integer_weights = k % 2 == 0;
    const auto p = oracle::random_problem(rng, shape);
    const auto inst = oracle::to_instance(p);
    for (const auto kind : kHeuristics) {
      const auto a = scheduler::solve(inst, kind, static_cast<std::uint64_t>(k));
      o.require(scheduler::verify_feasible(inst, a).feasible && oracle::feasible(p, oracle::by_index(inst, a)),
                "instance " + std::to_string(k) + ": " + std::string(scheduler::to_string(kind)) + " infeasible");
    }
  }
  if (o.pass) o.detail = "1000 instances x 4 heuristics";
  return o;
}

// Lower median of the episode lengths recorded in a longevity histogram.
int median_episode(const harness::LongevityHistogram& h) {
  std::int64_t total = 0;
  for (const auto& [_, c] : h) total += c;
  std::int64_t seen = 0;
  for (const auto& [len, c] : h) {
    seen += c;
    if (2 * seen >= total) return len;
  }
  return 0;
}

const char* kScenario = QSSP_DATA_DIR "/scenarios/synthetic_walker.json";

Outcome trends() {
  Outcome o;
  auto cfg = harness::ScenarioConfig::load(kScenario);
  std::map<SolverKind, harness::MetricsSeries> runs;
  std::map<SolverKind, double> rate;
  for (const auto kind : kHeuristics) {
    cfg.solver = kind;
    runs[kind] = harness::run_scenario(cfg);
    rate[kind] = harness::aggregate_metrics(runs[kind]).mean_rate;
  }
  const double backoff = rate[SolverKind::GreedyBackoff], global = rate[SolverKind::GlobalGreedy];
  const double random = rate[SolverKind::Random], local = rate[SolverKind::LocalGreedy];

  cfg.solver = SolverKind::GreedyBackoff;
  cfg.receivers = Capacity{5};
  const double r5 = harness::aggregate_metrics(harness::run_scenario(cfg)).mean_rate;
  const double gain = r5 / backoff - 1.0;

  const auto& bs = runs[SolverKind::GreedyBackoff];
  const int med_backoff = median_episode(bs.longevity);
  const int med_local = median_episode(runs[SolverKind::LocalGreedy].longevity);

  std::ostringstream d;
  d << "rates (Mebit/s) backoff " << fmt(backoff / 1e6) << ", global " << fmt(global / 1e6) << ", random "
    << fmt(random / 1e6) << ", local " << fmt(local / 1e6) << "; R_g=5 gain " << fmt(100 * gain, 3) << "%";
  if (bs.day_fidelity && bs.night_fidelity) {
    d << "; fidelity day " << fmt(*bs.day_fidelity) << " night " << fmt(*bs.night_fidelity);
  }
  d << "; median episode backoff " << med_backoff << " local " << med_local;

  o.require(approx(backoff, global, 0.05), "backoff not within 5% of global greedy");
  o.require(global >= random, "global greedy below random");
  o.require(random >= local, "random below local greedy");
  o.require(gain >= 0.10, "R_g=5 gain under 10%");
  o.require(bs.day_fidelity && bs.night_fidelity && *bs.day_fidelity < *bs.night_fidelity,
            "day fidelity not below night fidelity");
  o.require(med_backoff >= med_local, "backoff median episode shorter than local greedy");
  o.detail = (o.pass ? "" : o.detail + " | ") + d.str();
  return o;
}

Outcome determinism() {
  Outcome o;
  const auto root = fs::temp_directory_path() / ("qssp_acceptance_" + std::to_string(::getpid()));
  auto cfg = harness::ScenarioConfig::load(kScenario);
  for (const auto kind : {SolverKind::GreedyBackoff, SolverKind::Random}) {
    cfg.solver = kind;
    harness::export_csv(harness::run_scenario(cfg), root / "first");
    harness::export_csv(harness::run_scenario(cfg), root / "second");
    for (const char* f : {"per_slot.csv", "assignments.csv", "longevity.csv", "stations.csv"}) {
      o.require(read_text_file(root / "first" / f) == read_text_file(root / "second" / f),
                std::string(scheduler::to_string(kind)) + " " + f + " differs");
    }
  }
  fs::remove_all(root);
  if (o.pass) o.detail = "greedy_backoff and random, 4 CSVs each";
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"solver-vs-oracle", 30, solver_vs_oracle},
      {"backoff-optimal-unbounded-receivers", 30, backoff_unbounded},
      {"3dm-reduction-equivalence", 60, three_dm_equivalence},
      {"b-matching-optimality", 30, b_matching},
      {"geometry", 5, geometry},
      {"photon-statistics", 5, photon_statistics},
      {"feasibility-fuzzing", 60, feasibility_fuzz},
      {"trend-reproduction", 600, trends},
      {"determinism", 600, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) o.require(false, "runtime " + fmt(secs) + " s over budget " + fmt(c.budget_s) + " s");
    failed += !o.pass;
    std::printf("%s %-38s %8.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
