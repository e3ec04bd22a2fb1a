// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and time budgets are fixed below.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <deque>
#include <vector>

#include "dagcast/capacity.hpp"
#include "dagcast/multiclass.hpp"
#include "dagcast/policy.hpp"
#include "dagcast/scenarios.hpp"
#include "dagcast/sim.hpp"
#include "dagcast/trees.hpp"
#include "support/invariant_checker.hpp"
#include "support/oracles.hpp"

namespace {

using namespace dagcast;
using Clock = std::chrono::steady_clock;

constexpr double kLpTolerance = 1e-9;
constexpr double kPropertyTolerance = 1e-6;
constexpr double kGoldenStepBudgetMs = 1.0;
constexpr double kK4CapacityBudgetS = 1.0;
constexpr double kLpPropertyBudgetS = 60.0;
constexpr double kPackingPropertyBudgetS = 120.0;
constexpr std::int64_t kHorizon = 100000;
constexpr std::uint64_t kSeed = 1;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

// Runs shared by the throughput, delay and invariant criteria.
struct TracedRun {
  std::string label;
  RunMetrics metrics;
  dagcast::testing::InvariantChecker checker;
};

std::deque<TracedRun> g_runs;  // stable addresses across emplace_back

const RunMetrics& traced_run(const std::string& label, const Scenario& s, const PolicyConfig& policy, double rate) {
  TracedRun& r = g_runs.emplace_back();
  r.label = label;
  RunOptions options;
  options.limits = s.limits;
  options.observer = &r.checker;
  r.metrics = run(s.network, policy, rate, kHorizon, kSeed, options);
  return r.metrics;
}

Outcome golden_slot() {
  Outcome out;
  constexpr NodeId r = 0, b = 1, a = 2, c = 3;
  const Network& net = scenario("k4").network;
  std::vector<std::int64_t> counters(4);
  counters[r] = 10;
  counters[a] = 3;
  counters[b] = 3;
  counters[c] = 2;
  PolicyState state(counters, r);
  const auto start = Clock::now();
  const ActivationSet acts = enumerate_activations(net);
  DeficitView view;
  const SlotDecision d = policy_step(state, net, acts, 1, 0, &view);
  const double ms = seconds_since(start) * 1e3;

  out.require(view.deficit == std::vector<std::int64_t>{7, 7, 8, 0, 1, 1}, "Q");
  out.require(view.dependents[r] == std::vector<NodeId>{a}, "K_r");
  out.require(view.dependents[a] == std::vector<NodeId>{b, c}, "K_a");
  out.require(view.min_deficit[a] == 7 && view.min_deficit[b] == 0 && view.min_deficit[c] == 1, "X");
  out.require(view.weight == std::vector<std::int64_t>{6, 0, 1, 0, 1, 1}, "W");
  out.require(d.activation.edges == std::vector<EdgeId>{0, 5} && d.activation_weight == 7, "activation");
  out.require(state.received(r) == 11 && state.received(a) == 4 && state.received(b) == 3 && state.received(c) == 3,
              "R'");
  out.require(ms < kGoldenStepBudgetMs, "took " + std::to_string(ms) + " ms");
  out.detail = out.pass ? "W=(6,0,1,0,1,1), activation {ra,bc} weight 7, R'=(11,4,3,3), " + std::to_string(ms) + " ms"
                        : out.detail;
  return out;
}

Outcome minimizer_check() {
  Outcome out;
  const NodeId a = 0, b = 1, c = 2, j = 3;
  const Network net(4, a, Interference::wired, {{a, b}, {b, c}, {a, j}, {b, j}, {c, j}});
  PolicyState state({18, 15, 14, 10}, a);
  DeficitView view = compute_deficits(state, net);
  find_deficit_minimizers(view, net);
  out.require(view.min_deficit[j] == 4, "X_j=" + std::to_string(view.min_deficit[j]));
  out.require(view.minimizer[j] == c, "i*=" + std::to_string(view.minimizer[j]));
  if (out.pass) out.detail = "X_j=4, i*=c";
  return out;
}

Outcome k4_capacity() {
  Outcome out;
  const Network& net = scenario("k4").network;
  const auto start = Clock::now();
  const CapacityResult r = lambda_dag(net);
  const double bound = cut_bound_oracle(net);
  const std::size_t support = sparse_support(r).support.size();
  const double s = seconds_since(start);
  out.require(std::abs(r.lambda - 0.5) <= kLpTolerance, "lambda_dag=" + std::to_string(r.lambda));
  out.require(std::abs(bound - 0.5) <= kLpTolerance, "cut bound=" + std::to_string(bound));
  out.require(support <= 7, "support size " + std::to_string(support));
  out.require(s < kK4CapacityBudgetS, "took " + std::to_string(s) + " s");
  if (out.pass) out.detail = "lambda=0.5, cut bound=0.5, support size " + std::to_string(support);
  return out;
}

Outcome lp_equals_cut_bound() {
  Outcome out;
  std::mt19937_64 gen(20240601);
  dagcast::testing::RandomDagOptions options;  // <= 6 nodes, <= 10 edges, caps {1,2,3}, primary
  double worst = 0.0;
  const auto start = Clock::now();
  for (int i = 0; i < 200; ++i) {
    const Network net = dagcast::testing::random_rooted_dag(gen, options);
    const double gap = std::abs(lambda_dag(net).lambda - cut_bound_oracle(net));
    worst = std::max(worst, gap);
    if (gap > kPropertyTolerance) out.require(false, "instance " + std::to_string(i) + " gap " + std::to_string(gap));
  }
  const double s = seconds_since(start);
  out.require(s < kLpPropertyBudgetS, "took " + std::to_string(s) + " s");
  if (out.pass) out.detail = "200 instances, max gap " + std::to_string(worst) + ", " + std::to_string(s) + " s";
  return out;
}

Outcome packing_equals_in_degree() {
  Outcome out;
  std::mt19937_64 gen(7071);
  dagcast::testing::RandomDagOptions options;
  options.capacities = {1.0};
  options.parallel_edges = true;
  options.max_edges = 12;
  const auto start = Clock::now();
  for (int i = 0; i < 200; ++i) {
    const Network net = dagcast::testing::random_rooted_dag(gen, options);
    const TreePacking p = max_disjoint_packing(net);
    const int k = min_in_degree(net).degree;
    bool valid = is_edge_disjoint(p);
    for (const auto& t : p.trees) valid = valid && dagcast::testing::check_arborescence(net, t.edges);
    if (static_cast<int>(p.size()) != k || !valid) {
      out.require(false, "instance " + std::to_string(i) + ": packing " + std::to_string(p.size()) + " vs " +
                             std::to_string(k));
    }
  }
  const double s = seconds_since(start);
  out.require(s < kPackingPropertyBudgetS, "took " + std::to_string(s) + " s");
  if (out.pass) out.detail = "200 instances, " + std::to_string(s) + " s";
  return out;
}

Outcome cycle4_suite() {
  Outcome out;
  const Network& net = scenario("cycle4").network;
  const double bound = cut_bound_oracle(net);
  out.require(bound == 2.0, "cut bound " + std::to_string(bound));
  const TreePacking p = max_disjoint_packing(net);
  out.require(p.size() == 2 && is_edge_disjoint(p), "packing size " + std::to_string(p.size()));
  const std::vector<ClassSpec> two{make_class(net, {0, 1, 2, 3}), make_class(net, {0, 3, 1, 2})};
  const double pair = multiclass_capacity(net, class_edge_sets(two)).total;
  out.require(std::abs(pair - 2.0) <= kLpTolerance, "two classes " + std::to_string(pair));
  std::vector<NodeId> rest{1, 2, 3};
  double worst = 0.0;
  do {
    std::vector<NodeId> perm{0, rest[0], rest[1], rest[2]};
    const std::vector<ClassSpec> one{make_class(net, perm)};
    worst = std::max(worst, multiclass_capacity(net, class_edge_sets(one)).total);
  } while (std::next_permutation(rest.begin(), rest.end()));
  out.require(worst <= 5.0 / 3.0 + kLpTolerance, "single class " + std::to_string(worst));
  if (out.pass) out.detail = "cut bound 2, 2 disjoint trees, two classes 2, best single class " + std::to_string(worst);
  return out;
}

Outcome throughput_optimality() {
  Outcome out;
  const Scenario& k4 = scenario("k4");
  const Scenario& c4 = scenario("cycle4");
  const RunMetrics& low = traced_run("k4 pi_star 0.45", k4, PiStarPolicy{}, 0.45);
  const RunMetrics& high = traced_run("k4 pi_star 0.55", k4, PiStarPolicy{}, 0.55);
  const RunMetrics& multi =
      traced_run("cycle4 multiclass 1.9", c4, MulticlassPolicy{2, {{0, 1, 2, 3}, {0, 3, 1, 2}}}, 1.9);
  out.require(low.throughput >= 0.44, "k4@0.45 throughput " + std::to_string(low.throughput));
  out.require(low.instability_slope < 0.001, "k4@0.45 slope " + std::to_string(low.instability_slope));
  out.require(high.instability_slope > 0.01, "k4@0.55 slope " + std::to_string(high.instability_slope));
  out.require(multi.throughput >= 1.85, "cycle4@1.9 throughput " + std::to_string(multi.throughput));
  if (out.pass) {
    out.detail = "k4@0.45 thr " + std::to_string(low.throughput) + " slope " + std::to_string(low.instability_slope) +
                 "; k4@0.55 slope " + std::to_string(high.instability_slope) + "; cycle4@1.9 thr " +
                 std::to_string(multi.throughput);
  }
  return out;
}

Outcome mesh_tree_count() {
  Outcome out;
  const std::uint64_t n = count_arborescences(scenario("mesh10").network);
  out.require(n == 362880, "count " + std::to_string(n));
  if (out.pass) out.detail = "362880";
  return out;
}

Outcome mesh_delay_trends() {
  Outcome out;
  const Scenario& mesh = scenario("mesh10");
  const RunMetrics& fast = traced_run("mesh10 pi_star 2.7", mesh, PiStarPolicy{}, 2.7);
  const RunMetrics& single =
      traced_run("mesh10 tree:1 0.9", mesh, TreeBaselinePolicy{{mesh.trees.front()}}, 0.9);
  const RunMetrics& opt = traced_run("mesh10 pi_star 1.9", mesh, PiStarPolicy{}, 1.9);
  const RunMetrics& five = traced_run("mesh10 tree:5 1.9", mesh, TreeBaselinePolicy{mesh.trees}, 1.9);
  out.require(fast.mean_delay < 100.0, "pi_star@2.7 delay " + std::to_string(fast.mean_delay));
  out.require(single.instability_slope > 0.01, "tree:1@0.9 slope " + std::to_string(single.instability_slope));
  out.require(opt.mean_delay < five.mean_delay,
              "pi_star@1.9 " + std::to_string(opt.mean_delay) + " vs tree:5 " + std::to_string(five.mean_delay));
  if (out.pass) {
    out.detail = "pi_star@2.7 delay " + std::to_string(fast.mean_delay) + "; tree:1@0.9 slope " +
                 std::to_string(single.instability_slope) + "; delay@1.9 pi_star " + std::to_string(opt.mean_delay) +
                 " < tree:5 " + std::to_string(five.mean_delay);
  }
  return out;
}

Outcome invariant_suite() {
  Outcome out;
  std::int64_t slots = 0;
  std::int64_t trace_checks = 0;
  if (g_runs.size() != 7) out.require(false, "expected 7 traced runs, saw " + std::to_string(g_runs.size()));
  for (const auto& r : g_runs) {
    slots += r.checker.slots();
    trace_checks += r.checker.trace_checks();
    if (!r.checker.clean()) {
      out.require(false, r.label + ": " + r.checker.messages().front());
    }
  }
  if (out.pass) {
    out.detail = std::to_string(g_runs.size()) + " runs, " + std::to_string(slots) + " slots, " +
                 std::to_string(trace_checks) + " trace-inequality checks";
  }
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  // Criterion 10 inspects the runs made by 7 and 9, so it comes last.
  const std::vector<Criterion> criteria{
      {1, "golden pi* slot on k4", golden_slot},
      {2, "deficit minimizer on a three-parent node", minimizer_check},
      {3, "k4 capacity and support size", k4_capacity},
      {4, "lambda_dag equals the cut bound on 200 random DAGs", lp_equals_cut_bound},
      {5, "tree packing equals min in-degree on 200 random DAGs", packing_equals_in_degree},
      {6, "cycle4 capacity, packing and class bounds", cycle4_suite},
      {7, "throughput optimality at T=1e5", throughput_optimality},
      {8, "mesh10 arborescence count", mesh_tree_count},
      {9, "mesh10 delay and stability trends at T=1e5", mesh_delay_trends},
      {10, "invariants over all runs of 7 and 9", invariant_suite},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2d %s  %s (%s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
