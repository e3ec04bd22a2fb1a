#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "dagcast/error.hpp"
#include "dagcast/policy.hpp"
#include "dagcast/scenarios.hpp"
#include "support/oracles.hpp"

namespace dagcast {
namespace {

constexpr NodeId kR = 0, kB = 1, kA = 2, kC = 3;
constexpr EdgeId kRA = 0, kRB = 1, kRC = 2, kAB = 3, kAC = 4, kBC = 5;

std::vector<std::int64_t> k4_counters(std::int64_t r, std::int64_t a, std::int64_t b, std::int64_t c) {
  std::vector<std::int64_t> v(4);
  v[kR] = r;
  v[kA] = a;
  v[kB] = b;
  v[kC] = c;
  return v;
}

DeficitView full_view(const PolicyState& state, const Network& net) {
  DeficitView view = compute_deficits(state, net);
  find_deficit_minimizers(view, net);
  compute_weights(view, net);
  return view;
}

TEST(Deficits, SingleSlotOnK4) {
  const Network& net = scenario("k4").network;
  PolicyState state(k4_counters(10, 3, 3, 2), kR);
  const DeficitView view = full_view(state, net);
  EXPECT_EQ(view.deficit, (std::vector<std::int64_t>{7, 7, 8, 0, 1, 1}));
  EXPECT_EQ(view.minimizer[kA], kR);
  EXPECT_EQ(view.minimizer[kB], kA);
  EXPECT_EQ(view.minimizer[kC], kA);
  EXPECT_EQ(view.dependents[kR], (std::vector<NodeId>{kA}));
  EXPECT_EQ(view.dependents[kA], (std::vector<NodeId>{kB, kC}));
  EXPECT_EQ(view.min_deficit[kA], 7);
  EXPECT_EQ(view.min_deficit[kB], 0);
  EXPECT_EQ(view.min_deficit[kC], 1);
  EXPECT_EQ(view.weight, (std::vector<std::int64_t>{6, 0, 1, 0, 1, 1}));

  const ActivationSet acts = enumerate_activations(net);
  const WeightedActivation best = max_weight_activation(view.weight, net, acts);
  EXPECT_EQ(best.activation.edges, (std::vector<EdgeId>{kRA, kBC}));
  EXPECT_EQ(best.weight, 7);

  const SlotDecision d = policy_step(state, net, acts, 1, 0);
  EXPECT_EQ(d.activation.edges, (std::vector<EdgeId>{kRA, kBC}));
  EXPECT_EQ(std::vector<std::int64_t>(state.received().begin(), state.received().end()), k4_counters(11, 4, 3, 3));
  EXPECT_EQ(d.transfers, (std::vector<Transfer>{{kRA, 4, 1}, {kBC, 3, 1}}));
}

TEST(Deficits, MinimizerPicksSmallestDeficit) {
  // j has in-neighbors a, b, c holding 18, 15, 14 packets; j holds 10.
  const NodeId a = 0, b = 1, c = 2, j = 3;
  const Network net(4, a, Interference::wired, {{a, b}, {b, c}, {a, j}, {b, j}, {c, j}});
  PolicyState state({18, 15, 14, 10}, a);
  DeficitView view = compute_deficits(state, net);
  find_deficit_minimizers(view, net);
  EXPECT_EQ(view.min_deficit[j], 4);
  EXPECT_EQ(view.minimizer[j], c);
}

TEST(Deficits, TiesGoToHighestNodeId) {
  const Network& net = scenario("k4").network;
  PolicyState state(4, kR);
  DeficitView view = compute_deficits(state, net);
  find_deficit_minimizers(view, net);
  EXPECT_EQ(view.minimizer[kB], kA);  // in-neighbors r and a
  EXPECT_EQ(view.minimizer[kC], kA);  // in-neighbors r, b and a
}

TEST(Deficits, NegativeDeficitIsAnInvariantViolation) {
  const Network& net = scenario("k4").network;
  PolicyState state(k4_counters(1, 2, 0, 0), kR);
  EXPECT_THROW(compute_deficits(state, net), InvariantViolation);
}

TEST(Deficits, UnrootedNodeIsStructural) {
  const Network net(3, 0, Interference::wired, {{0, 1}});
  PolicyState state(3, 0);
  DeficitView view = compute_deficits(state, net);
  EXPECT_THROW(find_deficit_minimizers(view, net), StructuralError);
}

TEST(Weights, PositivePartOfExcessOverDependents) {
  // chain r -> a -> b with X_a = 2, X_b = 5: W into a = (2 - 5)^+ = 0.
  const Network net(3, 0, Interference::wired, {{0, 1}, {1, 2}});
  PolicyState state({7, 5, 0}, 0);
  const DeficitView view = full_view(state, net);
  EXPECT_EQ(view.weight, (std::vector<std::int64_t>{0, 5}));
}

TEST(MaxWeight, FirstMaximizerInEnumerationOrderWins) {
  const Network& net = scenario("k4").network;
  const ActivationSet acts = enumerate_activations(net);
  const std::vector<std::int64_t> flat(6, 1);
  const WeightedActivation best = max_weight_activation(flat, net, acts);
  EXPECT_EQ(best.weight, 2);
  EXPECT_EQ(best.activation.edges, (std::vector<EdgeId>{kRA, kBC}));
  const std::vector<std::int64_t> zero(6, 0);
  EXPECT_TRUE(max_weight_activation(zero, net, acts).activation.empty());
}

TEST(MaxWeight, AgreesWithMatchingDp) {
  const Scenario& mesh = scenario("mesh10");
  const ActivationSet acts = enumerate_activations(mesh.network, mesh.limits);
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<std::int64_t> dist(0, 50);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::int64_t> scores(45);
    for (auto& s : scores) s = dist(gen);
    EXPECT_EQ(best_activation(scores, acts).weight, testing::max_weight_matching(mesh.network, scores));
  }
}

TEST(Forwarding, PullIsCappedByDeficitAndSplitByEdgeOrder) {
  // r -> j (cap 2), a -> j (cap 3), r -> a (cap 5); wired, all active.
  const NodeId r = 0, a = 1, j = 2;
  const Network net(3, r, Interference::wired, {{r, j, 2}, {a, j, 3}, {r, a, 5}});
  PolicyState state({10, 10, 6}, r);
  const DeficitView view = full_view(state, net);
  const std::vector<std::int64_t> service{2, 3, 5};
  const SlotDecision d = forward_packets(state, net, view, service, 0, 0);
  EXPECT_EQ(state.received(j), 10);  // min(2 + 3, X_j = 4)
  EXPECT_EQ(d.transfers, (std::vector<Transfer>{{0, 7, 2}, {1, 9, 2}}));
}

TEST(Forwarding, NonIntegralCapacityIsRejected) {
  const Network net(2, 0, Interference::wired, {{0, 1, 0.5}});
  EXPECT_THROW(packet_capacity(net, 0), DomainError);
}

TEST(State, ArrivalSlotsAndInvariantCheck) {
  const Network& net = scenario("k4").network;
  PolicyState state(4, kR);
  state.admit(3, 5);
  ASSERT_EQ(state.arrival_slots().size(), 3U);
  EXPECT_EQ(state.arrival_slots()[2], 5);
  state.deliver(kA, 2);
  EXPECT_NO_THROW(state.check_invariants(net));
  state.deliver(kB, 3);
  EXPECT_THROW(state.check_invariants(net), InvariantViolation);
}

TEST(Trace, RecordFields) {
  const Network& net = scenario("k4").network;
  PolicyState state(k4_counters(10, 3, 3, 2), kR);
  const auto before = std::vector<std::int64_t>(state.received().begin(), state.received().end());
  DeficitView view;
  const SlotDecision d = policy_step(state, net, enumerate_activations(net), 1, 0, &view);
  const nlohmann::json j = trace_record(0, before, view, d);
  for (const char* key : {"slot", "R", "X", "W", "activation", "transfers"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["W"], nlohmann::json(std::vector<int>{6, 0, 1, 0, 1, 1}));
}

}  // namespace
}  // namespace dagcast
