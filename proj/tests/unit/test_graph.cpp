#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "dagcast/error.hpp"
#include "dagcast/graph.hpp"
#include "dagcast/scenarios.hpp"
#include "support/oracles.hpp"

namespace dagcast {
namespace {

constexpr NodeId kR = 0, kB = 1, kA = 2, kC = 3;  // k4 labels

TEST(Network, RejectsSelfLoopAndDanglingIds) {
  EXPECT_THROW(Network(3, 0, Interference::primary, {{0, 0}}), StructuralError);
  EXPECT_THROW(Network(3, 0, Interference::primary, {{0, 3}}), StructuralError);
  EXPECT_THROW(Network(3, 4, Interference::primary, {}), StructuralError);
  EXPECT_THROW(Network(3, 0, Interference::primary, {{0, 1, -1.0}}), StructuralError);
}

TEST(Network, IncidenceListsAreSortedById) {
  const Network& net = scenario("k4").network;
  const auto in_c = net.in_edges(kC);
  EXPECT_EQ(std::vector<EdgeId>(in_c.begin(), in_c.end()), (std::vector<EdgeId>{2, 4, 5}));
  EXPECT_EQ(net.in_neighbors(kC), (std::vector<NodeId>{kR, kB, kA}));
}

TEST(Topology, K4OrdersSourceFirst) {
  const auto result = validate_topology(scenario("k4").network);
  ASSERT_TRUE(std::holds_alternative<TopologicalOrder>(result));
  EXPECT_EQ(std::get<TopologicalOrder>(result).order, (std::vector<NodeId>{kR, kA, kB, kC}));
}

TEST(Topology, Cycle4ReportsTheCycle) {
  const auto result = validate_topology(scenario("cycle4").network);
  ASSERT_TRUE(std::holds_alternative<CycleReport>(result));
  EXPECT_EQ(std::get<CycleReport>(result).cycle, (std::vector<NodeId>{1, 2, 3, 1}));
  EXPECT_FALSE(is_dag(scenario("cycle4").network));
}

TEST(Activations, K4HasTenMatchings) {
  const Network& net = scenario("k4").network;
  const ActivationSet acts = enumerate_activations(net);
  EXPECT_EQ(acts.size(), 10U);
  std::vector<std::vector<EdgeId>> listed;
  for (std::size_t i = 0; i < acts.size(); ++i) {
    const auto e = acts.edges_of(i);
    listed.emplace_back(e.begin(), e.end());
  }
  EXPECT_TRUE(std::is_sorted(listed.begin(), listed.end()));
  EXPECT_EQ(listed, testing::brute_force_matchings(net));
  EXPECT_TRUE(acts.edges_of(0).empty());
}

TEST(Activations, WiredIsEmptyAndAll) {
  const ActivationSet acts = enumerate_activations(scenario("cycle4").network);
  ASSERT_EQ(acts.size(), 2U);
  EXPECT_TRUE(acts.edges_of(0).empty());
  EXPECT_EQ(acts.edges_of(1).size(), 6U);
}

TEST(Activations, EdgeCapIsEnforced) {
  const Scenario& mesh = scenario("mesh10");
  try {
    enumerate_activations(mesh.network);
    FAIL() << "expected ResourceLimitError";
  } catch (const ResourceLimitError&) {
  }
  EXPECT_EQ(enumerate_activations(mesh.network, mesh.limits).size(), 9496U);
}

TEST(Activations, MatchesBruteForceOnRandomGraphs) {
  std::mt19937_64 gen(7);
  testing::RandomDagOptions options;
  options.max_edges = 12;
  options.parallel_edges = true;
  for (int trial = 0; trial < 50; ++trial) {
    const Network net = testing::random_rooted_dag(gen, options);
    const ActivationSet acts = enumerate_activations(net);
    std::vector<std::vector<EdgeId>> listed;
    for (std::size_t i = 0; i < acts.size(); ++i) {
      const auto e = acts.edges_of(i);
      listed.emplace_back(e.begin(), e.end());
      EXPECT_TRUE(is_matching(net, e));
    }
    EXPECT_EQ(listed, testing::brute_force_matchings(net)) << "trial " << trial;
  }
}

TEST(Cuts, ValueOfSourceCutAndOfCutIsolatingC) {
  const Network& net = scenario("k4").network;
  const std::vector<double> ones(6, 1.0);
  EXPECT_DOUBLE_EQ(cut_value(net, ones, ProperCut(net, {kR})), 3.0);
  const std::vector<double> third(6, 1.0 / 3.0);
  EXPECT_NEAR(cut_value(net, third, ProperCut(net, {kR, kA, kB})), 1.0, 1e-12);
}

TEST(Cuts, RejectsImproperCutsAndBadTimeShares) {
  const Network& net = scenario("k4").network;
  EXPECT_THROW(ProperCut(net, {kA}), DomainError);
  EXPECT_THROW(ProperCut(net, {kR, kA, kB, kC}), DomainError);
  const std::vector<double> bad(6, 1.5);
  EXPECT_THROW(cut_value(net, bad, ProperCut(net, {kR})), DomainError);
}

TEST(InDegree, Examples) {
  const Network& k4 = scenario("k4").network;
  const InDegreeMin m = min_in_degree(k4);
  EXPECT_EQ(m.degree, 1);
  EXPECT_EQ(m.node, kA);

  std::vector<Edge> doubled;
  for (const Edge& e : k4.edges()) {
    doubled.push_back(e);
    doubled.push_back(e);
  }
  EXPECT_EQ(min_in_degree(Network(4, kR, Interference::primary, doubled)).degree, 2);

  const Network expanded = expand_unit_edges(scenario("mesh10").network);
  const InDegreeMin mesh = min_in_degree(expanded);
  EXPECT_EQ(mesh.degree, 9);
  EXPECT_EQ(mesh.node, 1);
}

TEST(InDegree, SingleNodeIsOutsideTheDomain) {
  EXPECT_THROW(min_in_degree(Network(1, 0, Interference::wired, {})), DomainError);
}

}  // namespace
}  // namespace dagcast
