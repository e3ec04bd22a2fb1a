#include "dagcast/scenarios.hpp"

#include <algorithm>

#include "dagcast/error.hpp"

namespace dagcast {

namespace {

// Labels are chosen so that r < b < a < c numerically: the highest-id tie
// rule then picks a over b as the minimizer of c when their deficits tie.
Scenario make_k4() {
  constexpr NodeId r = 0, b = 1, a = 2, c = 3;
  Scenario s{"k4",
             Network(4, r, Interference::primary,
                     {{r, a}, {r, b}, {r, c}, {a, b}, {a, c}, {b, c}}),
             {"r", "b", "a", "c"},
             "complete DAG on four nodes, unit capacities, primary interference; "
             "edges ra, rb, rc, ab, ac, bc",
             false,
             {},
             {}};
  s.trees.push_back(tree_from_parents(s.network, {-1, a, r, b}));  // chain r -> a -> b -> c
  return s;
}

Scenario make_cycle4() {
  constexpr NodeId r = 0, a = 1, b = 2, c = 3;
  Scenario s{"cycle4",
             Network(4, r, Interference::wired,
                     {{r, a}, {r, b}, {r, c}, {a, b}, {b, c}, {c, a}}),
             {"r", "a", "b", "c"},
             "wired, unit capacities; source edges to every node plus the directed cycle "
             "a -> b -> c -> a. Topology inferred; checked by cut bound 2 and two disjoint trees",
             false,
             {},
             {}};
  s.trees.push_back(tree_from_parents(s.network, {-1, r, a, b}));
  s.trees.push_back(tree_from_parents(s.network, {-1, c, r, r}));
  return s;
}

Scenario make_mesh10() {
  std::vector<Edge> edges;
  for (NodeId i = 0; i < 10; ++i) {
    for (NodeId j = i + 1; j < 10; ++j) edges.push_back({i, j, static_cast<double>(9 - i)});
  }
  Scenario s{"mesh10",
             Network(10, 0, Interference::primary, std::move(edges)),
             {},
             "ten nodes, link i -> j for every i < j with capacity 9 - i (0-based ids), "
             "primary interference",
             false,
             {},
             {}};
  for (int v = 0; v < 10; ++v) s.labels.push_back(std::to_string(v));
  s.limits.max_primary_edges = 45;
  const std::vector<std::vector<NodeId>> parents = {
      {-1, 0, 1, 2, 3, 4, 5, 6, 7, 8},  // chain
      {-1, 0, 0, 1, 1, 2, 2, 3, 3, 4},
      {-1, 0, 0, 0, 1, 2, 3, 4, 5, 6},
      {-1, 0, 1, 0, 2, 3, 4, 1, 5, 6},
      {-1, 0, 0, 2, 1, 3, 0, 5, 4, 7},
  };
  for (const auto& p : parents) s.trees.push_back(tree_from_parents(s.network, p));
  return s;
}

Scenario make_diamond() {
  constexpr NodeId r = 0, a = 1, b = 2, c = 3;
  Scenario s{"diamond",
             Network(4, r, Interference::primary,
                     {{r, a, 3}, {r, b, 1}, {a, b, 2}, {r, c, 1}, {a, c, 1}, {b, c, 1}}),
             {"r", "a", "b", "c"},
             "experimental: best-effort diamond with link capacities 3,1,2,1,1,1; the exact "
             "layout is a guess and its capacity of 1 is only checked as a warning",
             true,
             {},
             {}};
  // Tree-restricted capacities 3/4, 6/7 and 1 for the first one, two and
  // three trees.
  s.trees.push_back(tree_from_parents(s.network, {-1, r, r, a}));
  s.trees.push_back(tree_from_parents(s.network, {-1, r, a, b}));
  s.trees.push_back(tree_from_parents(s.network, {-1, r, a, r}));
  return s;
}

std::vector<Scenario> build_registry() {
  std::vector<Scenario> all;
  all.push_back(make_k4());
  all.push_back(make_cycle4());
  all.push_back(make_mesh10());
  all.push_back(make_diamond());
  return all;
}

const std::vector<Scenario>& registry() {
  static const std::vector<Scenario> all = build_registry();
  return all;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : registry()) out.push_back(s.name);
    return out;
  }();
  return names;
}

const Scenario& scenario(std::string_view name) {
  for (const auto& s : registry()) {
    if (s.name == name) return s;
  }
  std::string known;
  for (const auto& n : scenario_names()) known += (known.empty() ? "" : ", ") + n;
  throw LookupError("unknown scenario '" + std::string(name) + "' (known: " + known + ")");
}

EdgeId find_edge(const Network& net, NodeId tail, NodeId head) {
  for (EdgeId e : net.out_edges(tail)) {
    if (net.edge(e).head == head) return e;
  }
  throw LookupError("no edge " + std::to_string(tail) + " -> " + std::to_string(head));
}

Arborescence tree_from_parents(const Network& net, const std::vector<NodeId>& parents) {
  if (static_cast<int>(parents.size()) != net.node_count()) {
    throw DomainError("parent list must have one entry per node");
  }
  std::vector<EdgeId> edges;
  for (NodeId v = 0; v < net.node_count(); ++v) {
    if (v == net.source()) continue;
    edges.push_back(find_edge(net, parents[static_cast<std::size_t>(v)], v));
  }
  std::sort(edges.begin(), edges.end());
  return make_arborescence(net, std::move(edges));
}

}  // namespace dagcast
