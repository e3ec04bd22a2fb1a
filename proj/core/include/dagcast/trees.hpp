#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dagcast/graph.hpp"

namespace dagcast {

// Spanning arborescence rooted at the network source, as sorted edge ids.
struct Arborescence {
  NodeId root = 0;
  std::vector<EdgeId> edges;

  friend bool operator==(const Arborescence&, const Arborescence&) = default;
};

// Pairwise edge-disjoint arborescences.
struct TreePacking {
  std::vector<Arborescence> trees;

  std::size_t size() const noexcept { return trees.size(); }
};

// One in-edge per non-root node, none into the root, every node reachable.
bool is_arborescence(const Network& net, std::span<const EdgeId> edges);
Arborescence make_arborescence(const Network& net, std::vector<EdgeId> edges);

bool is_edge_disjoint(const TreePacking& packing);

// All arborescences rooted at net.source(), ordered by the in-edge chosen
// for node 0, 1, ... (edge-id order). Throws ResourceLimitError carrying
// the partial count once more than cap exist.
std::vector<Arborescence> enumerate_arborescences(const Network& net, std::size_t cap);

// Directed matrix-tree theorem: determinant of the in-degree Laplacian with
// the root row and column removed, computed exactly by Bareiss elimination.
std::uint64_t count_arborescences(const Network& net);

struct PackingLimits {
  int max_nodes = 8;
  int max_edges = 16;
};

// Maximum edge-disjoint packing by exhaustive backtracking over in-edge
// assignments. Requires unit capacities; use expand_unit_edges() first for
// integral capacities.
TreePacking max_disjoint_packing(const Network& net, const PackingLimits& limits = {});

// Edge exchange for a path a -> b -> c: if one tree holds both (a,b) and
// (b,c), swap its (a,b) with the in-edge (d,b) of another tree (d != a, c).
// Returns the input unchanged when no tree holds both edges.
TreePacking exchange_packing_edges(const Network& net, const TreePacking& packing, NodeId a,
                                   NodeId b, NodeId c);

// max sum_k lambda_k with per-edge load sum_{k: e in T_k} lambda_k <= c_e beta_e
// and beta in conv(S).
double tree_restricted_capacity(const Network& net, std::span<const Arborescence> trees,
                                const EnumerationLimits& limits = {});

nlohmann::json to_json(const Arborescence& tree);

}  // namespace dagcast
