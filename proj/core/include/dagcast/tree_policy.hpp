#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dagcast/graph.hpp"
#include "dagcast/policy.hpp"
#include "dagcast/trees.hpp"

namespace dagcast {

// Per-tree packet counters. Each tree forwards its packets FIFO along its
// edges, so the backlog of tree edge (u,v) is received[u] - received[v].
struct TreePolicyState {
  std::vector<std::vector<std::int64_t>> received;     // [tree][node]
  std::vector<std::vector<std::int64_t>> arrival_slots; // [tree][packet - 1]

  std::int64_t backlog(const Network& net, std::size_t tree, EdgeId e) const;
};

struct TreeTransfer {
  int tree = 0;
  Transfer transfer;
};

struct TreeSlotDecision {
  ActivationVector activation;
  std::int64_t activation_weight = 0;
  std::vector<std::int64_t> edge_weights;  // W_e before scaling by c_e
  std::vector<TreeTransfer> transfers;
  std::vector<int> admissions;  // tree of each arrival, in order
};

// Baseline that balances traffic over fixed spanning trees: an arrival joins
// the tree with the smallest total backlog (lowest index on ties); edge
// weights sum the differential backlogs (edge queue minus the queues of the
// child edges below its head, floored at 0) of every tree using the edge; a
// max-weight activation is chosen; an active edge splits c_e packets across
// its trees in proportion to their weights, then hands unused capacity to
// remaining backlog in tree order.
class TreePolicy {
 public:
  TreePolicy(const Network& net, std::vector<Arborescence> trees);

  std::size_t tree_count() const noexcept { return trees_.size(); }
  const TreePolicyState& state() const noexcept { return state_; }
  TreePolicyState& state() noexcept { return state_; }
  const std::vector<Arborescence>& trees() const noexcept { return trees_; }

  // Tree k as a network over its own edges; local edge i is trees()[k].edges[i].
  const Network& tree_network(std::size_t k) const { return tree_nets_.at(k); }

  std::int64_t total_backlog(std::size_t tree) const;
  std::vector<std::int64_t> edge_weights() const;

  // Weights, activation, drain, then admission of this slot's arrivals.
  TreeSlotDecision step(const ActivationSet& activations, std::int64_t arrivals, std::int64_t slot);

 private:
  std::int64_t differential_backlog(std::size_t tree, EdgeId e) const;

  const Network* net_;
  std::vector<Arborescence> trees_;
  std::vector<Network> tree_nets_;
  // [tree][node] -> out-edges of node inside the tree (parent edge ids).
  std::vector<std::vector<std::vector<EdgeId>>> children_;
  // [edge] -> trees containing it, ascending.
  std::vector<std::vector<int>> trees_of_edge_;
  TreePolicyState state_;
};

}  // namespace dagcast
