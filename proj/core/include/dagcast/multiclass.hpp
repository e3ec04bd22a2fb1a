#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dagcast/graph.hpp"
#include "dagcast/policy.hpp"

namespace dagcast {

// A source-first node permutation and the DAG it embeds: edge (a,b) belongs
// to the class iff a precedes b.
struct ClassSpec {
  std::vector<NodeId> permutation;
  std::vector<EdgeId> edges;  // parent edge ids, ascending
  Network dag;                // dag edge i is parent edge edges[i]
  // Every non-source node has an in-edge inside the class. Classes that do
  // not span never receive packets.
  bool spanning = false;
};

ClassSpec make_class(const Network& net, std::vector<NodeId> permutation);

// K uniformly random source-first permutations (Fisher-Yates on SplitMix64).
// The list for K is a prefix of the list for K + 1 under the same seed.
std::vector<ClassSpec> make_classes(const Network& net, int count, std::uint64_t seed);

std::vector<std::vector<EdgeId>> class_edge_sets(std::span<const ClassSpec> classes);

struct MulticlassState {
  std::vector<PolicyState> classes;
  std::vector<std::int64_t> admitted;

  MulticlassState(const Network& net, std::span<const ClassSpec> classes);

  // Sum over classes of packets received by v.
  std::int64_t received(NodeId v) const;
};

// Per-class deficit views; entries for non-spanning classes stay empty.
std::vector<DeficitView> class_views(const MulticlassState& state, std::span<const ClassSpec> classes);

// argmin over spanning classes of sum_{j in K_source} X_j, ties to the
// lowest class index.
std::size_t admit_packet(const MulticlassState& state, std::span<const ClassSpec> classes);

struct CombinedWeight {
  std::int64_t weight = 0;
  int winner = -1;  // class index, -1 when no class holds the edge
};

// W_e = max over classes holding e of W^k_e, ties to the lowest class index.
std::vector<CombinedWeight> combined_weights(std::span<const DeficitView> views,
                                             std::span<const ClassSpec> classes, const Network& net);

struct ClassTransfer {
  int cls = 0;
  Transfer transfer;  // parent edge id
};

struct MulticlassDecision {
  ActivationVector activation;
  std::int64_t activation_weight = 0;
  std::vector<CombinedWeight> weights;
  std::vector<ClassTransfer> transfers;
  std::vector<int> admissions;  // class of each arrival, in order
};

// Per-class details of one slot, for observers.
struct ClassSlotDetail {
  std::vector<std::int64_t> received_before;
  DeficitView view;
  std::vector<std::int64_t> service;  // per class edge
  SlotDecision decision;              // class-local edge ids
};

// One slot of the multiclass policy. Admission decisions use the slot-start
// views, updated after each admitted packet; forwarding uses only the
// slot-start views. details, when given, receives one entry per class.
MulticlassDecision multiclass_step(MulticlassState& state, std::span<const ClassSpec> classes,
                                   const Network& net, const ActivationSet& activations,
                                   std::int64_t arrivals, std::int64_t slot,
                                   std::vector<ClassSlotDetail>* details = nullptr);

}  // namespace dagcast
