#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dagcast/graph.hpp"

namespace dagcast {

// Received-packet counters R_j. Packets are identified by their index at the
// source; in-order delivery makes node j hold exactly {1, ..., R_j}.
class PolicyState {
 public:
  PolicyState(int node_count, NodeId source);
  // Starts from explicit counters; pre-existing packets get arrival slot 0.
  PolicyState(std::vector<std::int64_t> received, NodeId source);

  NodeId source() const noexcept { return source_; }
  int node_count() const noexcept { return static_cast<int>(received_.size()); }
  std::int64_t received(NodeId v) const { return received_.at(static_cast<std::size_t>(v)); }
  std::span<const std::int64_t> received() const noexcept { return received_; }

  // Arrival slot of packet p is arrival_slots()[p - 1].
  std::span<const std::int64_t> arrival_slots() const noexcept { return arrival_slots_; }

  // Appends `count` packets at the source, arriving in `slot`.
  void admit(std::int64_t count, std::int64_t slot);
  void deliver(NodeId v, std::int64_t count);

  // R_j <= min over in-neighbors and R_j <= R_source; throws InvariantViolation.
  void check_invariants(const Network& net) const;

 private:
  NodeId source_;
  std::vector<std::int64_t> received_;
  std::vector<std::int64_t> arrival_slots_;
};

// Per-slot quantities of the policy. Indexed by edge id (deficit, weight) or
// node id (minimizer, dependents, min_deficit).
struct DeficitView {
  std::vector<std::int64_t> deficit;           // Q_ij = R_i - R_j
  std::vector<NodeId> minimizer;               // i*(j); -1 at the source
  std::vector<std::vector<NodeId>> dependents; // K_j = {k : i*(k) = j}, ascending
  std::vector<std::int64_t> min_deficit;       // X_j; 0 at the source
  std::vector<std::int64_t> weight;            // W_ij
};

DeficitView compute_deficits(const PolicyState& state, const Network& net);

// i*(j) = argmin_{i in In(j)} Q_ij with ties to the highest node id; fills
// minimizer, dependents and min_deficit. Throws StructuralError when a
// non-source node has no in-neighbor.
void find_deficit_minimizers(DeficitView& view, const Network& net);

// W_ij = (X_j - sum_{k in K_j} X_k)^+, equal on every in-edge of j.
void compute_weights(DeficitView& view, const Network& net);

struct WeightedActivation {
  std::size_t index = 0;  // position in the activation set
  ActivationVector activation;
  std::int64_t weight = 0;
};

// Exhaustive scan for the activation maximizing sum_e score_e over its
// edges; the first maximizer in enumeration order wins.
WeightedActivation best_activation(std::span<const std::int64_t> edge_scores,
                                   const ActivationSet& activations);

// Scores c_e * W_e, then best_activation().
WeightedActivation max_weight_activation(std::span<const std::int64_t> weights, const Network& net,
                                         const ActivationSet& activations);

// Integer capacity of an edge; policies run on integral capacities only.
std::int64_t packet_capacity(const Network& net, EdgeId e);

struct Transfer {
  EdgeId edge = 0;
  std::int64_t first = 0;  // first packet index carried
  std::int64_t count = 0;

  friend bool operator==(const Transfer&, const Transfer&) = default;
};

struct SlotDecision {
  ActivationVector activation;
  std::int64_t activation_weight = 0;
  std::vector<Transfer> transfers;
  std::int64_t arrivals = 0;
};

// Node j != source pulls min(sum of offered service on its in-edges, X_j)
// packets R_j + 1, ...; the range is split over in-edges in edge-id order,
// each carrying at most its offered service. The source gains `arrivals`.
// service[e] is c_e for an edge serving this packet stream, 0 otherwise.
SlotDecision forward_packets(PolicyState& state, const Network& net, const DeficitView& view,
                             std::span<const std::int64_t> service, std::int64_t arrivals,
                             std::int64_t slot);

SlotDecision apply_forwarding(PolicyState& state, const Network& net, const DeficitView& view,
                              const ActivationVector& activation, std::int64_t arrivals,
                              std::int64_t slot);

// One slot of the DAG broadcast policy: deficits, minimizers, weights,
// max-weight activation, forwarding and arrivals, in that order. The view
// used for the decision is written to *view_out when given.
SlotDecision policy_step(PolicyState& state, const Network& net, const ActivationSet& activations,
                         std::int64_t arrivals, std::int64_t slot, DeficitView* view_out = nullptr);

// {slot, R, X, W, activation, transfers}; R is the state the decision saw.
nlohmann::json trace_record(std::int64_t slot, std::span<const std::int64_t> received,
                            const DeficitView& view, const SlotDecision& decision);

}  // namespace dagcast
