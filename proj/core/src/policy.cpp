#include "dagcast/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "dagcast/error.hpp"

namespace dagcast {

PolicyState::PolicyState(int node_count, NodeId source)
    : source_(source), received_(static_cast<std::size_t>(node_count), 0) {
  if (source < 0 || source >= node_count) throw StructuralError("source is not a node id");
}

PolicyState::PolicyState(std::vector<std::int64_t> received, NodeId source)
    : source_(source), received_(std::move(received)) {
  if (source < 0 || static_cast<std::size_t>(source) >= received_.size()) {
    throw StructuralError("source is not a node id");
  }
  for (std::int64_t r : received_) {
    if (r < 0) throw DomainError("packet counters must be nonnegative");
  }
  arrival_slots_.assign(static_cast<std::size_t>(received_[static_cast<std::size_t>(source)]), 0);
}

void PolicyState::admit(std::int64_t count, std::int64_t slot) {
  if (count < 0) throw DomainError("negative arrival count");
  received_[static_cast<std::size_t>(source_)] += count;
  arrival_slots_.insert(arrival_slots_.end(), static_cast<std::size_t>(count), slot);
}

void PolicyState::deliver(NodeId v, std::int64_t count) {
  received_.at(static_cast<std::size_t>(v)) += count;
}

void PolicyState::check_invariants(const Network& net) const {
  const std::int64_t at_source = received(source_);
  for (NodeId v = 0; v < net.node_count(); ++v) {
    if (received(v) > at_source) {
      throw InvariantViolation("node " + std::to_string(v) + " holds more packets than the source");
    }
    for (EdgeId e : net.in_edges(v)) {
      if (v != source_ && received(net.edge(e).tail) < received(v)) {
        throw InvariantViolation("node " + std::to_string(v) + " is ahead of in-neighbor " +
                                 std::to_string(net.edge(e).tail));
      }
    }
  }
}

DeficitView compute_deficits(const PolicyState& state, const Network& net) {
  DeficitView view;
  view.deficit.resize(static_cast<std::size_t>(net.edge_count()));
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    const Edge& edge = net.edge(e);
    const std::int64_t q = state.received(edge.tail) - state.received(edge.head);
    if (q < 0 && edge.head != net.source()) {
      throw InvariantViolation("negative deficit on edge " + std::to_string(e));
    }
    view.deficit[static_cast<std::size_t>(e)] = q;
  }
  return view;
}

void find_deficit_minimizers(DeficitView& view, const Network& net) {
  const auto n = static_cast<std::size_t>(net.node_count());
  view.minimizer.assign(n, -1);
  view.dependents.assign(n, {});
  view.min_deficit.assign(n, 0);
  for (NodeId j = 0; j < net.node_count(); ++j) {
    if (j == net.source()) continue;
    auto in = net.in_edges(j);
    if (in.empty()) {
      throw StructuralError("node " + std::to_string(j) + " has no in-neighbor; graph is not rooted");
    }
    NodeId best = -1;
    std::int64_t best_q = 0;
    for (EdgeId e : in) {
      const NodeId i = net.edge(e).tail;
      const std::int64_t q = view.deficit[static_cast<std::size_t>(e)];
      if (best < 0 || q < best_q || (q == best_q && i > best)) {
        best = i;
        best_q = q;
      }
    }
    view.minimizer[static_cast<std::size_t>(j)] = best;
    view.min_deficit[static_cast<std::size_t>(j)] = best_q;
    view.dependents[static_cast<std::size_t>(best)].push_back(j);
  }
}

void compute_weights(DeficitView& view, const Network& net) {
  view.weight.assign(static_cast<std::size_t>(net.edge_count()), 0);
  for (NodeId j = 0; j < net.node_count(); ++j) {
    if (j == net.source()) continue;
    std::int64_t w = view.min_deficit[static_cast<std::size_t>(j)];
    for (NodeId k : view.dependents[static_cast<std::size_t>(j)]) {
      w -= view.min_deficit[static_cast<std::size_t>(k)];
    }
    w = std::max<std::int64_t>(w, 0);
    for (EdgeId e : net.in_edges(j)) view.weight[static_cast<std::size_t>(e)] = w;
  }
}

WeightedActivation best_activation(std::span<const std::int64_t> edge_scores,
                                   const ActivationSet& activations) {
  std::size_t best = 0;
  std::int64_t best_weight = -1;
  for (std::size_t l = 0; l < activations.size(); ++l) {
    std::int64_t w = 0;
    for (EdgeId e : activations.edges_of(l)) w += edge_scores[static_cast<std::size_t>(e)];
    if (w > best_weight) {
      best_weight = w;
      best = l;
    }
  }
  if (activations.size() == 0) return {};
  return {best, activations.at(best), best_weight};
}

std::int64_t packet_capacity(const Network& net, EdgeId e) {
  const double c = net.edge(e).capacity;
  if (c != std::floor(c)) {
    throw DomainError("edge " + std::to_string(e) + " has non-integral capacity; policies forward whole packets");
  }
  return static_cast<std::int64_t>(c);
}

WeightedActivation max_weight_activation(std::span<const std::int64_t> weights, const Network& net,
                                         const ActivationSet& activations) {
  std::vector<std::int64_t> scores(weights.size());
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    const auto i = static_cast<std::size_t>(e);
    if (weights[i] < 0) throw DomainError("link weights must be nonnegative");
    scores[i] = packet_capacity(net, e) * weights[i];
  }
  return best_activation(scores, activations);
}

SlotDecision forward_packets(PolicyState& state, const Network& net, const DeficitView& view,
                             std::span<const std::int64_t> service, std::int64_t arrivals,
                             std::int64_t slot) {
  SlotDecision decision;
  decision.arrivals = arrivals;
  std::vector<std::int64_t> gained(static_cast<std::size_t>(net.node_count()), 0);
  for (NodeId j = 0; j < net.node_count(); ++j) {
    if (j == net.source()) continue;
    std::int64_t offered = 0;
    for (EdgeId e : net.in_edges(j)) offered += service[static_cast<std::size_t>(e)];
    std::int64_t budget = std::min(offered, view.min_deficit[static_cast<std::size_t>(j)]);
    std::int64_t next = state.received(j) + 1;
    for (EdgeId e : net.in_edges(j)) {
      if (budget == 0) break;
      const std::int64_t take = std::min(budget, service[static_cast<std::size_t>(e)]);
      if (take == 0) continue;
      decision.transfers.push_back({e, next, take});
      next += take;
      budget -= take;
    }
    gained[static_cast<std::size_t>(j)] = next - 1 - state.received(j);
  }
  // Every packet pulled must already sit at the sending in-neighbor.
  for (const Transfer& t : decision.transfers) {
    const NodeId tail = net.edge(t.edge).tail;
    if (t.first + t.count - 1 > state.received(tail)) {
      throw InvariantViolation("edge " + std::to_string(t.edge) + " would forward a packet its tail lacks");
    }
  }
  for (NodeId j = 0; j < net.node_count(); ++j) state.deliver(j, gained[static_cast<std::size_t>(j)]);
  state.admit(arrivals, slot);
  return decision;
}

SlotDecision apply_forwarding(PolicyState& state, const Network& net, const DeficitView& view,
                              const ActivationVector& activation, std::int64_t arrivals,
                              std::int64_t slot) {
  std::vector<std::int64_t> service(static_cast<std::size_t>(net.edge_count()), 0);
  for (EdgeId e : activation.edges) service.at(static_cast<std::size_t>(e)) = packet_capacity(net, e);
  SlotDecision decision = forward_packets(state, net, view, service, arrivals, slot);
  decision.activation = activation;
  return decision;
}

SlotDecision policy_step(PolicyState& state, const Network& net, const ActivationSet& activations,
                         std::int64_t arrivals, std::int64_t slot, DeficitView* view_out) {
  DeficitView view = compute_deficits(state, net);
  find_deficit_minimizers(view, net);
  compute_weights(view, net);
  WeightedActivation chosen = max_weight_activation(view.weight, net, activations);
  SlotDecision decision = apply_forwarding(state, net, view, chosen.activation, arrivals, slot);
  decision.activation_weight = chosen.weight;
  if (view_out) *view_out = std::move(view);
  return decision;
}

nlohmann::json trace_record(std::int64_t slot, std::span<const std::int64_t> received,
                            const DeficitView& view, const SlotDecision& decision) {
  nlohmann::json transfers = nlohmann::json::array();
  for (const Transfer& t : decision.transfers) {
    transfers.push_back({{"edge", t.edge}, {"first", t.first}, {"count", t.count}});
  }
  return {{"slot", slot},
          {"R", std::vector<std::int64_t>(received.begin(), received.end())},
          {"X", view.min_deficit},
          {"W", view.weight},
          {"activation", decision.activation.edges},
          {"transfers", std::move(transfers)}};
}

}  // namespace dagcast
