#include "dagcast/multiclass.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "dagcast/error.hpp"
#include "dagcast/rng.hpp"

namespace dagcast {

namespace {

Network induced_dag(const Network& net, const std::vector<NodeId>& permutation,
                    std::vector<EdgeId>& edges) {
  std::vector<int> position(static_cast<std::size_t>(net.node_count()), -1);
  for (std::size_t i = 0; i < permutation.size(); ++i) {
    position[static_cast<std::size_t>(permutation[i])] = static_cast<int>(i);
  }
  std::vector<Edge> sub;
  edges.clear();
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    const Edge& edge = net.edge(e);
    if (position[static_cast<std::size_t>(edge.tail)] < position[static_cast<std::size_t>(edge.head)]) {
      edges.push_back(e);
      sub.push_back(edge);
    }
  }
  return Network(net.node_count(), net.source(), net.interference(), std::move(sub));
}

std::int64_t source_side_load(const DeficitView& view, NodeId source) {
  std::int64_t sum = 0;
  for (NodeId j : view.dependents[static_cast<std::size_t>(source)]) {
    sum += view.min_deficit[static_cast<std::size_t>(j)];
  }
  return sum;
}

DeficitView full_view(const PolicyState& state, const Network& dag) {
  DeficitView view = compute_deficits(state, dag);
  find_deficit_minimizers(view, dag);
  compute_weights(view, dag);
  return view;
}

}  // namespace

ClassSpec make_class(const Network& net, std::vector<NodeId> permutation) {
  if (permutation.size() != static_cast<std::size_t>(net.node_count())) {
    throw DomainError("class permutation must list every node once");
  }
  std::vector<char> seen(permutation.size(), 0);
  for (NodeId v : permutation) {
    if (v < 0 || v >= net.node_count() || seen[static_cast<std::size_t>(v)]) {
      throw DomainError("class permutation must list every node once");
    }
    seen[static_cast<std::size_t>(v)] = 1;
  }
  if (permutation.front() != net.source()) throw DomainError("class permutation must start at the source");
  std::vector<EdgeId> edges;
  Network dag = induced_dag(net, permutation, edges);
  bool spanning = true;
  for (NodeId v = 0; v < net.node_count(); ++v) {
    if (v != net.source() && dag.in_edges(v).empty()) spanning = false;
  }
  return ClassSpec{std::move(permutation), std::move(edges), std::move(dag), spanning};
}

std::vector<ClassSpec> make_classes(const Network& net, int count, std::uint64_t seed) {
  if (count < 1) throw DomainError("number of classes must be at least 1");
  SplitMix64 rng(seed);
  std::vector<NodeId> others;
  for (NodeId v = 0; v < net.node_count(); ++v) {
    if (v != net.source()) others.push_back(v);
  }
  std::vector<ClassSpec> classes;
  for (int k = 0; k < count; ++k) {
    std::vector<NodeId> order = others;
    for (std::size_t i = order.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng.below(i));
      std::swap(order[i - 1], order[j]);
    }
    order.insert(order.begin(), net.source());
    classes.push_back(make_class(net, std::move(order)));
  }
  return classes;
}

std::vector<std::vector<EdgeId>> class_edge_sets(std::span<const ClassSpec> classes) {
  std::vector<std::vector<EdgeId>> out;
  for (const auto& c : classes) out.push_back(c.edges);
  return out;
}

MulticlassState::MulticlassState(const Network& net, std::span<const ClassSpec> specs)
    : admitted(specs.size(), 0) {
  if (specs.empty()) throw DomainError("multiclass policy needs at least one class");
  if (std::none_of(specs.begin(), specs.end(), [](const ClassSpec& c) { return c.spanning; })) {
    throw DomainError("no class reaches every node");
  }
  for (std::size_t k = 0; k < specs.size(); ++k) classes.emplace_back(net.node_count(), net.source());
}

std::int64_t MulticlassState::received(NodeId v) const {
  std::int64_t total = 0;
  for (const auto& s : classes) total += s.received(v);
  return total;
}

std::vector<DeficitView> class_views(const MulticlassState& state, std::span<const ClassSpec> classes) {
  std::vector<DeficitView> views(classes.size());
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (classes[k].spanning) views[k] = full_view(state.classes[k], classes[k].dag);
  }
  return views;
}

namespace {

std::size_t argmin_load(std::span<const DeficitView> views, std::span<const ClassSpec> classes,
                        NodeId source) {
  std::size_t best = classes.size();
  std::int64_t best_load = 0;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (!classes[k].spanning) continue;
    const std::int64_t load = source_side_load(views[k], source);
    if (best == classes.size() || load < best_load) {
      best = k;
      best_load = load;
    }
  }
  return best;
}

}  // namespace

std::size_t admit_packet(const MulticlassState& state, std::span<const ClassSpec> classes) {
  if (classes.empty()) throw DomainError("no classes to admit into");
  const std::vector<DeficitView> views = class_views(state, classes);
  const std::size_t k = argmin_load(views, classes, state.classes.front().source());
  if (k == classes.size()) throw DomainError("no class reaches every node");
  return k;
}

std::vector<CombinedWeight> combined_weights(std::span<const DeficitView> views,
                                             std::span<const ClassSpec> classes, const Network& net) {
  std::vector<CombinedWeight> out(static_cast<std::size_t>(net.edge_count()));
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (!classes[k].spanning) continue;
    const auto& edges = classes[k].edges;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      auto& slot = out[static_cast<std::size_t>(edges[i])];
      const std::int64_t w = views[k].weight[i];
      if (slot.winner < 0 || w > slot.weight) slot = {w, static_cast<int>(k)};
    }
  }
  return out;
}

MulticlassDecision multiclass_step(MulticlassState& state, std::span<const ClassSpec> classes,
                                   const Network& net, const ActivationSet& activations,
                                   std::int64_t arrivals, std::int64_t slot,
                                   std::vector<ClassSlotDetail>* details) {
  if (state.classes.size() != classes.size()) throw DomainError("state and class list differ in size");
  std::vector<DeficitView> views = class_views(state, classes);

  MulticlassDecision out;
  out.weights = combined_weights(views, classes, net);
  std::vector<std::int64_t> scores(static_cast<std::size_t>(net.edge_count()), 0);
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    scores[static_cast<std::size_t>(e)] = packet_capacity(net, e) * out.weights[static_cast<std::size_t>(e)].weight;
  }
  WeightedActivation chosen = best_activation(scores, activations);
  out.activation = chosen.activation;
  out.activation_weight = chosen.weight;

  // Admission: one packet at a time against the slot-start counters plus the
  // packets already admitted this slot.
  const NodeId source = net.source();
  std::vector<std::int64_t> pending(classes.size(), 0);
  if (arrivals > 0) {
    std::vector<DeficitView> admission_views = views;
    for (std::int64_t a = 0; a < arrivals; ++a) {
      const std::size_t k = argmin_load(admission_views, classes, source);
      out.admissions.push_back(static_cast<int>(k));
      ++pending[k];
      std::vector<std::int64_t> counters(state.classes[k].received().begin(), state.classes[k].received().end());
      counters[static_cast<std::size_t>(source)] += pending[k];
      admission_views[k] = full_view(PolicyState(std::move(counters), source), classes[k].dag);
    }
  }

  if (details) details->assign(classes.size(), {});
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const ClassSpec& spec = classes[k];
    PolicyState& cls_state = state.classes[k];
    std::vector<std::int64_t> service(spec.edges.size(), 0);
    if (spec.spanning) {
      for (std::size_t i = 0; i < spec.edges.size(); ++i) {
        const EdgeId e = spec.edges[i];
        if (out.weights[static_cast<std::size_t>(e)].winner == static_cast<int>(k) && out.activation.contains(e)) {
          service[i] = packet_capacity(net, e);
        }
      }
    }
    std::vector<std::int64_t> before;
    if (details) before.assign(cls_state.received().begin(), cls_state.received().end());
    SlotDecision local;
    if (spec.spanning) {
      local = forward_packets(cls_state, spec.dag, views[k], service, pending[k], slot);
    } else {
      local.arrivals = 0;
    }
    state.admitted[k] += pending[k];
    for (const Transfer& t : local.transfers) {
      out.transfers.push_back({static_cast<int>(k), {spec.edges[static_cast<std::size_t>(t.edge)], t.first, t.count}});
    }
    if (details) {
      auto& d = (*details)[k];
      d.received_before = std::move(before);
      d.view = std::move(views[k]);
      d.service = std::move(service);
      d.decision = std::move(local);
    }
  }
  return out;
}

}  // namespace dagcast
