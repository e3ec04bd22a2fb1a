#include "dagcast/tree_policy.hpp"

#include <algorithm>
#include <numeric>

#include "dagcast/error.hpp"

namespace dagcast {

std::int64_t TreePolicyState::backlog(const Network& net, std::size_t tree, EdgeId e) const {
  const Edge& edge = net.edge(e);
  return received[tree][static_cast<std::size_t>(edge.tail)] - received[tree][static_cast<std::size_t>(edge.head)];
}

TreePolicy::TreePolicy(const Network& net, std::vector<Arborescence> trees)
    : net_(&net), trees_(std::move(trees)) {
  if (trees_.empty()) throw DomainError("tree policy needs at least one tree");
  const auto n = static_cast<std::size_t>(net.node_count());
  trees_of_edge_.assign(static_cast<std::size_t>(net.edge_count()), {});
  for (std::size_t k = 0; k < trees_.size(); ++k) {
    const Arborescence& t = trees_[k];
    if (t.root != net.source() || !is_arborescence(net, t.edges)) {
      throw DomainError("tree " + std::to_string(k) + " is not an arborescence rooted at the source");
    }
    std::vector<Edge> local;
    std::vector<std::vector<EdgeId>> children(n);
    for (EdgeId e : t.edges) {
      local.push_back(net.edge(e));
      packet_capacity(net, e);
      children[static_cast<std::size_t>(net.edge(e).tail)].push_back(e);
      trees_of_edge_[static_cast<std::size_t>(e)].push_back(static_cast<int>(k));
    }
    tree_nets_.emplace_back(net.node_count(), net.source(), net.interference(), std::move(local));
    children_.push_back(std::move(children));
  }
  state_.received.assign(trees_.size(), std::vector<std::int64_t>(n, 0));
  state_.arrival_slots.assign(trees_.size(), {});
}

std::int64_t TreePolicy::total_backlog(std::size_t tree) const {
  std::int64_t sum = 0;
  for (EdgeId e : trees_[tree].edges) sum += state_.backlog(*net_, tree, e);
  return sum;
}

std::int64_t TreePolicy::differential_backlog(std::size_t tree, EdgeId e) const {
  std::int64_t d = state_.backlog(*net_, tree, e);
  for (EdgeId child : children_[tree][static_cast<std::size_t>(net_->edge(e).head)]) {
    d -= state_.backlog(*net_, tree, child);
  }
  return std::max<std::int64_t>(d, 0);
}

std::vector<std::int64_t> TreePolicy::edge_weights() const {
  std::vector<std::int64_t> w(static_cast<std::size_t>(net_->edge_count()), 0);
  for (EdgeId e = 0; e < net_->edge_count(); ++e) {
    for (int k : trees_of_edge_[static_cast<std::size_t>(e)]) {
      w[static_cast<std::size_t>(e)] += differential_backlog(static_cast<std::size_t>(k), e);
    }
  }
  return w;
}

TreeSlotDecision TreePolicy::step(const ActivationSet& activations, std::int64_t arrivals,
                                  std::int64_t slot) {
  const Network& net = *net_;
  TreeSlotDecision out;
  out.edge_weights = edge_weights();
  const WeightedActivation chosen = max_weight_activation(out.edge_weights, net, activations);
  out.activation = chosen.activation;
  out.activation_weight = chosen.weight;

  // Drain decisions all read slot-start backlogs.
  std::vector<std::pair<std::size_t, EdgeId>> sends_key;
  std::vector<std::int64_t> sends;
  for (EdgeId e : out.activation.edges) {
    const auto& members = trees_of_edge_[static_cast<std::size_t>(e)];
    if (members.empty()) continue;
    const std::int64_t cap = packet_capacity(net, e);
    const std::size_t m = members.size();
    std::vector<std::int64_t> weight(m), queue(m), share(m, 0);
    std::int64_t weight_sum = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const auto k = static_cast<std::size_t>(members[i]);
      weight[i] = differential_backlog(k, e);
      queue[i] = state_.backlog(net, k, e);
      weight_sum += weight[i];
    }
    if (weight_sum > 0) {
      std::int64_t given = 0;
      for (std::size_t i = 0; i < m; ++i) {
        share[i] = cap * weight[i] / weight_sum;
        given += share[i];
      }
      std::vector<std::size_t> by_weight(m);
      std::iota(by_weight.begin(), by_weight.end(), 0);
      std::stable_sort(by_weight.begin(), by_weight.end(),
                       [&](std::size_t a, std::size_t b) { return weight[a] > weight[b]; });
      for (std::size_t r = 0; given < cap && r < m; ++r) {
        if (weight[by_weight[r]] == 0) break;
        ++share[by_weight[r]];
        ++given;
      }
    }
    std::int64_t spare = cap;
    for (std::size_t i = 0; i < m; ++i) {
      share[i] = std::min(share[i], queue[i]);
      spare -= share[i];
    }
    for (std::size_t i = 0; i < m && spare > 0; ++i) {
      const std::int64_t extra = std::min(spare, queue[i] - share[i]);
      share[i] += extra;
      spare -= extra;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (share[i] == 0) continue;
      sends_key.emplace_back(static_cast<std::size_t>(members[i]), e);
      sends.push_back(share[i]);
    }
  }
  for (std::size_t s = 0; s < sends.size(); ++s) {
    const auto [k, e] = sends_key[s];
    const auto head = static_cast<std::size_t>(net.edge(e).head);
    const std::int64_t first = state_.received[k][head] + 1;
    out.transfers.push_back({static_cast<int>(k), {e, first, sends[s]}});
  }
  for (std::size_t s = 0; s < sends.size(); ++s) {
    const auto [k, e] = sends_key[s];
    state_.received[k][static_cast<std::size_t>(net.edge(e).head)] += sends[s];
  }

  const auto root = static_cast<std::size_t>(net.source());
  for (std::int64_t a = 0; a < arrivals; ++a) {
    std::size_t best = 0;
    std::int64_t best_backlog = total_backlog(0);
    for (std::size_t k = 1; k < trees_.size(); ++k) {
      const std::int64_t b = total_backlog(k);
      if (b < best_backlog) {
        best = k;
        best_backlog = b;
      }
    }
    ++state_.received[best][root];
    state_.arrival_slots[best].push_back(slot);
    out.admissions.push_back(static_cast<int>(best));
  }
  return out;
}

}  // namespace dagcast
