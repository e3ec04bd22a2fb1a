#include "dagcast/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "dagcast/error.hpp"

namespace dagcast {

std::string_view to_string(Interference mode) noexcept {
  return mode == Interference::primary ? "primary" : "wired";
}

Network::Network(int node_count, NodeId source, Interference interference, std::vector<Edge> edges)
    : node_count_(node_count), source_(source), interference_(interference), edges_(std::move(edges)) {
  if (node_count_ < 1) throw StructuralError("network needs at least one node");
  if (source_ < 0 || source_ >= node_count_) {
    throw StructuralError("source " + std::to_string(source_) + " is not a node id");
  }
  in_.resize(static_cast<std::size_t>(node_count_));
  out_.resize(static_cast<std::size_t>(node_count_));
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    const std::string where = "edge " + std::to_string(e);
    if (edge.tail < 0 || edge.tail >= node_count_ || edge.head < 0 || edge.head >= node_count_) {
      throw StructuralError(where + ": endpoint is not a node id");
    }
    if (edge.tail == edge.head) throw StructuralError(where + ": self-loop");
    if (!std::isfinite(edge.capacity) || edge.capacity < 0) {
      throw StructuralError(where + ": capacity must be a finite nonnegative number");
    }
    out_[static_cast<std::size_t>(edge.tail)].push_back(static_cast<EdgeId>(e));
    in_[static_cast<std::size_t>(edge.head)].push_back(static_cast<EdgeId>(e));
  }
}

std::vector<NodeId> Network::in_neighbors(NodeId v) const {
  std::vector<NodeId> result;
  for (EdgeId e : in_edges(v)) result.push_back(edges_[static_cast<std::size_t>(e)].tail);
  std::sort(result.begin(), result.end());
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

bool Network::has_integral_capacities() const noexcept {
  return std::all_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.capacity == std::floor(e.capacity); });
}

bool ActivationVector::contains(EdgeId e) const {
  return std::binary_search(edges.begin(), edges.end(), e);
}

std::vector<char> ActivationVector::indicator(int edge_count) const {
  std::vector<char> out(static_cast<std::size_t>(edge_count), 0);
  for (EdgeId e : edges) out.at(static_cast<std::size_t>(e)) = 1;
  return out;
}

bool is_matching(const Network& net, std::span<const EdgeId> edges) {
  std::vector<char> used(static_cast<std::size_t>(net.node_count()), 0);
  for (EdgeId e : edges) {
    const Edge& edge = net.edge(e);
    auto& t = used[static_cast<std::size_t>(edge.tail)];
    auto& h = used[static_cast<std::size_t>(edge.head)];
    if (t || h) return false;
    t = h = 1;
  }
  return true;
}

ActivationVector ActivationSet::at(std::size_t i) const {
  auto span = edges_of(i);
  return ActivationVector{std::vector<EdgeId>(span.begin(), span.end())};
}

void ActivationSet::push_back(std::span<const EdgeId> edges) {
  flat_.insert(flat_.end(), edges.begin(), edges.end());
  offsets_.push_back(flat_.size());
}

namespace {

struct MatchingEnumerator {
  const Network& net;
  const EnumerationLimits& limits;
  ActivationSet out;
  std::vector<EdgeId> current;
  std::vector<char> used;

  void emit() {
    if (out.size() >= limits.max_activations) {
      throw ResourceLimitError("more than " + std::to_string(limits.max_activations) +
                                   " activation vectors",
                               out.size());
    }
    out.push_back(current);
  }

  // Pre-order DFS: a prefix is emitted before its extensions, and extensions
  // are tried in increasing edge id, which yields lexicographic order.
  void extend(EdgeId first) {
    for (EdgeId e = first; e < net.edge_count(); ++e) {
      const Edge& edge = net.edge(e);
      auto t = static_cast<std::size_t>(edge.tail);
      auto h = static_cast<std::size_t>(edge.head);
      if (used[t] || used[h]) continue;
      used[t] = used[h] = 1;
      current.push_back(e);
      emit();
      extend(e + 1);
      current.pop_back();
      used[t] = used[h] = 0;
    }
  }
};

}  // namespace

ActivationSet enumerate_activations(const Network& net, const EnumerationLimits& limits) {
  if (net.interference() == Interference::wired) {
    ActivationSet set;
    set.push_back({});
    if (net.edge_count() > 0) {
      std::vector<EdgeId> all(static_cast<std::size_t>(net.edge_count()));
      for (EdgeId e = 0; e < net.edge_count(); ++e) all[static_cast<std::size_t>(e)] = e;
      set.push_back(all);
    }
    return set;
  }
  if (net.edge_count() > limits.max_primary_edges) {
    throw ResourceLimitError("activation enumeration limited to " +
                             std::to_string(limits.max_primary_edges) + " edges, network has " +
                             std::to_string(net.edge_count()));
  }
  MatchingEnumerator walker{net, limits, {}, {}, std::vector<char>(static_cast<std::size_t>(net.node_count()), 0)};
  walker.emit();
  walker.extend(0);
  return std::move(walker.out);
}

namespace {

CycleReport find_cycle(const Network& net) {
  const auto n = static_cast<std::size_t>(net.node_count());
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<int> color(n, 0);
  std::vector<NodeId> stack;

  struct Frame {
    NodeId node;
    std::size_t next;
  };

  for (NodeId start = 0; start < net.node_count(); ++start) {
    if (color[static_cast<std::size_t>(start)] != 0) continue;
    std::vector<Frame> frames{{start, 0}};
    color[static_cast<std::size_t>(start)] = 1;
    stack.assign(1, start);
    while (!frames.empty()) {
      Frame& top = frames.back();
      auto outs = net.out_edges(top.node);
      if (top.next == outs.size()) {
        color[static_cast<std::size_t>(top.node)] = 2;
        frames.pop_back();
        stack.pop_back();
        continue;
      }
      const NodeId head = net.edge(outs[top.next++]).head;
      const int c = color[static_cast<std::size_t>(head)];
      if (c == 1) {
        auto it = std::find(stack.begin(), stack.end(), head);
        CycleReport report{std::vector<NodeId>(it, stack.end())};
        report.cycle.push_back(head);
        return report;
      }
      if (c == 0) {
        color[static_cast<std::size_t>(head)] = 1;
        stack.push_back(head);
        frames.push_back({head, 0});
      }
    }
  }
  return {};
}

}  // namespace

TopologyResult validate_topology(const Network& net) {
  const auto n = static_cast<std::size_t>(net.node_count());
  std::vector<int> indegree(n, 0);
  for (const Edge& e : net.edges()) ++indegree[static_cast<std::size_t>(e.head)];

  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (NodeId v = 0; v < net.node_count(); ++v) {
    if (indegree[static_cast<std::size_t>(v)] == 0) ready.push(v);
  }
  TopologicalOrder topo;
  while (!ready.empty()) {
    const NodeId v = ready.top();
    ready.pop();
    topo.order.push_back(v);
    for (EdgeId e : net.out_edges(v)) {
      const auto h = static_cast<std::size_t>(net.edge(e).head);
      if (--indegree[h] == 0) ready.push(static_cast<NodeId>(h));
    }
  }
  if (topo.order.size() == n) return topo;
  return find_cycle(net);
}

bool is_dag(const Network& net) {
  return std::holds_alternative<TopologicalOrder>(validate_topology(net));
}

ProperCut::ProperCut(const Network& net, std::vector<NodeId> members)
    : member_(static_cast<std::size_t>(net.node_count()), 0) {
  for (NodeId v : members) {
    if (v < 0 || v >= net.node_count()) throw StructuralError("cut member is not a node id");
    member_[static_cast<std::size_t>(v)] = 1;
  }
  if (!contains(net.source())) throw DomainError("a proper cut must contain the source");
  if (std::all_of(member_.begin(), member_.end(), [](char c) { return c != 0; })) {
    throw DomainError("a proper cut must leave at least one node outside");
  }
}

ProperCut ProperCut::from_mask(const Network& net, std::uint64_t mask) {
  std::vector<NodeId> members;
  for (NodeId v = 0; v < net.node_count(); ++v) {
    if (mask >> v & 1U) members.push_back(v);
  }
  return ProperCut(net, std::move(members));
}

std::vector<EdgeId> ProperCut::crossing_edges(const Network& net) const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    const Edge& edge = net.edge(e);
    if (contains(edge.tail) && !contains(edge.head)) out.push_back(e);
  }
  return out;
}

double cut_value(const Network& net, std::span<const double> beta, const ProperCut& cut) {
  if (beta.size() != static_cast<std::size_t>(net.edge_count())) {
    throw DomainError("time-share vector has wrong length");
  }
  for (double b : beta) {
    if (!(b >= 0.0 && b <= 1.0)) throw DomainError("time shares must lie in [0,1]");
  }
  double total = 0.0;
  for (EdgeId e : cut.crossing_edges(net)) total += net.edge(e).capacity * beta[static_cast<std::size_t>(e)];
  return total;
}

InDegreeMin min_in_degree(const Network& net) {
  if (net.node_count() < 2) throw DomainError("min in-degree needs at least two nodes");
  InDegreeMin best{-1, -1};
  for (NodeId v = 0; v < net.node_count(); ++v) {
    if (v == net.source()) continue;
    const int d = static_cast<int>(net.in_edges(v).size());
    if (best.degree < 0 || d < best.degree) best = {d, v};
  }
  return best;
}

Network expand_unit_edges(const Network& net, std::vector<EdgeId>* origin) {
  if (!net.has_integral_capacities()) {
    throw DomainError("unit-edge expansion needs integral capacities");
  }
  std::vector<Edge> edges;
  if (origin) origin->clear();
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    const Edge& edge = net.edge(e);
    const auto copies = static_cast<long long>(edge.capacity);
    for (long long k = 0; k < copies; ++k) {
      edges.push_back({edge.tail, edge.head, 1.0});
      if (origin) origin->push_back(e);
    }
  }
  return Network(net.node_count(), net.source(), net.interference(), std::move(edges));
}

}  // namespace dagcast
