#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace dagcast {

using NodeId = int;
using EdgeId = int;

enum class Interference {
  primary,  // active links must form a matching of the undirected multigraph
  wired,    // every subset of links may be active together
};

std::string_view to_string(Interference mode) noexcept;

struct Edge {
  NodeId tail = 0;
  NodeId head = 0;
  double capacity = 1.0;  // packets per slot

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Directed multigraph with a designated source. Edge ids are positions in
// the edge list; parallel edges are distinct ids. Immutable once built.
class Network {
 public:
  // Throws StructuralError on dangling ids, self-loops or bad capacities.
  Network(int node_count, NodeId source, Interference interference, std::vector<Edge> edges);

  int node_count() const noexcept { return node_count_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  NodeId source() const noexcept { return source_; }
  Interference interference() const noexcept { return interference_; }

  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(static_cast<std::size_t>(e)); }

  // Incident edge ids in ascending id order.
  std::span<const EdgeId> in_edges(NodeId v) const { return in_.at(static_cast<std::size_t>(v)); }
  std::span<const EdgeId> out_edges(NodeId v) const { return out_.at(static_cast<std::size_t>(v)); }

  // Distinct tails of in-edges of v, ascending.
  std::vector<NodeId> in_neighbors(NodeId v) const;

  bool has_integral_capacities() const noexcept;

  friend bool operator==(const Network& a, const Network& b) {
    return a.node_count_ == b.node_count_ && a.source_ == b.source_ &&
           a.interference_ == b.interference_ && a.edges_ == b.edges_;
  }

 private:
  int node_count_;
  NodeId source_;
  Interference interference_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> in_;
  std::vector<std::vector<EdgeId>> out_;
};

// Sparse binary activation vector: the ids of active edges, ascending.
struct ActivationVector {
  std::vector<EdgeId> edges;

  bool empty() const noexcept { return edges.empty(); }
  bool contains(EdgeId e) const;
  std::vector<char> indicator(int edge_count) const;

  friend bool operator==(const ActivationVector&, const ActivationVector&) = default;
};

// True when no two of the given edges share an endpoint (directions ignored).
bool is_matching(const Network& net, std::span<const EdgeId> edges);

// Flat storage for an enumerated activation family.
class ActivationSet {
 public:
  ActivationSet() = default;

  std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const EdgeId> edges_of(std::size_t i) const {
    return std::span<const EdgeId>(flat_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
  }
  ActivationVector at(std::size_t i) const;

  void push_back(std::span<const EdgeId> edges);

 private:
  std::vector<EdgeId> flat_;
  std::vector<std::size_t> offsets_{0};
};

struct EnumerationLimits {
  int max_primary_edges = 16;
  std::size_t max_activations = 2'000'000;
};

// Primary mode: every matching (including the empty one) ordered
// lexicographically by sorted edge-id sequence. Wired mode: {empty, all}.
ActivationSet enumerate_activations(const Network& net, const EnumerationLimits& limits = {});

struct TopologicalOrder {
  std::vector<NodeId> order;
};

// One directed cycle, first node repeated at the end: [a, b, c, a].
struct CycleReport {
  std::vector<NodeId> cycle;
};

using TopologyResult = std::variant<TopologicalOrder, CycleReport>;

// Kahn's algorithm taking the smallest ready node id first; on failure a
// cycle found by DFS in node-id/edge-id order.
TopologyResult validate_topology(const Network& net);
bool is_dag(const Network& net);

// Node subset U with source in U and U != V.
class ProperCut {
 public:
  ProperCut(const Network& net, std::vector<NodeId> members);
  static ProperCut from_mask(const Network& net, std::uint64_t mask);

  bool contains(NodeId v) const { return member_.at(static_cast<std::size_t>(v)) != 0; }
  std::vector<EdgeId> crossing_edges(const Network& net) const;

 private:
  std::vector<char> member_;
};

// Sum of c_e * beta_e over the edges leaving the cut.
double cut_value(const Network& net, std::span<const double> beta, const ProperCut& cut);

struct InDegreeMin {
  int degree = 0;
  NodeId node = 0;
};

// Minimum in-degree over non-source nodes, parallel edges counted; lowest id
// wins ties. Throws DomainError on a single-node network.
InDegreeMin min_in_degree(const Network& net);

// Replaces every edge of integral capacity c by c parallel unit edges (c = 0
// drops the edge). origin, when given, receives the source edge id of every
// expanded edge.
Network expand_unit_edges(const Network& net, std::vector<EdgeId>* origin = nullptr);

}  // namespace dagcast
