#include "dagcast/trees.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include <nlohmann/json.hpp>

#include "dagcast/error.hpp"
#include "dagcast/lp.hpp"

namespace dagcast {

namespace {

constexpr EdgeId kNoEdge = -1;

// Parent-edge assignment with incremental cycle detection.
class ParentMap {
 public:
  explicit ParentMap(const Network& net)
      : net_(net), parent_(static_cast<std::size_t>(net.node_count()), kNoEdge) {}

  // True when giving v the parent edge e closes no directed cycle among the
  // assignments made so far.
  bool can_assign(NodeId v, EdgeId e) const {
    NodeId u = net_.edge(e).tail;
    for (int steps = 0; steps <= net_.node_count(); ++steps) {
      if (u == v) return false;
      const EdgeId pe = parent_[static_cast<std::size_t>(u)];
      if (pe == kNoEdge) return true;
      u = net_.edge(pe).tail;
    }
    return false;
  }

  void assign(NodeId v, EdgeId e) { parent_[static_cast<std::size_t>(v)] = e; }
  void clear(NodeId v) { parent_[static_cast<std::size_t>(v)] = kNoEdge; }

  std::vector<EdgeId> edges() const {
    std::vector<EdgeId> out;
    for (EdgeId e : parent_) {
      if (e != kNoEdge) out.push_back(e);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  const Network& net_;
  std::vector<EdgeId> parent_;
};

std::vector<NodeId> non_root_nodes(const Network& net) {
  std::vector<NodeId> nodes;
  for (NodeId v = 0; v < net.node_count(); ++v) {
    if (v != net.source()) nodes.push_back(v);
  }
  return nodes;
}

}  // namespace

bool is_arborescence(const Network& net, std::span<const EdgeId> edges) {
  const auto n = static_cast<std::size_t>(net.node_count());
  if (edges.size() + 1 != n) return false;
  std::vector<EdgeId> parent(n, kNoEdge);
  for (EdgeId e : edges) {
    if (e < 0 || e >= net.edge_count()) return false;
    const auto h = static_cast<std::size_t>(net.edge(e).head);
    if (static_cast<NodeId>(h) == net.source() || parent[h] != kNoEdge) return false;
    parent[h] = e;
  }
  for (NodeId v = 0; v < net.node_count(); ++v) {
    NodeId u = v;
    int steps = 0;
    while (u != net.source()) {
      const EdgeId pe = parent[static_cast<std::size_t>(u)];
      if (pe == kNoEdge || ++steps > net.node_count()) return false;
      u = net.edge(pe).tail;
    }
  }
  return true;
}

Arborescence make_arborescence(const Network& net, std::vector<EdgeId> edges) {
  std::sort(edges.begin(), edges.end());
  if (!is_arborescence(net, edges)) throw DomainError("edge set is not a spanning arborescence");
  return Arborescence{net.source(), std::move(edges)};
}

bool is_edge_disjoint(const TreePacking& packing) {
  std::vector<EdgeId> all;
  for (const auto& t : packing.trees) all.insert(all.end(), t.edges.begin(), t.edges.end());
  std::sort(all.begin(), all.end());
  return std::adjacent_find(all.begin(), all.end()) == all.end();
}

std::vector<Arborescence> enumerate_arborescences(const Network& net, std::size_t cap) {
  std::vector<Arborescence> out;
  const std::vector<NodeId> nodes = non_root_nodes(net);
  ParentMap parents(net);

  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    if (depth == nodes.size()) {
      if (out.size() >= cap) {
        throw ResourceLimitError("more than " + std::to_string(cap) + " arborescences", out.size());
      }
      out.push_back({net.source(), parents.edges()});
      return;
    }
    const NodeId v = nodes[depth];
    for (EdgeId e : net.in_edges(v)) {
      if (!parents.can_assign(v, e)) continue;
      parents.assign(v, e);
      self(self, depth + 1);
      parents.clear(v);
    }
  };
  recurse(recurse, 0);
  return out;
}

std::uint64_t count_arborescences(const Network& net) {
  std::vector<NodeId> nodes = non_root_nodes(net);
  const std::size_t n = nodes.size();
  if (n == 0) return 1;
  std::vector<int> index(static_cast<std::size_t>(net.node_count()), -1);
  for (std::size_t i = 0; i < n; ++i) index[static_cast<std::size_t>(nodes[i])] = static_cast<int>(i);

  __extension__ using Wide = __int128;
  std::vector<std::vector<Wide>> m(n, std::vector<Wide>(n, 0));
  for (const Edge& e : net.edges()) {
    const int h = index[static_cast<std::size_t>(e.head)];
    const int t = index[static_cast<std::size_t>(e.tail)];
    if (h < 0) continue;  // edge into the root
    m[static_cast<std::size_t>(h)][static_cast<std::size_t>(h)] += 1;
    if (t >= 0) m[static_cast<std::size_t>(t)][static_cast<std::size_t>(h)] -= 1;
  }

  // Bareiss fraction-free elimination; every intermediate is a minor.
  int sign = 1;
  Wide prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  const Wide det = sign * m[n - 1][n - 1];
  if (det < 0 || det > static_cast<Wide>(UINT64_MAX)) {
    throw ResourceLimitError("arborescence count does not fit in 64 bits");
  }
  return static_cast<std::uint64_t>(det);
}

namespace {

class PackingSearch {
 public:
  PackingSearch(const Network& net, int k) : net_(net), k_(k) {
    for (int t = 0; t < k; ++t) trees_.emplace_back(net);
    order_ = non_root_nodes(net);
    // Fewest candidate in-edges first.
    std::stable_sort(order_.begin(), order_.end(), [&](NodeId a, NodeId b) {
      return net.in_edges(a).size() < net.in_edges(b).size();
    });
    used_.assign(static_cast<std::size_t>(net.edge_count()), 0);
  }

  bool run() { return place(0, 0); }

  TreePacking packing() const {
    TreePacking out;
    for (const auto& t : trees_) out.trees.push_back({net_.source(), t.edges()});
    return out;
  }

 private:
  // Assign an in-edge of order_[depth] to tree `tree`, then move on.
  bool place(std::size_t depth, int tree) {
    if (depth == order_.size()) return true;
    if (tree == k_) return place(depth + 1, 0);
    const NodeId v = order_[depth];
    auto in = net_.in_edges(v);
    for (std::size_t i = 0; i < in.size(); ++i) {
      const EdgeId e = in[i];
      if (used_[static_cast<std::size_t>(e)]) continue;
      // Trees are interchangeable: on the first node, tree t takes a
      // higher edge than tree t-1.
      if (depth == 0 && tree > 0 && e < last_first_node_edge_) continue;
      if (!trees_[static_cast<std::size_t>(tree)].can_assign(v, e)) continue;
      trees_[static_cast<std::size_t>(tree)].assign(v, e);
      used_[static_cast<std::size_t>(e)] = 1;
      const EdgeId saved = last_first_node_edge_;
      if (depth == 0) last_first_node_edge_ = e;
      if (place(depth, tree + 1)) return true;
      last_first_node_edge_ = saved;
      used_[static_cast<std::size_t>(e)] = 0;
      trees_[static_cast<std::size_t>(tree)].clear(v);
    }
    return false;
  }

  const Network& net_;
  int k_;
  std::vector<ParentMap> trees_;
  std::vector<NodeId> order_;
  std::vector<char> used_;
  EdgeId last_first_node_edge_ = -1;
};

}  // namespace

TreePacking max_disjoint_packing(const Network& net, const PackingLimits& limits) {
  if (net.node_count() > limits.max_nodes || net.edge_count() > limits.max_edges) {
    throw ResourceLimitError("packing search limited to " + std::to_string(limits.max_nodes) +
                             " nodes and " + std::to_string(limits.max_edges) + " edges");
  }
  for (const Edge& e : net.edges()) {
    if (e.capacity != 1.0) throw DomainError("packing requires unit capacities; expand parallel edges first");
  }
  const int upper = min_in_degree(net).degree;
  for (int k = upper; k > 0; --k) {
    PackingSearch search(net, k);
    if (search.run()) return search.packing();
  }
  return {};
}

TreePacking exchange_packing_edges(const Network& net, const TreePacking& packing, NodeId a,
                                   NodeId b, NodeId c) {
  if (packing.size() < 2) throw DomainError("edge exchange needs at least two trees");
  auto find_edge = [&](const Arborescence& t, NodeId tail, NodeId head) -> EdgeId {
    for (EdgeId e : t.edges) {
      if (net.edge(e).tail == tail && net.edge(e).head == head) return e;
    }
    return kNoEdge;
  };

  for (std::size_t i = 0; i < packing.size(); ++i) {
    const EdgeId ab = find_edge(packing.trees[i], a, b);
    if (ab == kNoEdge || find_edge(packing.trees[i], b, c) == kNoEdge) continue;

    for (std::size_t j = 0; j < packing.size(); ++j) {
      if (j == i) continue;
      EdgeId db = kNoEdge;
      for (EdgeId e : packing.trees[j].edges) {
        if (net.edge(e).head == b) db = e;
      }
      if (db == kNoEdge) continue;
      const NodeId d = net.edge(db).tail;
      if (d == a || d == c) continue;

      TreePacking out = packing;
      auto& t1 = out.trees[i].edges;
      auto& t2 = out.trees[j].edges;
      std::replace(t1.begin(), t1.end(), ab, db);
      std::replace(t2.begin(), t2.end(), db, ab);
      std::sort(t1.begin(), t1.end());
      std::sort(t2.begin(), t2.end());
      if (!is_arborescence(net, t1) || !is_arborescence(net, t2)) {
        throw DomainError("edge exchange did not yield two arborescences");
      }
      return out;
    }
    throw DomainError("no other tree offers an in-edge of b from outside {a, c}");
  }
  return packing;
}

double tree_restricted_capacity(const Network& net, std::span<const Arborescence> trees,
                                const EnumerationLimits& limits) {
  if (trees.empty()) return 0.0;
  for (const auto& t : trees) {
    if (t.root != net.source() || !is_arborescence(net, t.edges)) {
      throw DomainError("tree is not an arborescence rooted at the source");
    }
  }
  const auto edge_count = static_cast<std::size_t>(net.edge_count());
  const std::size_t k_count = trees.size();
  const bool primary = net.interference() == Interference::primary;
  ActivationSet acts;
  if (primary) acts = enumerate_activations(net, limits);

  lp::Problem prob(k_count + (primary ? acts.size() : 0));
  for (std::size_t k = 0; k < k_count; ++k) prob.objective[k] = 1.0;
  std::vector<std::size_t> edge_row(edge_count, SIZE_MAX);
  for (std::size_t k = 0; k < k_count; ++k) {
    for (EdgeId e : trees[k].edges) {
      auto& row = edge_row[static_cast<std::size_t>(e)];
      if (row == SIZE_MAX) row = prob.add_row(primary ? 0.0 : net.edge(e).capacity);
      prob.at(row, k) = 1.0;
    }
  }
  if (primary) {
    const std::size_t simplex_row = prob.add_row(1.0);
    for (std::size_t l = 0; l < acts.size(); ++l) {
      prob.at(simplex_row, k_count + l) = 1.0;
      for (EdgeId e : acts.edges_of(l)) {
        const std::size_t row = edge_row[static_cast<std::size_t>(e)];
        if (row != SIZE_MAX) prob.at(row, k_count + l) = -net.edge(e).capacity;
      }
    }
  }
  return lp::maximize(prob).value;
}

nlohmann::json to_json(const Arborescence& tree) { return tree.edges; }

}  // namespace dagcast
