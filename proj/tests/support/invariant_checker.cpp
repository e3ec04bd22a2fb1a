#include "invariant_checker.hpp"

#include <algorithm>
#include <limits>

#include "oracles.hpp"

namespace dagcast::testing {

namespace {

std::int64_t min_in_deficit(const Network& dag, const std::vector<std::int64_t>& r, NodeId j) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (EdgeId e : dag.in_edges(j)) {
    best = std::min(best, r[static_cast<std::size_t>(dag.edge(e).tail)] - r[static_cast<std::size_t>(j)]);
  }
  return best;
}

}  // namespace

void InvariantChecker::report(std::int64_t& counter, const std::string& message) {
  ++counter;
  if (messages_.size() < 20) messages_.push_back(message);
}

void InvariantChecker::on_slot(const SlotRecord& record) {
  ++slots_;
  check_activation(record);
  for (const StreamRecord& stream : record.streams) check_stream(record, stream);
}

void InvariantChecker::check_activation(const SlotRecord& record) {
  const Network& net = *record.net;
  const std::string at = "slot " + std::to_string(record.slot) + ": ";
  const auto& edges = record.activation.edges;
  if (!std::is_sorted(edges.begin(), edges.end())) report(activation_, at + "activation not sorted");
  if (net.interference() == Interference::primary) {
    std::vector<int> used(static_cast<std::size_t>(net.node_count()), 0);
    for (EdgeId e : edges) {
      if (used[static_cast<std::size_t>(net.edge(e).tail)]++ || used[static_cast<std::size_t>(net.edge(e).head)]++) {
        report(activation_, at + "activation is not a matching");
        break;
      }
    }
  }
  std::int64_t chosen = 0;
  for (EdgeId e : edges) chosen += record.edge_scores[static_cast<std::size_t>(e)];
  if (chosen != record.activation_weight) report(activation_, at + "reported activation weight differs from its score");
  const std::int64_t optimum = max_weight_matching(net, record.edge_scores);
  if (chosen != optimum) {
    report(activation_, at + "activation weight " + std::to_string(chosen) + " below optimum " + std::to_string(optimum));
  }
}

void InvariantChecker::check_stream(const SlotRecord& record, const StreamRecord& stream) {
  const Network& dag = *stream.dag;
  const auto& before = stream.received_before;
  const auto& after = stream.received_after;
  const std::string at = "slot " + std::to_string(record.slot) + ": ";

  for (EdgeId e = 0; e < dag.edge_count(); ++e) {
    const auto u = static_cast<std::size_t>(dag.edge(e).tail);
    const auto v = static_cast<std::size_t>(dag.edge(e).head);
    if (before[u] < before[v] || after[u] < after[v]) {
      report(deficit_, at + "negative deficit on edge " + std::to_string(e));
    }
  }

  // Delivery: per node, the transferred ranges tile R_j+1..R'_j exactly.
  const NodeId source = dag.source();
  const auto src = static_cast<std::size_t>(source);
  if (after[src] - before[src] != stream.arrivals) report(delivery_, at + "source gain differs from arrivals");
  std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> ranges(static_cast<std::size_t>(dag.node_count()));
  for (const Transfer& t : stream.transfers) {
    if (t.count <= 0) {
      report(delivery_, at + "empty transfer");
      continue;
    }
    const Edge& edge = dag.edge(t.edge);
    if (t.first + t.count - 1 > before[static_cast<std::size_t>(edge.tail)]) {
      report(delivery_, at + "sender did not hold forwarded packet");
    }
    if (t.count > stream.service[static_cast<std::size_t>(t.edge)]) report(delivery_, at + "transfer exceeds service");
    ranges[static_cast<std::size_t>(edge.head)].emplace_back(t.first, t.count);
  }
  for (NodeId j = 0; j < dag.node_count(); ++j) {
    if (j == source) continue;
    auto& list = ranges[static_cast<std::size_t>(j)];
    std::sort(list.begin(), list.end());
    std::int64_t next = before[static_cast<std::size_t>(j)] + 1;
    for (const auto& [first, count] : list) {
      if (first != next) {
        report(delivery_, at + "out-of-order or duplicate delivery at node " + std::to_string(j));
        break;
      }
      next += count;
    }
    if (next != after[static_cast<std::size_t>(j)] + 1) {
      report(delivery_, at + "counter of node " + std::to_string(j) + " disagrees with transfers");
    }
  }

  if (!stream.view) return;
  const DeficitView& view = *stream.view;
  for (NodeId j = 0; j < dag.node_count(); ++j) {
    if (j == source) continue;
    const auto ju = static_cast<std::size_t>(j);
    const std::int64_t x_before = min_in_deficit(dag, before, j);
    if (x_before != view.min_deficit[ju]) report(trace_, at + "X disagrees with the counters");
    std::int64_t offered = 0;
    for (EdgeId e : dag.in_edges(j)) offered += stream.service[static_cast<std::size_t>(e)];
    const auto istar = static_cast<std::size_t>(view.minimizer[ju]);
    const std::int64_t gained = after[istar] - before[istar];
    const std::int64_t bound = std::max<std::int64_t>(x_before - offered, 0) + gained;
    ++trace_checks_;
    if (min_in_deficit(dag, after, j) > bound) {
      report(trace_, at + "trace inequality fails at node " + std::to_string(j));
    }
  }
}

}  // namespace dagcast::testing
