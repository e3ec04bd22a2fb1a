#include "dagcast/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <memory>
#include <ostream>
#include <thread>

#include "dagcast/capacity.hpp"
#include "dagcast/error.hpp"
#include "dagcast/multiclass.hpp"
#include "dagcast/numeric.hpp"
#include "dagcast/rng.hpp"
#include "dagcast/tree_policy.hpp"

namespace dagcast {

std::string policy_name(const PolicyConfig& policy) {
  struct Namer {
    std::string operator()(const PiStarPolicy&) const { return "pi_star"; }
    std::string operator()(const MulticlassPolicy& p) const {
      const std::size_t k = p.permutations.empty() ? static_cast<std::size_t>(p.count) : p.permutations.size();
      return "multiclass:" + std::to_string(k);
    }
    std::string operator()(const TreeBaselinePolicy& p) const { return "tree:" + std::to_string(p.trees.size()); }
  };
  return std::visit(Namer{}, policy);
}

namespace {

// Sum over non-source nodes of min_{i in In(j)} (R_i - R_j).
std::int64_t min_deficit_sum(const Network& dag, std::span<const std::int64_t> received) {
  std::int64_t total = 0;
  for (NodeId j = 0; j < dag.node_count(); ++j) {
    if (j == dag.source()) continue;
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (EdgeId e : dag.in_edges(j)) {
      best = std::min(best, received[static_cast<std::size_t>(dag.edge(e).tail)] - received[static_cast<std::size_t>(j)]);
    }
    if (best != std::numeric_limits<std::int64_t>::max()) total += best;
  }
  return total;
}

std::vector<EdgeId> identity_edges(const Network& net) {
  std::vector<EdgeId> ids(static_cast<std::size_t>(net.edge_count()));
  for (EdgeId e = 0; e < net.edge_count(); ++e) ids[static_cast<std::size_t>(e)] = e;
  return ids;
}

std::vector<std::int64_t> copy_counts(std::span<const std::int64_t> s) { return {s.begin(), s.end()}; }

// A packet stream whose packets complete once every node holds them.
struct StreamView {
  std::span<const std::int64_t> received;
  std::span<const std::int64_t> arrival_slots;
};

class Driver {
 public:
  virtual ~Driver() = default;
  virtual void step(std::int64_t arrivals, std::int64_t slot, SlotRecord* record) = 0;
  virtual std::vector<StreamView> streams() const = 0;
  virtual double backlog_measure() const = 0;
};

class PiStarDriver final : public Driver {
 public:
  PiStarDriver(const Network& net, const ActivationSet& acts)
      : net_(net), acts_(acts), state_(net.node_count(), net.source()), parent_(identity_edges(net)) {}

  void step(std::int64_t arrivals, std::int64_t slot, SlotRecord* record) override {
    if (!record) {
      policy_step(state_, net_, acts_, arrivals, slot);
      return;
    }
    StreamRecord stream;
    stream.dag = &net_;
    stream.parent_edges = parent_;
    stream.received_before = copy_counts(state_.received());
    SlotDecision d = policy_step(state_, net_, acts_, arrivals, slot, &view_);
    stream.received_after = copy_counts(state_.received());
    stream.view = &view_;
    stream.service.assign(static_cast<std::size_t>(net_.edge_count()), 0);
    for (EdgeId e : d.activation.edges) stream.service[static_cast<std::size_t>(e)] = packet_capacity(net_, e);
    stream.arrivals = arrivals;
    stream.transfers = d.transfers;
    record->edge_scores.resize(static_cast<std::size_t>(net_.edge_count()));
    for (EdgeId e = 0; e < net_.edge_count(); ++e) {
      record->edge_scores[static_cast<std::size_t>(e)] = packet_capacity(net_, e) * view_.weight[static_cast<std::size_t>(e)];
    }
    record->activation = d.activation;
    record->activation_weight = d.activation_weight;
    record->streams.push_back(std::move(stream));
  }

  std::vector<StreamView> streams() const override {
    return {{state_.received(), state_.arrival_slots()}};
  }

  double backlog_measure() const override {
    return static_cast<double>(min_deficit_sum(net_, state_.received()));
  }

 private:
  const Network& net_;
  const ActivationSet& acts_;
  PolicyState state_;
  DeficitView view_;
  std::vector<EdgeId> parent_;
};

class MulticlassDriver final : public Driver {
 public:
  MulticlassDriver(const Network& net, const ActivationSet& acts, std::vector<ClassSpec> classes)
      : net_(net), acts_(acts), classes_(std::move(classes)), state_(net, classes_) {}

  const std::vector<ClassSpec>& classes() const { return classes_; }

  void step(std::int64_t arrivals, std::int64_t slot, SlotRecord* record) override {
    if (!record) {
      multiclass_step(state_, classes_, net_, acts_, arrivals, slot);
      return;
    }
    MulticlassDecision d = multiclass_step(state_, classes_, net_, acts_, arrivals, slot, &details_);
    record->edge_scores.resize(static_cast<std::size_t>(net_.edge_count()));
    for (EdgeId e = 0; e < net_.edge_count(); ++e) {
      record->edge_scores[static_cast<std::size_t>(e)] = packet_capacity(net_, e) * d.weights[static_cast<std::size_t>(e)].weight;
    }
    record->activation = d.activation;
    record->activation_weight = d.activation_weight;
    for (std::size_t k = 0; k < classes_.size(); ++k) {
      if (!classes_[k].spanning) continue;
      StreamRecord stream;
      stream.dag = &classes_[k].dag;
      stream.parent_edges = classes_[k].edges;
      stream.received_before = details_[k].received_before;
      stream.received_after = copy_counts(state_.classes[k].received());
      stream.view = &details_[k].view;
      stream.service = details_[k].service;
      stream.arrivals = details_[k].decision.arrivals;
      stream.transfers = details_[k].decision.transfers;
      record->streams.push_back(std::move(stream));
    }
  }

  std::vector<StreamView> streams() const override {
    std::vector<StreamView> out;
    for (const auto& s : state_.classes) out.push_back({s.received(), s.arrival_slots()});
    return out;
  }

  double backlog_measure() const override {
    std::int64_t total = 0;
    for (std::size_t k = 0; k < classes_.size(); ++k) {
      if (classes_[k].spanning) total += min_deficit_sum(classes_[k].dag, state_.classes[k].received());
    }
    return static_cast<double>(total);
  }

 private:
  const Network& net_;
  const ActivationSet& acts_;
  std::vector<ClassSpec> classes_;
  MulticlassState state_;
  std::vector<ClassSlotDetail> details_;
};

class TreeDriver final : public Driver {
 public:
  TreeDriver(const Network& net, const ActivationSet& acts, std::vector<Arborescence> trees)
      : net_(net), acts_(acts), policy_(net, std::move(trees)) {}

  void step(std::int64_t arrivals, std::int64_t slot, SlotRecord* record) override {
    if (!record) {
      policy_.step(acts_, arrivals, slot);
      return;
    }
    std::vector<std::vector<std::int64_t>> before = policy_.state().received;
    TreeSlotDecision d = policy_.step(acts_, arrivals, slot);
    record->edge_scores.resize(static_cast<std::size_t>(net_.edge_count()));
    for (EdgeId e = 0; e < net_.edge_count(); ++e) {
      record->edge_scores[static_cast<std::size_t>(e)] = packet_capacity(net_, e) * d.edge_weights[static_cast<std::size_t>(e)];
    }
    record->activation = d.activation;
    record->activation_weight = d.activation_weight;
    for (std::size_t k = 0; k < policy_.tree_count(); ++k) {
      const auto& tree_edges = policy_.trees()[k].edges;
      StreamRecord stream;
      stream.dag = &policy_.tree_network(k);
      stream.parent_edges = tree_edges;
      stream.received_before = std::move(before[k]);
      stream.received_after = policy_.state().received[k];
      stream.arrivals = std::count(d.admissions.begin(), d.admissions.end(), static_cast<int>(k));
      stream.service.assign(tree_edges.size(), 0);
      for (std::size_t i = 0; i < tree_edges.size(); ++i) {
        if (d.activation.contains(tree_edges[i])) stream.service[i] = packet_capacity(net_, tree_edges[i]);
      }
      for (const TreeTransfer& t : d.transfers) {
        if (t.tree != static_cast<int>(k)) continue;
        auto it = std::lower_bound(tree_edges.begin(), tree_edges.end(), t.transfer.edge);
        Transfer local = t.transfer;
        local.edge = static_cast<EdgeId>(it - tree_edges.begin());
        stream.transfers.push_back(local);
      }
      record->streams.push_back(std::move(stream));
    }
  }

  std::vector<StreamView> streams() const override {
    std::vector<StreamView> out;
    for (std::size_t k = 0; k < policy_.tree_count(); ++k) {
      out.push_back({policy_.state().received[k], policy_.state().arrival_slots[k]});
    }
    return out;
  }

  double backlog_measure() const override {
    std::int64_t total = 0;
    for (std::size_t k = 0; k < policy_.tree_count(); ++k) total += policy_.total_backlog(k);
    return static_cast<double>(total);
  }

 private:
  const Network& net_;
  const ActivationSet& acts_;
  TreePolicy policy_;
};

void require_rooted(const Network& net) {
  for (NodeId v = 0; v < net.node_count(); ++v) {
    if (v != net.source() && net.in_edges(v).empty()) {
      throw StructuralError("node " + std::to_string(v) + " has no in-neighbor; graph is not rooted");
    }
  }
}

}  // namespace

RunMetrics run(const Network& net, const PolicyConfig& policy, double rate, std::int64_t horizon,
               std::uint64_t seed, const RunOptions& options) {
  if (horizon < 1) throw DomainError("horizon must be at least one slot");
  if (options.sample_every < 1) throw DomainError("sample interval must be positive");
  SplitMix64 seeds(seed);
  const std::uint64_t arrival_seed = seeds.next();
  const std::uint64_t class_seed = seeds.next();

  RunMetrics metrics;
  metrics.policy = policy_name(policy);
  metrics.lambda = rate;
  metrics.horizon = horizon;
  metrics.seed = seed;

  const ActivationSet acts = enumerate_activations(net, options.limits);
  std::unique_ptr<Driver> driver;
  if (std::holds_alternative<PiStarPolicy>(policy)) {
    if (!is_dag(net)) throw DomainError("pi_star requires a DAG; use the multiclass policy for cyclic networks");
    require_rooted(net);
    driver = std::make_unique<PiStarDriver>(net, acts);
  } else if (const auto* mc = std::get_if<MulticlassPolicy>(&policy)) {
    std::vector<ClassSpec> classes;
    if (!mc->permutations.empty()) {
      for (const auto& p : mc->permutations) classes.push_back(make_class(net, p));
    } else {
      classes = make_classes(net, mc->count, class_seed);
    }
    const auto idle = std::count_if(classes.begin(), classes.end(), [](const ClassSpec& c) { return !c.spanning; });
    if (idle > 0) {
      metrics.notes.push_back(std::to_string(idle) + " class(es) do not reach every node and carry no traffic");
    }
    driver = std::make_unique<MulticlassDriver>(net, acts, std::move(classes));
  } else {
    driver = std::make_unique<TreeDriver>(net, acts, std::get<TreeBaselinePolicy>(policy).trees);
  }

  ArrivalProcess arrivals(ArrivalSpec{options.arrivals, rate, arrival_seed});
  std::vector<std::int64_t> completed(driver->streams().size(), 0);
  SlotRecord record;

  for (std::int64_t slot = 0; slot < horizon; ++slot) {
    const std::int64_t a = arrivals.next();
    metrics.total_arrivals += a;
    if (options.observer) {
      record = SlotRecord{};
      record.slot = slot;
      record.net = &net;
      record.activations = &acts;
      driver->step(a, slot, &record);
      options.observer->on_slot(record);
    } else {
      driver->step(a, slot, nullptr);
    }

    const auto streams = driver->streams();
    for (std::size_t s = 0; s < streams.size(); ++s) {
      const std::int64_t done = *std::min_element(streams[s].received.begin(), streams[s].received.end());
      for (std::int64_t p = completed[s] + 1; p <= done; ++p) {
        metrics.delays.push_back(static_cast<std::int32_t>(slot - streams[s].arrival_slots[static_cast<std::size_t>(p - 1)]));
      }
      completed[s] = std::max(completed[s], done);
    }
    if ((slot + 1) % options.sample_every == 0) {
      metrics.sample_slots.push_back(slot + 1);
      metrics.deficit_series.push_back(driver->backlog_measure());
    }
  }

  metrics.final_received.assign(static_cast<std::size_t>(net.node_count()), 0);
  for (const auto& s : driver->streams()) {
    for (std::size_t v = 0; v < s.received.size(); ++v) metrics.final_received[v] += s.received[v];
  }
  const std::int64_t min_received = *std::min_element(metrics.final_received.begin(), metrics.final_received.end());
  metrics.throughput = static_cast<double>(min_received) / static_cast<double>(horizon);
  const auto delivered = static_cast<std::int64_t>(metrics.delays.size());
  metrics.undelivered = metrics.total_arrivals - delivered;
  if (delivered > 0) {
    double sum = 0.0;
    for (std::int32_t d : metrics.delays) sum += d;
    metrics.mean_delay = sum / static_cast<double>(delivered);
  } else {
    metrics.mean_delay = std::numeric_limits<double>::quiet_NaN();
  }
  const std::size_t half = metrics.sample_slots.size() / 2;
  std::vector<double> xs;
  for (std::size_t i = half; i < metrics.sample_slots.size(); ++i) xs.push_back(static_cast<double>(metrics.sample_slots[i]));
  metrics.instability_slope = least_squares_slope(
      xs, std::span<const double>(metrics.deficit_series).subspan(half));
  return metrics;
}

std::vector<SweepRecord> sweep(const Network& net, std::span<const NamedPolicy> policies,
                               std::span<const double> lambdas, std::int64_t horizon,
                               std::span<const std::uint64_t> seeds, const SweepOptions& options) {
  struct Cell {
    std::size_t policy;
    double lambda;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t p = 0; p < policies.size(); ++p) {
    for (double lambda : lambdas) {
      for (std::uint64_t seed : seeds) cells.push_back({p, lambda, seed});
    }
  }
  std::vector<SweepRecord> rows(cells.size());
  RunOptions run_options = options.run;
  run_options.observer = nullptr;

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      SweepRecord& row = rows[i];
      row.policy = policies[c.policy].name;
      row.lambda = c.lambda;
      row.horizon = horizon;
      row.seed = c.seed;
      try {
        const RunMetrics m = run(net, policies[c.policy].config, c.lambda, horizon, c.seed, run_options);
        row.throughput = m.throughput;
        row.mean_delay = m.mean_delay;
        row.undelivered = m.undelivered;
        row.instability_slope = m.instability_slope;
      } catch (const std::exception& e) {
        row.error = e.what();
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.throughput = row.mean_delay = row.instability_slope = nan;
        row.undelivered = -1;
      }
    }
  };
  const unsigned threads = std::max(1U, std::min<unsigned>(options.threads, static_cast<unsigned>(cells.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.policy << ',' << format_g6(r.lambda) << ',' << r.horizon << ',' << r.seed << ','
        << format_g6(r.throughput) << ',' << format_g6(r.mean_delay) << ',' << r.undelivered << ','
        << format_g6(r.instability_slope) << '\n';
  }
}

std::vector<FractionPoint> multiclass_fraction_curve(const Network& net, std::span<const int> class_counts,
                                                     std::span<const std::uint64_t> seeds,
                                                     const EnumerationLimits& limits) {
  for (int k : class_counts) {
    if (k < 1) throw DomainError("number of classes must be at least 1");
  }
  if (seeds.empty()) throw DomainError("at least one seed is required");
  const double optimum = cut_bound_oracle(net, limits);
  std::vector<FractionPoint> out;
  for (int k : class_counts) {
    FractionPoint point{k, 0.0, 0};
    for (std::uint64_t seed : seeds) {
      const auto classes = make_classes(net, k, seed);
      const auto edge_sets = class_edge_sets(classes);
      const double rate = multiclass_capacity(net, edge_sets, limits).total;
      point.mean_fraction += optimum > 0 ? rate / optimum : 0.0;
      ++point.samples;
    }
    point.mean_fraction /= static_cast<double>(point.samples);
    out.push_back(point);
  }
  return out;
}

void write_fraction_csv(std::ostream& out, std::string_view network, std::span<const FractionPoint> points) {
  out << kFractionCsvHeader << '\n';
  for (const auto& p : points) {
    out << network << ',' << p.classes << ',' << p.samples << ',' << format_g6(p.mean_fraction) << '\n';
  }
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("DAGCAST_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace dagcast
