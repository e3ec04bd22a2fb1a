#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dagcast/arrivals.hpp"
#include "dagcast/graph.hpp"
#include "dagcast/policy.hpp"
#include "dagcast/trees.hpp"

namespace dagcast {

struct PiStarPolicy {};

// Explicit permutations when given, otherwise `count` random classes drawn
// from the run seed.
struct MulticlassPolicy {
  int count = 1;
  std::vector<std::vector<NodeId>> permutations;
};

struct TreeBaselinePolicy {
  std::vector<Arborescence> trees;
};

using PolicyConfig = std::variant<PiStarPolicy, MulticlassPolicy, TreeBaselinePolicy>;

// "pi_star", "multiclass:K", "tree:N"
std::string policy_name(const PolicyConfig& policy);

// What one packet stream (the single π* stream, a class, or a tree) did in a
// slot. Edge ids are local to `dag`.
struct StreamRecord {
  const Network* dag = nullptr;
  std::vector<EdgeId> parent_edges;  // local -> network edge id
  std::vector<std::int64_t> received_before;
  std::vector<std::int64_t> received_after;
  const DeficitView* view = nullptr;   // null for tree streams
  std::vector<std::int64_t> service;   // offered capacity per local edge
  std::int64_t arrivals = 0;
  std::vector<Transfer> transfers;
};

struct SlotRecord {
  std::int64_t slot = 0;
  const Network* net = nullptr;
  const ActivationSet* activations = nullptr;
  std::vector<std::int64_t> edge_scores;  // c_e * W_e per network edge
  ActivationVector activation;
  std::int64_t activation_weight = 0;
  std::vector<StreamRecord> streams;
};

class SlotObserver {
 public:
  virtual ~SlotObserver() = default;
  virtual void on_slot(const SlotRecord& record) = 0;
};

inline constexpr double kInstabilitySlopeThreshold = 0.01;

struct RunMetrics {
  std::string policy;
  double lambda = 0.0;
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> final_received;  // per node, all streams
  std::int64_t total_arrivals = 0;
  double throughput = 0.0;                   // min_j R_j(T) / T
  std::vector<std::int32_t> delays;          // slots, fully delivered packets
  double mean_delay = 0.0;                   // NaN when nothing was delivered
  std::int64_t undelivered = 0;
  std::vector<std::int64_t> sample_slots;
  std::vector<double> deficit_series;        // sum_j X_j, or total tree backlog
  double instability_slope = 0.0;            // fit over the last half
  std::vector<std::string> notes;

  bool unstable() const noexcept { return instability_slope > kInstabilitySlopeThreshold; }
};

struct RunOptions {
  ArrivalKind arrivals = ArrivalKind::bernoulli_batch;
  EnumerationLimits limits;
  std::int64_t sample_every = 100;
  SlotObserver* observer = nullptr;
};

// Drives `horizon` slots. Deterministic in (net, policy, rate, seed).
// Throws DomainError when pi_star meets a cyclic network.
RunMetrics run(const Network& net, const PolicyConfig& policy, double rate, std::int64_t horizon,
               std::uint64_t seed, const RunOptions& options = {});

struct NamedPolicy {
  std::string name;
  PolicyConfig config;
};

struct SweepRecord {
  std::string policy;
  double lambda = 0.0;
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
  double throughput = 0.0;
  double mean_delay = 0.0;
  std::int64_t undelivered = 0;
  double instability_slope = 0.0;
  std::string error;  // non-empty for failed cells

  bool failed() const noexcept { return !error.empty(); }
};

struct SweepOptions {
  RunOptions run;  // observer is ignored
  unsigned threads = 1;
};

// policies x lambdas x seeds, rows in that nesting order. Cells that throw
// become failed rows.
std::vector<SweepRecord> sweep(const Network& net, std::span<const NamedPolicy> policies,
                               std::span<const double> lambdas, std::int64_t horizon,
                               std::span<const std::uint64_t> seeds, const SweepOptions& options = {});

inline constexpr const char* kSweepCsvHeader =
    "policy,lambda,horizon,seed,throughput,mean_delay,undelivered,instability_slope";

void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records);

struct FractionPoint {
  int classes = 0;
  double mean_fraction = 0.0;
  std::size_t samples = 0;
};

// For each K: mean over seeds of multiclass_capacity(make_classes(K, seed))
// divided by cut_bound_oracle(net).
std::vector<FractionPoint> multiclass_fraction_curve(const Network& net, std::span<const int> class_counts,
                                                     std::span<const std::uint64_t> seeds,
                                                     const EnumerationLimits& limits = {});

inline constexpr const char* kFractionCsvHeader = "network,k,samples,mean_fraction";

void write_fraction_csv(std::ostream& out, std::string_view network, std::span<const FractionPoint> points);

// Worker count from DAGCAST_THREADS, else hardware concurrency (>= 1).
unsigned default_thread_count();

}  // namespace dagcast
