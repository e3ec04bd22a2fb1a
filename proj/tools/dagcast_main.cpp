// dagcast: command-line front end for the broadcast capacity and simulation
// library. Exit codes: 0 success, 1 library error, 2 usage error.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dagcast/capacity.hpp"
#include "dagcast/error.hpp"
#include "dagcast/graph.hpp"
#include "dagcast/network_io.hpp"
#include "dagcast/numeric.hpp"
#include "dagcast/policy.hpp"
#include "dagcast/scenarios.hpp"
#include "dagcast/sim.hpp"
#include "dagcast/trees.hpp"

namespace {

using namespace dagcast;

// Bad flag values the option parser cannot see (policy names, permutations).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LoadedNet {
  std::string name;
  Network net;
  std::vector<std::string> labels;
  std::vector<Arborescence> trees;
  EnumerationLimits limits;
};

LoadedNet load(const std::string& spec, int max_edges) {
  LoadedNet out{spec, Network(1, 0, Interference::wired, {}), {}, {}, {}};
  const auto& names = scenario_names();
  if (std::find(names.begin(), names.end(), spec) != names.end()) {
    const Scenario& s = scenario(spec);
    out.net = s.network;
    out.labels = s.labels;
    out.trees = s.trees;
    out.limits = s.limits;
  } else if (std::filesystem::exists(spec)) {
    out.net = load_network(spec);
    out.name = std::filesystem::path(spec).stem().string();
  } else {
    scenario(spec);  // throws with the list of known scenarios
  }
  if (out.labels.empty()) {
    for (NodeId v = 0; v < out.net.node_count(); ++v) out.labels.push_back(std::to_string(v));
  }
  if (max_edges > 0) out.limits.max_primary_edges = max_edges;
  return out;
}

std::string edge_label(const LoadedNet& n, EdgeId e) {
  const Edge& edge = n.net.edge(e);
  return n.labels[static_cast<std::size_t>(edge.tail)] + "->" + n.labels[static_cast<std::size_t>(edge.head)];
}

std::string edge_list(const LoadedNet& n, std::span<const EdgeId> edges) {
  std::string s = "{";
  for (std::size_t i = 0; i < edges.size(); ++i) s += (i ? ", " : "") + edge_label(n, edges[i]);
  return s + "}";
}

std::vector<Arborescence> tree_set(const LoadedNet& n, std::size_t count) {
  if (!n.trees.empty()) {
    if (count > n.trees.size()) {
      throw UsageError("scenario " + n.name + " defines only " + std::to_string(n.trees.size()) + " trees");
    }
    return {n.trees.begin(), n.trees.begin() + static_cast<std::ptrdiff_t>(count)};
  }
  auto all = enumerate_arborescences(n.net, count);
  if (all.size() < count) throw UsageError("network has fewer than " + std::to_string(count) + " arborescences");
  return all;
}

std::vector<NodeId> parse_permutation(const std::string& text) {
  std::vector<NodeId> perm;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      perm.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw UsageError("bad permutation entry '" + item + "'");
    }
  }
  return perm;
}

PolicyConfig parse_policy(const std::string& text, const LoadedNet& n, const std::vector<std::string>& classes) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  std::optional<int> arg;
  if (colon != std::string::npos) {
    try {
      arg = std::stoi(text.substr(colon + 1));
    } catch (const std::exception&) {
      throw UsageError("bad policy argument in '" + text + "'");
    }
    if (*arg < 1) throw UsageError("policy argument must be positive in '" + text + "'");
  }
  if (head == "pi_star" && !arg) return PiStarPolicy{};
  if (head == "multiclass") {
    MulticlassPolicy p;
    if (!classes.empty()) {
      for (const auto& c : classes) p.permutations.push_back(parse_permutation(c));
      if (arg && static_cast<std::size_t>(*arg) != p.permutations.size()) {
        throw UsageError("--classes gives " + std::to_string(p.permutations.size()) + " permutations but policy asks for " +
                         std::to_string(*arg));
      }
    } else {
      p.count = arg.value_or(1);
    }
    return p;
  }
  if (head == "tree") {
    return TreeBaselinePolicy{tree_set(n, arg ? static_cast<std::size_t>(*arg) : std::max<std::size_t>(1, n.trees.size()))};
  }
  throw UsageError("unknown policy '" + text + "' (expected pi_star, multiclass[:K] or tree[:N])");
}

int cmd_capacity(const LoadedNet& n, bool json) {
  const Network& net = n.net;
  if (!is_dag(net)) {
    const double bound = cut_bound_oracle(net, n.limits);
    if (json) {
      std::cout << nlohmann::json{{"cut_bound", bound}}.dump() << '\n';
    } else {
      std::printf("network    %s (%d nodes, %d edges, %s)\n", n.name.c_str(), net.node_count(), net.edge_count(),
                  std::string(to_string(net.interference())).c_str());
      std::printf("cut_bound  %s (%s)\n", format_g6(bound).c_str(), to_string(approximate_rational(bound)).c_str());
      std::printf("note       network has a directed cycle; only the cut bound is reported\n");
    }
    return 0;
  }
  const CapacityResult result = sparse_support(lambda_dag(net, n.limits));
  if (json) {
    std::cout << to_json(result).dump() << '\n';
    return 0;
  }
  std::printf("network    %s (%d nodes, %d edges, %s)\n", n.name.c_str(), net.node_count(), net.edge_count(),
              std::string(to_string(net.interference())).c_str());
  std::printf("lambda     %s (%s)\n", format_g6(result.lambda).c_str(),
              to_string(approximate_rational(result.lambda)).c_str());
  std::printf("beta      ");
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    std::printf(" %s=%s", edge_label(n, e).c_str(), format_g6(result.beta[static_cast<std::size_t>(e)]).c_str());
  }
  std::printf("\nsupport    %zu activation(s)\n", result.support.size());
  for (const auto& s : result.support) {
    std::printf("  p=%-10s %s\n", format_g6(s.probability).c_str(), edge_list(n, s.activation.edges).c_str());
  }
  return 0;
}

int cmd_treepack(const LoadedNet& n) {
  const TreePacking packing = max_disjoint_packing(n.net);
  std::printf("min_in_degree %d\n", min_in_degree(n.net).degree);
  std::printf("trees         %zu\n", packing.trees.size());
  for (std::size_t k = 0; k < packing.trees.size(); ++k) {
    std::printf("  T%zu %s\n", k + 1, edge_list(n, packing.trees[k].edges).c_str());
  }
  return 0;
}

void print_metrics(const RunMetrics& m) {
  std::printf("policy       %s\n", m.policy.c_str());
  std::printf("lambda       %s\n", format_g6(m.lambda).c_str());
  std::printf("slots        %lld\n", static_cast<long long>(m.horizon));
  std::printf("seed         %llu\n", static_cast<unsigned long long>(m.seed));
  std::printf("arrivals     %lld\n", static_cast<long long>(m.total_arrivals));
  std::printf("throughput   %s\n", format_g6(m.throughput).c_str());
  std::printf("mean_delay   %s\n", format_g6(m.mean_delay).c_str());
  std::printf("undelivered  %lld\n", static_cast<long long>(m.undelivered));
  std::printf("slope        %s\n", format_g6(m.instability_slope).c_str());
  std::printf("status       %s\n", m.unstable() ? "unstable" : "stable");
  for (const auto& note : m.notes) std::printf("note         %s\n", note.c_str());
}

// JSON-lines writer. A single-stream run emits the per-slot policy record;
// multi-stream runs add one such record per class or tree under "streams".
class TraceWriter final : public SlotObserver {
 public:
  explicit TraceWriter(std::ostream& out) : out_(out) {}

  void on_slot(const SlotRecord& record) override {
    std::vector<nlohmann::json> streams;
    for (const StreamRecord& s : record.streams) {
      SlotDecision d;
      d.activation = record.activation;
      d.activation_weight = record.activation_weight;
      d.transfers = s.transfers;
      d.arrivals = s.arrivals;
      if (s.view) {
        streams.push_back(trace_record(record.slot, s.received_before, *s.view, d));
      } else {
        nlohmann::json transfers = nlohmann::json::array();
        for (const Transfer& t : s.transfers) transfers.push_back({{"edge", t.edge}, {"first", t.first}, {"count", t.count}});
        streams.push_back({{"slot", record.slot}, {"R", s.received_before}, {"transfers", std::move(transfers)}});
      }
    }
    if (streams.size() == 1 && record.streams.front().view) {
      out_ << streams.front().dump() << '\n';
      return;
    }
    std::vector<std::int64_t> total(static_cast<std::size_t>(record.net->node_count()), 0);
    for (const StreamRecord& s : record.streams) {
      for (std::size_t v = 0; v < s.received_before.size(); ++v) total[v] += s.received_before[v];
    }
    out_ << nlohmann::json{{"slot", record.slot},
                           {"R", total},
                           {"activation", record.activation.edges},
                           {"weight", record.activation_weight},
                           {"streams", streams}}
                .dump()
         << '\n';
  }

 private:
  std::ostream& out_;
};

template <typename Fn>
void write_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ostringstream buffer;
  fn(buffer);
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Broadcast capacity and scheduling toolkit for multihop wireless DAG networks"};
  app.require_subcommand(1);

  std::string net_spec;
  int max_edges = 0;
  auto add_net = [&](CLI::App* sub) {
    sub->add_option("net", net_spec, "Scenario name or network JSON file")->required();
    sub->add_option("--max-edges", max_edges, "Matching enumeration cap (edges)")->check(CLI::PositiveNumber);
  };

  bool json = false;
  auto* capacity = app.add_subcommand("capacity", "Broadcast capacity and an activation schedule achieving it");
  add_net(capacity);
  capacity->add_flag("--json", json, "Print the result as JSON");

  auto* treepack = app.add_subcommand("treepack", "Maximum set of edge-disjoint spanning arborescences");
  add_net(treepack);
  auto* treecount = app.add_subcommand("treecount", "Number of spanning arborescences rooted at the source");
  add_net(treecount);

  std::string policy = "pi_star";
  std::vector<std::string> classes;
  double lambda = 0.0;
  std::int64_t slots = 10000;
  std::uint64_t seed = 1;
  std::string arrivals = "bernoulli";
  auto add_run = [&](CLI::App* sub) {
    sub->add_option("--policy", policy, "pi_star | multiclass[:K] | tree[:N]");
    sub->add_option("--classes", classes, "Explicit class permutations, e.g. 0,1,2,3")->delimiter(';');
    sub->add_option("--lambda", lambda, "Mean arrivals per slot")->required()->check(CLI::NonNegativeNumber);
    sub->add_option("--slots", slots, "Number of slots")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Random seed");
    sub->add_option("--arrivals", arrivals, "bernoulli | poisson");
  };
  auto* simulate = app.add_subcommand("simulate", "Run one policy and print a summary");
  add_net(simulate);
  add_run(simulate);

  std::string out_path;
  auto* trace = app.add_subcommand("trace", "Per-slot JSON-lines trace of one run");
  add_net(trace);
  add_run(trace);
  trace->add_option("--out", out_path, "Output file (default stdout)");

  std::vector<std::string> policies;
  std::vector<double> lambdas;
  std::vector<std::uint64_t> seeds;
  unsigned threads = default_thread_count();
  auto* sweep_cmd = app.add_subcommand("sweep", "Policies x rates x seeds, one CSV row per run");
  add_net(sweep_cmd);
  sweep_cmd->add_option("--policies", policies, "Comma-separated policies")->required()->delimiter(',');
  sweep_cmd->add_option("--lambdas", lambdas, "Comma-separated arrival rates")->required()->delimiter(',');
  sweep_cmd->add_option("--slots", slots, "Slots per run")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seeds", seeds, "Comma-separated seeds")->required()->delimiter(',');
  sweep_cmd->add_option("--out", out_path, "CSV output file (default stdout)");
  sweep_cmd->add_option("--classes", classes, "Explicit class permutations for multiclass")->delimiter(';');
  sweep_cmd->add_option("--arrivals", arrivals, "bernoulli | poisson");
  sweep_cmd->add_option("--threads", threads, "Worker threads (default DAGCAST_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  int kmax = 8;
  auto* curve = app.add_subcommand("multiclass-curve", "Mean multiclass rate over the cut bound for K = 1..kmax");
  add_net(curve);
  curve->add_option("--kmax", kmax, "Largest number of classes")->check(CLI::PositiveNumber);
  curve->add_option("--seeds", seeds, "Comma-separated seeds")->required()->delimiter(',');
  curve->add_option("--out", out_path, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const LoadedNet n = load(net_spec, max_edges);
    RunOptions run_options;
    run_options.limits = n.limits;
    try {
      run_options.arrivals = parse_arrival_kind(arrivals);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }

    if (*capacity) return cmd_capacity(n, json);
    if (*treepack) return cmd_treepack(n);
    if (*treecount) {
      std::printf("%llu\n", static_cast<unsigned long long>(count_arborescences(n.net)));
      return 0;
    }
    if (*simulate) {
      print_metrics(run(n.net, parse_policy(policy, n, classes), lambda, slots, seed, run_options));
      return 0;
    }
    if (*trace) {
      const PolicyConfig config = parse_policy(policy, n, classes);
      write_output(out_path, [&](std::ostream& out) {
        TraceWriter writer(out);
        run_options.observer = &writer;
        run(n.net, config, lambda, slots, seed, run_options);
      });
      return 0;
    }
    if (*sweep_cmd) {
      std::vector<NamedPolicy> named;
      for (const auto& p : policies) {
        PolicyConfig config = parse_policy(p, n, classes);
        named.push_back({policy_name(config), std::move(config)});
      }
      SweepOptions options{run_options, threads};
      const auto rows = sweep(n.net, named, lambdas, slots, seeds, options);
      write_output(out_path, [&](std::ostream& out) { write_sweep_csv(out, rows); });
      for (const auto& r : rows) {
        if (r.failed()) std::cerr << "warning: " << r.policy << " lambda=" << r.lambda << " seed=" << r.seed << ": " << r.error << '\n';
      }
      return 0;
    }
    if (*curve) {
      std::vector<int> ks;
      for (int k = 1; k <= kmax; ++k) ks.push_back(k);
      const auto points = multiclass_fraction_curve(n.net, ks, seeds, n.limits);
      write_output(out_path, [&](std::ostream& out) { write_fraction_csv(out, n.name, points); });
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const dagcast::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
