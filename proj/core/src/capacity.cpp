#include "dagcast/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

#include "dagcast/error.hpp"
#include "dagcast/lp.hpp"

namespace dagcast {

namespace {

constexpr double kTol = lp::kFeasibilityTolerance;

void require_dag(const Network& net) {
  if (!is_dag(net)) throw DomainError("network contains a directed cycle; a DAG is required");
}

CapacityResult result_from_weights(const Network& net, const ActivationSet& acts,
                                   const std::vector<double>& weights, double lambda) {
  CapacityResult out;
  out.lambda = lambda;
  out.beta.assign(static_cast<std::size_t>(net.edge_count()), 0.0);
  double mass = 0.0;
  std::size_t empty_index = acts.size();
  for (std::size_t l = 0; l < acts.size(); ++l) {
    if (acts.edges_of(l).empty()) empty_index = l;
    const double p = weights[l];
    if (p <= 1e-12) continue;
    mass += p;
    for (EdgeId e : acts.edges_of(l)) out.beta[static_cast<std::size_t>(e)] += p;
  }
  // The LP uses sum p <= 1; leftover mass idles on the empty activation.
  const double idle = 1.0 - mass;
  for (std::size_t l = 0; l < acts.size(); ++l) {
    double p = weights[l];
    if (l == empty_index && idle > 1e-12) p += idle;
    if (p <= 1e-12) continue;
    out.support.push_back({acts.at(l), p});
  }
  for (double& b : out.beta) b = std::clamp(b, 0.0, 1.0);
  return out;
}

CapacityResult all_ones_result(const Network& net, double lambda) {
  CapacityResult out;
  out.lambda = lambda;
  out.beta.assign(static_cast<std::size_t>(net.edge_count()), 1.0);
  ActivationVector all;
  for (EdgeId e = 0; e < net.edge_count(); ++e) all.edges.push_back(e);
  out.support.push_back({std::move(all), 1.0});
  return out;
}

// Shared by lambda_dag and the cut oracle: rows are edge subsets ("cuts"),
// each bounding lambda by the capacity crossing it.
CapacityResult solve_cut_lp(const Network& net, const std::vector<std::vector<EdgeId>>& cuts,
                            const EnumerationLimits& limits) {
  if (net.interference() == Interference::wired) {
    const auto edges = static_cast<std::size_t>(net.edge_count());
    lp::Problem prob(edges + 1);
    const std::size_t lam = edges;
    prob.objective[lam] = 1.0;
    for (std::size_t e = 0; e < edges; ++e) {
      prob.at(prob.add_row(1.0), e) = 1.0;
    }
    for (const auto& cut : cuts) {
      const std::size_t row = prob.add_row(0.0);
      prob.at(row, lam) = 1.0;
      for (EdgeId e : cut) prob.at(row, static_cast<std::size_t>(e)) -= net.edge(e).capacity;
    }
    const lp::Solution sol = lp::maximize(prob);
    return all_ones_result(net, sol.value);
  }

  const ActivationSet acts = enumerate_activations(net, limits);
  const std::size_t count = acts.size();
  lp::Problem prob(count + 1);
  const std::size_t lam = count;
  prob.objective[lam] = 1.0;
  const std::size_t simplex_row = prob.add_row(1.0);
  for (std::size_t l = 0; l < count; ++l) prob.at(simplex_row, l) = 1.0;

  std::vector<char> in_cut(static_cast<std::size_t>(net.edge_count()), 0);
  for (const auto& cut : cuts) {
    std::fill(in_cut.begin(), in_cut.end(), 0);
    for (EdgeId e : cut) in_cut[static_cast<std::size_t>(e)] = 1;
    const std::size_t row = prob.add_row(0.0);
    prob.at(row, lam) = 1.0;
    for (std::size_t l = 0; l < count; ++l) {
      double g = 0.0;
      for (EdgeId e : acts.edges_of(l)) {
        if (in_cut[static_cast<std::size_t>(e)]) g += net.edge(e).capacity;
      }
      prob.at(row, l) = -g;
    }
  }
  const lp::Solution sol = lp::maximize(prob);
  std::vector<double> weights(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(count));
  return result_from_weights(net, acts, weights, sol.value);
}

std::vector<std::vector<EdgeId>> single_node_cuts(const Network& net) {
  std::vector<std::vector<EdgeId>> cuts;
  for (NodeId v = 0; v < net.node_count(); ++v) {
    if (v == net.source()) continue;
    auto in = net.in_edges(v);
    cuts.emplace_back(in.begin(), in.end());
  }
  return cuts;
}

}  // namespace

double in_capacity(const Network& net, std::span<const double> beta, NodeId v) {
  double total = 0.0;
  for (EdgeId e : net.in_edges(v)) total += net.edge(e).capacity * beta[static_cast<std::size_t>(e)];
  return total;
}

CapacityResult lambda_dag(const Network& net, const EnumerationLimits& limits) {
  require_dag(net);
  if (net.node_count() < 2) throw DomainError("broadcast capacity needs a non-source node");
  return solve_cut_lp(net, single_node_cuts(net), limits);
}

double cut_bound_oracle(const Network& net, const EnumerationLimits& limits, int max_nodes) {
  if (net.node_count() < 2) throw DomainError("broadcast capacity needs a non-source node");
  if (net.node_count() > max_nodes || net.node_count() > 62) {
    throw ResourceLimitError("cut enumeration limited to " + std::to_string(max_nodes) + " nodes");
  }
  std::vector<std::vector<EdgeId>> cuts;
  const std::uint64_t full = (std::uint64_t{1} << net.node_count()) - 1;
  const std::uint64_t src = std::uint64_t{1} << net.source();
  for (std::uint64_t mask = 0; mask < full; ++mask) {
    if (!(mask & src)) continue;
    cuts.push_back(ProperCut::from_mask(net, mask).crossing_edges(net));
  }
  return solve_cut_lp(net, cuts, limits).lambda;
}

CapacityResult sparse_support(const CapacityResult& result) {
  const std::size_t edges = result.beta.size();
  double mass = 0.0;
  std::vector<double> beta(edges, 0.0);
  for (const auto& entry : result.support) {
    if (entry.probability < -1e-12) throw DomainError("negative support probability");
    mass += entry.probability;
    for (EdgeId e : entry.activation.edges) {
      if (e < 0 || static_cast<std::size_t>(e) >= edges) throw DomainError("support edge out of range");
      beta[static_cast<std::size_t>(e)] += entry.probability;
    }
  }
  if (std::abs(mass - 1.0) > kTol) throw DomainError("support probabilities do not sum to one");
  for (std::size_t e = 0; e < edges; ++e) {
    if (std::abs(beta[e] - result.beta[e]) > kTol) {
      throw DomainError("support does not realize beta on edge " + std::to_string(e));
    }
  }

  CapacityResult out = result;
  const std::size_t rows = edges + 1;
  for (;;) {
    const std::size_t cols = out.support.size();
    // Columns [s_l; 1]; look for a nontrivial null vector by elimination.
    std::vector<std::vector<double>> a(rows, std::vector<double>(cols, 0.0));
    for (std::size_t l = 0; l < cols; ++l) {
      for (EdgeId e : out.support[l].activation.edges) a[static_cast<std::size_t>(e)][l] = 1.0;
      a[edges][l] = 1.0;
    }
    std::vector<std::size_t> pivot_col_of_row;
    std::vector<char> is_pivot(cols, 0);
    std::size_t r = 0;
    std::size_t free_col = cols;
    for (std::size_t c = 0; c < cols; ++c) {
      std::size_t best = rows;
      double best_abs = 1e-9;
      for (std::size_t i = r; i < rows; ++i) {
        if (std::abs(a[i][c]) > best_abs) {
          best_abs = std::abs(a[i][c]);
          best = i;
        }
      }
      if (best == rows) {
        free_col = c;
        break;
      }
      std::swap(a[r], a[best]);
      const double p = a[r][c];
      for (double& v : a[r]) v /= p;
      for (std::size_t i = 0; i < rows; ++i) {
        if (i == r || a[i][c] == 0.0) continue;
        const double f = a[i][c];
        for (std::size_t k = 0; k < cols; ++k) a[i][k] -= f * a[r][k];
      }
      pivot_col_of_row.push_back(c);
      is_pivot[c] = 1;
      ++r;
    }
    if (free_col == cols) break;

    // alpha_free = 1, alpha_pivot(row i) = -a[i][free].
    std::vector<double> alpha(cols, 0.0);
    alpha[free_col] = 1.0;
    for (std::size_t i = 0; i < pivot_col_of_row.size(); ++i) {
      alpha[pivot_col_of_row[i]] = -a[i][free_col];
    }
    // sum alpha = 0 (last row), so some entry is positive.
    double step = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < cols; ++l) {
      if (alpha[l] > 1e-12) step = std::min(step, out.support[l].probability / alpha[l]);
    }
    std::vector<SupportEntry> kept;
    bool dropped = false;
    for (std::size_t l = 0; l < cols; ++l) {
      double p = out.support[l].probability - step * alpha[l];
      const bool hits_zero = alpha[l] > 1e-12 && out.support[l].probability / alpha[l] <= step + 1e-15;
      if (!dropped && hits_zero) {
        dropped = true;
        continue;
      }
      if (p <= 1e-15) continue;
      kept.push_back({out.support[l].activation, p});
    }
    out.support = std::move(kept);
  }
  double total = 0.0;
  for (const auto& entry : out.support) total += entry.probability;
  for (auto& entry : out.support) entry.probability /= total;
  return out;
}

MulticlassCapacityResult multiclass_capacity(const Network& net,
                                             std::span<const std::vector<EdgeId>> classes,
                                             const EnumerationLimits& limits) {
  MulticlassCapacityResult out;
  if (classes.empty()) return out;
  const auto edge_count = static_cast<std::size_t>(net.edge_count());
  const std::size_t k_count = classes.size();

  // Variable layout: lambda_k, then beta^k_e for e in E^k, then activation
  // weights (primary only).
  std::vector<std::vector<std::size_t>> beta_var(k_count, std::vector<std::size_t>(edge_count, SIZE_MAX));
  std::size_t next = k_count;
  for (std::size_t k = 0; k < k_count; ++k) {
    std::vector<Edge> sub;
    for (EdgeId e : classes[k]) {
      if (e < 0 || static_cast<std::size_t>(e) >= edge_count) throw StructuralError("class edge out of range");
      if (beta_var[k][static_cast<std::size_t>(e)] != SIZE_MAX) continue;
      beta_var[k][static_cast<std::size_t>(e)] = next++;
      sub.push_back(net.edge(e));
    }
    if (!is_dag(Network(net.node_count(), net.source(), net.interference(), std::move(sub)))) {
      throw DomainError("class " + std::to_string(k) + " edge set contains a directed cycle");
    }
  }
  const bool primary = net.interference() == Interference::primary;
  ActivationSet acts;
  if (primary) acts = enumerate_activations(net, limits);
  const std::size_t act_base = next;
  lp::Problem prob(next + (primary ? acts.size() : 0));
  for (std::size_t k = 0; k < k_count; ++k) prob.objective[k] = 1.0;

  for (std::size_t k = 0; k < k_count; ++k) {
    for (NodeId v = 0; v < net.node_count(); ++v) {
      if (v == net.source()) continue;
      const std::size_t row = prob.add_row(0.0);
      prob.at(row, k) = 1.0;
      for (EdgeId e : net.in_edges(v)) {
        const std::size_t var = beta_var[k][static_cast<std::size_t>(e)];
        if (var != SIZE_MAX) prob.at(row, var) = -net.edge(e).capacity;
      }
    }
  }
  // Coupling: sum_k beta^k_e <= sum_l p_l s_{l,e} (primary) or <= 1 (wired).
  // The inequality is exact because conv(S) is closed under lowering coordinates.
  std::vector<std::size_t> edge_row(edge_count, SIZE_MAX);
  for (std::size_t e = 0; e < edge_count; ++e) {
    bool used = false;
    for (std::size_t k = 0; k < k_count; ++k) used = used || beta_var[k][e] != SIZE_MAX;
    if (!used) continue;
    const std::size_t row = prob.add_row(primary ? 0.0 : 1.0);
    edge_row[e] = row;
    for (std::size_t k = 0; k < k_count; ++k) {
      if (beta_var[k][e] != SIZE_MAX) prob.at(row, beta_var[k][e]) = 1.0;
    }
  }
  if (primary) {
    const std::size_t simplex_row = prob.add_row(1.0);
    for (std::size_t l = 0; l < acts.size(); ++l) {
      prob.at(simplex_row, act_base + l) = 1.0;
      for (EdgeId e : acts.edges_of(l)) {
        const std::size_t row = edge_row[static_cast<std::size_t>(e)];
        if (row != SIZE_MAX) prob.at(row, act_base + l) = -1.0;
      }
    }
  }

  const lp::Solution sol = lp::maximize(prob);
  out.total = sol.value;
  for (std::size_t k = 0; k < k_count; ++k) {
    ClassShare share;
    share.rate = sol.x[k];
    share.beta.assign(edge_count, 0.0);
    for (std::size_t e = 0; e < edge_count; ++e) {
      if (beta_var[k][e] != SIZE_MAX) share.beta[e] = sol.x[beta_var[k][e]];
    }
    out.per_class.push_back(std::move(share));
  }
  return out;
}

nlohmann::json to_json(const CapacityResult& result) {
  nlohmann::json support = nlohmann::json::array();
  for (const auto& entry : result.support) {
    support.push_back({{"edges", entry.activation.edges}, {"p", entry.probability}});
  }
  return {{"lambda", result.lambda}, {"beta", result.beta}, {"support", std::move(support)}};
}

}  // namespace dagcast
