#pragma once

#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dagcast/graph.hpp"

namespace dagcast {

struct SupportEntry {
  ActivationVector activation;
  double probability = 0.0;
};

// Broadcast capacity with the link time shares and an activation
// distribution realizing them: beta_e = sum_l p_l s_{l,e}.
struct CapacityResult {
  double lambda = 0.0;
  std::vector<double> beta;
  std::vector<SupportEntry> support;
};

struct ClassShare {
  double rate = 0.0;
  std::vector<double> beta;  // full edge length; zero off the class
};

struct MulticlassCapacityResult {
  double total = 0.0;
  std::vector<ClassShare> per_class;
};

// Sum of c_e * beta_e over the in-edges of v.
double in_capacity(const Network& net, std::span<const double> beta, NodeId v);

// max lambda s.t. lambda <= in_capacity(v) for all v != source, with beta in
// the convex hull of enumerate_activations(net). Wired networks let beta
// range over the unit cube; the reported beta is then the all-ones vector,
// which is optimal because every constraint is monotone in beta.
// Throws DomainError on cyclic input.
CapacityResult lambda_dag(const Network& net, const EnumerationLimits& limits = {});

// Same LP with one constraint per proper cut (2^(n-1) - 1 of them). Valid
// for cyclic graphs; an upper bound on the broadcast capacity of any policy.
double cut_bound_oracle(const Network& net, const EnumerationLimits& limits = {},
                        int max_nodes = 12);

// Carathéodory reduction: drops activations until the remaining support
// vectors (with an appended 1) are linearly independent, keeping beta and
// lambda. The result has at most |E| + 1 activations.
CapacityResult sparse_support(const CapacityResult& result);

// max sum_k lambda_k with lambda_k <= sum_{e in in(v) & E^k} c_e beta^k_e and
// sum_k beta^k in conv(S). Each class edge set must induce a DAG.
MulticlassCapacityResult multiclass_capacity(const Network& net,
                                             std::span<const std::vector<EdgeId>> classes,
                                             const EnumerationLimits& limits = {});

nlohmann::json to_json(const CapacityResult& result);

}  // namespace dagcast
