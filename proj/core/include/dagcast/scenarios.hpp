#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dagcast/graph.hpp"
#include "dagcast/trees.hpp"

namespace dagcast {

struct Scenario {
  std::string name;
  Network network;
  std::vector<std::string> labels;  // display label per node id
  std::string provenance;
  bool experimental = false;
  // Arborescences used by the tree baseline; the first one alone is the
  // single-tree configuration.
  std::vector<Arborescence> trees;
  // Matching enumeration cap large enough for this network.
  EnumerationLimits limits;
};

const std::vector<std::string>& scenario_names();

// Throws LookupError listing the registered names.
const Scenario& scenario(std::string_view name);

// First edge tail -> head; throws LookupError when absent.
EdgeId find_edge(const Network& net, NodeId tail, NodeId head);

// Arborescence given by the parent of every non-source node (-1 at the source).
Arborescence tree_from_parents(const Network& net, const std::vector<NodeId>& parents);

}  // namespace dagcast
