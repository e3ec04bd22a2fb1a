#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "dagcast/graph.hpp"

namespace dagcast {

// Reads {"nodes": N, "source": r, "interference": "primary"|"wired",
//        "edges": [[tail, head, capacity], ...]}.
// Errors are ParseError with "<origin>:<line>: <message>".
Network parse_network(std::string_view text, std::string_view origin = "<input>");
Network load_network(const std::filesystem::path& path);

nlohmann::json to_json(const Network& net);

// One edge per line, so that error line numbers point at the edge.
void write_network(std::ostream& out, const Network& net);
void save_network(const std::filesystem::path& path, const Network& net);

}  // namespace dagcast
