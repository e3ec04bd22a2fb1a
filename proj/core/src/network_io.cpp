#include "dagcast/network_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <sstream>
#include <vector>

#include "dagcast/error.hpp"

namespace dagcast {

namespace {

// 1-based line of each element of the top-level "edges" array. nlohmann/json
// keeps no source positions, so the text is scanned once for them.
std::vector<int> edge_lines(std::string_view text) {
  std::vector<int> lines;
  int line = 1;
  int depth = 0;
  int edges_depth = -1;
  bool in_string = false;
  bool escaped = false;
  std::string last_string;
  std::string current;
  bool expect_edges = false;
  for (char ch : text) {
    if (ch == '\n') ++line;
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (ch == '\\') {
        escaped = true;
      } else if (ch == '"') {
        in_string = false;
        last_string = current;
      } else {
        current.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        in_string = true;
        current.clear();
        break;
      case ':':
        expect_edges = depth == 1 && last_string == "edges";
        break;
      case '[':
      case '{':
        if (edges_depth >= 0 && depth == edges_depth) lines.push_back(line);
        ++depth;
        if (expect_edges && ch == '[') edges_depth = depth;
        expect_edges = false;
        break;
      case ']':
      case '}':
        --depth;
        if (depth < edges_depth) edges_depth = -2;
        break;
      default:
        break;
    }
  }
  return lines;
}

int line_of_key(std::string_view text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto pos = text.find(quoted);
  if (pos == std::string_view::npos) return 1;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

[[noreturn]] void fail(std::string_view origin, int line, const std::string& message) {
  throw ParseError(std::string(origin) + ":" + std::to_string(line) + ": " + message);
}

int as_int(const nlohmann::json& v, std::string_view origin, int line, const std::string& field) {
  if (!v.is_number_integer()) fail(origin, line, field + " must be an integer");
  const auto x = v.get<std::int64_t>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    fail(origin, line, field + " is out of range");
  }
  return static_cast<int>(x);
}

}  // namespace

Network parse_network(std::string_view text, std::string_view origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto byte = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
    fail(origin, line, "invalid JSON");
  }
  if (!doc.is_object()) fail(origin, 1, "top level must be an object");
  for (const char* key : {"nodes", "source", "interference", "edges"}) {
    if (!doc.contains(key)) fail(origin, 1, std::string("missing field \"") + key + "\"");
  }

  const int nodes = as_int(doc["nodes"], origin, line_of_key(text, "nodes"), "nodes");
  if (nodes < 1) fail(origin, line_of_key(text, "nodes"), "nodes must be at least 1");
  const int source = as_int(doc["source"], origin, line_of_key(text, "source"), "source");
  if (source < 0 || source >= nodes) {
    fail(origin, line_of_key(text, "source"), "source " + std::to_string(source) + " is not a node id");
  }
  const auto& kind = doc["interference"];
  Interference interference{};
  if (kind == "primary") {
    interference = Interference::primary;
  } else if (kind == "wired") {
    interference = Interference::wired;
  } else {
    fail(origin, line_of_key(text, "interference"), "interference must be \"primary\" or \"wired\"");
  }

  const auto& raw_edges = doc["edges"];
  if (!raw_edges.is_array()) fail(origin, line_of_key(text, "edges"), "edges must be an array");
  const std::vector<int> lines = edge_lines(text);
  std::vector<Edge> edges;
  edges.reserve(raw_edges.size());
  for (std::size_t i = 0; i < raw_edges.size(); ++i) {
    const int line = i < lines.size() ? lines[i] : line_of_key(text, "edges");
    const std::string field = "edges[" + std::to_string(i) + "]";
    const auto& e = raw_edges[i];
    if (!e.is_array() || e.size() != 3) fail(origin, line, field + " must be [tail, head, capacity]");
    const int tail = as_int(e[0], origin, line, field + " tail");
    const int head = as_int(e[1], origin, line, field + " head");
    if (tail < 0 || tail >= nodes) fail(origin, line, field + ": bad node id " + std::to_string(tail));
    if (head < 0 || head >= nodes) fail(origin, line, field + ": bad node id " + std::to_string(head));
    if (tail == head) fail(origin, line, field + ": self-loop at node " + std::to_string(tail));
    if (!e[2].is_number()) fail(origin, line, field + " capacity must be a number");
    const double capacity = e[2].get<double>();
    if (!std::isfinite(capacity) || capacity <= 0.0) {
      fail(origin, line, field + ": capacity must be positive, got " + e[2].dump());
    }
    edges.push_back({tail, head, capacity});
  }
  try {
    return Network(nodes, source, interference, std::move(edges));
  } catch (const Error& e) {
    fail(origin, 1, e.what());
  }
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_network(buffer.str(), path.string());
}

nlohmann::json to_json(const Network& net) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : net.edges()) edges.push_back({e.tail, e.head, e.capacity});
  return {{"nodes", net.node_count()},
          {"source", net.source()},
          {"interference", to_string(net.interference())},
          {"edges", std::move(edges)}};
}

void write_network(std::ostream& out, const Network& net) {
  out << "{\n  \"nodes\": " << net.node_count() << ",\n  \"source\": " << net.source()
      << ",\n  \"interference\": \"" << to_string(net.interference()) << "\",\n  \"edges\": [";
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    const Edge& edge = net.edge(e);
    out << (e == 0 ? "\n" : ",\n") << "    [" << edge.tail << ", " << edge.head << ", "
        << nlohmann::json(edge.capacity).dump() << "]";
  }
  out << (net.edge_count() > 0 ? "\n  ]\n}\n" : "]\n}\n");
}

void save_network(const std::filesystem::path& path, const Network& net) {
  std::ofstream out(path);
  if (!out) throw ParseError(path.string() + ": cannot open file for writing");
  write_network(out, net);
}

}  // namespace dagcast
