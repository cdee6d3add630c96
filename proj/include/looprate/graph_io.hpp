#pragma once

#include <map>
#include <optional>
#include <string>

#include "looprate/graph.hpp"

namespace looprate {

struct GraphFile {
    WeightedGraph graph;
    std::optional<RotationSystem> rotation;
};

// {"vertices":[ids], "edges":[[u,v,w],...], "sink":id?,
//  "rotation":{"id":[edge indices in cyclic order]}?}
// Weights may be integers, decimal strings, or "p/q" strings.
GraphFile parse_graph_json(const std::string& text);

struct SandpileFile {
    std::string graph_path;                  // set when "graph" is a file path
    std::optional<GraphFile> inline_graph;   // set when "graph" is an object
    std::map<long long, long long> heights;  // keyed by external vertex id
};

// {"graph": "file.json" | {...}, "heights": {"id": grains, ...}}
SandpileFile parse_sandpile_json(const std::string& text);

}  // namespace looprate
