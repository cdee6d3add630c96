#include "looprate/graph_io.hpp"

#include <unordered_map>

#include "json.hpp"

namespace looprate {

namespace {

Rational parse_weight(const nlohmann::json& w) {
    if (w.is_number_integer()) return Rational(w.get<long long>());
    if (w.is_string()) return Rational::parse(w.get<std::string>());
    if (w.is_number_float()) return Rational::parse(w.dump());
    fail(errc::bad_input, "unsupported weight value " + w.dump());
}

}  // namespace

GraphFile parse_graph_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(errc::bad_input, std::string("invalid JSON: ") + e.what());
    }
    std::vector<long long> ids;
    std::unordered_map<long long, int> index;
    for (const auto& v : j.at("vertices")) {
        long long id = v.get<long long>();
        if (index.count(id)) fail(errc::bad_input, "duplicate vertex id " + std::to_string(id));
        index[id] = static_cast<int>(ids.size());
        ids.push_back(id);
    }
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
        long long u = e.at(0).get<long long>();
        long long v = e.at(1).get<long long>();
        auto iu = index.find(u), iv = index.find(v);
        if (iu == index.end() || iv == index.end())
            fail(errc::unknown_endpoint, "edge endpoint is not a declared vertex");
        edges.push_back(Edge{iu->second, iv->second,
                             e.size() > 2 ? parse_weight(e.at(2)) : Rational(1)});
    }
    std::optional<int> sink;
    if (j.contains("sink") && !j.at("sink").is_null()) {
        auto is = index.find(j.at("sink").get<long long>());
        if (is == index.end()) fail(errc::unknown_endpoint, "sink is not a declared vertex");
        sink = is->second;
    }
    GraphFile out{WeightedGraph(std::move(ids), std::move(edges), sink), std::nullopt};
    if (j.contains("rotation") && !j.at("rotation").is_null()) {
        RotationSystem rot;
        rot.order.resize(static_cast<size_t>(out.graph.vertex_count()));
        for (const auto& [key, value] : j.at("rotation").items()) {
            auto iv = index.find(std::stoll(key));
            if (iv == index.end()) fail(errc::unknown_endpoint, "rotation vertex " + key);
            for (const auto& e : value)
                rot.order[static_cast<size_t>(iv->second)].push_back(e.get<int>());
        }
        out.rotation = std::move(rot);
    }
    return out;
}

SandpileFile parse_sandpile_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(errc::bad_input, std::string("invalid JSON: ") + e.what());
    }
    SandpileFile out;
    const nlohmann::json& g = j.at("graph");
    if (g.is_string())
        out.graph_path = g.get<std::string>();
    else
        out.inline_graph = parse_graph_json(g.dump());
    for (const auto& [key, value] : j.at("heights").items()) {
        long long grains = value.get<long long>();
        if (grains < 0) fail(errc::bad_input, "negative grain count");
        out.heights[std::stoll(key)] = grains;
    }
    return out;
}

}  // namespace looprate
