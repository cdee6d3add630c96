#pragma once

#include <map>
#include <utility>
#include <vector>

#include "looprate/graph.hpp"

namespace looprate {

// Grain counts per vertex; the sink entry stays zero.  Host graphs are unit
// multigraphs with a designated sink (expand integer weights first).
struct SandpileConfig {
    std::vector<long long> h;
    bool operator==(const SandpileConfig& o) const { return h == o.h; }
    bool operator<(const SandpileConfig& o) const { return h < o.h; }
};

// Multiplicity-expanded copy of an integer-weighted graph: one unit edge per
// grain channel, new edge ids grouped by original edge.
WeightedGraph to_unit_multigraph(const WeightedGraph& g);

long long sand_degree(const WeightedGraph& g, int v);

bool is_stable(const WeightedGraph& g, const SandpileConfig& c);

// Single toppling of an unstable vertex.
SandpileConfig topple(const WeightedGraph& g, SandpileConfig c, int v);

// Repeated toppling until stable; returns the stabilization and per-vertex
// topple counts.  Termination is guaranteed by sink connectivity.
std::pair<SandpileConfig, std::vector<long long>> stabilize(const WeightedGraph& g,
                                                            SandpileConfig c);

// Dhar burning test: firing the sink must topple every vertex exactly once.
bool is_recurrent(const WeightedGraph& g, const SandpileConfig& c);

// Exploration bijection between spanning arborescences toward the sink and
// recurrent configurations.  Queries run from a FIFO frontier seeded by the
// sink, edges ordered by (outside vertex id, edge id).
SandpileConfig tree_to_sandpile(const WeightedGraph& g, const std::vector<ParentLink>& tree);
std::vector<ParentLink> sandpile_to_tree(const WeightedGraph& g, const SandpileConfig& c);

long long level(const WeightedGraph& g, const SandpileConfig& c);

// Histogram of recurrent configurations by level (Tutte slice T(1,y)).
// Enumerates all stable configurations; requires prod(degree) <= 1e7.
std::map<long long, long long> level_spectrum(const WeightedGraph& g);
std::map<long long, long long> level_spectrum_serial(const WeightedGraph& g);

std::vector<SandpileConfig> enumerate_recurrent(const WeightedGraph& g);

}  // namespace looprate
