#pragma once

#include <optional>
#include <string>
#include <vector>

#include "looprate/error.hpp"
#include "looprate/rational.hpp"

namespace looprate {

struct Edge {
    int u, v;    // internal vertex indices, u != v
    Rational w;  // > 0
};

struct IncidentEdge {
    int edge;   // edge id
    int other;  // far endpoint
};

// One vertex's link in a spanning arborescence: the edge toward the root.
struct ParentLink {
    int parent = -1;
    int edge = -1;
    bool operator==(const ParentLink& o) const { return parent == o.parent && edge == o.edge; }
};

// Immutable weighted undirected multigraph.  Vertices carry opaque external
// ids; all computation uses dense internal indices 0..n-1.
class WeightedGraph {
public:
    // Edges reference vertices by position in `ids`.  Validates positivity,
    // no self-loops, connectivity, and sink membership.
    WeightedGraph(std::vector<long long> ids, std::vector<Edge> edges,
                  std::optional<int> sink = std::nullopt);

    int vertex_count() const { return static_cast<int>(ids_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_[static_cast<size_t>(e)]; }
    const std::vector<IncidentEdge>& incident(int v) const { return incidence_[static_cast<size_t>(v)]; }

    long long vertex_id(int v) const { return ids_[static_cast<size_t>(v)]; }
    const std::vector<long long>& vertex_ids() const { return ids_; }
    std::optional<int> sink() const { return sink_; }
    int require_sink() const;

    const Rational& weighted_degree(int v) const { return wdeg_[static_cast<size_t>(v)]; }
    const Rational& total_weight() const { return total_w_; }
    Rational mean_weighted_degree() const;  // delta = 2*sum(w)/|V|
    bool unit_weights() const;
    bool integer_weights() const;

    // endpoint of e opposite to v
    int other_end(int e, int v) const {
        const Edge& ed = edges_[static_cast<size_t>(e)];
        return ed.u == v ? ed.v : ed.u;
    }

    bool has_parallel_edges() const;

private:
    std::vector<long long> ids_;
    std::vector<Edge> edges_;
    std::optional<int> sink_;
    std::vector<std::vector<IncidentEdge>> incidence_;
    std::vector<Rational> wdeg_;
    Rational total_w_;
};

// Cyclic order of incident edge ids around each vertex (a combinatorial
// planar embedding; counterclockwise by convention).
struct RotationSystem {
    std::vector<std::vector<int>> order;
};

// One directed edge side: edge `e` traversed u->v when fwd, v->u otherwise.
struct HalfEdge {
    int edge;
    bool fwd;
    bool operator==(const HalfEdge& o) const { return edge == o.edge && fwd == o.fwd; }
};

struct FaceSet {
    std::vector<std::vector<HalfEdge>> faces;  // each a closed walk
    std::vector<int> face_of_fwd, face_of_rev; // per edge id
    int face_of(const HalfEdge& h) const {
        return h.fwd ? face_of_fwd[static_cast<size_t>(h.edge)] : face_of_rev[static_cast<size_t>(h.edge)];
    }
};

FaceSet faces(const WeightedGraph& g, const RotationSystem& rot);

struct DualGraph {
    WeightedGraph dual;              // one vertex per face, weights 1/w(e)
    std::vector<int> edge_map;       // primal edge id -> dual edge id
    RotationSystem dual_rotation;    // faces in traversal order
    int outer_face;                  // default dual sink s*
};

// Requires a bridge-free embedding (a bridge would make a dual self-loop).
DualGraph dual(const WeightedGraph& g, const RotationSystem& rot);

// Identify `merge_set` into a single new vertex which becomes the sink of the
// result.  Parallel edges are kept, self-loops produced by the merge dropped.
WeightedGraph merge_vertices(const WeightedGraph& g, const std::vector<int>& merge_set);

// True when `g` and `h` are isomorphic under the edge correspondence
// edge i of g <-> edge_map[i] of h (used by the dual-of-dual check).
bool isomorphic_by_edges(const WeightedGraph& g, const WeightedGraph& h,
                         const std::vector<int>& edge_map);

struct EmbeddedGraph {
    WeightedGraph graph;
    RotationSystem rotation;
};

// Test/corpus builders, all planar-embedded and unit weight.
EmbeddedGraph cycle_graph(int n, std::optional<int> sink = std::nullopt);
EmbeddedGraph path_graph(int n);  // bridged; no valid dual
EmbeddedGraph wheel_graph(int rim, std::optional<int> sink = std::nullopt);  // hub = vertex 0
EmbeddedGraph grid_graph(int rows, int cols, std::optional<int> sink = std::nullopt);
EmbeddedGraph wired_square_patch(int n);  // n*n interior + wired boundary sink
EmbeddedGraph doubled_edge_graph();       // two vertices, two parallel edges

}  // namespace looprate
