#include "doctest.h"
#include "looprate/graph.hpp"

using namespace looprate;

namespace {

int euler_faces(const WeightedGraph& g, const RotationSystem& rot) {
    return static_cast<int>(faces(g, rot).faces.size());
}

}  // namespace

TEST_CASE("build_graph validation") {
    // K3 with unit weights
    EmbeddedGraph k3 = cycle_graph(3);
    CHECK(k3.graph.vertex_count() == 3);
    CHECK(k3.graph.mean_weighted_degree() == Rational(2));

    CHECK_THROWS_WITH_AS(WeightedGraph({1, 2}, {}), "DisconnectedGraph: graph is not connected", Error);
    CHECK_THROWS_AS(WeightedGraph({1}, {Edge{0, 0, Rational(1)}}), Error);
    CHECK_THROWS_AS(WeightedGraph({1, 2}, {Edge{0, 1, Rational(0)}}), Error);
    CHECK_THROWS_AS(WeightedGraph({1, 2}, {Edge{0, 5, Rational(1)}}), Error);
}

TEST_CASE("face tracing satisfies Euler's formula") {
    auto check_euler = [](const EmbeddedGraph& eg) {
        int f = euler_faces(eg.graph, eg.rotation);
        CHECK(f == eg.graph.edge_count() - eg.graph.vertex_count() + 2);
    };
    check_euler(cycle_graph(3));
    check_euler(cycle_graph(4));
    check_euler(doubled_edge_graph());
    check_euler(wheel_graph(3));
    check_euler(wheel_graph(4));
    check_euler(wheel_graph(6));
    check_euler(grid_graph(2, 2));
    check_euler(grid_graph(2, 3));
    check_euler(grid_graph(3, 3));
    for (int n = 1; n <= 5; ++n) check_euler(wired_square_patch(n));
}

TEST_CASE("K3 and C4 have two faces") {
    EmbeddedGraph k3 = cycle_graph(3);
    CHECK(euler_faces(k3.graph, k3.rotation) == 2);
    EmbeddedGraph c4 = cycle_graph(4);
    FaceSet fs = faces(c4.graph, c4.rotation);
    CHECK(fs.faces.size() == 2);
    CHECK(fs.faces[0].size() == 4);
    CHECK(fs.faces[1].size() == 4);
    // 2x2 grid is C4
    EmbeddedGraph g22 = grid_graph(2, 2);
    CHECK(euler_faces(g22.graph, g22.rotation) == 2);
}

TEST_CASE("incomplete rotations are rejected") {
    EmbeddedGraph k3 = cycle_graph(3);
    RotationSystem bad = k3.rotation;
    bad.order[0].pop_back();
    CHECK_THROWS_AS(faces(k3.graph, bad), Error);
    RotationSystem missing;
    missing.order.resize(2);
    CHECK_THROWS_AS(faces(k3.graph, missing), Error);
}

TEST_CASE("dual of K3 is a doubled-vertex triple edge") {
    EmbeddedGraph k3 = cycle_graph(3);
    DualGraph d = dual(k3.graph, k3.rotation);
    CHECK(d.dual.vertex_count() == 2);
    CHECK(d.dual.edge_count() == 3);
    for (const Edge& e : d.dual.edges()) CHECK(e.w == Rational(1));
}

TEST_CASE("dual of C4 has two vertices and four parallel edges") {
    EmbeddedGraph c4 = cycle_graph(4);
    DualGraph d = dual(c4.graph, c4.rotation);
    CHECK(d.dual.vertex_count() == 2);
    CHECK(d.dual.edge_count() == 4);
}

TEST_CASE("bridges are rejected for dual construction") {
    EmbeddedGraph p2 = path_graph(2);
    CHECK_THROWS_AS(dual(p2.graph, p2.rotation), Error);
}

TEST_CASE("dual weights are reciprocal and the weight sum identity holds") {
    EmbeddedGraph w4 = wheel_graph(4);
    // reweight some edges
    std::vector<Edge> edges = w4.graph.edges();
    edges[0].w = Rational(3, 2);
    edges[5].w = Rational(2, 5);
    WeightedGraph g(w4.graph.vertex_ids(), edges);
    DualGraph d = dual(g, w4.rotation);
    Rational sum_recip(0);
    for (int e = 0; e < g.edge_count(); ++e) {
        int de = d.edge_map[static_cast<size_t>(e)];
        CHECK(d.dual.edge(de).w * g.edge(e).w == Rational(1));
        sum_recip += d.dual.edge(de).w.inverse();
    }
    CHECK(sum_recip == g.total_weight());
}

TEST_CASE("dual of dual is isomorphic to the primal") {
    auto roundtrip = [](const EmbeddedGraph& eg) {
        DualGraph d1 = dual(eg.graph, eg.rotation);
        DualGraph d2 = dual(d1.dual, d1.dual_rotation);
        std::vector<int> composed(static_cast<size_t>(eg.graph.edge_count()));
        for (int e = 0; e < eg.graph.edge_count(); ++e)
            composed[static_cast<size_t>(e)] = d2.edge_map[static_cast<size_t>(d1.edge_map[static_cast<size_t>(e)])];
        CHECK(isomorphic_by_edges(eg.graph, d2.dual, composed));
    };
    roundtrip(cycle_graph(3));
    roundtrip(cycle_graph(4));
    roundtrip(doubled_edge_graph());
    roundtrip(wheel_graph(3));
    roundtrip(wheel_graph(4));
    roundtrip(wheel_graph(6));
    roundtrip(grid_graph(2, 3));
    roundtrip(wired_square_patch(2));
}

TEST_CASE("merge_vertices") {
    // wired 3x3 interior: merge the 8 boundary vertices of a 3x3 grid
    EmbeddedGraph g33 = grid_graph(3, 3);
    std::vector<int> boundary;
    for (int v = 0; v < 9; ++v)
        if (v != 4) boundary.push_back(v);
    WeightedGraph merged = merge_vertices(g33.graph, boundary);
    CHECK(merged.vertex_count() == 2);
    CHECK(merged.sink().has_value());
    int interior = 1 - *merged.sink();
    CHECK(merged.weighted_degree(interior) == Rational(4));

    // singleton merge keeps the structure
    EmbeddedGraph k3 = cycle_graph(3);
    WeightedGraph same = merge_vertices(k3.graph, {1});
    CHECK(same.vertex_count() == 3);
    CHECK(same.edge_count() == 3);

    // merging two adjacent K3 vertices drops the shared edge
    WeightedGraph two = merge_vertices(k3.graph, {0, 1});
    CHECK(two.vertex_count() == 2);
    CHECK(two.edge_count() == 2);

    CHECK_THROWS_AS(merge_vertices(k3.graph, {}), Error);
}

TEST_CASE("wired square patch shapes") {
    EmbeddedGraph p1 = wired_square_patch(1);
    CHECK(p1.graph.vertex_count() == 2);
    CHECK(p1.graph.edge_count() == 4);
    EmbeddedGraph p3 = wired_square_patch(3);
    CHECK(p3.graph.vertex_count() == 10);
    CHECK(p3.graph.edge_count() == 2 * 3 * 2 + 12);
    CHECK(p3.graph.weighted_degree(4) == Rational(4));  // center
    CHECK(p3.graph.weighted_degree(*p3.graph.sink()) == Rational(12));
}
