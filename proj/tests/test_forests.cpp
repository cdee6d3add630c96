#include <random>

#include "doctest.h"
#include "looprate/forests.hpp"

using namespace looprate;

namespace {

WeightedGraph random_graph(std::mt19937_64& rng, int n, int extra, bool unit = false) {
    std::vector<Edge> edges;
    auto weight = [&]() {
        if (unit) return Rational(1);
        return Rational(1 + static_cast<long long>(rng() % 5), 1 + static_cast<long long>(rng() % 5));
    };
    for (int v = 1; v < n; ++v)
        edges.push_back(Edge{static_cast<int>(rng() % static_cast<uint64_t>(v)), v, weight()});
    for (int t = 0; t < extra; ++t) {
        int u = static_cast<int>(rng() % static_cast<uint64_t>(n));
        int v = static_cast<int>(rng() % static_cast<uint64_t>(n));
        if (u == v) continue;
        edges.push_back(Edge{u, v, weight()});
    }
    std::vector<long long> ids(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ids[static_cast<size_t>(i)] = i;
    return WeightedGraph(std::move(ids), std::move(edges));
}

}  // namespace

TEST_CASE("f2_minor on the named examples") {
    CHECK(f2_minor(cycle_graph(3).graph, 0) == Rational(3));
    CHECK(f2_minor(path_graph(3).graph, 0) == Rational(2));
    CHECK(f2_minor(cycle_graph(4).graph, 0) == Rational(6));
}

TEST_CASE("brute force oracle on the named examples") {
    WeightedGraph k3 = cycle_graph(3).graph;
    CHECK(brute_force_forests(k3, 1) == Rational(3));
    CHECK(brute_force_forests(k3, 2) == Rational(3));
    CHECK(brute_force_forests(k3, 3) == Rational(1));
    CHECK(brute_force_forests(cycle_graph(4).graph, 2) == Rational(6));
    CHECK_THROWS_AS(brute_force_forests(k3, 9), Error);
}

TEST_CASE("f2 routes agree with each other and the oracle") {
    std::mt19937_64 rng(4242);
    for (int iter = 0; iter < 60; ++iter) {
        int n = 3 + static_cast<int>(rng() % 5);
        WeightedGraph g = random_graph(rng, n, static_cast<int>(rng() % 5));
        if (g.edge_count() > 12) continue;
        int s = static_cast<int>(rng() % static_cast<uint64_t>(n));
        Rational f1 = tree_weight(g);
        Rational via_minor = f2_minor(g, s);
        CHECK(via_minor == brute_force_forests_serial(g, 2));
        CHECK(f2_positive(g, s) * f1 == via_minor);
        // and s-independence
        CHECK(f2_minor(g, (s + 1) % n) == via_minor);
    }
}

TEST_CASE("f2_positive on K3 sums the edge terms to one") {
    // edge (0,1) contributes 1/9, both sink edges contribute 4/9 each
    WeightedGraph k3 = cycle_graph(3).graph;
    CHECK(f2_positive(k3, 2) == Rational(1));
}

TEST_CASE("f2_positive K2 closed form") {
    Rational w(7, 2);
    WeightedGraph g({0, 1}, {Edge{0, 1, w}});
    CHECK(f2_positive(g, 1) == w.inverse());
    CHECK(f2_minor(g, 1) == Rational(1));
    CHECK(tree_weight(g) == w);
}

TEST_CASE("fk ratio examples") {
    WeightedGraph k3 = cycle_graph(3).graph;
    CHECK(fk_ratio(k3, 1) == Rational(1));
    CHECK(fk_ratio(k3, 2) == Rational(1));
    CHECK(fk_ratio(k3, 3) == Rational(1, 3));
    CHECK_THROWS_AS(fk_ratio(k3, 0), Error);
    CHECK_THROWS_AS(fk_ratio(k3, 4), Error);
}

TEST_CASE("fk matches the oracle for k <= 4") {
    std::mt19937_64 rng(90210);
    for (int iter = 0; iter < 25; ++iter) {
        int n = 4 + static_cast<int>(rng() % 3);
        WeightedGraph g = random_graph(rng, n, static_cast<int>(rng() % 4));
        if (g.edge_count() > 11) continue;
        Rational f1 = brute_force_forests_serial(g, 1);
        for (int k = 2; k <= std::min(4, n); ++k) {
            Rational expect = brute_force_forests_serial(g, k) / f1;
            CHECK(fk_ratio(g, k) == expect);
            CHECK(fk_ratio_serial(g, k) == expect);
        }
    }
}

TEST_CASE("parallel and serial oracles agree") {
    std::mt19937_64 rng(606);
    WeightedGraph g = random_graph(rng, 6, 8);
    for (int k = 1; k <= 4; ++k)
        CHECK(brute_force_forests(g, k) == brute_force_forests_serial(g, k));
    for (int m = 5; m <= 7; ++m)
        CHECK(brute_force_connected_spanning(g, m) == brute_force_connected_spanning_serial(g, m));
}

TEST_CASE("unicycles via planar duality") {
    EmbeddedGraph k3 = cycle_graph(3);
    CHECK(unicycles_via_dual(k3.graph, k3.rotation) == Rational(1));
    EmbeddedGraph c4 = cycle_graph(4);
    CHECK(unicycles_via_dual(c4.graph, c4.rotation) == Rational(1));
    EmbeddedGraph g23 = grid_graph(2, 3);
    CHECK(unicycles_via_dual(g23.graph, g23.rotation) ==
          brute_force_connected_spanning_serial(g23.graph, g23.graph.vertex_count()));
    // bridges are rejected
    EmbeddedGraph p3 = path_graph(3);
    CHECK_THROWS_AS(unicycles_via_dual(p3.graph, p3.rotation), Error);
}

TEST_CASE("unicycle duality on weighted embedded graphs") {
    EmbeddedGraph w4 = wheel_graph(4);
    std::vector<Edge> edges = w4.graph.edges();
    edges[1].w = Rational(3);
    edges[4].w = Rational(1, 2);
    edges[7].w = Rational(2, 3);
    WeightedGraph g(w4.graph.vertex_ids(), edges);
    CHECK(unicycles_via_dual(g, w4.rotation) ==
          brute_force_connected_spanning_serial(g, g.vertex_count()));
}

TEST_CASE("level variance via the dual forest formula") {
    EmbeddedGraph k3 = cycle_graph(3);
    CHECK(level_variance(k3.graph, k3.rotation) == Rational(2, 9));
    EmbeddedGraph p2 = path_graph(2);
    CHECK_THROWS_AS(level_variance(p2.graph, p2.rotation), Error);
}

TEST_CASE("spanning tree masks") {
    CHECK(spanning_tree_masks(cycle_graph(3).graph).size() == 3);
    CHECK(spanning_tree_masks(cycle_graph(4).graph).size() == 4);
    CHECK(spanning_tree_masks(wheel_graph(4).graph).size() == 45);  // W4 tree count
}
