#pragma once

#include <optional>

#include "looprate/forests.hpp"
#include "looprate/graph.hpp"

namespace looprate {

// Exact looping-rate statistics of a finite embedded graph.
struct LoopStats {
    Rational tau;             // rate of loops of length >= 3
    Rational rho;             // rate of all loops
    Rational lambda;          // mean unicycle loop length
    Rational mean_lerw_loop;  // 1/rho
    Rational delta_rho;       // mean number of neighboring ancestors
    Rational edge_in_tree;    // weighted Pr[e in T]
    std::optional<Rational> sand_density;  // set when the graph has a sink
};

// tau = sum over dual edges of w*(A*A*' + (A*-A*')^2), divided by sum 1/w*.
// Independent of the dual sink; `s_star` overrides the outer-face default.
Rational tau_exact(const WeightedGraph& g, const RotationSystem& rot,
                   std::optional<int> s_star = std::nullopt);

// Pr[e in T] for a weight-random edge: the weighted current average, or the
// (|V|-1)/|E| shortcut when all weights are equal.
Rational edge_in_tree_weighted(const WeightedGraph& g);

Rational rho_exact(const WeightedGraph& g, const RotationSystem& rot);

// lambda = (1 - 2(rho - tau)) / tau = Pr[e not in T]/tau
Rational lambda_mean_loop(const Rational& tau, const Rational& rho);

Rational delta_rho(const WeightedGraph& g, const Rational& rho);

// (delta rho + delta - 1)/2 - (delta_s - 1/2)/|V|, exact on finite graphs.
Rational sand_density(const WeightedGraph& g, int s, const Rational& rho);

LoopStats loop_stats(const WeightedGraph& g, const RotationSystem& rot);

// Float backend: the same quantities through double linear algebra, for
// graphs too large for exact rationals.
struct LoopStatsF {
    double tau = 0, rho = 0, lambda = 0, mean_lerw_loop = 0, delta_rho = 0, edge_in_tree = 0;
    std::optional<double> sand_density;
    double f1 = 0, f2 = 0, unicycles = 0;
};
LoopStatsF loop_stats_float(const WeightedGraph& g, const RotationSystem& rot);

}  // namespace looprate
