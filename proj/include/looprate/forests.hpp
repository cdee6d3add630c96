#pragma once

#include <cstdint>

#include "looprate/graph.hpp"
#include "looprate/kernels.hpp"

namespace looprate {

// Two-component spanning forest weight F2 by the Laplacian-minor formula:
//   F2 = sum_{v != s} det L^{v,s} - sum_{edges u~v, u,v != s} w_uv det L^{u,v,s}.
Rational f2_minor(const WeightedGraph& g, int s);

// F2/F1 as a sum of positive edge terms,
//   sum_e w_e [ (A_uv - A_vu)^2 + A_uv A_vu ].
Rational f2_positive(const WeightedGraph& g, int s);

// F_k/F1 by the inclusion-exclusion sum over h-edge-sets and
// (k-1-h)-vertex-sets of Green principal minors.  Exact for rational
// weights (internally rescaled to integers).
Rational fk_ratio(const WeightedGraph& g, int k);
Rational fk_ratio_serial(const WeightedGraph& g, int k);

// Weighted sum of spanning unicycles via planar duality:
//   F2(dual) * prod_e w(e).
Rational unicycles_via_dual(const WeightedGraph& g, const RotationSystem& rot);

// Variance of the sandpile level, 2 F3*/F1* + F2*/F1* - (F2*/F1*)^2 on the
// dual graph.
Rational level_variance(const WeightedGraph& g, const RotationSystem& rot);

// Exhaustive subset-scan oracles (|E| <= 24).  The plain versions run the
// scan in OpenMP chunks; *_serial are the straight-line references.
Rational brute_force_forests(const WeightedGraph& g, int k);
Rational brute_force_forests_serial(const WeightedGraph& g, int k);

// Weighted count of connected spanning subgraphs with exactly m edges
// (m = |V|-1: trees, m = |V|: unicycles, ...).
Rational brute_force_connected_spanning(const WeightedGraph& g, int m_edges);
Rational brute_force_connected_spanning_serial(const WeightedGraph& g, int m_edges);

// Edge masks of all spanning trees (|E| <= 24; test-scale enumeration).
std::vector<uint32_t> spanning_tree_masks(const WeightedGraph& g);

}  // namespace looprate
