#pragma once

#include <utility>

#include "looprate/graph.hpp"
#include "looprate/matrix.hpp"

namespace looprate {

Matrix<Rational> laplacian(const WeightedGraph& g);

// Weighted sum of spanning trees F1 (Matrix-Tree determinant).
Rational tree_weight(const WeightedGraph& g);

// Green's function with Dirichlet condition at `sink`: inverse of the
// sink-reduced Laplacian embedded as a full matrix with zero row/column at
// the sink.  Symmetric, positive on the diagonal away from the sink.
template <typename T>
struct GreenT {
    int sink;
    Matrix<T> g;
};
using GreenFunction = GreenT<Rational>;
using GreenFunctionF = GreenT<double>;

GreenFunction green(const WeightedGraph& g, int sink);
GreenFunctionF green_float(const WeightedGraph& g, int sink);

// Potential kernel A^{(s)}_{u,v} = G_{u,u} - G_{u,v}, stored per directed
// side of every edge.
template <typename T>
struct KernelT {
    int sink;
    std::vector<T> a_fwd;  // A_{u,v} for edge (u,v)
    std::vector<T> a_rev;  // A_{v,u}
};
using PotentialKernel = KernelT<Rational>;
using PotentialKernelF = KernelT<double>;

PotentialKernel potential_kernel(const WeightedGraph& g, const GreenFunction& gf);
PotentialKernelF potential_kernel(const WeightedGraph& g, const GreenFunctionF& gf);

// Pr[(u,v) in T] = w_{u,v} (A_{u,v} + A_{v,u})
Rational edge_in_tree_prob(const WeightedGraph& g, const PotentialKernel& k, int e);

// Jacobi-preconditioned conjugate gradient on the sink-reduced Laplacian,
// applied straight off the adjacency (nothing materialized).  Returns the
// full-length solution with 0 at the sink.
std::vector<double> solve_reduced_laplacian_cg(const WeightedGraph& g, int sink,
                                               const std::vector<double>& b,
                                               double rel_residual = 1e-10);

// (A_{u,v}, A_{v,u}) for one edge of a large graph: two CG columns.
std::pair<double, double> edge_kernel_cg(const WeightedGraph& g, int sink, int e);

}  // namespace looprate
