#include "looprate/kernels.hpp"

#include <cmath>

namespace looprate {

Matrix<Rational> laplacian(const WeightedGraph& g) {
    const size_t n = static_cast<size_t>(g.vertex_count());
    Matrix<Rational> m(n, n);
    for (const Edge& e : g.edges()) {
        size_t u = static_cast<size_t>(e.u), v = static_cast<size_t>(e.v);
        m(u, v) -= e.w;
        m(v, u) -= e.w;
        m(u, u) += e.w;
        m(v, v) += e.w;
    }
    return m;
}

Rational tree_weight(const WeightedGraph& g) {
    Matrix<Rational> lap = laplacian(g);
    size_t s = static_cast<size_t>(g.sink().value_or(0));
    return determinant(lap.minor_matrix({s}, {s}));
}

namespace {

// map reduced index -> vertex (skipping the sink)
std::vector<size_t> non_sink_vertices(int n, int sink) {
    std::vector<size_t> keep;
    for (int v = 0; v < n; ++v)
        if (v != sink) keep.push_back(static_cast<size_t>(v));
    return keep;
}

template <typename T>
Matrix<T> embed_with_sink(const Matrix<T>& reduced, const std::vector<size_t>& keep, size_t n) {
    Matrix<T> full(n, n);
    for (size_t i = 0; i < keep.size(); ++i)
        for (size_t j = 0; j < keep.size(); ++j) full(keep[i], keep[j]) = reduced(i, j);
    return full;
}

}  // namespace

GreenFunction green(const WeightedGraph& g, int sink) {
    const size_t n = static_cast<size_t>(g.vertex_count());
    Matrix<Rational> reduced = laplacian(g).minor_matrix({static_cast<size_t>(sink)},
                                                         {static_cast<size_t>(sink)});
    Matrix<Rational> inv = inverse(reduced);
    return {sink, embed_with_sink(inv, non_sink_vertices(g.vertex_count(), sink), n)};
}

GreenFunctionF green_float(const WeightedGraph& g, int sink) {
    const size_t n = static_cast<size_t>(g.vertex_count());
    if (g.vertex_count() <= 64) {
        Matrix<Rational> reduced = laplacian(g).minor_matrix({static_cast<size_t>(sink)},
                                                             {static_cast<size_t>(sink)});
        Matrix<double> inv = inverse(to_float(reduced));
        return {sink, embed_with_sink(inv, non_sink_vertices(g.vertex_count(), sink), n)};
    }
    // larger reduced Laplacians: one preconditioned CG column per vertex
    GreenFunctionF gf{sink, Matrix<double>(n, n)};
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (size_t u = 0; u < n; ++u) {
        if (static_cast<int>(u) == sink) continue;
        std::vector<double> b(n, 0.0);
        b[u] = 1.0;
        std::vector<double> col = solve_reduced_laplacian_cg(g, sink, b);
        for (size_t v = 0; v < n; ++v) gf.g(u, v) = col[v];
    }
    return gf;
}

namespace {

template <typename T>
KernelT<T> kernel_from_green(const WeightedGraph& g, const GreenT<T>& gf) {
    KernelT<T> k;
    k.sink = gf.sink;
    k.a_fwd.reserve(static_cast<size_t>(g.edge_count()));
    k.a_rev.reserve(static_cast<size_t>(g.edge_count()));
    for (const Edge& e : g.edges()) {
        size_t u = static_cast<size_t>(e.u), v = static_cast<size_t>(e.v);
        k.a_fwd.push_back(gf.g(u, u) - gf.g(u, v));
        k.a_rev.push_back(gf.g(v, v) - gf.g(v, u));
    }
    return k;
}

}  // namespace

PotentialKernel potential_kernel(const WeightedGraph& g, const GreenFunction& gf) {
    return kernel_from_green(g, gf);
}

PotentialKernelF potential_kernel(const WeightedGraph& g, const GreenFunctionF& gf) {
    return kernel_from_green(g, gf);
}

Rational edge_in_tree_prob(const WeightedGraph& g, const PotentialKernel& k, int e) {
    return g.edge(e).w * (k.a_fwd[static_cast<size_t>(e)] + k.a_rev[static_cast<size_t>(e)]);
}

std::vector<double> solve_reduced_laplacian_cg(const WeightedGraph& g, int sink,
                                               const std::vector<double>& b,
                                               double rel_residual) {
    const int n = g.vertex_count();
    std::vector<double> deg(static_cast<size_t>(n), 0.0);
    std::vector<double> w(static_cast<size_t>(g.edge_count()));
    for (int e = 0; e < g.edge_count(); ++e) {
        w[static_cast<size_t>(e)] = g.edge(e).w.to_double();
        deg[static_cast<size_t>(g.edge(e).u)] += w[static_cast<size_t>(e)];
        deg[static_cast<size_t>(g.edge(e).v)] += w[static_cast<size_t>(e)];
    }
    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (int v = 0; v < n; ++v) y[static_cast<size_t>(v)] = deg[static_cast<size_t>(v)] * x[static_cast<size_t>(v)];
        for (int e = 0; e < g.edge_count(); ++e) {
            const Edge& ed = g.edge(e);
            y[static_cast<size_t>(ed.u)] -= w[static_cast<size_t>(e)] * x[static_cast<size_t>(ed.v)];
            y[static_cast<size_t>(ed.v)] -= w[static_cast<size_t>(e)] * x[static_cast<size_t>(ed.u)];
        }
        y[static_cast<size_t>(sink)] = 0.0;
    };

    std::vector<double> x(static_cast<size_t>(n), 0.0), r = b, z(static_cast<size_t>(n)), p(static_cast<size_t>(n)), ap(static_cast<size_t>(n));
    r[static_cast<size_t>(sink)] = 0.0;
    double bnorm = 0.0;
    for (double v : r) bnorm += v * v;
    bnorm = std::sqrt(bnorm);
    if (bnorm == 0.0) return x;

    auto precond = [&](const std::vector<double>& in, std::vector<double>& out) {
        for (int v = 0; v < n; ++v)
            out[static_cast<size_t>(v)] = v == sink ? 0.0 : in[static_cast<size_t>(v)] / deg[static_cast<size_t>(v)];
    };
    precond(r, z);
    p = z;
    double rz = 0.0;
    for (int v = 0; v < n; ++v) rz += r[static_cast<size_t>(v)] * z[static_cast<size_t>(v)];

    const int max_iter = 20 * n + 200;
    for (int it = 0; it < max_iter; ++it) {
        apply(p, ap);
        double pap = 0.0;
        for (int v = 0; v < n; ++v) pap += p[static_cast<size_t>(v)] * ap[static_cast<size_t>(v)];
        double alpha = rz / pap;
        double rnorm = 0.0;
        for (int v = 0; v < n; ++v) {
            x[static_cast<size_t>(v)] += alpha * p[static_cast<size_t>(v)];
            r[static_cast<size_t>(v)] -= alpha * ap[static_cast<size_t>(v)];
            rnorm += r[static_cast<size_t>(v)] * r[static_cast<size_t>(v)];
        }
        if (std::sqrt(rnorm) <= rel_residual * bnorm) return x;
        precond(r, z);
        double rz_new = 0.0;
        for (int v = 0; v < n; ++v) rz_new += r[static_cast<size_t>(v)] * z[static_cast<size_t>(v)];
        double beta = rz_new / rz;
        rz = rz_new;
        for (int v = 0; v < n; ++v)
            p[static_cast<size_t>(v)] = z[static_cast<size_t>(v)] + beta * p[static_cast<size_t>(v)];
    }
    fail(errc::quadrature_not_converged, "conjugate gradient did not reach the residual target");
}

std::pair<double, double> edge_kernel_cg(const WeightedGraph& g, int sink, int e) {
    const Edge& ed = g.edge(e);
    std::vector<double> bu(static_cast<size_t>(g.vertex_count()), 0.0);
    bu[static_cast<size_t>(ed.u)] = 1.0;
    std::vector<double> gu = solve_reduced_laplacian_cg(g, sink, bu);
    std::vector<double> bv(static_cast<size_t>(g.vertex_count()), 0.0);
    bv[static_cast<size_t>(ed.v)] = 1.0;
    std::vector<double> gv = solve_reduced_laplacian_cg(g, sink, bv);
    double a_uv = gu[static_cast<size_t>(ed.u)] - gu[static_cast<size_t>(ed.v)];
    double a_vu = gv[static_cast<size_t>(ed.v)] - gv[static_cast<size_t>(ed.u)];
    return {a_uv, a_vu};
}

}  // namespace looprate
