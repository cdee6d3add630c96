#include "looprate/forests.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace looprate {

Rational f2_minor(const WeightedGraph& g, int s) {
    Matrix<Rational> lap = laplacian(g);
    const size_t su = static_cast<size_t>(s);
    Rational total(0);
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (v == s) continue;
        total += determinant(lap.minor_matrix({static_cast<size_t>(v), su}, {static_cast<size_t>(v), su}));
    }
    for (const Edge& e : g.edges()) {
        if (e.u == s || e.v == s) continue;
        std::vector<size_t> drop{static_cast<size_t>(e.u), static_cast<size_t>(e.v), su};
        total -= e.w * determinant(lap.minor_matrix(drop, drop));
    }
    return total;
}

Rational f2_positive(const WeightedGraph& g, int s) {
    GreenFunction gf = green(g, s);
    PotentialKernel k = potential_kernel(g, gf);
    Rational total(0);
    for (int e = 0; e < g.edge_count(); ++e) {
        const Rational& a = k.a_fwd[static_cast<size_t>(e)];
        const Rational& b = k.a_rev[static_cast<size_t>(e)];
        Rational d = a - b;
        total += g.edge(e).w * (d * d + a * b);
    }
    return total;
}

namespace {

// Scale all weights by the lcm of their denominators; F_k picks up a factor
// L^{|V|-k}, so F_k/F1 of the scaled graph is L^{1-k} times the original.
struct ScaledGraph {
    std::vector<BigInt> w;  // integer weights
    BigInt scale;           // L
};

ScaledGraph scale_weights(const WeightedGraph& g) {
    BigInt l(1);
    for (const Edge& e : g.edges()) {
        const BigInt& d = e.w.den();
        l = l / BigInt::gcd(l, d) * d;
    }
    ScaledGraph sg;
    sg.scale = l;
    sg.w.reserve(static_cast<size_t>(g.edge_count()));
    for (const Edge& e : g.edges()) sg.w.push_back(e.w.num() * (l / e.w.den()));
    return sg;
}

// Integer cofactor form of the Green function: C = D * G where D is the
// determinant of the sink-reduced integer Laplacian.  Minors of G follow as
// det(C_I) / D^{|I|}.
struct CofactorGreen {
    Matrix<BigInt> c;  // n x n, zero row/col at sink
    BigInt d;
    int sink;
};

CofactorGreen cofactor_green(const WeightedGraph& g, const ScaledGraph& sg, int sink) {
    const size_t n = static_cast<size_t>(g.vertex_count());
    Matrix<Rational> lap(n, n);
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        Rational w(sg.w[static_cast<size_t>(e)]);
        size_t u = static_cast<size_t>(ed.u), v = static_cast<size_t>(ed.v);
        lap(u, v) -= w;
        lap(v, u) -= w;
        lap(u, u) += w;
        lap(v, v) += w;
    }
    Matrix<Rational> reduced = lap.minor_matrix({static_cast<size_t>(sink)}, {static_cast<size_t>(sink)});
    Matrix<BigInt> ired(reduced.rows(), reduced.cols());
    for (size_t i = 0; i < reduced.rows(); ++i)
        for (size_t j = 0; j < reduced.cols(); ++j) ired(i, j) = reduced(i, j).num();
    BigInt d = determinant_bareiss(ired);
    Matrix<Rational> inv = inverse(reduced);

    CofactorGreen cg;
    cg.d = d;
    cg.sink = sink;
    cg.c = Matrix<BigInt>(n, n);
    std::vector<size_t> keep;
    for (size_t v = 0; v < n; ++v)
        if (static_cast<int>(v) != sink) keep.push_back(v);
    Rational dr{d};
    for (size_t i = 0; i < keep.size(); ++i) {
        for (size_t j = 0; j < keep.size(); ++j) {
            Rational scaled = inv(i, j) * dr;
            if (!scaled.is_integer())
                fail(errc::singular, "cofactor matrix entry is not integral");
            cg.c(keep[i], keep[j]) = scaled.num();
        }
    }
    return cg;
}

BigInt principal_minor_det(const Matrix<BigInt>& c, const std::vector<int>& idx) {
    Matrix<BigInt> m(idx.size(), idx.size());
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = 0; j < idx.size(); ++j)
            m(i, j) = c(static_cast<size_t>(idx[i]), static_cast<size_t>(idx[j]));
    return determinant_bareiss(std::move(m));
}

std::vector<std::vector<int>> combinations(int n, int t) {
    std::vector<std::vector<int>> out;
    if (t == 0) {
        out.push_back({});
        return out;
    }
    if (t > n) return out;
    std::vector<int> c(static_cast<size_t>(t));
    std::iota(c.begin(), c.end(), 0);
    while (true) {
        out.push_back(c);
        int i = t - 1;
        while (i >= 0 && c[static_cast<size_t>(i)] == n - t + i) --i;
        if (i < 0) break;
        ++c[static_cast<size_t>(i)];
        for (int j = i + 1; j < t; ++j) c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
    }
    return out;
}

// One inclusion-exclusion layer: sum over h-edge-sets and t-vertex-sets of
// w-product times the principal cofactor minor.
BigInt fk_layer(const WeightedGraph& g, const ScaledGraph& sg, const CofactorGreen& cg,
                const std::vector<int>& edge_set, int t) {
    const int n = g.vertex_count();
    std::vector<char> used(static_cast<size_t>(n), 0);
    std::vector<int> base;
    for (int ei : edge_set) {
        const Edge& e = g.edge(ei);
        if (used[static_cast<size_t>(e.u)] || used[static_cast<size_t>(e.v)]) return BigInt(0);
        used[static_cast<size_t>(e.u)] = used[static_cast<size_t>(e.v)] = 1;
        base.push_back(e.u);
        base.push_back(e.v);
    }
    BigInt wprod(1);
    for (int ei : edge_set) wprod = wprod * sg.w[static_cast<size_t>(ei)];

    std::vector<int> pool;  // vertices that can still contribute a nonzero minor
    for (int v = 0; v < n; ++v)
        if (!used[static_cast<size_t>(v)] && v != cg.sink) pool.push_back(v);

    BigInt acc(0);
    std::vector<int> idx = base;
    idx.resize(base.size() + static_cast<size_t>(t));
    for (const std::vector<int>& vs : combinations(static_cast<int>(pool.size()), t)) {
        for (size_t i = 0; i < vs.size(); ++i)
            idx[base.size() + i] = pool[static_cast<size_t>(vs[i])];
        acc = acc + principal_minor_det(cg.c, idx);
    }
    return wprod * acc;
}

Rational fk_ratio_impl(const WeightedGraph& g, int k, bool parallel) {
    if (k < 1 || k > g.vertex_count())
        fail(errc::k_out_of_range, "k must lie in [1, |V|]");
    if (k == 1) return Rational(1);
    ScaledGraph sg = scale_weights(g);
    int sink = g.sink().value_or(0);
    CofactorGreen cg = cofactor_green(g, sg, sink);

    Rational total(0);
    for (int h = 0; h < k; ++h) {
        int t = k - 1 - h;
        std::vector<std::vector<int>> esets = combinations(g.edge_count(), h);
        BigInt layer(0);
#ifdef _OPENMP
        if (parallel) {
            int nthreads = omp_get_max_threads();
            std::vector<BigInt> partial(static_cast<size_t>(nthreads));
#pragma omp parallel for schedule(dynamic, 8)
            for (size_t i = 0; i < esets.size(); ++i) {
                BigInt term = fk_layer(g, sg, cg, esets[i], t);
                int tid = omp_get_thread_num();
                partial[static_cast<size_t>(tid)] = partial[static_cast<size_t>(tid)] + term;
            }
            for (const BigInt& p : partial) layer = layer + p;
        } else
#endif
        {
            (void)parallel;
            for (const auto& es : esets) layer = layer + fk_layer(g, sg, cg, es, t);
        }
        Rational contrib(layer, BigInt::pow(cg.d, static_cast<unsigned>(k - 1 + h)));
        total = (h % 2 == 0) ? total + contrib : total - contrib;
    }
    // undo the integer rescaling
    return total * Rational(BigInt::pow(sg.scale, static_cast<unsigned>(k - 1)));
}

}  // namespace

Rational fk_ratio(const WeightedGraph& g, int k) { return fk_ratio_impl(g, k, true); }
Rational fk_ratio_serial(const WeightedGraph& g, int k) { return fk_ratio_impl(g, k, false); }

Rational unicycles_via_dual(const WeightedGraph& g, const RotationSystem& rot) {
    DualGraph d = dual(g, rot);
    Rational prod(1);
    for (const Edge& e : g.edges()) prod *= e.w;
    return f2_minor(d.dual, d.outer_face) * prod;
}

Rational level_variance(const WeightedGraph& g, const RotationSystem& rot) {
    DualGraph d = dual(g, rot);
    Rational r2 = fk_ratio(d.dual, 2);
    Rational r3 = d.dual.vertex_count() >= 3 ? fk_ratio(d.dual, 3) : Rational(0);
    return Rational(2) * r3 + r2 - r2 * r2;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<size_t>(n)) { reset(); }
    void reset() { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[static_cast<size_t>(a)] = b;
        return true;
    }
};

enum class ScanKind { forests, connected };

// Scan a contiguous block of edge-subset masks.  `target` is the component
// count (forests) or the edge count (connected spanning subgraphs).
BigInt scan_masks(const WeightedGraph& g, const ScaledGraph& sg, ScanKind kind, int target,
                  uint32_t begin, uint32_t end, bool unit) {
    const int n = g.vertex_count();
    const int m = g.edge_count();
    BigInt acc(0);
    uint64_t count = 0;
    UnionFind uf(n);
    const unsigned want_edges =
        kind == ScanKind::forests ? static_cast<unsigned>(n - target) : static_cast<unsigned>(target);
    for (uint32_t mask = begin; mask < end; ++mask) {
        if (static_cast<unsigned>(std::popcount(mask)) != want_edges) continue;
        uf.reset();
        bool acyclic = true;
        for (int e = 0; e < m; ++e) {
            if (!(mask & (1u << e))) continue;
            if (!uf.unite(g.edge(e).u, g.edge(e).v)) acyclic = false;
            if (kind == ScanKind::forests && !acyclic) break;
        }
        if (kind == ScanKind::forests) {
            if (!acyclic) continue;
        } else {
            int root = uf.find(0);
            bool connected = true;
            for (int v = 1; v < n; ++v)
                if (uf.find(v) != root) {
                    connected = false;
                    break;
                }
            if (!connected) continue;
        }
        if (unit) {
            ++count;
        } else {
            BigInt prod(1);
            for (int e = 0; e < m; ++e)
                if (mask & (1u << e)) prod = prod * sg.w[static_cast<size_t>(e)];
            acc = acc + prod;
        }
    }
    if (unit) acc = acc + BigInt(static_cast<long long>(count));
    return acc;
}

Rational subset_scan(const WeightedGraph& g, ScanKind kind, int target, bool parallel) {
    const int m = g.edge_count();
    if (m > 24) fail(errc::too_large, "oracle bound is 24 edges");
    ScaledGraph sg = scale_weights(g);
    bool unit = true;
    for (const BigInt& w : sg.w)
        if (!(w == BigInt(1))) unit = false;
    const uint32_t total = 1u << m;
    BigInt sum(0);
#ifdef _OPENMP
    if (parallel && total > 4096) {
        int nthreads = omp_get_max_threads();
        std::vector<BigInt> partial(static_cast<size_t>(nthreads));
        const uint32_t chunk = 4096;
        const uint32_t nchunks = (total + chunk - 1) / chunk;
#pragma omp parallel for schedule(dynamic)
        for (uint32_t c = 0; c < nchunks; ++c) {
            uint32_t lo = c * chunk;
            uint32_t hi = std::min(total, lo + chunk);
            BigInt part = scan_masks(g, sg, kind, target, lo, hi, unit);
            int tid = omp_get_thread_num();
            partial[static_cast<size_t>(tid)] = partial[static_cast<size_t>(tid)] + part;
        }
        for (const BigInt& p : partial) sum = sum + p;
    } else
#endif
    {
        (void)parallel;
        sum = scan_masks(g, sg, kind, target, 0, total, unit);
    }
    // scaled subgraph weights carry L^{#edges}; forests with k components
    // have |V|-k edges, connected subgraphs exactly `target` edges
    int edges_used = kind == ScanKind::forests ? g.vertex_count() - target : target;
    return Rational(sum, BigInt::pow(sg.scale, static_cast<unsigned>(edges_used)));
}

}  // namespace

Rational brute_force_forests(const WeightedGraph& g, int k) {
    if (k < 1 || k > g.vertex_count()) fail(errc::k_out_of_range, "k must lie in [1, |V|]");
    return subset_scan(g, ScanKind::forests, k, true);
}

Rational brute_force_forests_serial(const WeightedGraph& g, int k) {
    if (k < 1 || k > g.vertex_count()) fail(errc::k_out_of_range, "k must lie in [1, |V|]");
    return subset_scan(g, ScanKind::forests, k, false);
}

Rational brute_force_connected_spanning(const WeightedGraph& g, int m_edges) {
    return subset_scan(g, ScanKind::connected, m_edges, true);
}

Rational brute_force_connected_spanning_serial(const WeightedGraph& g, int m_edges) {
    return subset_scan(g, ScanKind::connected, m_edges, false);
}

std::vector<uint32_t> spanning_tree_masks(const WeightedGraph& g) {
    const int m = g.edge_count();
    if (m > 24) fail(errc::too_large, "oracle bound is 24 edges");
    const int n = g.vertex_count();
    std::vector<uint32_t> out;
    UnionFind uf(n);
    for (uint32_t mask = 0; mask < (1u << m); ++mask) {
        if (std::popcount(mask) != n - 1) continue;
        uf.reset();
        bool acyclic = true;
        for (int e = 0; e < m && acyclic; ++e)
            if (mask & (1u << e)) acyclic = uf.unite(g.edge(e).u, g.edge(e).v);
        if (acyclic) out.push_back(mask);
    }
    return out;
}

}  // namespace looprate
