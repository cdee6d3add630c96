#include "looprate/sandpile.hpp"

#include <algorithm>
#include <deque>
#include <queue>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace looprate {

namespace {

void require_unit(const WeightedGraph& g) {
    if (!g.unit_weights())
        fail(errc::bad_input, "sandpile operations need a unit multigraph; expand weights first");
    g.require_sink();
}

void require_size(const WeightedGraph& g, const SandpileConfig& c) {
    if (c.h.size() != static_cast<size_t>(g.vertex_count()))
        fail(errc::bad_input, "configuration size does not match the graph");
}

}  // namespace

WeightedGraph to_unit_multigraph(const WeightedGraph& g) {
    if (!g.integer_weights())
        fail(errc::bad_input, "sandpile graphs need positive integer weights");
    std::vector<Edge> edges;
    for (const Edge& e : g.edges()) {
        if (!e.w.num().fits_int64())
            fail(errc::too_large, "edge multiplicity too large to expand");
        long long m = e.w.num().to_int64();
        for (long long i = 0; i < m; ++i) edges.push_back(Edge{e.u, e.v, Rational(1)});
    }
    return WeightedGraph(g.vertex_ids(), std::move(edges), g.sink());
}

long long sand_degree(const WeightedGraph& g, int v) {
    return static_cast<long long>(g.incident(v).size());
}

bool is_stable(const WeightedGraph& g, const SandpileConfig& c) {
    require_unit(g);
    require_size(g, c);
    int sink = *g.sink();
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (v == sink) continue;
        if (c.h[static_cast<size_t>(v)] < 0) fail(errc::bad_input, "negative grain count");
        if (c.h[static_cast<size_t>(v)] >= sand_degree(g, v)) return false;
    }
    return true;
}

SandpileConfig topple(const WeightedGraph& g, SandpileConfig c, int v) {
    require_unit(g);
    require_size(g, c);
    int sink = *g.sink();
    if (v == sink) fail(errc::bad_input, "the sink never topples");
    long long deg = sand_degree(g, v);
    if (c.h[static_cast<size_t>(v)] < deg)
        fail(errc::vertex_stable, "vertex " + std::to_string(v) + " is stable");
    c.h[static_cast<size_t>(v)] -= deg;
    for (const IncidentEdge& ie : g.incident(v))
        if (ie.other != sink) ++c.h[static_cast<size_t>(ie.other)];
    return c;
}

std::pair<SandpileConfig, std::vector<long long>> stabilize(const WeightedGraph& g,
                                                            SandpileConfig c) {
    require_unit(g);
    require_size(g, c);
    const int sink = *g.sink();
    std::vector<long long> counts(static_cast<size_t>(g.vertex_count()), 0);
    std::deque<int> work;
    std::vector<char> queued(static_cast<size_t>(g.vertex_count()), 0);
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (v != sink && c.h[static_cast<size_t>(v)] >= sand_degree(g, v)) {
            work.push_back(v);
            queued[static_cast<size_t>(v)] = 1;
        }
    }
    while (!work.empty()) {
        int v = work.front();
        work.pop_front();
        queued[static_cast<size_t>(v)] = 0;
        long long deg = sand_degree(g, v);
        long long q = c.h[static_cast<size_t>(v)] / deg;
        if (q == 0) continue;
        c.h[static_cast<size_t>(v)] -= q * deg;
        counts[static_cast<size_t>(v)] += q;
        for (const IncidentEdge& ie : g.incident(v)) {
            if (ie.other == sink) continue;
            c.h[static_cast<size_t>(ie.other)] += q;
            if (!queued[static_cast<size_t>(ie.other)] &&
                c.h[static_cast<size_t>(ie.other)] >= sand_degree(g, ie.other)) {
                work.push_back(ie.other);
                queued[static_cast<size_t>(ie.other)] = 1;
            }
        }
    }
    return {std::move(c), std::move(counts)};
}

bool is_recurrent(const WeightedGraph& g, const SandpileConfig& c) {
    require_unit(g);
    if (!is_stable(g, c)) fail(errc::unstable, "burning test needs a stable configuration");
    const int sink = *g.sink();
    SandpileConfig fired = c;
    for (const IncidentEdge& ie : g.incident(sink)) ++fired.h[static_cast<size_t>(ie.other)];
    auto [result, counts] = stabilize(g, std::move(fired));
    for (int v = 0; v < g.vertex_count(); ++v)
        if (v != sink && counts[static_cast<size_t>(v)] != 1) return false;
    return true;
}

namespace {

// strands from the frontier vertex v to outside vertices, in query order
std::vector<IncidentEdge> query_order(const WeightedGraph& g, int v) {
    std::vector<IncidentEdge> out = g.incident(v);
    std::sort(out.begin(), out.end(), [](const IncidentEdge& a, const IncidentEdge& b) {
        if (a.other != b.other) return a.other < b.other;
        return a.edge < b.edge;
    });
    return out;
}

}  // namespace

SandpileConfig tree_to_sandpile(const WeightedGraph& g, const std::vector<ParentLink>& tree) {
    require_unit(g);
    const int n = g.vertex_count();
    const int sink = *g.sink();
    if (tree.size() != static_cast<size_t>(n)) fail(errc::not_a_tree, "parent map size mismatch");
    // validate: every non-sink vertex reaches the sink along parent edges
    for (int v = 0; v < n; ++v) {
        if (v == sink) continue;
        int cur = v, steps = 0;
        while (cur != sink) {
            const ParentLink& pl = tree[static_cast<size_t>(cur)];
            if (pl.edge < 0 || pl.edge >= g.edge_count() ||
                g.other_end(pl.edge, cur) != pl.parent || ++steps > n)
                fail(errc::not_a_tree, "parent map is not an arborescence toward the sink");
            cur = pl.parent;
        }
    }

    SandpileConfig c;
    c.h.assign(static_cast<size_t>(n), 0);
    std::vector<long long> marks(static_cast<size_t>(n), 0);
    std::vector<char> in_tree(static_cast<size_t>(n), 0);
    in_tree[static_cast<size_t>(sink)] = 1;
    std::queue<int> frontier;
    frontier.push(sink);
    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop();
        for (const IncidentEdge& ie : query_order(g, v)) {
            int u = ie.other;
            if (in_tree[static_cast<size_t>(u)]) continue;
            const ParentLink& pl = tree[static_cast<size_t>(u)];
            if (pl.parent == v && pl.edge == ie.edge) {
                in_tree[static_cast<size_t>(u)] = 1;
                frontier.push(u);
            } else {
                ++marks[static_cast<size_t>(u)];
            }
        }
    }
    for (int v = 0; v < n; ++v) {
        if (v == sink) continue;
        c.h[static_cast<size_t>(v)] = sand_degree(g, v) - 1 - marks[static_cast<size_t>(v)];
    }
    return c;
}

std::vector<ParentLink> sandpile_to_tree(const WeightedGraph& g, const SandpileConfig& c) {
    require_unit(g);
    require_size(g, c);
    if (!is_recurrent(g, c)) fail(errc::not_recurrent, "configuration fails the burning test");
    const int n = g.vertex_count();
    const int sink = *g.sink();
    std::vector<ParentLink> tree(static_cast<size_t>(n));
    // answer "no" to the first deg-1-h queries at each vertex, then "yes"
    std::vector<long long> pending_no(static_cast<size_t>(n), 0);
    for (int v = 0; v < n; ++v)
        if (v != sink) pending_no[static_cast<size_t>(v)] = sand_degree(g, v) - 1 - c.h[static_cast<size_t>(v)];
    std::vector<char> in_tree(static_cast<size_t>(n), 0);
    in_tree[static_cast<size_t>(sink)] = 1;
    std::queue<int> frontier;
    frontier.push(sink);
    int joined = 1;
    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop();
        for (const IncidentEdge& ie : query_order(g, v)) {
            int u = ie.other;
            if (in_tree[static_cast<size_t>(u)]) continue;
            if (pending_no[static_cast<size_t>(u)] > 0) {
                --pending_no[static_cast<size_t>(u)];
            } else {
                tree[static_cast<size_t>(u)] = ParentLink{v, ie.edge};
                in_tree[static_cast<size_t>(u)] = 1;
                ++joined;
                frontier.push(u);
            }
        }
    }
    if (joined != n) fail(errc::not_recurrent, "exploration stalled");
    return tree;
}

long long level(const WeightedGraph& g, const SandpileConfig& c) {
    require_unit(g);
    require_size(g, c);
    long long total = 0;
    for (long long h : c.h) total += h;
    return total - g.edge_count() + sand_degree(g, *g.sink());
}

namespace {

struct StableSpace {
    std::vector<int> verts;       // non-sink vertices
    std::vector<long long> deg;   // degree per listed vertex
    long long total;              // prod(deg)
};

StableSpace stable_space(const WeightedGraph& g) {
    require_unit(g);
    StableSpace sp;
    sp.total = 1;
    int sink = *g.sink();
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (v == sink) continue;
        sp.verts.push_back(v);
        sp.deg.push_back(sand_degree(g, v));
        if (sp.total > 10000000 / sp.deg.back())
            fail(errc::too_large, "too many stable configurations to enumerate");
        sp.total *= sp.deg.back();
    }
    return sp;
}

SandpileConfig decode(const WeightedGraph& g, const StableSpace& sp, long long idx) {
    SandpileConfig c;
    c.h.assign(static_cast<size_t>(g.vertex_count()), 0);
    for (size_t i = 0; i < sp.verts.size(); ++i) {
        c.h[static_cast<size_t>(sp.verts[i])] = idx % sp.deg[i];
        idx /= sp.deg[i];
    }
    return c;
}

std::map<long long, long long> spectrum_impl(const WeightedGraph& g, bool parallel) {
    StableSpace sp = stable_space(g);
    std::map<long long, long long> hist;
#ifdef _OPENMP
    if (parallel) {
        int nthreads = omp_get_max_threads();
        std::vector<std::map<long long, long long>> partial(static_cast<size_t>(nthreads));
#pragma omp parallel for schedule(dynamic, 1024)
        for (long long idx = 0; idx < sp.total; ++idx) {
            SandpileConfig c = decode(g, sp, idx);
            if (!is_recurrent(g, c)) continue;
            ++partial[static_cast<size_t>(omp_get_thread_num())][level(g, c)];
        }
        for (const auto& p : partial)
            for (const auto& [lv, cnt] : p) hist[lv] += cnt;
        return hist;
    }
#endif
    (void)parallel;
    for (long long idx = 0; idx < sp.total; ++idx) {
        SandpileConfig c = decode(g, sp, idx);
        if (is_recurrent(g, c)) ++hist[level(g, c)];
    }
    return hist;
}

}  // namespace

std::map<long long, long long> level_spectrum(const WeightedGraph& g) {
    return spectrum_impl(g, true);
}

std::map<long long, long long> level_spectrum_serial(const WeightedGraph& g) {
    return spectrum_impl(g, false);
}

std::vector<SandpileConfig> enumerate_recurrent(const WeightedGraph& g) {
    StableSpace sp = stable_space(g);
    std::vector<SandpileConfig> out;
    for (long long idx = 0; idx < sp.total; ++idx) {
        SandpileConfig c = decode(g, sp, idx);
        if (is_recurrent(g, c)) out.push_back(std::move(c));
    }
    return out;
}

}  // namespace looprate
