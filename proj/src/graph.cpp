#include "looprate/graph.hpp"

#include <algorithm>
#include <queue>

namespace looprate {

WeightedGraph::WeightedGraph(std::vector<long long> ids, std::vector<Edge> edges,
                             std::optional<int> sink)
    : ids_(std::move(ids)), edges_(std::move(edges)), sink_(sink) {
    const int n = vertex_count();
    if (n == 0) fail(errc::bad_input, "graph needs at least one vertex");
    incidence_.assign(static_cast<size_t>(n), {});
    wdeg_.assign(static_cast<size_t>(n), Rational(0));
    for (size_t e = 0; e < edges_.size(); ++e) {
        const Edge& ed = edges_[e];
        if (ed.u < 0 || ed.u >= n || ed.v < 0 || ed.v >= n)
            fail(errc::unknown_endpoint, "edge " + std::to_string(e) + " references a missing vertex");
        if (ed.u == ed.v)
            fail(errc::self_loop, "edge " + std::to_string(e) + " is a self-loop");
        if (!(ed.w > Rational(0)))
            fail(errc::non_positive_weight, "edge " + std::to_string(e) + " has weight " + ed.w.to_string());
        incidence_[static_cast<size_t>(ed.u)].push_back({static_cast<int>(e), ed.v});
        incidence_[static_cast<size_t>(ed.v)].push_back({static_cast<int>(e), ed.u});
        wdeg_[static_cast<size_t>(ed.u)] += ed.w;
        wdeg_[static_cast<size_t>(ed.v)] += ed.w;
        total_w_ += ed.w;
    }
    if (sink_ && (*sink_ < 0 || *sink_ >= n))
        fail(errc::unknown_endpoint, "sink is not a vertex");

    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        for (const IncidentEdge& ie : incidence_[static_cast<size_t>(v)]) {
            if (!seen[static_cast<size_t>(ie.other)]) {
                seen[static_cast<size_t>(ie.other)] = 1;
                ++reached;
                bfs.push(ie.other);
            }
        }
    }
    if (reached != n) fail(errc::disconnected_graph, "graph is not connected");
}

int WeightedGraph::require_sink() const {
    if (!sink_) fail(errc::bad_input, "operation needs a designated sink");
    return *sink_;
}

Rational WeightedGraph::mean_weighted_degree() const {
    return Rational(2) * total_w_ / Rational(vertex_count());
}

bool WeightedGraph::unit_weights() const {
    for (const Edge& e : edges_)
        if (e.w != Rational(1)) return false;
    return true;
}

bool WeightedGraph::integer_weights() const {
    for (const Edge& e : edges_)
        if (!e.w.is_integer()) return false;
    return true;
}

bool WeightedGraph::has_parallel_edges() const {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(edges_.size());
    for (const Edge& e : edges_)
        pairs.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
    std::sort(pairs.begin(), pairs.end());
    return std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end();
}

FaceSet faces(const WeightedGraph& g, const RotationSystem& rot) {
    const int n = g.vertex_count();
    const int m = g.edge_count();
    if (static_cast<int>(rot.order.size()) != n)
        fail(errc::incomplete_rotation, "rotation must list every vertex");

    // position of each edge id within each endpoint's cyclic order
    std::vector<int> pos_at_u(static_cast<size_t>(m), -1), pos_at_v(static_cast<size_t>(m), -1);
    std::vector<int> listed(static_cast<size_t>(m), 0);
    for (int v = 0; v < n; ++v) {
        const auto& order = rot.order[static_cast<size_t>(v)];
        for (size_t k = 0; k < order.size(); ++k) {
            int e = order[k];
            if (e < 0 || e >= m) fail(errc::incomplete_rotation, "rotation references a missing edge");
            const Edge& ed = g.edge(e);
            if (ed.u == v)
                pos_at_u[static_cast<size_t>(e)] = static_cast<int>(k);
            else if (ed.v == v)
                pos_at_v[static_cast<size_t>(e)] = static_cast<int>(k);
            else
                fail(errc::incomplete_rotation, "rotation lists edge at a non-endpoint");
            ++listed[static_cast<size_t>(e)];
        }
    }
    for (int e = 0; e < m; ++e) {
        if (listed[static_cast<size_t>(e)] != 2 || pos_at_u[static_cast<size_t>(e)] < 0 ||
            pos_at_v[static_cast<size_t>(e)] < 0)
            fail(errc::incomplete_rotation, "every edge end must appear exactly once");
    }

    // next half-edge: arrive at head, leave along the cyclically previous edge
    auto next_half = [&](const HalfEdge& h) {
        const Edge& ed = g.edge(h.edge);
        int head = h.fwd ? ed.v : ed.u;
        int pos = h.fwd ? pos_at_v[static_cast<size_t>(h.edge)] : pos_at_u[static_cast<size_t>(h.edge)];
        const auto& order = rot.order[static_cast<size_t>(head)];
        int prev = (pos + static_cast<int>(order.size()) - 1) % static_cast<int>(order.size());
        int e2 = order[static_cast<size_t>(prev)];
        return HalfEdge{e2, g.edge(e2).u == head};
    };

    FaceSet fs;
    fs.face_of_fwd.assign(static_cast<size_t>(m), -1);
    fs.face_of_rev.assign(static_cast<size_t>(m), -1);
    for (int e = 0; e < m; ++e) {
        for (bool fwd : {true, false}) {
            if ((fwd ? fs.face_of_fwd : fs.face_of_rev)[static_cast<size_t>(e)] >= 0) continue;
            int face_id = static_cast<int>(fs.faces.size());
            std::vector<HalfEdge> walk;
            HalfEdge h{e, fwd};
            do {
                walk.push_back(h);
                (h.fwd ? fs.face_of_fwd : fs.face_of_rev)[static_cast<size_t>(h.edge)] = face_id;
                h = next_half(h);
            } while (!(h == HalfEdge{e, fwd}));
            fs.faces.push_back(std::move(walk));
        }
    }
    return fs;
}

DualGraph dual(const WeightedGraph& g, const RotationSystem& rot) {
    FaceSet fs = faces(g, rot);
    const int m = g.edge_count();
    for (int e = 0; e < m; ++e) {
        if (fs.face_of_fwd[static_cast<size_t>(e)] == fs.face_of_rev[static_cast<size_t>(e)])
            fail(errc::bridge_present, "edge " + std::to_string(e) + " is a bridge");
    }
    std::vector<long long> face_ids(fs.faces.size());
    for (size_t f = 0; f < fs.faces.size(); ++f) face_ids[f] = static_cast<long long>(f);
    std::vector<Edge> dedges(static_cast<size_t>(m));
    std::vector<int> edge_map(static_cast<size_t>(m));
    for (int e = 0; e < m; ++e) {
        dedges[static_cast<size_t>(e)] = Edge{fs.face_of_fwd[static_cast<size_t>(e)],
                                              fs.face_of_rev[static_cast<size_t>(e)],
                                              g.edge(e).w.inverse()};
        edge_map[static_cast<size_t>(e)] = e;
    }
    RotationSystem drot;
    drot.order.resize(fs.faces.size());
    for (size_t f = 0; f < fs.faces.size(); ++f) {
        for (const HalfEdge& h : fs.faces[f]) drot.order[f].push_back(h.edge);
    }
    int outer = fs.face_of_fwd[0];
    return DualGraph{WeightedGraph(std::move(face_ids), std::move(dedges)),
                     std::move(edge_map), std::move(drot), outer};
}

WeightedGraph merge_vertices(const WeightedGraph& g, const std::vector<int>& merge_set) {
    if (merge_set.empty()) fail(errc::empty_merge_set, "merge set must be nonempty");
    const int n = g.vertex_count();
    std::vector<char> merged(static_cast<size_t>(n), 0);
    for (int v : merge_set) {
        if (v < 0 || v >= n) fail(errc::unknown_endpoint, "merge set references a missing vertex");
        merged[static_cast<size_t>(v)] = 1;
    }
    std::vector<int> remap(static_cast<size_t>(n), -1);
    std::vector<long long> ids;
    long long max_id = 0;
    for (int v = 0; v < n; ++v) max_id = std::max(max_id, g.vertex_id(v));
    for (int v = 0; v < n; ++v) {
        if (!merged[static_cast<size_t>(v)]) {
            remap[static_cast<size_t>(v)] = static_cast<int>(ids.size());
            ids.push_back(g.vertex_id(v));
        }
    }
    int sink = static_cast<int>(ids.size());
    ids.push_back(max_id + 1);
    for (int v = 0; v < n; ++v)
        if (merged[static_cast<size_t>(v)]) remap[static_cast<size_t>(v)] = sink;

    std::vector<Edge> edges;
    for (const Edge& e : g.edges()) {
        int u = remap[static_cast<size_t>(e.u)], v = remap[static_cast<size_t>(e.v)];
        if (u == v) continue;  // collapsed to a self-loop
        edges.push_back(Edge{u, v, e.w});
    }
    return WeightedGraph(std::move(ids), std::move(edges), sink);
}

bool isomorphic_by_edges(const WeightedGraph& g, const WeightedGraph& h,
                         const std::vector<int>& edge_map) {
    if (g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count()) return false;
    if (static_cast<int>(edge_map.size()) != g.edge_count()) return false;
    if (g.edge_count() == 0) return g.vertex_count() == 1;

    auto try_seed = [&](int a, int a_img, int b, int b_img) {
        std::vector<int> phi(static_cast<size_t>(g.vertex_count()), -1);
        std::vector<char> used(static_cast<size_t>(h.vertex_count()), 0);
        auto assign = [&](int x, int y) {
            if (phi[static_cast<size_t>(x)] >= 0) return phi[static_cast<size_t>(x)] == y;
            if (used[static_cast<size_t>(y)]) return false;
            phi[static_cast<size_t>(x)] = y;
            used[static_cast<size_t>(y)] = 1;
            return true;
        };
        if (!assign(a, a_img) || !assign(b, b_img)) return false;
        std::queue<int> q;
        q.push(a);
        q.push(b);
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            int y = phi[static_cast<size_t>(x)];
            for (const IncidentEdge& ie : g.incident(x)) {
                int me = edge_map[static_cast<size_t>(ie.edge)];
                const Edge& hd = h.edge(me);
                if (g.edge(ie.edge).w != hd.w) return false;
                int far_img;
                if (hd.u == y)
                    far_img = hd.v;
                else if (hd.v == y)
                    far_img = hd.u;
                else
                    return false;
                bool fresh = phi[static_cast<size_t>(ie.other)] < 0;
                if (!assign(ie.other, far_img)) return false;
                if (fresh) q.push(ie.other);
            }
        }
        for (int v = 0; v < g.vertex_count(); ++v)
            if (phi[static_cast<size_t>(v)] < 0) return false;
        return true;
    };

    const Edge& e0 = g.edge(0);
    const Edge& f0 = h.edge(edge_map[0]);
    return try_seed(e0.u, f0.u, e0.v, f0.v) || try_seed(e0.u, f0.v, e0.v, f0.u);
}

EmbeddedGraph cycle_graph(int n, std::optional<int> sink) {
    if (n < 3) fail(errc::bad_input, "cycle needs >= 3 vertices");
    std::vector<long long> ids(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ids[static_cast<size_t>(i)] = i;
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back(Edge{i, (i + 1) % n, Rational(1)});
    RotationSystem rot;
    rot.order.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) rot.order[static_cast<size_t>(i)] = {(i + n - 1) % n, i};
    return {WeightedGraph(std::move(ids), std::move(edges), sink), std::move(rot)};
}

EmbeddedGraph path_graph(int n) {
    if (n < 2) fail(errc::bad_input, "path needs >= 2 vertices");
    std::vector<long long> ids(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ids[static_cast<size_t>(i)] = i;
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back(Edge{i, i + 1, Rational(1)});
    RotationSystem rot;
    rot.order.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (i > 0) rot.order[static_cast<size_t>(i)].push_back(i - 1);
        if (i + 1 < n) rot.order[static_cast<size_t>(i)].push_back(i);
    }
    return {WeightedGraph(std::move(ids), std::move(edges)), std::move(rot)};
}

EmbeddedGraph wheel_graph(int rim, std::optional<int> sink) {
    if (rim < 3) fail(errc::bad_input, "wheel needs >= 3 rim vertices");
    const int n = rim + 1;
    std::vector<long long> ids(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ids[static_cast<size_t>(i)] = i;
    std::vector<Edge> edges;
    for (int i = 1; i <= rim; ++i) edges.push_back(Edge{0, i, Rational(1)});  // spokes: ids 0..rim-1
    for (int i = 1; i <= rim; ++i) edges.push_back(Edge{i, i % rim + 1, Rational(1)});  // rim: rim+i-1
    RotationSystem rot;
    rot.order.resize(static_cast<size_t>(n));
    for (int i = 1; i <= rim; ++i) rot.order[0].push_back(i - 1);
    for (int i = 1; i <= rim; ++i) {
        int to_next = rim + (i - 1);
        int to_prev = rim + ((i - 2 + rim) % rim);
        rot.order[static_cast<size_t>(i)] = {to_next, i - 1, to_prev};
    }
    return {WeightedGraph(std::move(ids), std::move(edges), sink), std::move(rot)};
}

EmbeddedGraph grid_graph(int rows, int cols, std::optional<int> sink) {
    if (rows < 1 || cols < 1 || rows * cols < 2) fail(errc::bad_input, "grid too small");
    const int n = rows * cols;
    auto vid = [&](int i, int j) { return i * cols + j; };
    std::vector<long long> ids(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ids[static_cast<size_t>(i)] = i;
    std::vector<Edge> edges;
    auto hor = [&](int i, int j) { return i * (cols - 1) + j; };
    const int nh = rows * (cols - 1);
    auto ver = [&](int i, int j) { return nh + i * cols + j; };
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j + 1 < cols; ++j) edges.push_back(Edge{vid(i, j), vid(i, j + 1), Rational(1)});
    for (int i = 0; i + 1 < rows; ++i)
        for (int j = 0; j < cols; ++j) edges.push_back(Edge{vid(i, j), vid(i + 1, j), Rational(1)});
    RotationSystem rot;
    rot.order.resize(static_cast<size_t>(n));
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            auto& o = rot.order[static_cast<size_t>(vid(i, j))];
            if (j + 1 < cols) o.push_back(hor(i, j));      // east
            if (i > 0) o.push_back(ver(i - 1, j));         // north
            if (j > 0) o.push_back(hor(i, j - 1));         // west
            if (i + 1 < rows) o.push_back(ver(i, j));      // south
        }
    }
    return {WeightedGraph(std::move(ids), std::move(edges), sink), std::move(rot)};
}

EmbeddedGraph wired_square_patch(int n) {
    if (n < 1) fail(errc::bad_input, "patch size must be >= 1");
    const int nv = n * n;
    auto vid = [&](int i, int j) { return i * n + j; };
    std::vector<long long> ids(static_cast<size_t>(nv + 1));
    for (int i = 0; i <= nv; ++i) ids[static_cast<size_t>(i)] = i;
    std::vector<Edge> edges;
    auto hor = [&](int i, int j) { return i * (n - 1) + j; };
    const int nh = n * (n - 1);
    auto ver = [&](int i, int j) { return nh + i * n + j; };
    const int nb = 2 * n * (n - 1);  // boundary edges start here
    for (int i = 0; i < n; ++i)
        for (int j = 0; j + 1 < n; ++j) edges.push_back(Edge{vid(i, j), vid(i, j + 1), Rational(1)});
    for (int i = 0; i + 1 < n; ++i)
        for (int j = 0; j < n; ++j) edges.push_back(Edge{vid(i, j), vid(i + 1, j), Rational(1)});
    // boundary-to-sink edges in clockwise wall order: top, right, bottom, left
    auto top = [&](int j) { return nb + j; };
    auto right = [&](int i) { return nb + n + i; };
    auto bottom = [&](int j) { return nb + 2 * n + (n - 1 - j); };
    auto left = [&](int i) { return nb + 3 * n + (n - 1 - i); };
    for (int j = 0; j < n; ++j) edges.push_back(Edge{vid(0, j), nv, Rational(1)});
    for (int i = 0; i < n; ++i) edges.push_back(Edge{vid(i, n - 1), nv, Rational(1)});
    for (int j = n - 1; j >= 0; --j) edges.push_back(Edge{vid(n - 1, j), nv, Rational(1)});
    for (int i = n - 1; i >= 0; --i) edges.push_back(Edge{vid(i, 0), nv, Rational(1)});
    RotationSystem rot;
    rot.order.resize(static_cast<size_t>(nv + 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            auto& o = rot.order[static_cast<size_t>(vid(i, j))];
            o.push_back(j + 1 < n ? hor(i, j) : right(i));      // east
            o.push_back(i > 0 ? ver(i - 1, j) : top(j));        // north
            o.push_back(j > 0 ? hor(i, j - 1) : left(i));       // west
            o.push_back(i + 1 < n ? ver(i, j) : bottom(j));     // south
        }
    }
    for (int e = 0; e < 4 * n; ++e) rot.order[static_cast<size_t>(nv)].push_back(nb + e);
    return {WeightedGraph(std::move(ids), std::move(edges), nv), std::move(rot)};
}

EmbeddedGraph doubled_edge_graph() {
    std::vector<long long> ids{0, 1};
    std::vector<Edge> edges{Edge{0, 1, Rational(1)}, Edge{0, 1, Rational(1)}};
    RotationSystem rot;
    rot.order = {{0, 1}, {0, 1}};
    return {WeightedGraph(std::move(ids), std::move(edges)), std::move(rot)};
}

}  // namespace looprate
