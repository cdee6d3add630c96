#include "looprate/sampler.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace looprate {

namespace {

uint64_t splitmix64(uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngStream::RngStream(uint64_t seed) : seed_(seed) {
    uint64_t x = seed;
    for (int i = 0; i < 4; ++i) s_[i] = splitmix64(x);
}

uint64_t RngStream::next() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

RngStream RngStream::split(uint64_t stream) const {
    uint64_t x = seed_ ^ (0xd1b54a32d192ed03ull * (stream + 1));
    return RngStream(splitmix64(x));
}

WalkTables::WalkTables(const WeightedGraph& g) {
    cum.resize(static_cast<size_t>(g.vertex_count()));
    for (int v = 0; v < g.vertex_count(); ++v) {
        double acc = 0;
        for (const IncidentEdge& ie : g.incident(v)) {
            acc += g.edge(ie.edge).w.to_double();
            cum[static_cast<size_t>(v)].push_back(acc);
        }
    }
}

IncidentEdge WalkTables::step(const WeightedGraph& g, int v, RngStream& rng) const {
    const auto& c = cum[static_cast<size_t>(v)];
    double r = rng.next_unit() * c.back();
    size_t i = 0;
    while (i + 1 < c.size() && r >= c[i]) ++i;
    return g.incident(v)[i];
}

std::vector<int> lerw(const WeightedGraph& g, int start, const std::vector<int>& targets,
                      RngStream& rng) {
    if (targets.empty()) fail(errc::unreachable_target, "target set is empty");
    std::vector<char> is_target(static_cast<size_t>(g.vertex_count()), 0);
    for (int t : targets) {
        if (t < 0 || t >= g.vertex_count()) fail(errc::unknown_endpoint, "target is not a vertex");
        is_target[static_cast<size_t>(t)] = 1;
    }
    if (is_target[static_cast<size_t>(start)])
        fail(errc::bad_input, "start lies in the target set");

    WalkTables wt(g);
    std::vector<int> path{start};
    std::vector<int> pos(static_cast<size_t>(g.vertex_count()), -1);
    pos[static_cast<size_t>(start)] = 0;
    while (true) {
        int v = path.back();
        int y = wt.step(g, v, rng).other;
        if (is_target[static_cast<size_t>(y)]) {
            path.push_back(y);
            return path;
        }
        if (pos[static_cast<size_t>(y)] >= 0) {
            // erase the loop chronologically
            for (size_t i = static_cast<size_t>(pos[static_cast<size_t>(y)]) + 1; i < path.size(); ++i)
                pos[static_cast<size_t>(path[i])] = -1;
            path.resize(static_cast<size_t>(pos[static_cast<size_t>(y)]) + 1);
        } else {
            pos[static_cast<size_t>(y)] = static_cast<int>(path.size());
            path.push_back(y);
        }
    }
}

namespace {

void wilson_into(const WeightedGraph& g, const WalkTables& wt, int root, RngStream& rng,
                 std::vector<ParentLink>& parent, std::vector<char>& in_tree) {
    const int n = g.vertex_count();
    parent.assign(static_cast<size_t>(n), ParentLink{});
    in_tree.assign(static_cast<size_t>(n), 0);
    in_tree[static_cast<size_t>(root)] = 1;
    for (int v = 0; v < n; ++v) {
        if (in_tree[static_cast<size_t>(v)]) continue;
        int u = v;
        while (!in_tree[static_cast<size_t>(u)]) {
            IncidentEdge ie = wt.step(g, u, rng);
            parent[static_cast<size_t>(u)] = ParentLink{ie.other, ie.edge};
            u = ie.other;
        }
        u = v;
        while (!in_tree[static_cast<size_t>(u)]) {
            in_tree[static_cast<size_t>(u)] = 1;
            u = parent[static_cast<size_t>(u)].parent;
        }
    }
}

}  // namespace

std::vector<ParentLink> wilson_ust(const WeightedGraph& g, int root, RngStream& rng) {
    WalkTables wt(g);
    std::vector<ParentLink> parent;
    std::vector<char> in_tree;
    wilson_into(g, wt, root, rng, parent, in_tree);
    return parent;
}

MarkedCRST initial_crst(const WeightedGraph& g, RngStream& rng, int root) {
    MarkedCRST st;
    st.out = wilson_ust(g, root, rng);
    WalkTables wt(g);
    IncidentEdge ie = wt.step(g, root, rng);
    st.out[static_cast<size_t>(root)] = ParentLink{ie.other, ie.edge};
    st.cycle_stamp.assign(static_cast<size_t>(g.vertex_count()), 0);
    st.epoch = 1;
    st.cycle_stamp[static_cast<size_t>(root)] = st.epoch;
    st.cycle_len = 1;
    for (int v = ie.other; v != root; v = st.out[static_cast<size_t>(v)].parent) {
        st.cycle_stamp[static_cast<size_t>(v)] = st.epoch;
        ++st.cycle_len;
    }
    st.mark = root;
    return st;
}

CrstChain::CrstChain(const WeightedGraph& g, RngStream rng, int x0)
    : g_(g), wt_(g), st_(), rng_(rng), x0_(x0) {
    st_ = initial_crst(g, rng_);
}

CrstChain::CrstChain(const WeightedGraph& g, MarkedCRST start, RngStream rng, int x0)
    : g_(g), wt_(g), st_(std::move(start)), rng_(rng), x0_(x0) {}

std::optional<long long> CrstChain::step() {
    int m = st_.mark;
    IncidentEdge ie = wt_.step(g_, m, rng_);
    st_.out[static_cast<size_t>(m)] = ParentLink{ie.other, ie.edge};

    // new cycle: successor path from the sampled head back to the mark
    ++st_.epoch;
    st_.cycle_stamp[static_cast<size_t>(m)] = st_.epoch;
    int len = 1;
    for (int v = ie.other; v != m; v = st_.out[static_cast<size_t>(v)].parent) {
        st_.cycle_stamp[static_cast<size_t>(v)] = st_.epoch;
        ++len;
    }
    st_.cycle_len = len;
    st_.mark = ie.other;

    // loop event: x0's successor path first meets the cycle at the mark
    int w = x0_;
    while (st_.cycle_stamp[static_cast<size_t>(w)] != st_.epoch)
        w = st_.out[static_cast<size_t>(w)].parent;
    if (w == st_.mark) return static_cast<long long>(st_.cycle_len);
    return std::nullopt;
}

namespace {

struct BatchSeries {
    std::vector<double> means;
    EstimateReport report(uint64_t seed, long long samples) const {
        EstimateReport r;
        r.seed = seed;
        r.samples = samples;
        const size_t b = means.size();
        double sum = 0;
        for (double m : means) sum += m;
        r.estimate = b ? sum / static_cast<double>(b) : 0.0;
        if (b >= 2) {
            double ss = 0;
            for (double m : means) ss += (m - r.estimate) * (m - r.estimate);
            r.stderr_ = std::sqrt(ss / static_cast<double>(b - 1) / static_cast<double>(b));
        }
        r.half_width99 = 2.576 * r.stderr_;
        return r;
    }
};

struct ChainRun {
    BatchSeries rho, tau, lambda;
};

ChainRun run_chain(CrstChain& chain, long long steps, int batches) {
    long long batch_size = steps / batches;
    ChainRun out;
    for (int b = 0; b < batches; ++b) {
        long long events = 0, long_events = 0, long_len = 0;
        for (long long i = 0; i < batch_size; ++i) {
            std::optional<long long> ev = chain.step();
            if (ev) {
                ++events;
                if (*ev >= 3) {
                    ++long_events;
                    long_len += *ev;
                }
            }
        }
        out.rho.means.push_back(static_cast<double>(events) / static_cast<double>(batch_size));
        out.tau.means.push_back(static_cast<double>(long_events) / static_cast<double>(batch_size));
        if (long_events > 0)
            out.lambda.means.push_back(static_cast<double>(long_len) / static_cast<double>(long_events));
    }
    return out;
}

LoopingEstimates merge_runs(const std::vector<ChainRun>& runs, long long steps, uint64_t seed) {
    ChainRun merged;
    for (const ChainRun& r : runs) {
        merged.rho.means.insert(merged.rho.means.end(), r.rho.means.begin(), r.rho.means.end());
        merged.tau.means.insert(merged.tau.means.end(), r.tau.means.begin(), r.tau.means.end());
        merged.lambda.means.insert(merged.lambda.means.end(), r.lambda.means.begin(),
                                   r.lambda.means.end());
    }
    LoopingEstimates est;
    est.steps = steps;
    est.seed = seed;
    est.rho = merged.rho.report(seed, steps);
    est.tau = merged.tau.report(seed, steps);
    est.lambda = merged.lambda.report(seed, steps);
    return est;
}

LoopingEstimates chains_impl(const WeightedGraph& g, long long steps_per_chain, uint64_t seed,
                             int chains, bool parallel) {
    if (steps_per_chain < 10000) fail(errc::bad_input, "need at least 1e4 steps");
    const int batches = 100;
    std::vector<ChainRun> runs(static_cast<size_t>(chains));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (int c = 0; c < chains; ++c) {
        CrstChain chain(g, RngStream(seed).split(static_cast<uint64_t>(c)));
        runs[static_cast<size_t>(c)] = run_chain(chain, steps_per_chain, batches);
    }
    (void)parallel;
    return merge_runs(runs, steps_per_chain * chains, seed);
}

}  // namespace

LoopingEstimates estimate_looping(const WeightedGraph& g, long long steps, uint64_t seed) {
    if (steps < 10000) fail(errc::bad_input, "need at least 1e4 steps");
    const int batches = 100;
    CrstChain chain(g, RngStream(seed));
    std::vector<ChainRun> runs{run_chain(chain, steps, batches)};
    return merge_runs(runs, (steps / batches) * batches, seed);
}

LoopingEstimates estimate_looping_chains(const WeightedGraph& g, long long steps_per_chain,
                                         uint64_t seed, int chains) {
    return chains_impl(g, steps_per_chain, seed, chains, true);
}

LoopingEstimates estimate_looping_chains_serial(const WeightedGraph& g, long long steps_per_chain,
                                                uint64_t seed, int chains) {
    return chains_impl(g, steps_per_chain, seed, chains, false);
}

namespace {

std::vector<EstimateReport> wilson_probs_impl(const WeightedGraph& g, int root, long long samples,
                                              uint64_t seed, bool parallel) {
    const int m = g.edge_count();
    std::vector<long long> hits(static_cast<size_t>(m), 0);
    const long long chunk = 512;
    const long long nchunks = (samples + chunk - 1) / chunk;
    WalkTables wt(g);
#ifdef _OPENMP
#pragma omp parallel if (parallel)
    {
        std::vector<long long> local(static_cast<size_t>(m), 0);
        std::vector<ParentLink> tree;
        std::vector<char> in_tree;
#pragma omp for schedule(dynamic)
        for (long long c = 0; c < nchunks; ++c) {
            RngStream rng = RngStream(seed).split(static_cast<uint64_t>(c));
            long long lo = c * chunk, hi = std::min(samples, lo + chunk);
            for (long long i = lo; i < hi; ++i) {
                wilson_into(g, wt, root, rng, tree, in_tree);
                for (int v = 0; v < g.vertex_count(); ++v)
                    if (v != root) ++local[static_cast<size_t>(tree[static_cast<size_t>(v)].edge)];
            }
        }
#pragma omp critical
        for (int e = 0; e < m; ++e) hits[static_cast<size_t>(e)] += local[static_cast<size_t>(e)];
    }
#else
    (void)parallel;
    std::vector<ParentLink> tree;
    std::vector<char> in_tree;
    for (long long c = 0; c < nchunks; ++c) {
        RngStream rng = RngStream(seed).split(static_cast<uint64_t>(c));
        long long lo = c * chunk, hi = std::min(samples, lo + chunk);
        for (long long i = lo; i < hi; ++i) {
            wilson_into(g, wt, root, rng, tree, in_tree);
            for (int v = 0; v < g.vertex_count(); ++v)
                if (v != root) ++hits[static_cast<size_t>(tree[static_cast<size_t>(v)].edge)];
        }
    }
#endif
    std::vector<EstimateReport> out(static_cast<size_t>(m));
    for (int e = 0; e < m; ++e) {
        EstimateReport& r = out[static_cast<size_t>(e)];
        r.samples = samples;
        r.seed = seed;
        r.estimate = static_cast<double>(hits[static_cast<size_t>(e)]) / static_cast<double>(samples);
        r.stderr_ = std::sqrt(std::max(0.0, r.estimate * (1.0 - r.estimate) / static_cast<double>(samples)));
        r.half_width99 = 2.576 * r.stderr_;
    }
    return out;
}

}  // namespace

std::vector<EstimateReport> wilson_edge_probabilities(const WeightedGraph& g, int root,
                                                      long long samples, uint64_t seed) {
    return wilson_probs_impl(g, root, samples, seed, true);
}

std::vector<EstimateReport> wilson_edge_probabilities_serial(const WeightedGraph& g, int root,
                                                             long long samples, uint64_t seed) {
    return wilson_probs_impl(g, root, samples, seed, false);
}

}  // namespace looprate
