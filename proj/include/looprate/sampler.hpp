#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "looprate/graph.hpp"

namespace looprate {

// Deterministic stream: xoshiro256** seeded through splitmix64.  The same
// seed always yields the same sequence; children from split() never share
// state with the parent.
class RngStream {
public:
    explicit RngStream(uint64_t seed);
    uint64_t next();
    double next_unit();  // 53-bit uniform in [0, 1)
    uint64_t seed() const { return seed_; }
    RngStream split(uint64_t stream) const;

private:
    uint64_t seed_;
    uint64_t s_[4];
};

// Cumulative incident weights per vertex, for weighted neighbor sampling.
struct WalkTables {
    explicit WalkTables(const WeightedGraph& g);
    IncidentEdge step(const WeightedGraph& g, int v, RngStream& rng) const;
    std::vector<std::vector<double>> cum;
};

// Loop-erased random walk from `start` into `targets` (vertex sequence).
std::vector<int> lerw(const WeightedGraph& g, int start, const std::vector<int>& targets,
                      RngStream& rng);

// Wilson's algorithm: weighted random spanning arborescence toward `root`.
std::vector<ParentLink> wilson_ust(const WeightedGraph& g, int root, RngStream& rng);

// Marked oriented cycle-rooted spanning tree: every vertex has one outgoing
// edge, the unique cycle carries the mark.
struct MarkedCRST {
    std::vector<ParentLink> out;
    int mark = -1;
    int cycle_len = 0;
    std::vector<int> cycle_stamp;  // == epoch for current cycle members
    int epoch = 0;
};

// Wilson tree toward `root` plus one sampled outgoing edge at the root.
MarkedCRST initial_crst(const WeightedGraph& g, RngStream& rng, int root = 0);

// The marked-CRST Markov chain with loop-event counting at a fixed
// observation vertex x0.  A step resamples the mark's outgoing edge and
// advances the mark along the new cycle; a loop event is reported, with the
// cycle length, exactly when x0's successor path first meets the cycle at
// the mark.
class CrstChain {
public:
    CrstChain(const WeightedGraph& g, RngStream rng, int x0 = 0);
    CrstChain(const WeightedGraph& g, MarkedCRST start, RngStream rng, int x0 = 0);
    std::optional<long long> step();
    const MarkedCRST& state() const { return st_; }
    int x0() const { return x0_; }

private:
    const WeightedGraph& g_;
    WalkTables wt_;
    MarkedCRST st_;
    RngStream rng_;
    int x0_;
};

struct EstimateReport {
    double estimate = 0;
    double stderr_ = 0;
    double half_width99 = 0;  // 2.576 * stderr
    long long samples = 0;
    uint64_t seed = 0;
};

struct LoopingEstimates {
    EstimateReport rho;     // loop events per step
    EstimateReport tau;     // events of length >= 3 per step
    EstimateReport lambda;  // mean length of long loops
    long long steps = 0;
    uint64_t seed = 0;
};

// Single chain with batch-means errors (100 batches).  steps >= 1e4.
LoopingEstimates estimate_looping(const WeightedGraph& g, long long steps, uint64_t seed);

// Independent chains on split streams, merged in chain order.
LoopingEstimates estimate_looping_chains(const WeightedGraph& g, long long steps_per_chain,
                                         uint64_t seed, int chains);
LoopingEstimates estimate_looping_chains_serial(const WeightedGraph& g, long long steps_per_chain,
                                                uint64_t seed, int chains);

// Empirical Pr[e in T] from `samples` Wilson draws, one report per edge.
std::vector<EstimateReport> wilson_edge_probabilities(const WeightedGraph& g, int root,
                                                      long long samples, uint64_t seed);
std::vector<EstimateReport> wilson_edge_probabilities_serial(const WeightedGraph& g, int root,
                                                             long long samples, uint64_t seed);

}  // namespace looprate
