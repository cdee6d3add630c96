#include <cmath>
#include <map>

#include "doctest.h"
#include "looprate/kernels.hpp"
#include "looprate/looping.hpp"
#include "looprate/sampler.hpp"

using namespace looprate;

namespace {

bool within_3sigma(const EstimateReport& r, double exact) {
    return std::fabs(r.estimate - exact) <= 3.0 * std::max(r.stderr_, 1e-12);
}

uint32_t tree_mask(const std::vector<ParentLink>& tree, int root) {
    uint32_t mask = 0;
    for (size_t v = 0; v < tree.size(); ++v)
        if (static_cast<int>(v) != root) mask |= 1u << tree[v].edge;
    return mask;
}

}  // namespace

TEST_CASE("rng streams are deterministic and split streams differ") {
    RngStream a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    RngStream c = RngStream(42).split(0), d = RngStream(42).split(1);
    bool all_equal = true;
    for (int i = 0; i < 64; ++i)
        if (c.next() != d.next()) all_equal = false;
    CHECK_FALSE(all_equal);
}

TEST_CASE("lerw on a path is the unique path") {
    EmbeddedGraph p4 = path_graph(4);
    RngStream rng(7);
    std::vector<int> path = lerw(p4.graph, 0, {3}, rng);
    CHECK(path == std::vector<int>{0, 1, 2, 3});
    CHECK_THROWS_AS(lerw(p4.graph, 0, {0}, rng), Error);
    CHECK_THROWS_AS(lerw(p4.graph, 0, {}, rng), Error);
}

TEST_CASE("lerw direct-step frequency matches w*A") {
    // Pr[0 -> 2 directly] = w_{0,2} A^{(2)}_{0,2} = 2/3 on K3
    EmbeddedGraph k3 = cycle_graph(3);
    RngStream rng(11);
    const int n = 40000;
    int direct = 0;
    for (int i = 0; i < n; ++i) {
        std::vector<int> path = lerw(k3.graph, 0, {2}, rng);
        if (path.size() == 2) ++direct;
    }
    double p = static_cast<double>(direct) / n;
    double sigma = std::sqrt((2.0 / 3) * (1.0 / 3) / n);
    CHECK(std::fabs(p - 2.0 / 3) < 3 * sigma);
}

TEST_CASE("wilson on a tree returns that tree") {
    EmbeddedGraph p4 = path_graph(4);
    RngStream rng(3);
    for (int i = 0; i < 20; ++i) {
        std::vector<ParentLink> t = wilson_ust(p4.graph, 3, rng);
        CHECK(t[0] == ParentLink{1, 0});
        CHECK(t[1] == ParentLink{2, 1});
        CHECK(t[2] == ParentLink{3, 2});
    }
}

TEST_CASE("wilson tree frequencies pass a chi-square test") {
    auto chisq = [](const WeightedGraph& g, int root, int samples, uint64_t seed) {
        std::map<uint32_t, int> counts;
        RngStream rng(seed);
        for (int i = 0; i < samples; ++i) ++counts[tree_mask(wilson_ust(g, root, rng), root)];
        double expect = static_cast<double>(samples) / static_cast<double>(tree_weight(g).to_double());
        double stat = 0;
        long long total = 0;
        for (const auto& [mask, c] : counts) {
            stat += (c - expect) * (c - expect) / expect;
            total += c;
        }
        CHECK(total == samples);
        return std::pair<double, size_t>{stat, counts.size()};
    };
    auto [stat3, cats3] = chisq(cycle_graph(3).graph, 0, 100000, 17);
    CHECK(cats3 == 3);
    CHECK(stat3 < 13.8155);  // chi-square 0.001 quantile, df = 2
    auto [stat4, cats4] = chisq(cycle_graph(4).graph, 2, 100000, 18);
    CHECK(cats4 == 4);
    CHECK(stat4 < 16.2662);  // df = 3
}

TEST_CASE("wilson edge probabilities match the kernel formula on the wired 4x4 grid") {
    EmbeddedGraph patch = wired_square_patch(4);
    const WeightedGraph& g = patch.graph;
    int root = *g.sink();
    PotentialKernel k = potential_kernel(g, green(g, root));
    std::vector<EstimateReport> emp = wilson_edge_probabilities(g, root, 20000, 1001);
    for (int e = 0; e < g.edge_count(); ++e)
        CHECK(within_3sigma(emp[static_cast<size_t>(e)], edge_in_tree_prob(g, k, e).to_double()));
    // parallel and serial agree bit for bit
    std::vector<EstimateReport> ser = wilson_edge_probabilities_serial(g, root, 20000, 1001);
    for (int e = 0; e < g.edge_count(); ++e)
        CHECK(emp[static_cast<size_t>(e)].estimate == ser[static_cast<size_t>(e)].estimate);
}

TEST_CASE("doubled edge chain fires deterministically every other step") {
    EmbeddedGraph de = doubled_edge_graph();
    CrstChain chain(de.graph, RngStream(5));
    int events = 0;
    std::vector<int> gap;
    int last = -1;
    for (int i = 0; i < 1000; ++i) {
        std::optional<long long> ev = chain.step();
        if (ev) {
            CHECK(*ev == 2);
            if (last >= 0) gap.push_back(i - last);
            last = i;
            ++events;
        }
    }
    CHECK(events == 500);
    for (int gp : gap) CHECK(gp == 2);
}

TEST_CASE("crst chain reproduces rho and tau on K3") {
    EmbeddedGraph k3 = cycle_graph(3);
    LoopingEstimates est = estimate_looping(k3.graph, 1000000, 1);
    CHECK(within_3sigma(est.rho, 4.0 / 9));
    CHECK(within_3sigma(est.tau, 1.0 / 9));
    CHECK(est.lambda.estimate == 3.0);  // every long K3 loop is the triangle
}

TEST_CASE("crst chain reproduces rho, tau, lambda on C4") {
    EmbeddedGraph c4 = cycle_graph(4);
    LoopingEstimates est = estimate_looping(c4.graph, 1000000, 2);
    CHECK(within_3sigma(est.rho, 7.0 / 16));
    CHECK(within_3sigma(est.tau, 1.0 / 16));
    CHECK(est.lambda.estimate == 4.0);
}

TEST_CASE("estimates are bit-identical for equal seeds") {
    EmbeddedGraph k3 = cycle_graph(3);
    LoopingEstimates a = estimate_looping(k3.graph, 50000, 99);
    LoopingEstimates b = estimate_looping(k3.graph, 50000, 99);
    CHECK(a.rho.estimate == b.rho.estimate);
    CHECK(a.rho.stderr_ == b.rho.stderr_);
    CHECK(a.tau.estimate == b.tau.estimate);
    CHECK(a.lambda.estimate == b.lambda.estimate);
    LoopingEstimates c = estimate_looping(k3.graph, 50000, 100);
    CHECK(a.rho.estimate != c.rho.estimate);
    CHECK_THROWS_AS(estimate_looping(k3.graph, 10, 1), Error);
}

TEST_CASE("parallel chains merge to the serial result") {
    EmbeddedGraph w4 = wheel_graph(4);
    LoopingEstimates par = estimate_looping_chains(w4.graph, 20000, 7, 4);
    LoopingEstimates ser = estimate_looping_chains_serial(w4.graph, 20000, 7, 4);
    CHECK(par.rho.estimate == ser.rho.estimate);
    CHECK(par.tau.estimate == ser.tau.estimate);
    LoopStats exact = loop_stats(w4.graph, w4.rotation);
    CHECK(within_3sigma(par.rho, exact.rho.to_double()));
    CHECK(within_3sigma(par.tau, exact.tau.to_double()));
}

TEST_CASE("chain started from an arbitrary state stays on the invariant law") {
    EmbeddedGraph k3 = cycle_graph(3);
    // deliberately non-random start: 0 -> 1 -> 2 -> 0 directed triangle
    MarkedCRST st;
    st.out.resize(3);
    st.out[0] = {1, 0};
    st.out[1] = {2, 1};
    st.out[2] = {0, 2};
    st.cycle_stamp = {1, 1, 1};
    st.epoch = 1;
    st.cycle_len = 3;
    st.mark = 0;
    CrstChain chain(k3.graph, st, RngStream(23));
    long long events = 0, long_events = 0;
    const long long steps = 400000;
    for (long long i = 0; i < steps; ++i) {
        std::optional<long long> ev = chain.step();
        if (ev) {
            ++events;
            if (*ev >= 3) ++long_events;
        }
    }
    double rho_hat = static_cast<double>(events) / steps;
    double tau_hat = static_cast<double>(long_events) / steps;
    CHECK(std::fabs(rho_hat - 4.0 / 9) < 0.01);
    CHECK(std::fabs(tau_hat - 1.0 / 9) < 0.01);
}

TEST_CASE("mark occupancy follows the arborescence law on K3") {
    EmbeddedGraph k3 = cycle_graph(3);
    CrstChain chain(k3.graph, RngStream(31));
    std::vector<long long> occupancy(3, 0);
    const long long steps = 300000;
    for (long long i = 0; i < steps; ++i) {
        chain.step();
        ++occupancy[static_cast<size_t>(chain.state().mark)];
    }
    // arborescence counts are equal at each root, so the marginal is uniform
    for (int v = 0; v < 3; ++v) {
        double frac = static_cast<double>(occupancy[static_cast<size_t>(v)]) / steps;
        CHECK(std::fabs(frac - 1.0 / 3) < 0.01);
    }
}
