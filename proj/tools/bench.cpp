// Timing comparison between the serial reference kernels and their OpenMP
// counterparts.  Each pair must produce identical results.
#include <chrono>
#include <cstdio>

#include "looprate/forests.hpp"
#include "looprate/lattice.hpp"
#include "looprate/sampler.hpp"
#include "looprate/sandpile.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace looprate;

namespace {

template <typename F>
double time_ms(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms, bool equal) {
    std::printf("%-28s serial %9.1f ms   parallel %9.1f ms   speedup %.2fx   %s\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms, equal ? "match" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled; both columns run serially\n\n");
#endif

    {
        EmbeddedGraph g = wired_square_patch(3);  // 24 edges: 16.7M subsets
        Rational serial, parallel;
        double ts = time_ms([&] { serial = brute_force_forests_serial(g.graph, 2); });
        double tp = time_ms([&] { parallel = brute_force_forests(g.graph, 2); });
        report("oracle subset scan", ts, tp, serial == parallel);
    }
    {
        EmbeddedGraph g = wired_square_patch(6);
        DualGraph d = dual(g.graph, g.rotation);
        Rational serial, parallel;
        double ts = time_ms([&] { serial = fk_ratio_serial(d.dual, 3); });
        double tp = time_ms([&] { parallel = fk_ratio(d.dual, 3); });
        report("three-forest formula", ts, tp, serial == parallel);
    }
    {
        EmbeddedGraph g = wired_square_patch(4);
        std::vector<EstimateReport> serial, parallel;
        double ts = time_ms(
            [&] { serial = wilson_edge_probabilities_serial(g.graph, *g.graph.sink(), 40000, 7); });
        double tp =
            time_ms([&] { parallel = wilson_edge_probabilities(g.graph, *g.graph.sink(), 40000, 7); });
        bool equal = true;
        for (size_t e = 0; e < serial.size(); ++e)
            equal = equal && serial[e].estimate == parallel[e].estimate;
        report("wilson tree sampling", ts, tp, equal);
    }
    {
        EmbeddedGraph g = wired_square_patch(3);
        std::map<long long, long long> serial, parallel;
        double ts = time_ms([&] { serial = level_spectrum_serial(g.graph); });
        double tp = time_ms([&] { parallel = level_spectrum(g.graph); });
        report("sandpile level spectrum", ts, tp, serial == parallel);
    }
    {
        EmbeddedGraph g = grid_graph(3, 3);
        LoopingEstimates serial, parallel;
        double ts = time_ms([&] { serial = estimate_looping_chains_serial(g.graph, 400000, 3, 4); });
        double tp = time_ms([&] { parallel = estimate_looping_chains(g.graph, 400000, 3, 4); });
        report("crst chains", ts, tp,
               serial.rho.estimate == parallel.rho.estimate &&
                   serial.tau.estimate == parallel.tau.estimate);
    }
    return 0;
}
