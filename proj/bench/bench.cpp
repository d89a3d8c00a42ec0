// Benchmark: OpenMP kernels vs their serial reference implementations.
//
//   triadyn_bench [nodes] [repeats]
//
// Times the triad census and transition-count kernels on a random signed
// network of the given size (default 134, the scale the pipeline typically
// runs at) and reports the solver's per-iteration throughput. Results are
// checked bit-identical between the serial and parallel paths.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "triadyn/markov.hpp"
#include "triadyn/netbuild.hpp"
#include "triadyn/triads.hpp"
#include "triadyn/tvsolver.hpp"

using namespace triadyn;

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

SignedNetwork random_network(std::mt19937_64& rng, int n, int period) {
    SignedNetwork net;
    net.period_index = period;
    net.n = n;
    net.adjacency.assign(static_cast<std::size_t>(n) * n, 0);
    net.node_ids.resize(n);
    for (int i = 0; i < n; ++i) net.node_ids[i] = i;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double u = uniform01(rng);
            net.at(i, j) = static_cast<std::int8_t>(u < 0.1 ? -1 : (u < 0.3 ? 1 : 0));
        }
    }
    return net;
}

template <typename F>
double best_seconds(int repeats, const F& fn) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const double s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (s < best) best = s;
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 134;
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled (serial build)\n");
#endif
    const double triples = static_cast<double>(n) * (n - 1) * (n - 2) / 6.0;
    std::printf("network: %d nodes, %.0f triples\n\n", n, triples);

    std::mt19937_64 rng(99);
    const TriadTypeTable table = build_type_table();
    const SignedNetwork net_a = random_network(rng, n, 0);
    const SignedNetwork net_b = random_network(rng, n, 1);

    CensusVector census_serial, census_parallel;
    const double t_census_serial =
        best_seconds(repeats, [&] { census_serial = serial::census(net_a, table); });
    const double t_census_parallel =
        best_seconds(repeats, [&] { census_parallel = census(net_a, table); });
    const bool census_match = census_serial.counts == census_parallel.counts;
    std::printf("census        serial %8.2f ms   parallel %8.2f ms   speedup %5.2fx   %s\n",
                t_census_serial * 1e3, t_census_parallel * 1e3,
                t_census_serial / t_census_parallel, census_match ? "bit-identical" : "MISMATCH");

    TransitionCounts trans_serial, trans_parallel;
    const double t_trans_serial = best_seconds(
        repeats, [&] { trans_serial = serial::transition_counts(net_a, net_b, table); });
    const double t_trans_parallel =
        best_seconds(repeats, [&] { trans_parallel = transition_counts(net_a, net_b, table); });
    const bool trans_match = trans_serial.counts == trans_parallel.counts;
    std::printf("transitions   serial %8.2f ms   parallel %8.2f ms   speedup %5.2fx   %s\n",
                t_trans_serial * 1e3, t_trans_parallel * 1e3, t_trans_serial / t_trans_parallel,
                trans_match ? "bit-identical" : "MISMATCH");

    // Solver throughput: fixed iteration budget on a T=10 random instance.
    std::vector<TransitionMatrix> phat(10);
    for (TransitionMatrix& m : phat) {
        for (int i = 0; i < kTriadTypeCount; ++i) {
            double sum = 0.0;
            for (int j = 0; j < kTriadTypeCount; ++j) {
                sum += (m.at(i, j) = uniform01(rng) + 1e-3);
            }
            for (int j = 0; j < kTriadTypeCount; ++j) m.at(i, j) /= sum;
        }
    }
    SolverConfig config;
    config.max_iters = 200;
    config.tol = 1e-300;  // never plateau inside the budget
    const double t_solver = best_seconds(1, [&] { (void)estimate(phat, config); });
    std::printf("solver        %.2f ms / iteration at T=10 (%d iterations in %.2f s)\n",
                t_solver / config.max_iters * 1e3, config.max_iters, t_solver);

    return (census_match && trans_match) ? 0 : 1;
}
