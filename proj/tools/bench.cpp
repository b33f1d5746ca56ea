// Compares the serial reference path (jobs=1) against the OpenMP path on a
// representative workload: a block-index sweep plus one growth ladder.

#include <chrono>
#include <cstdio>

#include "delidx/growth.hpp"
#include "delidx/par.hpp"

namespace {

double workload() {
    using namespace delidx;
    const auto t0 = std::chrono::steady_clock::now();

    long long checksum = 0;
    for (double mu : {0.05, 0.15, 0.24})
        for (int ell = 1; ell <= 5; ++ell) {
            const DelaunayFamily fam{Space::Euclidean, 2, 1.0, mu};
            checksum += block_index(make_dirichlet_block(fam, ell)).total_index;
        }

    const DelaunayFamily fam{Space::Euclidean, 2, 1.0, 0.15};
    const double T = period(fam);
    std::vector<double> lengths;
    for (int j = 1; j <= 40; ++j) lengths.push_back(0.5 * T * j);
    const GrowthExperiment exp = run_growth(fam, lengths, BC::Dirichlet, BC::Dirichlet);
    checksum += exp.results.back().second;

    std::printf("  checksum %lld\n", checksum);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main() {
    delidx::par::set_max_threads(1);
    std::printf("serial reference (1 thread):\n");
    const double serial = workload();

    delidx::par::set_max_threads(0);
    std::printf("OpenMP (%d threads):\n", delidx::par::max_threads());
    const double parallel = workload();

    std::printf("\nserial   %8.3f s\nparallel %8.3f s\nspeedup  %8.2fx\n", serial, parallel,
                serial / parallel);
    return 0;
}
