// Timings of the serial reference kernels against their OpenMP versions:
// generating-pair construction, the formal-power recursion and the
// finite-difference divergence oracle at experiment-scale parameters.

#include "eie/conductivity.hpp"
#include "eie/experiments.hpp"
#include "eie/pseudoanalytic.hpp"

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

template <typename Fn>
double best_of(int reps, Fn&& fn) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (dt < best) best = dt;
    }
    return best;
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-22s serial %10.2f ms   parallel %10.2f ms   speedup %5.2fx\n", name,
                serial * 1e3, parallel * 1e3, serial / parallel);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both columns run serially\n");
#endif

    const eie::AnalyticConductivity& model = eie::catalog_entry("exp");
    const eie::SeparableFactors1D f = *model.separable_factors;
    const eie::FactorField factors = [f](double x, double y) {
        return std::pair<double, double>(f.sigma1(x), f.sigma2(y));
    };
    const eie::RayLattice lattice(1000, 1001);

    const double pair_serial = best_of(3, [&] {
        (void)eie::build_pair(factors, 0, lattice, eie::Execution::serial);
    });
    const double pair_parallel = best_of(3, [&] {
        (void)eie::build_pair(factors, 0, lattice, eie::Execution::parallel);
    });
    report("build_pair", pair_serial, pair_parallel);

    const eie::GeneratingPairField pair0 = eie::build_pair(factors, 0, lattice);
    const eie::GeneratingPairField pair1 = eie::build_pair(factors, 1, lattice);

    const double powers_serial = best_of(3, [&] {
        (void)eie::formal_powers(pair0, pair1, 10, eie::PowerStorage::boundary_only, 0,
                                 eie::Execution::serial);
    });
    const double powers_parallel = best_of(3, [&] {
        (void)eie::formal_powers(pair0, pair1, 10, eie::PowerStorage::boundary_only, 0,
                                 eie::Execution::parallel);
    });
    report("formal_powers", powers_serial, powers_parallel);

    const double fd_serial = best_of(10, [&] {
        (void)eie::fd_conductivity_residual(model.sigma, model.exact_u, 1e-3,
                                            eie::Execution::serial);
    });
    const double fd_parallel = best_of(10, [&] {
        (void)eie::fd_conductivity_residual(model.sigma, model.exact_u, 1e-3,
                                            eie::Execution::parallel);
    });
    report("fd_residual", fd_serial, fd_parallel);

    const eie::ScalarField sigma_sin = eie::catalog_entry("sin").sigma;
    const double pw_serial = best_of(3, [&] {
        (void)eie::build_piecewise(sigma_sin, 1001, 60.0, 1000, eie::Execution::serial);
    });
    const double pw_parallel = best_of(3, [&] {
        (void)eie::build_piecewise(sigma_sin, 1001, 60.0, 1000, eie::Execution::parallel);
    });
    report("build_piecewise", pw_serial, pw_parallel);

    return 0;
}
