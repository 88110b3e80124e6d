#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "bellrmt/ensembles.hpp"
#include "bellrmt/linalg.hpp"
#include "bellrmt/parallel.hpp"
#include "bellrmt/sweep.hpp"

using namespace bellrmt;

namespace {

template <class F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void kernels(int n, int reps) {
    RandomStream rng(1, 1);
    ComplexMatrix x = sample_ginibre(n, rng);
    const ComplexMatrix m = gram(x);
    std::printf("kernels at N=%d (%d reps)\n", n, reps);
    std::printf("  gram                  %8.4f s\n", seconds([&] { for (int r = 0; r < reps; ++r) (void)gram(x); }) / reps);
    std::printf("  hermitian_eigenvalues %8.4f s\n",
                seconds([&] { for (int r = 0; r < reps; ++r) (void)hermitian_eigenvalues(m); }) / reps);
    std::printf("  unitary_from_qr       %8.4f s\n",
                seconds([&] { for (int r = 0; r < reps; ++r) (void)unitary_from_qr(x); }) / reps);
    std::printf("  sample_haar_unitary   %8.4f s\n",
                seconds([&] { for (int r = 0; r < reps; ++r) (void)sample_haar_unitary(n, rng); }) / reps);
}

void sweeps(int n_max, std::int64_t samples, int threads) {
    SweepConfig cfg;
    cfg.ensembles = {Ensemble::hs(), Ensemble::structured(4)};
    cfg.n_grid = exponential_n_grid(2, n_max);
    cfg.samples_per_point = samples;
    cfg.master_seed = 7;
    cfg.threads = threads;

    SweepResult serial, parallel;
    const double ts = seconds([&] { serial = run_sweep_serial(cfg); });
    const double tp = seconds([&] { parallel = run_sweep(cfg); });
    bool same = serial.points.size() == parallel.points.size();
    for (std::size_t i = 0; same && i < serial.points.size(); ++i) {
        same = serial.points[i].mean == parallel.points[i].mean && serial.points[i].std == parallel.points[i].std;
    }
    std::printf("sweep hs + structured(k=4), N<=%d, %lld samples/point\n", n_max, static_cast<long long>(samples));
    std::printf("  serial                %8.3f s\n", ts);
    std::printf("  openmp (%2d threads)   %8.3f s  speedup %.2fx\n", team_size(threads), tp, ts / tp);
    std::printf("  results identical     %s\n", same ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 256;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 5;
    const int sweep_n = argc > 3 ? std::atoi(argv[3]) : 64;
    const long long samples = argc > 4 ? std::atoll(argv[4]) : 200;
    const int threads = argc > 5 ? std::atoi(argv[5]) : 0;
    kernels(n, reps);
    sweeps(sweep_n, samples, threads);
    return 0;
}
