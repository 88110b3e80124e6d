#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bellrmt/ensembles.hpp"

namespace bellrmt {

/// {2, 3, 4, 6, 8, 11, 16, 23, 32, 45, 64, 91, 128, 181, 256, 362, 512}
std::vector<int> default_n_grid();

/// round(sqrt(2)^j) values in [n_min, n_max], plus both endpoints.
std::vector<int> exponential_n_grid(int n_min, int n_max);

struct SweepConfig {
    std::vector<Ensemble> ensembles = {Ensemble::hs()};
    std::vector<int> n_grid = default_n_grid();
    std::int64_t samples_per_point = 1000;
    std::uint64_t master_seed = 0;
    std::string output_path;
    int histogram_bins = 50;
    int threads = 0;  // 0: OpenMP default

    /// Throws InvalidConfig.
    void validate() const;
};

struct Histogram {
    std::vector<double> edges;  // bins + 1 entries
    std::vector<std::int64_t> counts;
};

struct PointResult {
    Ensemble ensemble;
    int n = 0;
    std::int64_t samples = 0;
    double mean = 0.0;
    double std = 0.0;        // unbiased sample standard deviation
    double std_error = 0.0;  // std / sqrt(samples)
    double violation_fraction = 0.0;  // share of samples with A_N < 1
    Histogram histogram;
    std::optional<double> acceptance_rate;  // CoulombGas only
};

struct SweepResult {
    std::vector<PointResult> points;
    std::int64_t samples_per_point = 0;
    std::uint64_t master_seed = 0;

    const PointResult* find(const Ensemble& ensemble, int n) const;
};

/// Stream index of one Monte Carlo draw; independent of scheduling.
std::uint64_t sample_stream_index(const Ensemble& ensemble, int n, std::uint64_t sample_index);

/// A_N of draw `sample_index` at (ensemble, n). Not valid for CoulombGas.
double sample_target(const Ensemble& ensemble, int n, std::uint64_t master_seed, std::uint64_t sample_index);

/// Target values of a whole Coulomb-gas chain at dimension n.
std::vector<double> coulomb_chain_targets(const McmcConfig& cfg, int n, std::uint64_t master_seed,
                                          std::int64_t samples, double* acceptance_rate = nullptr);

/// OpenMP sweep: draws are distributed over threads, then folded in sample-index order,
/// so the result is bit-identical for every thread count.
SweepResult run_sweep(const SweepConfig& cfg);

/// Single-threaded reference for run_sweep.
SweepResult run_sweep_serial(const SweepConfig& cfg);

/// Statistics of one point from its per-sample target values.
PointResult summarize_point(const Ensemble& ensemble, int n, std::span<const double> values, int bins);

/// Fixed-count histogram over [min, max] of the values. A zero-width range is widened
/// by 1e-9 relative on each side.
Histogram make_histogram(std::span<const double> values, int bins);

struct Moments {
    std::map<int, double> raw;   // order -> mean of x^order
    double central2 = 0.0;       // unbiased sample variance
};

/// Throws InsufficientData for fewer than two values.
Moments estimate_moments(std::span<const double> values, std::span<const int> orders);

/// Standard error from non-overlapping batch means; for correlated chains.
double batch_means_stderr(std::span<const double> values, int batches = 20);

}  // namespace bellrmt
