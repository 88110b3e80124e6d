#include "bellrmt/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <sstream>

#include "bellrmt/bell_target.hpp"
#include "bellrmt/error.hpp"
#include "bellrmt/parallel.hpp"
#include "bellrmt/summation.hpp"

namespace bellrmt {
namespace {

constexpr std::uint64_t kChainTag = std::numeric_limits<std::uint64_t>::max();

std::uint64_t family_word(Family f) { return static_cast<std::uint64_t>(f) + 1; }

bool per_sample_family(Family f) { return f == Family::HS || f == Family::Structured; }

std::string describe(const Ensemble& e, int n) {
    std::ostringstream os;
    os << e.name();
    if (e.family == Family::Structured) os << "(k=" << e.k << ")";
    os << " N=" << n;
    return os.str();
}

// Rough cost so that expensive draws are scheduled first.
double draw_cost(const Ensemble& e, int n) {
    const double cube = static_cast<double>(n) * n * n;
    return e.family == Family::Structured ? cube * (e.k + 1) : cube;
}

struct Task {
    std::size_t point;
    std::uint64_t sample;
};

template <bool Parallel>
SweepResult sweep_impl(const SweepConfig& cfg) {
    cfg.validate();

    struct Point {
        Ensemble ensemble;
        int n;
        std::vector<double> values;
        std::optional<double> acceptance;
    };
    std::vector<Point> points;
    for (const auto& e : cfg.ensembles) {
        for (int n : cfg.n_grid) {
            const std::int64_t count = e.family == Family::MaxEntangled ? 1 : cfg.samples_per_point;
            points.push_back({e, n, std::vector<double>(static_cast<std::size_t>(count)), std::nullopt});
        }
    }

    std::vector<Task> tasks;
    std::vector<std::size_t> chains;
    for (std::size_t p = 0; p < points.size(); ++p) {
        const Family f = points[p].ensemble.family;
        if (f == Family::CoulombGas) {
            chains.push_back(p);
        } else if (f == Family::MaxEntangled) {
            points[p].values[0] = maxent_target(points[p].n);
        } else {
            for (std::uint64_t s = 0; s < points[p].values.size(); ++s) tasks.push_back({p, s});
        }
    }
    std::stable_sort(tasks.begin(), tasks.end(), [&](const Task& a, const Task& b) {
        return draw_cost(points[a.point].ensemble, points[a.point].n) >
               draw_cost(points[b.point].ensemble, points[b.point].n);
    });

    // The failure with the lowest task position wins so the reported error is scheduling-independent.
    std::size_t failed_at = std::numeric_limits<std::size_t>::max();
    std::exception_ptr failure;
    std::string failure_context;
    auto record_failure = [&](std::size_t position, const std::string& context) {
        if (position < failed_at) {
            failed_at = position;
            failure = std::current_exception();
            failure_context = context;
        }
    };

    const long task_count = static_cast<long>(tasks.size());
    const long chain_count = static_cast<long>(chains.size());

    auto run_task = [&](long t) {
        const Task& task = tasks[static_cast<std::size_t>(t)];
        Point& pt = points[task.point];
        try {
            pt.values[task.sample] = sample_target(pt.ensemble, pt.n, cfg.master_seed, task.sample);
        } catch (...) {
            std::ostringstream ctx;
            ctx << describe(pt.ensemble, pt.n) << " sample " << task.sample;
#pragma omp critical(bellrmt_sweep_failure)
            record_failure(static_cast<std::size_t>(t), ctx.str());
        }
    };
    auto run_chain = [&](long c) {
        Point& pt = points[chains[static_cast<std::size_t>(c)]];
        try {
            double acceptance = 0.0;
            pt.values = coulomb_chain_targets(pt.ensemble.mcmc, pt.n, cfg.master_seed, cfg.samples_per_point,
                                              &acceptance);
            pt.acceptance = acceptance;
        } catch (...) {
#pragma omp critical(bellrmt_sweep_failure)
            record_failure(static_cast<std::size_t>(task_count + c), describe(pt.ensemble, pt.n) + " chain");
        }
    };

    if constexpr (Parallel) {
        const int team = team_size(cfg.threads);
#pragma omp parallel num_threads(team)
        {
#pragma omp for schedule(dynamic, 1) nowait
            for (long c = 0; c < chain_count; ++c) run_chain(c);
#pragma omp for schedule(dynamic, 1)
            for (long t = 0; t < task_count; ++t) run_task(t);
        }
    } else {
        for (long c = 0; c < chain_count; ++c) run_chain(c);
        for (long t = 0; t < task_count; ++t) run_task(t);
    }

    if (failure) {
        try {
            std::rethrow_exception(failure);
        } catch (const Error& err) {
            throw Error(err.code(), failure_context + ": " + err.what());
        } catch (const std::exception& err) {
            throw Error(ErrorCode::SamplingFailed, failure_context + ": " + err.what());
        }
    }

    SweepResult result;
    result.samples_per_point = cfg.samples_per_point;
    result.master_seed = cfg.master_seed;
    result.points.reserve(points.size());
    for (const auto& pt : points) {
        PointResult r = summarize_point(pt.ensemble, pt.n, pt.values, cfg.histogram_bins);
        r.acceptance_rate = pt.acceptance;
        result.points.push_back(std::move(r));
    }
    return result;
}

}  // namespace

std::vector<int> default_n_grid() { return exponential_n_grid(2, 512); }

std::vector<int> exponential_n_grid(int n_min, int n_max) {
    if (n_min < 2 || n_max < n_min) {
        throw Error(ErrorCode::InvalidConfig, "grid requires 2 <= n_min <= n_max");
    }
    std::set<int> grid{n_min, n_max};
    for (int j = 2;; ++j) {
        const double v = std::round(std::pow(std::sqrt(2.0), j));
        if (v > n_max) break;
        if (v >= n_min) grid.insert(static_cast<int>(v));
    }
    return {grid.begin(), grid.end()};
}

void SweepConfig::validate() const {
    if (ensembles.empty()) throw Error(ErrorCode::InvalidConfig, "no ensembles selected");
    for (const auto& e : ensembles) e.validate();
    if (n_grid.empty()) throw Error(ErrorCode::InvalidConfig, "empty N grid");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 2) throw Error(ErrorCode::InvalidConfig, "grid values must be >= 2");
        if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
            throw Error(ErrorCode::InvalidConfig, "N grid must be strictly increasing");
        }
    }
    if (samples_per_point < 2) throw Error(ErrorCode::InvalidConfig, "samples_per_point must be >= 2");
    if (histogram_bins < 1) throw Error(ErrorCode::InvalidConfig, "histogram_bins must be >= 1");
    if (threads < 0) throw Error(ErrorCode::InvalidConfig, "threads must be >= 0");
}

const PointResult* SweepResult::find(const Ensemble& ensemble, int n) const {
    for (const auto& p : points) {
        if (p.ensemble == ensemble && p.n == n) return &p;
    }
    return nullptr;
}

std::uint64_t sample_stream_index(const Ensemble& ensemble, int n, std::uint64_t sample_index) {
    return hash_words({family_word(ensemble.family), static_cast<std::uint64_t>(ensemble.k),
                       static_cast<std::uint64_t>(n), sample_index});
}

double sample_target(const Ensemble& ensemble, int n, std::uint64_t master_seed, std::uint64_t sample_index) {
    if (!per_sample_family(ensemble.family) && ensemble.family != Family::MaxEntangled) {
        throw Error(ErrorCode::InvalidConfig, "sample_target does not support " + ensemble.name());
    }
    RandomStream rng(master_seed, sample_stream_index(ensemble, n, sample_index));
    const SchmidtSpectrum s = draw_spectrum({ensemble, n}, rng);
    return target_value(*cached_kernel(n), s);
}

std::vector<double> coulomb_chain_targets(const McmcConfig& cfg, int n, std::uint64_t master_seed,
                                          std::int64_t samples, double* acceptance_rate) {
    RandomStream rng(master_seed, hash_words({family_word(Family::CoulombGas), 0, static_cast<std::uint64_t>(n),
                                              kChainTag}));
    const McmcRun run = metropolis_fixed_trace(n, cfg, rng, samples);
    if (acceptance_rate) *acceptance_rate = run.acceptance_rate;
    const auto kernel = cached_kernel(n);
    std::vector<double> out;
    out.reserve(run.samples.size());
    // Chain labels are sticky; shuffle so the target sees exchangeable order.
    for (const auto& s : run.samples) out.push_back(target_value(*kernel, shuffle_spectrum(s, rng)));
    return out;
}

SweepResult run_sweep(const SweepConfig& cfg) { return sweep_impl<true>(cfg); }

SweepResult run_sweep_serial(const SweepConfig& cfg) { return sweep_impl<false>(cfg); }

Histogram make_histogram(std::span<const double> values, int bins) {
    if (values.empty() || bins < 1) throw Error(ErrorCode::InsufficientData, "histogram needs values and bins");
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it, hi = *hi_it;
    if (hi == lo) {
        const double pad = 1e-9 * std::max(1.0, std::abs(lo));
        lo -= pad;
        hi += pad;
    }
    Histogram h;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i) h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / bins;
    h.edges.back() = hi;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (double v : values) {
        auto idx = static_cast<long>(std::floor((v - lo) / (hi - lo) * bins));
        idx = std::clamp(idx, 0L, static_cast<long>(bins) - 1);
        ++h.counts[static_cast<std::size_t>(idx)];
    }
    return h;
}

PointResult summarize_point(const Ensemble& ensemble, int n, std::span<const double> values, int bins) {
    if (values.empty()) throw Error(ErrorCode::InsufficientData, "no samples for " + describe(ensemble, n));
    PointResult r;
    r.ensemble = ensemble;
    r.n = n;
    r.samples = static_cast<std::int64_t>(values.size());

    CompensatedSum sum;
    std::int64_t violations = 0;
    for (double v : values) {
        if (!std::isfinite(v)) throw Error(ErrorCode::SamplingFailed, "non-finite target at " + describe(ensemble, n));
        sum.add(v);
        if (v < 1.0) ++violations;
    }
    const double count = static_cast<double>(values.size());
    r.mean = sum.value() / count;
    if (values.size() >= 2) {
        CompensatedSum sq;
        for (double v : values) sq.add((v - r.mean) * (v - r.mean));
        r.std = std::sqrt(sq.value() / (count - 1.0));
        r.std_error = r.std / std::sqrt(count);
    }
    r.violation_fraction = static_cast<double>(violations) / count;
    r.histogram = make_histogram(values, bins);
    return r;
}

Moments estimate_moments(std::span<const double> values, std::span<const int> orders) {
    if (values.size() < 2) throw Error(ErrorCode::InsufficientData, "moments need at least two values");
    const double count = static_cast<double>(values.size());
    Moments m;
    for (int order : orders) {
        CompensatedSum s;
        for (double v : values) s.add(std::pow(v, order));
        m.raw[order] = s.value() / count;
    }
    const double mean = compensated_sum(values) / count;
    CompensatedSum sq;
    for (double v : values) sq.add((v - mean) * (v - mean));
    m.central2 = sq.value() / (count - 1.0);
    return m;
}

double batch_means_stderr(std::span<const double> values, int batches) {
    if (batches < 2 || values.size() < static_cast<std::size_t>(2 * batches)) {
        throw Error(ErrorCode::InsufficientData, "batch means need at least two values per batch");
    }
    const std::size_t size = values.size() / static_cast<std::size_t>(batches);
    std::vector<double> means;
    for (int b = 0; b < batches; ++b) means.push_back(compensated_sum(values.subspan(b * size, size)) / size);
    const double grand = compensated_sum(means) / batches;
    CompensatedSum sq;
    for (double m : means) sq.add((m - grand) * (m - grand));
    return std::sqrt(sq.value() / (batches - 1.0) / batches);
}

}  // namespace bellrmt
