#include <cmath>
#include <numeric>

#include "bellrmt/bell_target.hpp"
#include "bellrmt/error.hpp"
#include "bellrmt/sweep.hpp"
#include "doctest.h"

using namespace bellrmt;

namespace {

SweepConfig mixed_config() {
    SweepConfig cfg;
    McmcConfig mcmc;
    mcmc.burn_in_sweeps = 100;
    mcmc.thinning_sweeps = 3;
    cfg.ensembles = {Ensemble::hs(), Ensemble::structured(3), Ensemble::max_entangled(), Ensemble::coulomb_gas(mcmc)};
    cfg.n_grid = {2, 5, 16};
    cfg.samples_per_point = 64;
    cfg.master_seed = 99;
    cfg.histogram_bins = 12;
    return cfg;
}

void require_identical(const SweepResult& a, const SweepResult& b) {
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        const auto& p = a.points[i];
        const auto& q = b.points[i];
        CHECK(p.ensemble == q.ensemble);
        CHECK(p.n == q.n);
        CHECK(p.samples == q.samples);
        CHECK(p.mean == q.mean);
        CHECK(p.std == q.std);
        CHECK(p.std_error == q.std_error);
        CHECK(p.violation_fraction == q.violation_fraction);
        CHECK(p.histogram.edges == q.histogram.edges);
        CHECK(p.histogram.counts == q.histogram.counts);
        CHECK(p.acceptance_rate == q.acceptance_rate);
    }
}

}  // namespace

TEST_CASE("grids") {
    CHECK(default_n_grid() == std::vector<int>{2, 3, 4, 6, 8, 11, 16, 23, 32, 45, 64, 91, 128, 181, 256, 362, 512});
    CHECK(exponential_n_grid(5, 20) == std::vector<int>{5, 6, 8, 11, 16, 20});
    CHECK_THROWS_AS(exponential_n_grid(1, 4), Error);
}

TEST_CASE("config validation") {
    SweepConfig cfg;
    cfg.samples_per_point = 1;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = SweepConfig{};
    cfg.n_grid = {4, 4};
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.n_grid = {1, 4};
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = SweepConfig{};
    cfg.ensembles = {Ensemble::structured(0)};
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("serial and OpenMP sweeps are bit-identical for 1, 2 and 8 threads") {
    SweepConfig cfg = mixed_config();
    const SweepResult reference = run_sweep_serial(cfg);
    for (int threads : {1, 2, 8}) {
        cfg.threads = threads;
        require_identical(reference, run_sweep(cfg));
    }
}

TEST_CASE("sweep statistics") {
    const SweepConfig cfg = mixed_config();
    const SweepResult r = run_sweep(cfg);
    CHECK(r.points.size() == cfg.ensembles.size() * cfg.n_grid.size());
    for (const auto& p : r.points) {
        CAPTURE(p.ensemble.name());
        CAPTURE(p.n);
        const auto total = std::accumulate(p.histogram.counts.begin(), p.histogram.counts.end(), std::int64_t{0});
        CHECK(total == p.samples);
        CHECK(p.histogram.edges.size() == p.histogram.counts.size() + 1);
        CHECK(std::isfinite(p.mean));
        CHECK(p.std_error == doctest::Approx(p.std / std::sqrt(static_cast<double>(p.samples))));

        // violation fraction agrees with the histogram mass below 1 up to one bin
        std::int64_t below = 0, straddle = 0;
        for (std::size_t b = 0; b < p.histogram.counts.size(); ++b) {
            if (p.histogram.edges[b + 1] <= 1.0) below += p.histogram.counts[b];
            else if (p.histogram.edges[b] < 1.0) straddle += p.histogram.counts[b];
        }
        const double frac_lo = static_cast<double>(below) / p.samples;
        const double frac_hi = static_cast<double>(below + straddle) / p.samples;
        CHECK(p.violation_fraction >= frac_lo - 1e-12);
        CHECK(p.violation_fraction <= frac_hi + 1e-12);

        if (p.ensemble.family == Family::MaxEntangled) {
            CHECK(p.samples == 1);
            CHECK(p.mean == maxent_target(p.n));
            CHECK(p.std == 0.0);
            CHECK(p.violation_fraction == 1.0);
        } else {
            CHECK(p.samples == cfg.samples_per_point);
        }
        CHECK(p.acceptance_rate.has_value() == (p.ensemble.family == Family::CoulombGas));
    }
    CHECK(r.find(Ensemble::structured(3), 16) != nullptr);
    CHECK(r.find(Ensemble::structured(4), 16) == nullptr);
}

TEST_CASE("per-sample targets do not depend on the rest of the sweep") {
    const double direct = sample_target(Ensemble::hs(), 5, 99, 17);
    CHECK(direct == sample_target(Ensemble::hs(), 5, 99, 17));
    CHECK(direct != sample_target(Ensemble::hs(), 5, 99, 18));
    CHECK(direct != sample_target(Ensemble::hs(), 5, 100, 17));
    CHECK_THROWS_AS(sample_target(Ensemble::coulomb_gas(), 5, 1, 1), Error);
}

TEST_CASE("moments") {
    const std::vector<double> constant(5, 1.5);
    const std::vector<int> orders{1, 2, 3};
    const auto m = estimate_moments(constant, orders);
    CHECK(m.raw.at(1) == doctest::Approx(1.5));
    CHECK(m.raw.at(2) == doctest::Approx(2.25));
    CHECK(m.raw.at(3) == doctest::Approx(3.375));
    CHECK(m.central2 == 0.0);
    const std::vector<double> pair{0.0, 2.0};
    CHECK(estimate_moments(pair, orders).central2 == 2.0);
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(estimate_moments(one, orders), Error);
}

TEST_CASE("histograms") {
    const std::vector<double> v{0.0, 0.25, 0.5, 1.0};
    const auto h = make_histogram(v, 4);
    CHECK(h.edges.front() == 0.0);
    CHECK(h.edges.back() == 1.0);
    CHECK(h.counts == std::vector<std::int64_t>{1, 1, 1, 1});
    const std::vector<double> flat(3, 0.7);
    const auto f = make_histogram(flat, 5);
    CHECK(f.edges.front() < 0.7);
    CHECK(f.edges.back() > 0.7);
    CHECK(std::accumulate(f.counts.begin(), f.counts.end(), std::int64_t{0}) == 3);
}

TEST_CASE("batch-means standard error") {
    std::vector<double> iid;
    RandomStream rng(3, 3);
    for (int i = 0; i < 20'000; ++i) iid.push_back(rng.normal());
    CHECK(batch_means_stderr(iid) == doctest::Approx(1.0 / std::sqrt(20'000.0)).epsilon(0.4));
    const std::vector<double> few(10, 1.0);
    CHECK_THROWS_AS(batch_means_stderr(few), Error);
}
