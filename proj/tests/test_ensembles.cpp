#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "bellrmt/bell_target.hpp"
#include "bellrmt/ensembles.hpp"
#include "bellrmt/error.hpp"
#include "bellrmt/linalg.hpp"
#include "bellrmt/summation.hpp"
#include "bellrmt/validation.hpp"
#include "doctest.h"

using namespace bellrmt;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("SchmidtSpectrum validation") {
    CHECK(code_of([] { SchmidtSpectrum({1.0}); }) == ErrorCode::InvalidDimension);
    CHECK(code_of([] { SchmidtSpectrum({0.5, -1e-12, 0.5}); }) == ErrorCode::NegativeEigenvalue);
    const SchmidtSpectrum s({0.5, -5e-15, 0.5});
    CHECK(s[1] == 0.0);
    const SchmidtSpectrum t({1.0, 3.0});
    CHECK(t[0] == 0.25);
    CHECK(t[1] == 0.75);
}

TEST_CASE("streams are deterministic") {
    RandomStream a(42, 7), b(42, 7), c(42, 8);
    const auto sa = schmidt_hs(12, a);
    const auto sb = schmidt_hs(12, b);
    const auto sc = schmidt_hs(12, c);
    CHECK(sa == sb);
    CHECK_FALSE(sa == sc);
}

TEST_CASE("uniform integers are unbiased on a small range") {
    RandomStream rng(1, 2);
    std::array<int, 3> counts{};
    const int draws = 30'000;
    for (int i = 0; i < draws; ++i) ++counts[rng.below(3)];
    for (int c : counts) CHECK(std::abs(c - draws / 3) < 5 * std::sqrt(draws * 2.0 / 9.0));
}

TEST_CASE("Ginibre normalization: E tr(X X^dagger) / (2 N^2) = 1 at N = 50") {
    const int n = 50, draws = 10'000;
    double total = 0.0;
    for (int d = 0; d < draws; ++d) {
        RandomStream rng(5, static_cast<std::uint64_t>(d));
        total += sample_ginibre(n, rng).frobenius_norm_squared() / (2.0 * n * n);
    }
    CHECK(total / draws == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("Ginibre draws are reproducible per stream") {
    RandomStream a(1, 5), b(1, 5), c(1, 6);
    const auto x = sample_ginibre(1, a);
    CHECK(x == sample_ginibre(1, b));
    RandomStream d(1, 5);
    (void)sample_ginibre(1, d);
    const auto big_a = sample_ginibre(6, d);
    const auto big_c = sample_ginibre(6, c);
    for (std::size_t i = 0; i < big_a.data().size(); ++i) CHECK(big_a.data()[i] != big_c.data()[i]);
    CHECK_THROWS_AS(sample_ginibre(0, a), Error);
}

TEST_CASE("HS spectra lie on the simplex") {
    RandomStream rng(6, 6);
    for (int n : {2, 7, 64}) {
        const auto s = schmidt_hs(n, rng);
        CHECK(s.size() == static_cast<std::size_t>(n));
        CHECK(std::is_sorted(s.lambdas().begin(), s.lambdas().end()));
        CHECK(compensated_sum(s.lambdas()) == doctest::Approx(1.0).epsilon(1e-14));
        for (double l : s.lambdas()) CHECK(l >= 0.0);
    }
}

TEST_CASE("HS N = 2: E sqrt(l1 l2) = 3 pi / 32") {
    const int draws = 100'000;
    CompensatedSum sum;
    for (int d = 0; d < draws; ++d) {
        RandomStream rng(9, static_cast<std::uint64_t>(d));
        const auto s = schmidt_hs(2, rng);
        sum.add(std::sqrt(s[0] * s[1]));
    }
    CHECK(std::abs(sum.value() / draws - 3.0 * std::numbers::pi / 32.0) <= 0.001);
}

TEST_CASE("structured ensemble") {
    SUBCASE("k = 1 is exactly maximally entangled") {
        RandomStream rng(1, 1);
        const auto s = schmidt_structured(9, 1, rng);
        for (double l : s.lambdas()) CHECK(l == 1.0 / 9.0);
    }
    SUBCASE("k = 2 support edge: N lambda stays below 2 up to finite-N spill") {
        RandomStream rng(2, 2);
        const auto s = schmidt_structured(200, 2, rng);
        CHECK(200.0 * s.lambdas().back() <= 2.3);
    }
    SUBCASE("k = 64 approaches HS: mean A_N at N = 64") {
        const int n = 64, draws = 200;
        const auto kernel = cached_kernel(n);
        std::vector<double> hs, st;
        for (int d = 0; d < draws; ++d) {
            RandomStream a(3, static_cast<std::uint64_t>(d)), b(4, static_cast<std::uint64_t>(d));
            hs.push_back(target_value(*kernel, draw_spectrum({Ensemble::hs(), n}, a)));
            st.push_back(target_value(*kernel, draw_spectrum({Ensemble::structured(64), n}, b)));
        }
        const auto mean_se = [](const std::vector<double>& v) {
            const double m = compensated_sum(v) / v.size();
            double ss = 0.0;
            for (double x : v) ss += (x - m) * (x - m);
            return std::pair{m, std::sqrt(ss / (v.size() - 1.0) / v.size())};
        };
        const auto [mh, sh] = mean_se(hs);
        const auto [ms, ss] = mean_se(st);
        INFO("HS " << mh << " +- " << sh << ", k=64 " << ms << " +- " << ss);
        CHECK(std::abs(ms - mh) <= 0.02);
        CHECK(std::abs(ms - mh) <= 2.0 * std::hypot(sh, ss));
    }
    SUBCASE("invalid k") {
        RandomStream rng(1, 1);
        CHECK(code_of([&] { schmidt_structured(4, 0, rng); }) == ErrorCode::InvalidK);
        CHECK(code_of([] { Ensemble::structured(0).validate(); }) == ErrorCode::InvalidK);
    }
}

TEST_CASE("maxent spectrum sums to one exactly") {
    const auto s = schmidt_maxent(10);
    CHECK(compensated_sum(s.lambdas()) == 1.0);
    double plain = 0.0;
    for (double l : s.lambdas()) plain += l;
    CHECK(std::abs(plain - 1.0) <= 1e-15);
}

TEST_CASE("shuffle: each ordering of three values has frequency 1/6 +- 0.01") {
    const SchmidtSpectrum base({0.2, 0.3, 0.5});
    std::map<std::vector<double>, int> freq;
    const int draws = 60'000;
    RandomStream rng(78, 0);
    for (int d = 0; d < draws; ++d) {
        const auto s = shuffle_spectrum(base, rng);
        freq[{s.lambdas().begin(), s.lambdas().end()}]++;
    }
    CHECK(freq.size() == 6);
    for (const auto& [perm, count] : freq) CHECK(std::abs(count / double(draws) - 1.0 / 6.0) <= 0.01);
    const SchmidtSpectrum half({0.5, 0.5});
    CHECK(shuffle_spectrum(half, rng) == half);
}

TEST_CASE("shuffle is a uniform permutation") {
    const SchmidtSpectrum base({0.1, 0.2, 0.3, 0.4});
    std::map<std::vector<double>, int> freq;
    const int draws = 60'000;
    RandomStream rng(77, 0);
    for (int d = 0; d < draws; ++d) {
        const auto s = shuffle_spectrum(base, rng);
        freq[{s.lambdas().begin(), s.lambdas().end()}]++;
    }
    CHECK(freq.size() == 24);
    const double expected = draws / 24.0;
    double chi2 = 0.0;
    for (const auto& [perm, count] : freq) chi2 += (count - expected) * (count - expected) / expected;
    // 23 degrees of freedom; the 99.9% quantile is 49.7.
    CHECK(chi2 < 49.7);
}

TEST_CASE("drawn spectra are exchangeable: E sqrt(l_i l_j) is the same for every pair") {
    const int n = 4, draws = 20'000;
    for (const auto& e : {Ensemble::hs(), Ensemble::structured(2)}) {
        CAPTURE(e.name());
        std::vector<std::vector<double>> pair(n, std::vector<double>(n, 0.0));
        std::vector<double> all;
        for (int d = 0; d < draws; ++d) {
            RandomStream rng(31, static_cast<std::uint64_t>(d));
            const auto s = draw_spectrum({e, n}, rng);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) pair[i][j] += std::sqrt(s[i] * s[j]) / draws;
        }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) all.push_back(pair[i][j]);
        const double mean = std::accumulate(all.begin(), all.end(), 0.0) / all.size();
        // Per-pair standard error is about 0.12 / sqrt(draws) ~ 1e-3.
        for (double v : all) CHECK(std::abs(v - mean) <= 0.004);
    }
}

TEST_CASE("Metropolis fixed-trace chain") {
    SUBCASE("states stay on the simplex") {
        RandomStream rng(1, 1);
        McmcConfig cfg;
        cfg.burn_in_sweeps = 200;
        cfg.thinning_sweeps = 5;
        const auto run = metropolis_fixed_trace(30, cfg, rng, 200);
        CHECK(run.samples.size() == 200);
        CHECK(run.acceptance_rate > 0.05);
        CHECK(run.acceptance_rate < 1.0);
        for (const auto& s : run.samples) {
            CHECK(std::abs(std::accumulate(s.lambdas().begin(), s.lambdas().end(), 0.0) - 1.0) <= 1e-12);
            for (double l : s.lambdas()) CHECK(l >= 0.0);
        }
    }
    SUBCASE("N = 2 marginal matches 3 (2x - 1)^2") {
        RandomStream rng(2, 2);
        const auto run = metropolis_fixed_trace(2, McmcConfig{}, rng, 100'000);
        std::vector<double> x;
        for (const auto& s : run.samples) x.push_back(s[0]);
        std::sort(x.begin(), x.end());
        const double d = ks_distance(x, [](double v) {
            const double u = 2.0 * v - 1.0;
            return (u * u * u + 1.0) / 2.0;
        });
        CHECK(d <= 0.02);
    }
    SUBCASE("non-ergodic step") {
        McmcConfig cfg;
        cfg.step_size = 0.0;
        RandomStream rng(1, 1);
        CHECK(code_of([&] { metropolis_fixed_trace(4, cfg, rng, 10); }) == ErrorCode::NonErgodicConfig);
        CHECK(code_of([] { Ensemble::coulomb_gas({0, 1, -1.0}).validate(); }) == ErrorCode::NonErgodicConfig);
    }
}

TEST_CASE("coulomb gas is not drawn per sample") {
    RandomStream rng(1, 1);
    CHECK(code_of([&] { draw_spectrum({Ensemble::coulomb_gas(), 4}, rng); }) == ErrorCode::InvalidConfig);
}
