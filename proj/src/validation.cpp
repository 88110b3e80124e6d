#include "bellrmt/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bellrmt/analytic.hpp"
#include "bellrmt/bell_target.hpp"
#include "bellrmt/ensembles.hpp"
#include "bellrmt/parallel.hpp"
#include "bellrmt/summation.hpp"
#include "bellrmt/sweep.hpp"

namespace bellrmt {
namespace {

// Stream-space tags so validation draws never coincide with sweep draws.
constexpr std::uint64_t kTagMarchenkoPastur = 0x4d50;
constexpr std::uint64_t kTagSqrtPair = 0x5350;
constexpr std::uint64_t kTagCrossCheck = 0x4343;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

CheckResult within(std::string name, double value, double reference, double tolerance) {
    CheckResult r;
    r.name = std::move(name);
    r.value = value;
    r.reference = reference;
    r.tolerance = tolerance;
    r.passed = std::abs(value - reference) <= tolerance;
    r.detail = "value " + fmt(value) + " vs " + fmt(reference) + " (|diff| " + fmt(std::abs(value - reference)) +
               ", tol " + fmt(tolerance) + ")";
    return r;
}

template <class F>
std::vector<double> parallel_values(std::int64_t count, int threads, F f) {
    std::vector<double> out(static_cast<std::size_t>(count));
    const int team = team_size(threads);
    FirstFailure failure;
#pragma omp parallel for schedule(dynamic, 16) num_threads(team)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = f(static_cast<std::uint64_t>(i));
        } catch (...) {
            failure.capture(static_cast<std::size_t>(i));
        }
    }
    failure.rethrow_if_any();
    return out;
}

double mean_of(std::span<const double> v) { return compensated_sum(v) / static_cast<double>(v.size()); }

double sample_std(std::span<const double> v) {
    const double m = mean_of(v);
    CompensatedSum s;
    for (double x : v) s.add((x - m) * (x - m));
    return std::sqrt(s.value() / (static_cast<double>(v.size()) - 1.0));
}

}  // namespace

double ks_distance(std::span<const double> sorted, const std::function<double(double)>& cdf) {
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f), std::abs(f - static_cast<double>(i) / n)});
    }
    return d;
}

std::vector<double> pooled_scaled_hs_eigenvalues(int n, int draws, std::uint64_t seed, int threads) {
    std::vector<std::vector<double>> per_draw(static_cast<std::size_t>(draws));
    const int team = team_size(threads);
    FirstFailure failure;
#pragma omp parallel for schedule(dynamic, 4) num_threads(team)
    for (int d = 0; d < draws; ++d) {
        try {
            RandomStream rng(seed, hash_words({kTagMarchenkoPastur, static_cast<std::uint64_t>(n),
                                               static_cast<std::uint64_t>(d)}));
            const auto s = schmidt_hs(n, rng);
            auto& out = per_draw[static_cast<std::size_t>(d)];
            for (double l : s.lambdas()) out.push_back(l * n);
        } catch (...) {
            failure.capture(static_cast<std::size_t>(d));
        }
    }
    failure.rethrow_if_any();
    std::vector<double> pooled;
    pooled.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(draws));
    for (const auto& v : per_draw) pooled.insert(pooled.end(), v.begin(), v.end());
    std::sort(pooled.begin(), pooled.end());
    return pooled;
}

CheckResult check_catalan_series() {
    // G = (pi/8) ln(2 + sqrt 3) + (3/8) sum_n 1 / (C(2n, n) (2n+1)^2)
    double term_ratio = 1.0;  // 1 / C(2n, n)
    CompensatedSum series;
    for (int n = 0; n < 40; ++n) {
        if (n > 0) term_ratio *= static_cast<double>(n) / (2.0 * (2.0 * n - 1.0));
        series.add(term_ratio / ((2.0 * n + 1.0) * (2.0 * n + 1.0)));
    }
    const double g = std::numbers::pi / 8.0 * std::log(2.0 + std::numbers::sqrt3) + 3.0 / 8.0 * series.value();
    return within("catalan: stored literal vs accelerated series", analytic::catalan_constant(), g, 1e-15);
}

CheckResult check_secant_integral(double tolerance) {
    return within("secant double integral: quadrature vs 8G/pi^2", analytic::secant_double_integral_quadrature(),
                  analytic::secant_double_integral(), tolerance);
}

CheckResult check_lue_relation(double tolerance) {
    const auto report = analytic::lue_relation_check(tolerance);
    CheckResult r = within("LUE relation at N=2: Gamma factor x LUE moment vs 3pi/32", report.fixed_trace_value,
                           report.reference, tolerance);
    r.detail += "; LUE side " + fmt(report.lue_expectation) + ", Gamma factor " + fmt(report.gamma_factor);
    return r;
}

std::vector<CheckResult> check_c_k_quadrature(const std::vector<int>& ks, double tolerance) {
    std::vector<CheckResult> out;
    for (int k : ks) {
        out.push_back(within("C_k closed form vs 2-d quadrature, k=" + std::to_string(k), analytic::c_k_quadrature(k),
                             analytic::c_k(k), tolerance));
    }
    return out;
}

CheckResult check_marchenko_pastur_ks(int n, int draws, std::uint64_t seed, double tolerance, int threads) {
    const auto pooled = pooled_scaled_hs_eigenvalues(n, draws, seed, threads);
    const double d = ks_distance(pooled, analytic::mp_cdf);
    CheckResult r;
    r.name = "Marchenko-Pastur KS distance, HS N=" + std::to_string(n) + ", " + std::to_string(draws) + " draws";
    r.value = d;
    r.reference = 0.0;
    r.tolerance = tolerance;
    r.passed = d <= tolerance;
    r.detail = "KS " + fmt(d) + " (limit " + fmt(tolerance) + ")";
    return r;
}

CheckResult check_sqrt_pair_wishart(std::int64_t samples, std::uint64_t seed, double tolerance, int threads) {
    const auto values = parallel_values(samples, threads, [seed](std::uint64_t i) {
        RandomStream rng(seed, hash_words({kTagSqrtPair, 2, i}));
        const auto s = schmidt_hs(2, rng);
        return std::sqrt(s[0] * s[1]);
    });
    return within("E sqrt(l1 l2) at N=2, Wishart route", mean_of(values), analytic::exact_sqrt_pair_n2(), tolerance);
}

CheckResult check_sqrt_pair_metropolis(std::int64_t samples, std::uint64_t seed, double tolerance) {
    RandomStream rng(seed, hash_words({kTagSqrtPair, 2, 0xc0u}));
    const auto run = metropolis_fixed_trace(2, McmcConfig{}, rng, samples);
    std::vector<double> values;
    values.reserve(run.samples.size());
    for (const auto& s : run.samples) values.push_back(std::sqrt(s[0] * s[1]));
    CheckResult r =
        within("E sqrt(l1 l2) at N=2, Metropolis route", mean_of(values), analytic::exact_sqrt_pair_n2(), tolerance);
    r.detail += "; acceptance " + fmt(run.acceptance_rate);
    return r;
}

CheckResult check_metropolis_vs_wishart(int n, std::int64_t samples, std::uint64_t seed, double sigmas,
                                        int threads) {
    const auto kernel = cached_kernel(n);
    const auto wishart = parallel_values(samples, threads, [&](std::uint64_t i) {
        RandomStream rng(seed, hash_words({kTagCrossCheck, static_cast<std::uint64_t>(n), i}));
        return target_value(*kernel, shuffle_spectrum(schmidt_hs(n, rng), rng));
    });
    double acceptance = 0.0;
    const auto chain =
        coulomb_chain_targets(McmcConfig{}, n, mix64(seed ^ kTagCrossCheck), samples, &acceptance);

    const double mw = mean_of(wishart), mc = mean_of(chain);
    const double se_w = sample_std(wishart) / std::sqrt(static_cast<double>(wishart.size()));
    const double se_c = batch_means_stderr(chain);
    const double combined = std::sqrt(se_w * se_w + se_c * se_c);

    CheckResult r;
    r.name = "Metropolis vs Wishart mean A_N, N=" + std::to_string(n);
    r.value = mc;
    r.reference = mw;
    r.tolerance = sigmas * combined;
    r.passed = std::abs(mc - mw) <= r.tolerance;
    r.detail = "chain " + fmt(mc) + " vs Wishart " + fmt(mw) + ", |diff| " + fmt(std::abs(mc - mw)) + " <= " +
               fmt(sigmas) + " x combined SE " + fmt(combined) + "; acceptance " + fmt(acceptance);
    return r;
}

std::vector<CheckResult> run_validation(std::uint64_t seed, int threads) {
    std::vector<CheckResult> out;
    out.push_back(check_catalan_series());
    out.push_back(check_secant_integral());
    out.push_back(check_lue_relation());
    std::vector<int> ks;
    for (int k = 2; k <= 64; ++k) ks.push_back(k);
    for (auto& r : check_c_k_quadrature(ks)) out.push_back(std::move(r));
    out.push_back(check_marchenko_pastur_ks(100, 1000, seed, 0.05, threads));
    out.push_back(check_sqrt_pair_wishart(100'000, seed, 0.003, threads));
    out.push_back(check_sqrt_pair_metropolis(100'000, seed, 0.003));
    out.push_back(check_metropolis_vs_wishart(2, 100'000, seed, 3.0, threads));
    out.push_back(check_metropolis_vs_wishart(50, 1000, seed, 3.0, threads));
    return out;
}

}  // namespace bellrmt
