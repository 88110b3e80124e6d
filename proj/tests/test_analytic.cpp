#include <cmath>
#include <numbers>
#include <string>

#include "bellrmt/analytic.hpp"
#include "bellrmt/error.hpp"
#include "bellrmt/quadrature.hpp"
#include "bellrmt/validation.hpp"
#include "doctest.h"

using namespace bellrmt;
using std::numbers::pi;

TEST_CASE("Catalan's constant") {
    CHECK(check_catalan_series().passed);
    double alternating = 0.0;
    for (int n = 0; n < 2'000'000; ++n) alternating += (n % 2 ? -1.0 : 1.0) / ((2.0 * n + 1) * (2.0 * n + 1));
    CHECK(std::abs(alternating - analytic::catalan_constant()) < 1e-12);
}

TEST_CASE("Marchenko-Pastur density and CDF") {
    CHECK(analytic::mp_density(1.0) == doctest::Approx(std::sqrt(3.0) / (2.0 * pi)).epsilon(1e-15));
    CHECK(analytic::mp_density(2.0) == doctest::Approx(1.0 / (2.0 * pi)).epsilon(1e-15));
    CHECK(analytic::mp_density(-1.0) == 0.0);
    CHECK(analytic::mp_density(4.5) == 0.0);
    CHECK(analytic::mp_cdf(0.0) == 0.0);
    CHECK(analytic::mp_cdf(4.0) == 1.0);
    for (double x : {0.3, 1.0, 2.5, 3.9}) {
        const double q = integrate(analytic::mp_density, 0.0, x, 1e-11, 5000).value;
        CHECK(analytic::mp_cdf(x) == doctest::Approx(q).epsilon(1e-8));
    }
}

TEST_CASE("structured density") {
    CHECK(analytic::structured_support(2) == 2.0);
    CHECK(analytic::structured_density(2, 1.0) == doctest::Approx(1.0 / pi).epsilon(1e-15));
    CHECK(analytic::structured_density(2, 2.5) == 0.0);
    CHECK_THROWS_AS(analytic::structured_density(1, 0.5), Error);
    for (int k : {2, 3, 6, 12, 64}) {
        const double s = analytic::structured_support(k);
        auto mu = [k](double x) { return analytic::structured_density(k, x); };
        // x = s sin^2(t) removes both endpoint singularities
        auto in_t = [&](auto f) {
            return integrate(
                       [&](double t) {
                           const double x = s * std::sin(t) * std::sin(t);
                           return f(x) * mu(x) * 2.0 * s * std::sin(t) * std::cos(t);
                       },
                       0.0, pi / 2, 1e-11, 5000)
                .value;
        };
        CHECK(in_t([](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(in_t([](double x) { return x; }) == doctest::Approx(1.0).epsilon(1e-9));
    }
    // Very large k approaches Marchenko-Pastur.
    for (double x : {0.5, 1.0, 2.0, 3.0}) {
        CHECK(analytic::structured_density(1'000'000, x) == doctest::Approx(analytic::mp_density(x)).epsilon(1e-5));
    }
}

TEST_CASE("MP moments: int x mu = 1 and int sqrt(x) mu = 8 / (3 pi)") {
    auto in_t = [](auto f) {
        return integrate(
                   [&](double t) {
                       const double x = 4.0 * std::sin(t) * std::sin(t);
                       return f(x) * analytic::mp_density(x) * 8.0 * std::sin(t) * std::cos(t);
                   },
                   0.0, pi / 2, 1e-12, 5000)
            .value;
    };
    CHECK(in_t([](double x) { return x; }) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(in_t([](double x) { return std::sqrt(x); }) == doctest::Approx(8.0 / (3.0 * pi)).epsilon(1e-10));
    CHECK(analytic::c_hs() == doctest::Approx(std::pow(8.0 / (3.0 * pi), 2)).epsilon(1e-15));
}

TEST_CASE("C_k closed form") {
    CHECK(analytic::c_k(2) == doctest::Approx(8.0 / (pi * pi)).epsilon(1e-14));
    CHECK(analytic::c_k(3) == doctest::Approx(0.775685520664267).epsilon(1e-13));
    CHECK(analytic::c_k(6) == doctest::Approx(0.746143340542436).epsilon(1e-13));
    CHECK(analytic::c_k(12) == doctest::Approx(0.732902165877479).epsilon(1e-13));
    CHECK(analytic::c_k(64) == doctest::Approx(0.722770944227466).epsilon(1e-13));
    CHECK_THROWS_AS(analytic::c_k(1), Error);
    // decreasing toward the HS value
    for (int k = 2; k < 200; ++k) CHECK(analytic::c_k(k + 1) < analytic::c_k(k));
    CHECK(analytic::c_k(1'000'000) == doctest::Approx(analytic::c_hs()).epsilon(1e-5));
}

TEST_CASE("C_k closed form matches quadrature for k = 2..64") {
    std::vector<int> ks;
    for (int k = 2; k <= 64; ++k) ks.push_back(k);
    for (const auto& r : check_c_k_quadrature(ks, 1e-6)) {
        INFO(r.detail);
        CHECK(r.passed);
    }
}

TEST_CASE("secant double integral") {
    CHECK(analytic::secant_double_integral() == doctest::Approx(0.742453745421544).epsilon(1e-14));
    CHECK(std::abs(analytic::secant_double_integral_quadrature() - analytic::secant_double_integral()) <= 1e-6);
}

TEST_CASE("asymptotic means") {
    CHECK(analytic::asymptotic_mean(Ensemble::hs()) == doctest::Approx(0.930114954157543).epsilon(1e-13));
    CHECK(analytic::asymptotic_mean(Ensemble::max_entangled()) == doctest::Approx(0.515092509156911).epsilon(1e-13));
    CHECK(analytic::asymptotic_mean(Ensemble::structured(2)) == doctest::Approx(0.796379323427236).epsilon(1e-13));
    CHECK(analytic::asymptotic_mean(Ensemble::structured(3)) == doctest::Approx(0.848178759827108).epsilon(1e-13));
    CHECK(analytic::asymptotic_mean(Ensemble::structured(6)) == doctest::Approx(0.892046164385851).epsilon(1e-13));
    CHECK(analytic::asymptotic_mean(Ensemble::structured(12)) == doctest::Approx(0.911708083833408).epsilon(1e-13));
    CHECK(analytic::exact_mean_a2() == doctest::Approx(1.08347972454765).epsilon(1e-14));
    CHECK(analytic::exact_sqrt_pair_n2() == doctest::Approx(3.0 * pi / 32.0).epsilon(1e-15));
}

TEST_CASE("LUE relation at N = 2") {
    const auto report = analytic::lue_relation_check(1e-6);
    CHECK(report.gamma_factor == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(report.passed);
    CHECK(report.deviation <= 1e-6);
}

TEST_CASE("analytic table JSON") {
    const std::string json = analytic::to_json(analytic::analytic_table());
    CHECK(json.find("\"mean_a2_hs\": 1.0834797245476") != std::string::npos);
    CHECK(json.find("\"mean_ainf_hs\": 0.93011495") != std::string::npos);
    CHECK(json.find("\"12\": 0.91170808") != std::string::npos);
    CHECK(json.find("\"maxent_asymptote\": 0.51509250") != std::string::npos);
}

TEST_CASE("quadrature") {
    const auto r = integrate([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-13);
    CHECK(r.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
    CHECK(r.error_estimate <= 1e-13);
    const auto s = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-9, 5000);
    CHECK(s.value == doctest::Approx(2.0).epsilon(1e-7));
    CHECK_THROWS_AS(integrate([](double) { return std::nan(""); }, 0.0, 1.0), Error);
    CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-12, 10), Error);
    const auto d = integrate_2d([](double x, double y) { return x * y; }, 0.0, 1.0, 0.0, 2.0);
    CHECK(d.value == doctest::Approx(1.0).epsilon(1e-12));
}
