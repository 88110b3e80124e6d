#include "bellrmt/analytic.hpp"

#include <cmath>
#include <numbers>

#include "json.hpp"

#include "bellrmt/error.hpp"
#include "bellrmt/quadrature.hpp"

namespace bellrmt::analytic {
namespace {

using std::numbers::pi;

void require_k(int k) {
    if (k < 2) {
        throw Error(ErrorCode::InvalidK, "the structured density needs k >= 2 (k = 1 has no density), got " +
                                             std::to_string(k));
    }
}

}  // namespace

double catalan_constant() { return kCatalan; }

double mp_density(double x) {
    if (!(x > 0.0 && x < 4.0)) return 0.0;
    return std::sqrt(4.0 - x) / (2.0 * pi * std::sqrt(x));
}

double mp_cdf(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 4.0) return 1.0;
    const double theta = std::asin(std::sqrt(x / 4.0));
    return (2.0 / pi) * (theta + std::sin(theta) * std::cos(theta));
}

double structured_support(int k) {
    require_k(k);
    return 4.0 * (k - 1.0) / k;
}

double structured_density(int k, double x) {
    const double upper = structured_support(k);
    if (!(x > 0.0 && x < upper)) return 0.0;
    const double kk = static_cast<double>(k);
    const double radicand = 4.0 * kk * (kk - 1.0) * x - kk * kk * x * x;
    if (radicand <= 0.0) return 0.0;
    return std::sqrt(radicand) / (2.0 * pi * (kk * x - x * x));
}

double c_k(int k) {
    require_k(k);
    const double kk = static_cast<double>(k);
    const double root = std::sqrt(kk - 1.0);
    // asin argument is exactly 1 at k = 2; clamp rounding just above it
    const double arg = std::min(1.0, 2.0 * root / kk);
    const double inner = 2.0 * root - (kk - 2.0) * std::asin(arg);
    return kk / (pi * pi) * inner * inner;
}

double c_k_quadrature(int k, double abs_tol) {
    require_k(k);
    const double kk = static_cast<double>(k);
    const double s = structured_support(k);
    // With x = s sin^2(t): mu_k(x) dx = k s cos^2 t / (pi ((k - s) + s cos^2 t)) dt and sqrt(x) = sqrt(s) sin t.
    auto weighted = [kk, s](double t) {
        const double c2 = std::cos(t) * std::cos(t);
        return kk * s * c2 / (pi * ((kk - s) + s * c2)) * std::sqrt(s) * std::sin(t);
    };
    return integrate_2d([&](double t, double u) { return weighted(t) * weighted(u); }, 0.0, pi / 2, 0.0, pi / 2,
                        abs_tol)
        .value;
}

double c_hs() { return 64.0 / (9.0 * pi * pi); }

double secant_double_integral() { return 8.0 * kCatalan / (pi * pi); }

double secant_double_integral_quadrature() {
    // With u = x - y the double integral collapses to int_0^1 (1 - u) sec(pi u / 2) du, whose
    // integrand tends to 2/pi at u = 1. sin(pi (1 - u) / 2) keeps cos accurate near there.
    auto f = [](double u) {
        const double w = 1.0 - u;
        return w / std::sin(pi * w / 2.0);
    };
    return integrate(f, 0.0, 1.0, 1e-13).value;
}

double asymptotic_mean(const Ensemble& ensemble) {
    const double secant = secant_double_integral();
    switch (ensemble.family) {
        case Family::HS:
        case Family::CoulombGas: return 2.0 - 2.0 * secant * c_hs();
        case Family::Structured: return 2.0 - 2.0 * secant * c_k(ensemble.k);
        case Family::MaxEntangled: return 2.0 - 2.0 * secant;
    }
    throw Error(ErrorCode::InvalidConfig, "unknown ensemble family");
}

double exact_mean_a2() { return 1.5 - 3.0 * pi / (16.0 * std::numbers::sqrt2); }

double exact_sqrt_pair_n2() { return 3.0 * pi / 32.0; }

LueRelationReport lue_relation_check(double tolerance) {
    // l = t^2 on each axis; exp(-2 l) is below 1e-34 past l = 40.
    const double upper = std::sqrt(40.0);
    auto weight = [](double t1, double t2) {
        const double l1 = t1 * t1, l2 = t2 * t2;
        const double diff = l1 - l2;
        return diff * diff * std::exp(-2.0 * (l1 + l2)) * 4.0 * t1 * t2;
    };
    const double z = integrate_2d(weight, 0.0, upper, 0.0, upper, 1e-12).value;
    const double moment =
        integrate_2d([&](double t1, double t2) { return weight(t1, t2) * t1 * t2; }, 0.0, upper, 0.0, upper, 1e-12)
            .value;

    LueRelationReport report;
    const int n = 2;
    const double eta = 1.0;
    report.lue_expectation = moment / z;
    report.gamma_factor = std::tgamma(n * n) / std::tgamma(n * n + eta) * std::pow(n, eta);
    report.fixed_trace_value = report.gamma_factor * report.lue_expectation;
    report.reference = exact_sqrt_pair_n2();
    report.deviation = std::abs(report.fixed_trace_value - report.reference);
    report.passed = report.deviation <= tolerance;
    return report;
}

AnalyticTable analytic_table(const std::vector<int>& structured_ks) {
    AnalyticTable table;
    table.mean_a2_hs = exact_mean_a2();
    table.mean_ainf_hs = asymptotic_mean(Ensemble::hs());
    for (int k : structured_ks) table.mean_ainf_structured[k] = asymptotic_mean(Ensemble::structured(k));
    table.catalan = catalan_constant();
    table.maxent_asymptote = asymptotic_mean(Ensemble::max_entangled());
    return table;
}

std::string to_json(const AnalyticTable& table) {
    nlohmann::ordered_json j;
    j["mean_a2_hs"] = table.mean_a2_hs;
    j["mean_ainf_hs"] = table.mean_ainf_hs;
    nlohmann::ordered_json structured = nlohmann::ordered_json::object();
    for (const auto& [k, v] : table.mean_ainf_structured) structured[std::to_string(k)] = v;
    j["mean_ainf_structured"] = structured;
    j["catalan"] = table.catalan;
    j["maxent_asymptote"] = table.maxent_asymptote;
    return j.dump(2);
}

}  // namespace bellrmt::analytic
