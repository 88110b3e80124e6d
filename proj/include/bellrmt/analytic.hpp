#pragma once

#include <map>
#include <string>
#include <vector>

#include "bellrmt/ensembles.hpp"

namespace bellrmt::analytic {

/// Catalan's constant G = sum_{n>=0} (-1)^n / (2n+1)^2.
inline constexpr double kCatalan = 0.91596559417721901505;

double catalan_constant();

/// Marchenko-Pastur density for square Wishart matrices at unit mean:
/// sqrt(4 - x) / (2 pi sqrt(x)) on (0, 4), zero elsewhere.
double mp_density(double x);

/// Closed-form CDF of mp_density: (2/pi)(theta + sin(theta)cos(theta)), x = 4 sin^2(theta).
double mp_cdf(double x);

/// Limiting density of the structured ensemble with k >= 2 terms:
/// sqrt(4k(k-1)x - k^2 x^2) / (2 pi (k x - x^2)) on (0, 4(k-1)/k). Throws InvalidK.
double structured_density(int k, double x);

/// Right end of the structured density's support, 4(k - 1)/k.
double structured_support(int k);

/// C_k = (k/pi^2)(2 sqrt(k-1) - (k-2) arcsin(2 sqrt(k-1)/k))^2, the limit of
/// (1/N^2) E sum_kl N sqrt(lambda_k lambda_l). Throws InvalidK for k < 2.
double c_k(int k);

/// The defining double integral of C_k, evaluated by iterated adaptive quadrature after
/// the substitution x = s sin^2(theta) on each axis (s the support width).
double c_k_quadrature(int k, double abs_tol = 1e-9);

/// The HS limit of C_k, 64 / (9 pi^2).
double c_hs();

/// (1/N^2) sum_{i<j} P_ij in the large-N limit, 8G / pi^2.
double secant_double_integral();

/// Numerical value of int_0^1 dx int_0^x dy sec(pi (x - y) / 2).
double secant_double_integral_quadrature();

/// Large-N mean of A_N. Accepts HS, Structured (k >= 2) and MaxEntangled.
double asymptotic_mean(const Ensemble& ensemble);

/// Exact HS mean at N = 2: 3/2 - 3 pi / (16 sqrt 2).
double exact_mean_a2();

/// E sqrt(lambda_1 lambda_2) for the N = 2 fixed-trace law, 3 pi / 32.
double exact_sqrt_pair_n2();

struct LueRelationReport {
    double lue_expectation = 0.0;    // E_LUE sqrt(lambda_1 lambda_2) by quadrature
    double gamma_factor = 0.0;       // Gamma(N^2) / Gamma(N^2 + eta) N^eta
    double fixed_trace_value = 0.0;  // gamma_factor * lue_expectation
    double reference = 0.0;          // 3 pi / 32
    double deviation = 0.0;
    bool passed = false;
};

/// Checks the fixed-trace / Laguerre moment relation at N = 2, eta = (1/2, 1/2), with
/// the LUE jpdf proportional to (l1 - l2)^2 exp(-2 (l1 + l2)) integrated numerically.
LueRelationReport lue_relation_check(double tolerance);

struct AnalyticTable {
    double mean_a2_hs = 0.0;
    double mean_ainf_hs = 0.0;
    std::map<int, double> mean_ainf_structured;
    double catalan = 0.0;
    double maxent_asymptote = 0.0;
};

/// Table for the given structured k values (each >= 2).
AnalyticTable analytic_table(const std::vector<int>& structured_ks = {2, 3, 6, 12});

/// JSON text of the table (keys as in AnalyticTable; structured keys are decimal k).
std::string to_json(const AnalyticTable& table);

}  // namespace bellrmt::analytic
