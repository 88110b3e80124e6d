#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace bellrmt {

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double reference = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

/// sup_x |F_n(x) - cdf(x)| for an ascending sample.
double ks_distance(std::span<const double> sorted, const std::function<double(double)>& cdf);

/// N * lambda pooled over `draws` HS spectra at dimension n. Ascending.
std::vector<double> pooled_scaled_hs_eigenvalues(int n, int draws, std::uint64_t seed, int threads = 0);

CheckResult check_catalan_series();
CheckResult check_secant_integral(double tolerance = 1e-6);
CheckResult check_lue_relation(double tolerance = 1e-6);
std::vector<CheckResult> check_c_k_quadrature(const std::vector<int>& ks, double tolerance = 1e-6);
CheckResult check_marchenko_pastur_ks(int n, int draws, std::uint64_t seed, double tolerance = 0.05,
                                      int threads = 0);

/// E sqrt(lambda_1 lambda_2) at N = 2 against 3 pi / 32, HS (Wishart) route.
CheckResult check_sqrt_pair_wishart(std::int64_t samples, std::uint64_t seed, double tolerance = 0.003,
                                    int threads = 0);
/// Same oracle from the Metropolis chain.
CheckResult check_sqrt_pair_metropolis(std::int64_t samples, std::uint64_t seed, double tolerance = 0.003);

/// Metropolis and Wishart means of A_N agree within `sigmas` combined standard errors.
/// The chain's standard error is taken from batch means.
CheckResult check_metropolis_vs_wishart(int n, std::int64_t samples, std::uint64_t seed, double sigmas = 3.0,
                                        int threads = 0);

/// Everything above, as run by the `validate` command.
std::vector<CheckResult> run_validation(std::uint64_t seed, int threads = 0);

}  // namespace bellrmt
