#pragma once

#include <memory>
#include <span>
#include <vector>

#include "bellrmt/ensembles.hpp"

namespace bellrmt {

/// Secant kernel P_ij = sec((i - j) pi / 2N) and the target matrix M_ij = 2 delta_ij - P_ij / N.
/// Immutable after construction.
class BellKernel {
public:
    explicit BellKernel(int n);

    int n() const noexcept { return n_; }
    double p(std::size_t i, std::size_t j) const noexcept { return p_[i * static_cast<std::size_t>(n_) + j]; }
    double m(std::size_t i, std::size_t j) const noexcept { return m_[i * static_cast<std::size_t>(n_) + j]; }

    /// sec(d pi / 2N) for |i - j| = d; P depends on the index distance only.
    double secant_at_distance(std::size_t d) const noexcept { return secants_[d]; }

private:
    int n_;
    std::vector<double> secants_;
    std::vector<double> p_;
    std::vector<double> m_;
};

/// Throws InvalidDimension for N < 2.
BellKernel build_kernel(int n);

/// Shared kernel for N, built on first use. Thread-safe.
std::shared_ptr<const BellKernel> cached_kernel(int n);

/// A_N = sum_ij M_ij sqrt(lambda_i lambda_j). Values below 1 violate local realism.
/// The diagonal contributes (2 - 1/N) sum lambda_i; the off-diagonal part is summed
/// over i < j with compensation. Throws DimensionMismatch.
double target_value(const BellKernel& kernel, const SchmidtSpectrum& s);

/// A_N at lambda_i = 1/N, i.e. 2 - (1/N^2) sum_ij P_ij.
double maxent_target(int n);

}  // namespace bellrmt
