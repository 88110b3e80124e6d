#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bellrmt/complex_matrix.hpp"
#include "bellrmt/random_stream.hpp"

namespace bellrmt {

/// Normalized Schmidt coefficients of a bipartite pure state: lambda_i >= 0, sum = 1.
class SchmidtSpectrum {
public:
    /// Validates, clamps values in [-1e-14, 0) to zero and renormalizes.
    /// Throws InvalidDimension for N < 2 and NegativeEigenvalue below -1e-14.
    explicit SchmidtSpectrum(std::vector<double> lambdas);

    std::size_t size() const noexcept { return lambdas_.size(); }
    std::span<const double> lambdas() const noexcept { return lambdas_; }
    double operator[](std::size_t i) const noexcept { return lambdas_[i]; }

    friend bool operator==(const SchmidtSpectrum&, const SchmidtSpectrum&) = default;

private:
    struct Unchecked {};
    SchmidtSpectrum(Unchecked, std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {}
    friend SchmidtSpectrum shuffle_spectrum(const SchmidtSpectrum&, RandomStream&);

    std::vector<double> lambdas_;
};

/// Random-walk parameters for the fixed-trace Metropolis sampler.
/// A step_size of nullopt means 1/N.
struct McmcConfig {
    std::int64_t burn_in_sweeps = 10'000;
    std::int64_t thinning_sweeps = 100;
    std::optional<double> step_size;

    void validate() const;
    double step_for(std::size_t n) const { return step_size.value_or(1.0 / static_cast<double>(n)); }
};

enum class Family { HS, Structured, MaxEntangled, CoulombGas };

/// An ensemble without its dimension.
struct Ensemble {
    Family family = Family::HS;
    int k = 0;  // Structured only
    McmcConfig mcmc;  // CoulombGas only

    static Ensemble hs() { return {Family::HS, 0, {}}; }
    static Ensemble structured(int k) { return {Family::Structured, k, {}}; }
    static Ensemble max_entangled() { return {Family::MaxEntangled, 0, {}}; }
    static Ensemble coulomb_gas(McmcConfig cfg = {}) { return {Family::CoulombGas, 0, cfg}; }

    void validate() const;
    /// Short name used in files and on the command line: hs, structured, maxent, coulomb.
    std::string name() const;
    bool operator==(const Ensemble& o) const { return family == o.family && k == o.k; }
};

struct EnsembleSpec {
    Ensemble ensemble;
    int n = 2;

    void validate() const;
};

/// N x N matrix of independent complex Gaussians, real and imaginary parts each N(0, 1).
ComplexMatrix sample_ginibre(int n, RandomStream& rng);

/// Haar-random unitary with the law of phase-corrected QR of a Ginibre draw, built from
/// fresh Gaussian Householder seeds (see unitary_from_householder_seeds).
ComplexMatrix sample_haar_unitary(int n, RandomStream& rng);

/// Eigenvalues of X X† / tr(X X†), X Ginibre. Sorted ascending.
SchmidtSpectrum schmidt_hs(int n, RandomStream& rng);

/// Eigenvalues of S S† / tr(S S†), S a sum of k independent Haar unitaries. Sorted ascending.
/// k = 1 is the maximally entangled spectrum exactly.
SchmidtSpectrum schmidt_structured(int n, int k, RandomStream& rng);

/// lambda_i = 1/N.
SchmidtSpectrum schmidt_maxent(int n);

/// Uniformly random permutation of the entries (Fisher-Yates).
SchmidtSpectrum shuffle_spectrum(const SchmidtSpectrum& s, RandomStream& rng);

struct McmcRun {
    std::vector<SchmidtSpectrum> samples;
    double acceptance_rate = 0.0;
};

/// Metropolis chain on the simplex targeting prod_{i<j} (lambda_i - lambda_j)^2.
/// Moves transfer a uniform amount in (-step, step) between a random pair; one sweep
/// is N proposals. Emits n_samples states, thinning_sweeps apart, after burn_in_sweeps.
McmcRun metropolis_fixed_trace(int n, const McmcConfig& cfg, RandomStream& rng, std::int64_t n_samples);

/// One draw of the ensemble's spectrum, in exchangeable (shuffled) order for HS and
/// Structured. CoulombGas is not drawable per sample; use metropolis_fixed_trace.
SchmidtSpectrum draw_spectrum(const EnsembleSpec& spec, RandomStream& rng);

/// Retries applied to zero-probability linear-algebra failures before giving up.
inline constexpr int kMaxSamplerRetries = 3;

}  // namespace bellrmt
