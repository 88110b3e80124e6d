#include "bellrmt/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bellrmt/error.hpp"
#include "bellrmt/linalg.hpp"
#include "bellrmt/summation.hpp"

namespace bellrmt {
namespace {

constexpr double kClampTolerance = 1e-14;

void require_dimension(int n, int min, const char* what) {
    if (n < min) {
        throw Error(ErrorCode::InvalidDimension,
                    std::string(what) + " requires N >= " + std::to_string(min) + ", got " + std::to_string(n));
    }
}

bool retryable(ErrorCode code) {
    return code == ErrorCode::RankDeficient || code == ErrorCode::NoConvergence ||
           code == ErrorCode::NegativeEigenvalue;
}

template <class Draw>
SchmidtSpectrum with_retries(const char* sampler, int n, RandomStream& rng, Draw draw) {
    for (int attempt = 0;; ++attempt) {
        try {
            return draw();
        } catch (const Error& err) {
            if (!retryable(err.code())) throw;
            if (attempt >= kMaxSamplerRetries) {
                std::ostringstream msg;
                msg << sampler << " failed at N=" << n << " after " << kMaxSamplerRetries
                    << " retries (master_seed=" << rng.master_seed() << ", stream_index=" << rng.stream_index()
                    << "): " << err.what();
                throw Error(ErrorCode::SamplingFailed, msg.str());
            }
        }
    }
}

SchmidtSpectrum normalized_gram_spectrum(const ComplexMatrix& x) {
    const ComplexMatrix m = gram(x);
    const double trace = m.trace().real();
    auto values = hermitian_eigenvalues(m).values;
    for (double& v : values) v /= trace;
    return SchmidtSpectrum(std::move(values));
}

}  // namespace

SchmidtSpectrum::SchmidtSpectrum(std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
    if (lambdas_.size() < 2) {
        throw Error(ErrorCode::InvalidDimension, "a Schmidt spectrum needs N >= 2");
    }
    for (double& v : lambdas_) {
        if (!std::isfinite(v)) throw Error(ErrorCode::NegativeEigenvalue, "non-finite Schmidt coefficient");
        if (v < -kClampTolerance) {
            std::ostringstream msg;
            msg << "Schmidt coefficient " << v << " below -1e-14";
            throw Error(ErrorCode::NegativeEigenvalue, msg.str());
        }
        if (v < 0.0) v = 0.0;
    }
    const double total = compensated_sum(lambdas_);
    if (!(total > 0.0)) throw Error(ErrorCode::NegativeEigenvalue, "Schmidt coefficients sum to zero");
    if (total != 1.0) {
        for (double& v : lambdas_) v /= total;
    }
}

void McmcConfig::validate() const {
    if (burn_in_sweeps < 0) throw Error(ErrorCode::InvalidConfig, "burn_in_sweeps must be >= 0");
    if (thinning_sweeps < 1) throw Error(ErrorCode::InvalidConfig, "thinning_sweeps must be >= 1");
    if (step_size && !(*step_size > 0.0)) {
        throw Error(ErrorCode::NonErgodicConfig, "step_size must be positive");
    }
}

void Ensemble::validate() const {
    if (family == Family::Structured && k < 1) {
        throw Error(ErrorCode::InvalidK, "structured ensemble requires k >= 1, got " + std::to_string(k));
    }
    if (family == Family::CoulombGas) mcmc.validate();
}

std::string Ensemble::name() const {
    switch (family) {
        case Family::HS: return "hs";
        case Family::Structured: return "structured";
        case Family::MaxEntangled: return "maxent";
        case Family::CoulombGas: return "coulomb";
    }
    return "unknown";
}

void EnsembleSpec::validate() const {
    ensemble.validate();
    require_dimension(n, 2, "ensemble");
}

ComplexMatrix sample_ginibre(int n, RandomStream& rng) {
    require_dimension(n, 1, "sample_ginibre");
    ComplexMatrix x(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (auto& z : x.data()) {
        const double re = rng.normal();
        const double im = rng.normal();
        z = Complex(re, im);
    }
    return x;
}

ComplexMatrix sample_haar_unitary(int n, RandomStream& rng) {
    require_dimension(n, 1, "sample_haar_unitary");
    std::vector<std::vector<Complex>> seeds(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        auto& x = seeds[static_cast<std::size_t>(j)];
        x.resize(static_cast<std::size_t>(n - j));
        for (auto& z : x) {
            const double re = rng.normal();
            const double im = rng.normal();
            z = Complex(re, im);
        }
    }
    return unitary_from_householder_seeds(seeds);
}

SchmidtSpectrum schmidt_hs(int n, RandomStream& rng) {
    require_dimension(n, 2, "schmidt_hs");
    return with_retries("schmidt_hs", n, rng, [&] { return normalized_gram_spectrum(sample_ginibre(n, rng)); });
}

SchmidtSpectrum schmidt_structured(int n, int k, RandomStream& rng) {
    require_dimension(n, 2, "schmidt_structured");
    if (k < 1) throw Error(ErrorCode::InvalidK, "structured ensemble requires k >= 1");
    if (k == 1) return schmidt_maxent(n);
    return with_retries("schmidt_structured", n, rng, [&] {
        ComplexMatrix sum = sample_haar_unitary(n, rng);
        for (int i = 1; i < k; ++i) sum += sample_haar_unitary(n, rng);
        return normalized_gram_spectrum(sum);
    });
}

SchmidtSpectrum schmidt_maxent(int n) {
    require_dimension(n, 2, "schmidt_maxent");
    return SchmidtSpectrum(std::vector<double>(static_cast<std::size_t>(n), 1.0 / n));
}

SchmidtSpectrum shuffle_spectrum(const SchmidtSpectrum& s, RandomStream& rng) {
    std::vector<double> out(s.lambdas().begin(), s.lambdas().end());
    for (std::size_t i = out.size(); i > 1; --i) {
        const std::size_t j = rng.below(i);
        std::swap(out[i - 1], out[j]);
    }
    return SchmidtSpectrum(SchmidtSpectrum::Unchecked{}, std::move(out));
}

McmcRun metropolis_fixed_trace(int n, const McmcConfig& cfg, RandomStream& rng, std::int64_t n_samples) {
    require_dimension(n, 2, "metropolis_fixed_trace");
    cfg.validate();
    if (n_samples < 1) throw Error(ErrorCode::InsufficientData, "n_samples must be >= 1");

    const std::size_t dim = static_cast<std::size_t>(n);
    const double step = cfg.step_for(dim);

    // Distinct, evenly spaced start so the Vandermonde factor is nonzero.
    std::vector<double> lambda(dim);
    const double norm = 0.5 * static_cast<double>(dim) * static_cast<double>(dim + 1);
    for (std::size_t i = 0; i < dim; ++i) lambda[i] = static_cast<double>(i + 1) / norm;

    std::int64_t proposals = 0;
    std::int64_t accepted = 0;

    auto sweep = [&] {
        for (std::size_t move = 0; move < dim; ++move) {
            const std::size_t i = rng.below(dim);
            std::size_t j = rng.below(dim - 1);
            if (j >= i) ++j;
            const double delta = step * (2.0 * rng.uniform() - 1.0);
            const double u = rng.uniform();
            ++proposals;

            const double li = lambda[i], lj = lambda[j];
            const double new_li = li - delta;
            const double new_lj = (li + lj) - new_li;
            if (new_li < 0.0 || new_lj < 0.0) continue;

            // log of the density ratio, with ratios multiplied in groups of 8 to limit log calls
            double log_ratio = std::log(std::abs((new_li - new_lj) / (li - lj)));
            double group = 1.0;
            int in_group = 0;
            for (std::size_t m = 0; m < dim; ++m) {
                if (m == i || m == j) continue;
                const double lm = lambda[m];
                group *= ((new_li - lm) * (new_lj - lm)) / ((li - lm) * (lj - lm));
                if (++in_group == 8) {
                    log_ratio += std::log(std::abs(group));
                    group = 1.0;
                    in_group = 0;
                }
            }
            log_ratio += std::log(std::abs(group));
            log_ratio *= 2.0;

            if (log_ratio >= 0.0 || u < std::exp(log_ratio)) {
                lambda[i] = new_li;
                lambda[j] = new_lj;
                ++accepted;
            }
        }
    };

    for (std::int64_t s = 0; s < cfg.burn_in_sweeps; ++s) sweep();

    McmcRun run;
    run.samples.reserve(static_cast<std::size_t>(n_samples));
    for (std::int64_t sample = 0; sample < n_samples; ++sample) {
        for (std::int64_t s = 0; s < cfg.thinning_sweeps; ++s) sweep();
        run.samples.emplace_back(lambda);
    }
    run.acceptance_rate = proposals == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
    return run;
}

SchmidtSpectrum draw_spectrum(const EnsembleSpec& spec, RandomStream& rng) {
    spec.validate();
    switch (spec.ensemble.family) {
        case Family::HS: return shuffle_spectrum(schmidt_hs(spec.n, rng), rng);
        case Family::Structured: return shuffle_spectrum(schmidt_structured(spec.n, spec.ensemble.k, rng), rng);
        case Family::MaxEntangled: return schmidt_maxent(spec.n);
        case Family::CoulombGas:
            throw Error(ErrorCode::InvalidConfig, "the Coulomb gas is sampled as a chain, not per draw");
    }
    throw Error(ErrorCode::InvalidConfig, "unknown ensemble family");
}

}  // namespace bellrmt
