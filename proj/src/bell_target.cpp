#include "bellrmt/bell_target.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "bellrmt/error.hpp"
#include "bellrmt/summation.hpp"

namespace bellrmt {
namespace {

void require_kernel_dimension(int n) {
    if (n < 2) {
        throw Error(ErrorCode::InvalidDimension, "Bell kernel requires N >= 2, got " + std::to_string(n));
    }
}

}  // namespace

BellKernel::BellKernel(int n) : n_(n) {
    require_kernel_dimension(n);
    const std::size_t dim = static_cast<std::size_t>(n);
    secants_.resize(dim);
    secants_[0] = 1.0;
    for (std::size_t d = 1; d < dim; ++d) {
        secants_[d] = 1.0 / std::cos(static_cast<double>(d) * std::numbers::pi / (2.0 * n));
    }
    p_.resize(dim * dim);
    m_.resize(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            const double pij = secants_[i > j ? i - j : j - i];
            p_[i * dim + j] = pij;
            m_[i * dim + j] = (i == j ? 2.0 : 0.0) - pij / n;
        }
    }
}

BellKernel build_kernel(int n) { return BellKernel(n); }

std::shared_ptr<const BellKernel> cached_kernel(int n) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const BellKernel>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const BellKernel>(n);
    return slot;
}

double target_value(const BellKernel& kernel, const SchmidtSpectrum& s) {
    if (static_cast<std::size_t>(kernel.n()) != s.size()) {
        throw Error(ErrorCode::DimensionMismatch, "kernel N=" + std::to_string(kernel.n()) +
                                                      " but spectrum N=" + std::to_string(s.size()));
    }
    const std::size_t n = s.size();
    std::vector<double> roots(n);
    for (std::size_t i = 0; i < n; ++i) roots[i] = s[i] > 0.0 ? std::sqrt(s[i]) : 0.0;

    CompensatedSum off_diagonal;
    for (std::size_t i = 0; i < n; ++i) {
        if (roots[i] == 0.0) continue;
        double row = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) row += kernel.p(i, j) * roots[j];
        off_diagonal.add(roots[i] * row);
    }
    const double inv_n = 1.0 / kernel.n();
    return (2.0 - inv_n) * compensated_sum(s.lambdas()) - 2.0 * inv_n * off_diagonal.value();
}

double maxent_target(int n) {
    require_kernel_dimension(n);
    // sum_ij P_ij = N + 2 sum_{d>=1} (N - d) sec(d pi / 2N)
    CompensatedSum off;
    for (int d = 1; d < n; ++d) {
        off.add(static_cast<double>(n - d) / std::cos(d * std::numbers::pi / (2.0 * n)));
    }
    const double nn = static_cast<double>(n);
    return 2.0 - 1.0 / nn - 2.0 * off.value() / (nn * nn);
}

}  // namespace bellrmt
