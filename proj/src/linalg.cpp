#include "bellrmt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bellrmt/error.hpp"

namespace bellrmt {
namespace {

void require_hermitian(const ComplexMatrix& h) {
    if (!h.is_square()) throw Error(ErrorCode::NonSquare, "eigenvalues requested for a non-square matrix");
    if (!h.all_finite()) throw Error(ErrorCode::NotHermitian, "matrix has non-finite entries");
    const double scale = h.max_abs();
    if (hermitian_defect(h) > kHermitianTolerance * scale) {
        std::ostringstream msg;
        msg << "||H - H^dagger||_max exceeds " << kHermitianTolerance << " * ||H||_max";
        throw Error(ErrorCode::NotHermitian, msg.str());
    }
}

Complex unit_phase(Complex z) {
    const double a = std::abs(z);
    return a == 0.0 ? Complex(1.0, 0.0) : z / a;
}

// Apply H = I - tau v v† from the left to rows [offset, offset + v.size()) and
// columns [col_begin, n) of a row-major square matrix.
void apply_reflector_left(ComplexMatrix& a, std::size_t offset, std::size_t col_begin,
                          std::span<const Complex> v, double tau, std::vector<Complex>& work) {
    const std::size_t n = a.cols();
    const std::size_t width = n - col_begin;
    if (width == 0) return;
    work.assign(width, Complex(0.0, 0.0));
    double* w = reinterpret_cast<double*>(work.data());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double vr = v[i].real(), vi = -v[i].imag();
        const double* row = reinterpret_cast<const double*>(a.row(offset + i).data() + col_begin);
#pragma omp simd
        for (std::size_t c = 0; c < width; ++c) {
            const double xr = row[2 * c], xi = row[2 * c + 1];
            w[2 * c] += vr * xr - vi * xi;
            w[2 * c + 1] += vr * xi + vi * xr;
        }
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double sr = tau * v[i].real(), si = tau * v[i].imag();
        double* row = reinterpret_cast<double*>(a.row(offset + i).data() + col_begin);
#pragma omp simd
        for (std::size_t c = 0; c < width; ++c) {
            const double wr = w[2 * c], wi = w[2 * c + 1];
            row[2 * c] -= sr * wr - si * wi;
            row[2 * c + 1] -= sr * wi + si * wr;
        }
    }
}

}  // namespace

std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> off, int max_iterations) {
    const int n = static_cast<int>(d.size());
    if (n == 0) throw Error(ErrorCode::InvalidDimension, "empty tridiagonal matrix");
    if (static_cast<int>(off.size()) != n - 1) {
        throw Error(ErrorCode::DimensionMismatch, "off-diagonal must have n-1 entries");
    }
    std::vector<double> e(off);
    e.push_back(0.0);

    int iterations = 0;
    for (int l = 0; l < n; ++l) {
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m == l) break;
            if (++iterations > max_iterations) {
                throw Error(ErrorCode::NoConvergence,
                            "implicit QL exceeded " + std::to_string(max_iterations) + " iterations");
            }
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            int i = m - 1;
            bool underflow = false;
            for (; i >= l; --i) {
                const double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

HermitianSpectrum hermitian_eigenvalues(const ComplexMatrix& h) {
    require_hermitian(h);
    const std::size_t n = h.rows();
    if (n == 1) return {{h(0, 0).real()}};

    // Only the lower triangle of `a` is read or written below.
    ComplexMatrix a = h;
    std::vector<double> diag(n);
    std::vector<double> off(n - 1);
    std::vector<Complex> v(n), p(n);

    for (std::size_t k = 0; k + 1 < n; ++k) {
        diag[k] = a(k, k).real();
        const std::size_t base = k + 1;
        const std::size_t m = n - base;

        double xnorm2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) xnorm2 += std::norm(a(base + i, k));
        const double xnorm = std::sqrt(xnorm2);
        off[k] = xnorm;
        if (m == 1 || xnorm == 0.0) continue;

        const Complex x0 = a(base, k);
        const Complex alpha = -unit_phase(x0) * xnorm;
        for (std::size_t i = 0; i < m; ++i) v[i] = a(base + i, k);
        v[0] -= alpha;
        const double tau = 2.0 / (2.0 * xnorm2 + 2.0 * std::abs(x0) * xnorm);

        // p = tau * B v, B the trailing Hermitian block, from its lower triangle.
        std::fill_n(p.begin(), m, Complex(0.0, 0.0));
        double* pd = reinterpret_cast<double*>(p.data());
        const double* vd = reinterpret_cast<const double*>(v.data());
        for (std::size_t i = 0; i < m; ++i) {
            const double* row = reinterpret_cast<const double*>(a.row(base + i).data() + base);
            const double vir = vd[2 * i], vii = vd[2 * i + 1];
            double re = 0.0, im = 0.0;
#pragma omp simd reduction(+ : re, im)
            for (std::size_t j = 0; j < i; ++j) {
                const double br = row[2 * j], bi = row[2 * j + 1];
                const double xr = vd[2 * j], xi = vd[2 * j + 1];
                re += br * xr - bi * xi;
                im += br * xi + bi * xr;
                // p_j += conj(B_ij) v_i
                pd[2 * j] += br * vir + bi * vii;
                pd[2 * j + 1] += br * vii - bi * vir;
            }
            const double bii = row[2 * i];
            pd[2 * i] += re + bii * vir;
            pd[2 * i + 1] += im + bii * vii;
        }
        Complex vp = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            p[i] *= tau;
            vp += std::conj(v[i]) * p[i];
        }
        const double half_k = 0.5 * tau * vp.real();
        for (std::size_t i = 0; i < m; ++i) p[i] -= half_k * v[i];  // p now holds q

        // B -= v q† + q v†, lower triangle only.
        for (std::size_t i = 0; i < m; ++i) {
            double* row = reinterpret_cast<double*>(a.row(base + i).data() + base);
            const double vir = vd[2 * i], vii = vd[2 * i + 1];
            const double qir = pd[2 * i], qii = pd[2 * i + 1];
#pragma omp simd
            for (std::size_t j = 0; j <= i; ++j) {
                const double qjr = pd[2 * j], qji = pd[2 * j + 1];
                const double vjr = vd[2 * j], vji = vd[2 * j + 1];
                // v_i conj(q_j) + q_i conj(v_j)
                row[2 * j] -= vir * qjr + vii * qji + qir * vjr + qii * vji;
                row[2 * j + 1] -= vii * qjr - vir * qji + qii * vjr - qir * vji;
            }
        }
    }
    diag[n - 1] = a(n - 1, n - 1).real();

    const int cap = static_cast<int>(64 * n);
    try {
        return {tridiagonal_eigenvalues(std::move(diag), std::move(off), cap)};
    } catch (const Error& err) {
        if (err.code() != ErrorCode::NoConvergence) throw;
        std::ostringstream msg;
        msg << "QL did not converge for " << n << "x" << n << " matrix (content hash 0x" << std::hex
            << h.content_hash() << ")";
        throw Error(ErrorCode::NoConvergence, msg.str());
    }
}

HermitianSpectrum hermitian_eigenvalues_jacobi(const ComplexMatrix& h) {
    require_hermitian(h);
    const std::size_t n = h.rows();
    const std::size_t m = 2 * n;
    std::vector<double> s(m * m);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return s[i * m + j]; };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double re = h(i, j).real(), im = h(i, j).imag();
            at(i, j) = re;
            at(i + n, j + n) = re;
            at(i, j + n) = -im;
            at(i + n, j) = im;
        }
    }

    const std::size_t max_sweeps = 64 * n;
    std::size_t sweep = 0;
    for (;; ++sweep) {
        double off_norm = 0.0, diag_norm = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            diag_norm += at(i, i) * at(i, i);
            for (std::size_t j = i + 1; j < m; ++j) off_norm += at(i, j) * at(i, j);
        }
        if (off_norm <= 1e-30 * std::max(diag_norm, 1e-300)) break;
        if (sweep >= max_sweeps) {
            throw Error(ErrorCode::NoConvergence, "Jacobi exceeded " + std::to_string(max_sweeps) + " sweeps");
        }
        for (std::size_t p = 0; p + 1 < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t k = 0; k < m; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - sn * akq;
                    at(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - sn * aqk;
                    at(q, k) = sn * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> doubled(m);
    for (std::size_t i = 0; i < m; ++i) doubled[i] = at(i, i);
    std::sort(doubled.begin(), doubled.end());
    HermitianSpectrum out;
    out.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.values.push_back(0.5 * (doubled[2 * i] + doubled[2 * i + 1]));
    return out;
}

ComplexMatrix unitary_from_householder_seeds(std::span<const std::vector<Complex>> seeds) {
    const std::size_t n = seeds.size();
    if (n == 0) throw Error(ErrorCode::InvalidDimension, "no Householder seeds");
    std::vector<std::vector<Complex>> reflectors(n);
    std::vector<double> taus(n);
    std::vector<Complex> phases(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto& x = seeds[j];
        if (x.size() != n - j) {
            throw Error(ErrorCode::DimensionMismatch, "Householder seed " + std::to_string(j) + " must have length " +
                                                          std::to_string(n - j));
        }
        double xnorm2 = 0.0;
        for (const auto& z : x) xnorm2 += std::norm(z);
        const double xnorm = std::sqrt(xnorm2);
        if (!(xnorm > 0.0)) {
            throw Error(ErrorCode::RankDeficient, "zero Householder seed at column " + std::to_string(j));
        }
        const Complex alpha = -unit_phase(x[0]) * xnorm;
        reflectors[j] = x;
        reflectors[j][0] -= alpha;
        taus[j] = 2.0 / (2.0 * xnorm2 + 2.0 * std::abs(x[0]) * xnorm);
        phases[j] = unit_phase(alpha);
    }

    ComplexMatrix q = ComplexMatrix::identity(n);
    std::vector<Complex> work;
    for (std::size_t j = n; j-- > 0;) apply_reflector_left(q, j, j, reflectors[j], taus[j], work);

    for (std::size_t i = 0; i < n; ++i) {
        auto row = q.row(i);
        for (std::size_t j = 0; j < n; ++j) row[j] *= phases[j];
    }
    return q;
}

ComplexMatrix unitary_from_qr(const ComplexMatrix& g) {
    if (!g.is_square()) throw Error(ErrorCode::NonSquare, "unitary_from_qr expects a square matrix");
    const std::size_t n = g.rows();
    const double threshold = 1e-12 * std::sqrt(g.frobenius_norm_squared());

    // Reduce column by column; the sub-diagonal part of each reduced column seeds its reflector.
    ComplexMatrix a = g;
    std::vector<std::vector<Complex>> seeds(n);
    std::vector<Complex> work;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t m = n - j;
        auto& x = seeds[j];
        x.resize(m);
        double xnorm2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            x[i] = a(j + i, j);
            xnorm2 += std::norm(x[i]);
        }
        const double xnorm = std::sqrt(xnorm2);
        if (!(xnorm >= threshold) || xnorm == 0.0) {
            throw Error(ErrorCode::RankDeficient,
                        "|r_" + std::to_string(j) + "," + std::to_string(j) + "| below 1e-12*||G||; resample");
        }
        if (j + 1 == n) break;
        const Complex alpha = -unit_phase(x[0]) * xnorm;
        std::vector<Complex> v = x;
        v[0] -= alpha;
        const double tau = 2.0 / (2.0 * xnorm2 + 2.0 * std::abs(x[0]) * xnorm);
        apply_reflector_left(a, j, j + 1, v, tau, work);
    }
    return unitary_from_householder_seeds(seeds);
}

}  // namespace bellrmt
