#include "bellrmt/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "bellrmt/error.hpp"

namespace bellrmt {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) {
        throw Error(ErrorCode::InvalidDimension, "matrix dimensions must be positive");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::size_t rows, std::size_t cols, std::vector<Complex> entries) {
    ComplexMatrix m(rows, cols);
    if (entries.size() != rows * cols) {
        throw Error(ErrorCode::DimensionMismatch, "entry count does not match rows*cols");
    }
    m.data_ = std::move(entries);
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
    ComplexMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        auto out_row = out.row(i);
        for (std::size_t l = 0; l < cols_; ++l) {
            const Complex a = (*this)(i, l);
            auto rhs_row = rhs.row(l);
            for (std::size_t j = 0; j < rhs.cols_; ++j) out_row[j] += a * rhs_row[j];
        }
    }
    return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
        throw Error(ErrorCode::DimensionMismatch, "matrix sum shape mismatch");
    }
    double* a = reinterpret_cast<double*>(data_.data());
    const double* b = reinterpret_cast<const double*>(rhs.data_.data());
    const std::size_t count = 2 * data_.size();
    for (std::size_t i = 0; i < count; ++i) a[i] += b[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(double scale) noexcept {
    for (auto& z : data_) z *= scale;
    return *this;
}

Complex ComplexMatrix::trace() const {
    if (!is_square()) throw Error(ErrorCode::NonSquare, "trace of a non-square matrix");
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return s;
}

double ComplexMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

bool ComplexMatrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(),
                       [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

std::uint64_t ComplexMatrix::content_hash() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto* bytes = reinterpret_cast<const unsigned char*>(data_.data());
    const std::size_t n = data_.size() * sizeof(Complex);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

ComplexMatrix gram(const ComplexMatrix& a) {
    if (!a.is_square()) throw Error(ErrorCode::NonSquare, "gram expects a square matrix");
    const std::size_t n = a.rows();
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* ai = reinterpret_cast<const double*>(a.row(i).data());
        for (std::size_t j = 0; j <= i; ++j) {
            const double* aj = reinterpret_cast<const double*>(a.row(j).data());
            double re = 0.0;
            double im = 0.0;
#pragma omp simd reduction(+ : re, im)
            for (std::size_t l = 0; l < n; ++l) {
                const double xr = ai[2 * l], xi = ai[2 * l + 1];
                const double yr = aj[2 * l], yi = aj[2 * l + 1];
                re += xr * yr + xi * yi;
                im += xi * yr - xr * yi;
            }
            out(i, j) = Complex(re, im);
            out(j, i) = Complex(re, -im);
        }
        out(i, i).imag(0.0);
    }
    return out;
}

double hermitian_defect(const ComplexMatrix& h) noexcept {
    double d = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j <= i; ++j) d = std::max(d, std::abs(h(i, j) - std::conj(h(j, i))));
    return d;
}

}  // namespace bellrmt
