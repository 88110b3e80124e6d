#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bellrmt {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix from_rows(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<Complex> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const Complex> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

    std::span<Complex> data() noexcept { return data_; }
    std::span<const Complex> data() const noexcept { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix operator*(const ComplexMatrix& rhs) const;
    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(double scale) noexcept;

    Complex trace() const;
    double frobenius_norm_squared() const noexcept;
    double max_abs() const noexcept;
    bool all_finite() const noexcept;

    /// FNV-1a over the raw entry bytes; used to identify a matrix in diagnostics.
    std::uint64_t content_hash() const noexcept;

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// A·A† for a square A; the result is Hermitian by construction (lower triangle mirrored).
ComplexMatrix gram(const ComplexMatrix& a);

/// max |H_ij - conj(H_ji)|
double hermitian_defect(const ComplexMatrix& h) noexcept;

}  // namespace bellrmt
