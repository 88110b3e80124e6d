#pragma once

#include <span>
#include <vector>

#include "bellrmt/complex_matrix.hpp"

namespace bellrmt {

/// Eigenvalues of a Hermitian matrix, ascending.
struct HermitianSpectrum {
    std::vector<double> values;
};

/// Relative tolerance on ||H - H†||_max accepted as Hermitian.
inline constexpr double kHermitianTolerance = 1e-10;

/// Householder reduction to real tridiagonal form followed by implicit QL.
/// Throws NonSquare, NotHermitian, or NoConvergence (after 64·N QL iterations).
HermitianSpectrum hermitian_eigenvalues(const ComplexMatrix& h);

/// Cyclic Jacobi on the real symmetric embedding [[A, -B], [B, A]] of H = A + iB.
/// O(N³) per sweep with a large constant; kept as an independent reference for tests.
HermitianSpectrum hermitian_eigenvalues_jacobi(const ComplexMatrix& h);

/// Eigenvalues of the real symmetric tridiagonal matrix with the given diagonal and
/// off-diagonal (off_diag.size() == diag.size() - 1). Ascending.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> off_diag,
                                            int max_iterations);

/// Q·D from the Householder QR of G, with D = diag(r_ii / |r_ii|).
/// Haar-distributed when G is Ginibre. Throws RankDeficient when some
/// |r_ii| < 1e-12·||G||_F.
ComplexMatrix unitary_from_qr(const ComplexMatrix& g);

/// H_0 H_1 ... H_{n-1} D, where H_j is the Householder reflector sending seeds[j]
/// (length n - j) to alpha_j e_1 with alpha_j = -phase(seeds[j][0]) ||seeds[j]||, acting on
/// coordinates j..n-1, and D = diag(alpha_j / |alpha_j|). The seeds of unitary_from_qr(G)
/// are the sub-diagonal parts of G's successively reduced columns; independent standard
/// complex Gaussian seeds therefore give a Haar unitary without factorizing anything.
ComplexMatrix unitary_from_householder_seeds(std::span<const std::vector<Complex>> seeds);

}  // namespace bellrmt
