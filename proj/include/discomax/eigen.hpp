#pragma once

#include <cstdint>
#include <vector>

#include "discomax/matrix.hpp"

namespace discomax {

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // column k pairs with values[k]
};

// Cyclic Jacobi eigendecomposition for symmetric matrices. Rotations sweep
// the upper triangle in a fixed order until the off-diagonal Frobenius norm
// drops below tol * ||A||_F, so identical inputs give identical output.
EigenDecomposition sym_eigen(const Matrix& a, double tol = 1e-13);

/// Moore-Penrose pseudoinverse of a symmetric PSD matrix. Eigenvalues below
/// rank_tol relative to the largest are treated as zero; an eigenvalue below
/// -rank_tol*||A||_F is rejected as not PSD.
Matrix pinv_psd(const Matrix& a, double rank_tol = 1e-12);

/// Pseudoinverse of a nonnegative diagonal matrix: entrywise reciprocal where
/// the entry exceeds rank_tol times the largest entry, zero elsewhere.
Matrix pinv_diag(const Matrix& d, double rank_tol = 1e-12);

struct SpectralRadius {
  double value = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

// Power iteration with a seeded random start. The magnitude estimate is the
// growth ||A v_k|| of the normalized iterate, which also resolves tied
// leading eigenvalues of opposite sign; convergence is declared when
// successive magnitudes differ by at most tol (relative above 1).
SpectralRadius spectral_radius(const Matrix& a, std::size_t max_iter, double tol,
                               std::uint64_t seed);

double min_eigenvalue(const Matrix& a);

/// True iff 0 ⪯ A and A ⪯ B, with eigenvalue slack -tol*||.||_F on each test.
bool psd_order_check(const Matrix& a, const Matrix& b, double tol);

}  // namespace discomax
