#pragma once

#include <cstddef>

#include "discomax/matrix.hpp"

namespace discomax {

struct DistanceMatrices {
  Matrix squared;  // pairwise squared Euclidean distances between rows
  Matrix plain;    // entrywise square root of `squared`
};

/// Pairwise Euclidean distances between the rows of `points`; each pair is
/// computed once and mirrored, so both matrices are exactly symmetric.
DistanceMatrices pairwise_distances(const Matrix& points);

/// J M J with J = I - eeᵀ/n, computed entrywise as
/// M_kl - rowmean_k - colmean_l + grandmean.
Matrix double_center(const Matrix& m);

/// Half the double-centered squared-distance matrix: the weighted adjacency
/// underlying the Laplacian formulation. For row-centered data this equals
/// minus the centered Gram matrix.
Matrix distance_adjacency(const Matrix& squared_distances);

/// Degree(W) - W.
Matrix graph_laplacian(const Matrix& adjacency);

/// Squared sample distance covariance: mean entrywise product of the two
/// double-centered plain-distance matrices. Tiny negative roundoff is
/// clamped to zero.
double classical_dcov2(const Matrix& p, const Matrix& q);

/// Squared sample distance correlation; zero by convention when either
/// argument is (numerically) constant.
double classical_dcor2(const Matrix& p, const Matrix& q);

// Laplacians of the feature and response graphs plus the constants every
// downstream consumer needs, built once per (X, Y) pair.
struct LaplacianPair {
  Matrix lap_x;
  Matrix lap_y;
  Matrix diag_lap_x_pinv;        // pseudoinverse of Diag(lap_x)
  double stated_scale = 0.0;     // n / (2 Tr(Yᵀ lap_y Y))
  double response_energy = 0.0;  // Tr(Yᵀ lap_y Y)

  std::size_t n() const noexcept { return lap_x.rows(); }
};

LaplacianPair build_laplacians(const Matrix& x, const Matrix& y);

struct LaplacianDcov {
  double value = 0.0;      // (2/n²) · raw_trace
  double raw_trace = 0.0;  // Tr(X̂ᵀ L X̂)
};

LaplacianDcov laplacian_dcov2(const Matrix& xhat, const Matrix& lap);

enum class DcorMode {
  as_stated,   // stated_scale · Tr(X̂ᵀ lap_y X̂) / Tr(X̂ᵀ L_X̂ X̂)
  normalized,  // Tr(X̂ᵀ lap_y X̂) / sqrt(Tr(X̂ᵀ L_X̂ X̂) · response_energy), in [0, 1]
};

/// Laplacian-form squared distance correlation of an embedding against the
/// pair's response. The variance term is rebuilt from the embedding itself.
double laplacian_dcor2(const Matrix& xhat, const LaplacianPair& pair, DcorMode mode);

}  // namespace discomax
