#include "discomax/distance_stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "discomax/eigen.hpp"

namespace discomax {

namespace {

bool numerically_constant(const Matrix& m) {
  return centered_frobenius(m) <= 1e-12 * std::max(1.0, frobenius_norm(m));
}

}  // namespace

DistanceMatrices pairwise_distances(const Matrix& points) {
  const std::size_t n = points.rows();
  if (n < 2) throw degenerate_error("pairwise_distances: need at least 2 rows");
  DistanceMatrices out{Matrix(n, n, 0.0), Matrix(n, n, 0.0)};
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k + 1; l < n; ++l) {
      double sq = 0.0;
      for (std::size_t j = 0; j < points.cols(); ++j) {
        const double d = points(k, j) - points(l, j);
        sq += d * d;
      }
      out.squared(k, l) = out.squared(l, k) = sq;
      const double d = std::sqrt(sq);
      out.plain(k, l) = out.plain(l, k) = d;
    }
  }
  return out;
}

Matrix double_center(const Matrix& m) {
  require_square(m, "double_center");
  const std::size_t n = m.rows();
  std::vector<double> rmean(n, 0.0), cmean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      rmean[i] += m(i, j);
      cmean[j] += m(i, j);
      grand += m(i, j);
    }
  const double dn = static_cast<double>(n);
  for (double& v : rmean) v /= dn;
  for (double& v : cmean) v /= dn;
  grand /= dn * dn;

  Matrix out(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = m(i, j) - rmean[i] - cmean[j] + grand;
  return out;
}

Matrix distance_adjacency(const Matrix& squared_distances) {
  Matrix s = double_center(squared_distances);
  s *= 0.5;
  return s;
}

Matrix graph_laplacian(const Matrix& adjacency) {
  require_square(adjacency, "graph_laplacian");
  const std::vector<double> degree = row_sums(adjacency);
  Matrix out = adjacency;
  out *= -1.0;
  for (std::size_t i = 0; i < out.rows(); ++i) out(i, i) += degree[i];
  return out;
}

double classical_dcov2(const Matrix& p, const Matrix& q) {
  if (p.rows() != q.rows())
    throw shape_error("classical_dcov2: row counts differ (" + std::to_string(p.rows()) +
                      " vs " + std::to_string(q.rows()) + ")");
  const std::size_t n = p.rows();
  const Matrix a = double_center(pairwise_distances(p).plain);
  const Matrix b = double_center(pairwise_distances(q).plain);
  const double val = dot(a, b) / (static_cast<double>(n) * static_cast<double>(n));
  return std::max(val, 0.0);
}

double classical_dcor2(const Matrix& p, const Matrix& q) {
  const double vxy = classical_dcov2(p, q);
  const double vx = classical_dcov2(p, p);
  const double vy = classical_dcov2(q, q);
  if (vx <= 1e-14 || vy <= 1e-14) return 0.0;
  return std::max(vxy / std::sqrt(vx * vy), 0.0);
}

LaplacianPair build_laplacians(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows())
    throw shape_error("build_laplacians: X and Y row counts differ");
  if (numerically_constant(y))
    throw degenerate_error("build_laplacians: response is constant");

  LaplacianPair pair;
  pair.lap_x = graph_laplacian(distance_adjacency(pairwise_distances(x).squared));
  pair.lap_y = graph_laplacian(distance_adjacency(pairwise_distances(y).squared));
  pair.diag_lap_x_pinv = pinv_diag(Matrix::diagonal(diagonal_of(pair.lap_x)));
  pair.response_energy = quad_trace(y, pair.lap_y);
  if (!(pair.response_energy > 0.0))
    throw degenerate_error("build_laplacians: response distance variance vanished");
  pair.stated_scale = static_cast<double>(x.rows()) / (2.0 * pair.response_energy);
  return pair;
}

LaplacianDcov laplacian_dcov2(const Matrix& xhat, const Matrix& lap) {
  require_square(lap, "laplacian_dcov2");
  if (lap.rows() != xhat.rows()) throw shape_error("laplacian_dcov2: shape mismatch");
  const double n = static_cast<double>(xhat.rows());
  LaplacianDcov out;
  out.raw_trace = quad_trace(xhat, lap);
  out.value = 2.0 * out.raw_trace / (n * n);
  return out;
}

double laplacian_dcor2(const Matrix& xhat, const LaplacianPair& pair, DcorMode mode) {
  if (xhat.rows() != pair.n()) throw shape_error("laplacian_dcor2: shape mismatch");
  if (numerically_constant(xhat))
    throw degenerate_error("laplacian_dcor2: embedding is constant");

  const double num = std::max(quad_trace(xhat, pair.lap_y), 0.0);
  const Matrix lap_xhat = graph_laplacian(distance_adjacency(pairwise_distances(xhat).squared));
  const double denom = std::max(quad_trace(xhat, lap_xhat), 0.0);
  if (!(denom > 0.0)) throw degenerate_error("laplacian_dcor2: embedding is constant");

  if (mode == DcorMode::as_stated) return pair.stated_scale * num / denom;
  return num / std::sqrt(denom * pair.response_energy);
}

}  // namespace discomax
