#include "discomax/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "discomax/rng.hpp"

namespace discomax {

namespace {

constexpr double kSymmetryTol = 1e-10;  // absolute
constexpr int kMaxSweeps = 100;

double off_diag_norm(const Matrix& w) {
  double sum = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = i + 1; j < w.cols(); ++j) sum += 2.0 * w(i, j) * w(i, j);
  return std::sqrt(sum);
}

void check_symmetric(const Matrix& a, const char* what) {
  require_square(a, what);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (std::fabs(a(i, j) - a(j, i)) > kSymmetryTol)
        throw shape_error(std::string(what) + ": input is not symmetric");
}

}  // namespace

EigenDecomposition sym_eigen(const Matrix& a, double tol) {
  check_symmetric(a, "sym_eigen");
  const std::size_t n = a.rows();

  // Work on the symmetrized copy so sub-tolerance asymmetry cannot bias sweeps.
  Matrix w(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w(i, j) = 0.5 * (a(i, j) + a(j, i));
  Matrix v = Matrix::identity(n);

  const double norm_a = frobenius_norm(w);
  const double target = std::max(tol, 1e-15) * norm_a;
  if (norm_a > 0.0) {
    for (int sweep = 0; sweep < kMaxSweeps && off_diag_norm(w) > target; ++sweep) {
      for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
          const double apq = w(p, q);
          if (std::fabs(apq) <= 1e-300) {
            w(p, q) = w(q, p) = 0.0;
            continue;
          }
          const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
          const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
          const double c = 1.0 / std::sqrt(t * t + 1.0);
          const double s = t * c;

          w(p, p) -= t * apq;
          w(q, q) += t * apq;
          w(p, q) = w(q, p) = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            if (i == p || i == q) continue;
            const double wip = w(i, p);
            const double wiq = w(i, q);
            w(i, p) = w(p, i) = c * wip - s * wiq;
            w(i, q) = w(q, i) = s * wip + c * wiq;
          }
          for (std::size_t i = 0; i < n; ++i) {
            const double vip = v(i, p);
            const double viq = v(i, q);
            v(i, p) = c * vip - s * viq;
            v(i, q) = s * vip + c * viq;
          }
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return w(i, i) > w(j, j); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = w(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

Matrix pinv_psd(const Matrix& a, double rank_tol) {
  const EigenDecomposition eig = sym_eigen(a);
  const std::size_t n = a.rows();
  const double norm_a = frobenius_norm(a);
  if (!eig.values.empty() && eig.values.back() < -rank_tol * norm_a)
    throw not_psd_error("pinv_psd: eigenvalue " + std::to_string(eig.values.back()) +
                        " is below the PSD tolerance");

  const double lam_max = std::max(eig.values.empty() ? 0.0 : eig.values.front(), 0.0);
  const double thresh = rank_tol * lam_max;
  std::vector<double> inv(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (eig.values[i] > thresh) inv[i] = 1.0 / eig.values[i];

  // V diag(inv) Vᵀ, then symmetrize away the multiplication roundoff.
  Matrix scaled = eig.vectors;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= inv[j];
  Matrix out = scaled * transpose(eig.vectors);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = 0.5 * (out(i, j) + out(j, i));
      out(i, j) = out(j, i) = m;
    }
  return out;
}

Matrix pinv_diag(const Matrix& d, double rank_tol) {
  require_square(d, "pinv_diag");
  const std::size_t n = d.rows();
  double max_entry = 0.0;
  double max_off = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    max_entry = std::max(max_entry, std::fabs(d(i, i)));
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) max_off = std::max(max_off, std::fabs(d(i, j)));
  }
  if (max_off > 1e-10 * (1.0 + max_entry))
    throw shape_error("pinv_diag: input is not diagonal");

  const double neg_tol = rank_tol * frobenius_norm(d);
  Matrix out(n, n, 0.0);
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d(i, i) < -neg_tol)
      throw not_psd_error("pinv_diag: negative diagonal entry " + std::to_string(d(i, i)));
    max_diag = std::max(max_diag, d(i, i));
  }
  const double thresh = rank_tol * max_diag;
  for (std::size_t i = 0; i < n; ++i)
    if (d(i, i) > thresh) out(i, i) = 1.0 / d(i, i);
  return out;
}

SpectralRadius spectral_radius(const Matrix& a, std::size_t max_iter, double tol,
                               std::uint64_t seed) {
  require_square(a, "spectral_radius");
  if (max_iter < 1) throw config_error("spectral_radius: max_iter must be at least 1");
  const std::size_t n = a.rows();
  if (frobenius_norm(a) == 0.0) return {0.0, true, 0};

  Rng rng(seed);
  std::vector<double> v(n);
  double norm_v = 0.0;
  while (norm_v == 0.0) {
    for (double& x : v) x = rng.normal();
    norm_v = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  }
  for (double& x : v) x /= norm_v;

  double prev = -1.0;
  SpectralRadius result;
  for (std::size_t k = 1; k <= max_iter; ++k) {
    const std::vector<double> w = mat_vec(a, v);
    const double nw = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
    result.value = nw;
    result.iterations = k;
    if (nw <= 1e-300) {
      // Start vector fell into the kernel chain; nothing left to grow.
      result.value = 0.0;
      result.converged = true;
      return result;
    }
    if (k >= 2 && std::fabs(nw - prev) <= tol * std::max(1.0, nw)) {
      result.converged = true;
      return result;
    }
    prev = nw;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
  }
  return result;
}

double min_eigenvalue(const Matrix& a) { return sym_eigen(a).values.back(); }

bool psd_order_check(const Matrix& a, const Matrix& b, double tol) {
  require_same_shape(a, b, "psd_order_check");
  if (min_eigenvalue(a) < -tol * frobenius_norm(a)) return false;
  const Matrix diff = b - a;
  return min_eigenvalue(diff) >= -tol * frobenius_norm(diff);
}

}  // namespace discomax
