#include "discomax/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "discomax/eigen.hpp"
#include "discomax/rng.hpp"

namespace discomax {

namespace {

constexpr double kStallStepNorm = 1e-14;
constexpr double kWClampLo = 1e-6;
constexpr double kWClampHi = 1.0;

bool numerically_constant(const Matrix& m) {
  return centered_frobenius(m) <= 1e-12 * std::max(1.0, frobenius_norm(m));
}

double lap_dcor2_or_zero(const Matrix& xhat, const LaplacianPair& pair, DcorMode mode) {
  if (numerically_constant(xhat)) return 0.0;
  return laplacian_dcor2(xhat, pair, mode);
}

void validate_config(const SolverConfig& cfg, std::size_t feature_count) {
  if (cfg.target_dim < 1) throw config_error("target_dim must be at least 1");
  if (cfg.target_dim > feature_count)
    throw config_error("target_dim " + std::to_string(cfg.target_dim) +
                       " exceeds the feature count " + std::to_string(feature_count));
  if (cfg.max_iter < 1) throw config_error("max_iter must be at least 1");
  if (!(cfg.loss_tol >= 0.0) || !std::isfinite(cfg.loss_tol))
    throw config_error("loss_tol must be a finite nonnegative number");
  if (cfg.w_schedule == WSchedule::fixed && !(cfg.w_fixed > 0.0))
    throw config_error("fixed w must be positive");
  if (cfg.gamma_policy == GammaPolicy::fixed &&
      (cfg.gamma_fixed == 0.0 || !std::isfinite(cfg.gamma_fixed)))
    throw config_error("fixed gamma must be finite and nonzero");
}

Matrix initial_embedding(const Matrix& xs, const Matrix& y, const SolverConfig& cfg) {
  const std::size_t n = xs.rows();
  const std::size_t d = cfg.target_dim;
  if (cfg.init == InitPolicy::gaussian) {
    Rng rng(cfg.seed);
    Matrix g(n, d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j) g(i, j) = rng.normal();
    const double norm_g = frobenius_norm(g);
    if (norm_g <= 0.0) throw degenerate_error("gaussian initialization produced a zero matrix");
    g *= frobenius_norm(xs) / norm_g;
    return g;
  }

  // feature_subset: the d columns of the prescaled features with the largest
  // individual classical dcor² against Y, kept in their original order.
  std::vector<std::pair<double, std::size_t>> scored(xs.cols());
  for (std::size_t j = 0; j < xs.cols(); ++j) {
    const Matrix col = select_columns(xs, {j});
    scored[j] = {classical_dcor2(col, y), j};
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.first > b.first;
  });
  std::vector<std::size_t> chosen(d);
  for (std::size_t j = 0; j < d; ++j) chosen[j] = scored[j].second;
  std::sort(chosen.begin(), chosen.end());
  return select_columns(xs, chosen);
}

}  // namespace

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::max_iter: return "max_iter";
    case StopReason::loss_tol: return "loss_tol";
    case StopReason::numerical_stall: return "numerical_stall";
  }
  return "unknown";
}

double loss_value(const Matrix& xhat, const LaplacianPair& pair, double w) {
  if (xhat.rows() != pair.n()) throw shape_error("loss_value: shape mismatch");
  return quad_trace(xhat, pair.lap_x) - w * quad_trace(xhat, pair.lap_y);
}

Matrix loss_gradient(const Matrix& xhat, const LaplacianPair& pair, double w) {
  if (xhat.rows() != pair.n()) throw shape_error("loss_gradient: shape mismatch");
  Matrix g = pair.lap_x * xhat;
  const Matrix h = pair.lap_y * xhat;
  for (std::size_t i = 0; i < g.size(); ++i)
    g.data()[i] = 2.0 * (g.data()[i] - w * h.data()[i]);
  return g;
}

Matrix cccp_step(const Matrix& prev, const LaplacianPair& pair, double w,
                 const Matrix& lap_x_pinv) {
  if (prev.rows() != pair.n()) throw shape_error("cccp_step: shape mismatch");
  require_same_shape(lap_x_pinv, pair.lap_x, "cccp_step pseudoinverse");
  Matrix out = lap_x_pinv * (pair.lap_y * prev);
  out *= w;
  return out;
}

Matrix mm_step(const Matrix& prev, const LaplacianPair& pair, double w) {
  if (prev.rows() != pair.n()) throw shape_error("mm_step: shape mismatch");
  const Matrix ly_prev = pair.lap_y * prev;
  const Matrix lx_prev = pair.lap_x * prev;
  Matrix out = prev;
  for (std::size_t i = 0; i < prev.rows(); ++i) {
    const double scale = 0.5 * pair.diag_lap_x_pinv(i, i);
    if (scale == 0.0) continue;  // zero-degree rows never move
    for (std::size_t j = 0; j < prev.cols(); ++j)
      out(i, j) += scale * (w * ly_prev(i, j) - lx_prev(i, j));
  }
  return out;
}

double choose_w(const Matrix& prev, const LaplacianPair& pair, WSchedule schedule,
                double fixed_value) {
  if (schedule == WSchedule::fixed) return fixed_value;
  const double dcor2 = laplacian_dcor2(prev, pair, DcorMode::normalized);
  return std::clamp(std::sqrt(std::max(dcor2, 0.0)), kWClampLo, kWClampHi);
}

GammaInterval gamma_interval(const Matrix& x, const Matrix& y) {
  const double nx = frobenius_norm(x);
  const double ny = frobenius_norm(y);
  if (!(nx > 0.0) || !(ny > 0.0))
    throw degenerate_error("gamma_interval: both matrices must have a positive norm");
  const double ratio = ny / nx;
  return {std::sqrt(0.2) * ratio, ratio};
}

Matrix prescale(const Matrix& x, double gamma) {
  if (gamma == 0.0 || !std::isfinite(gamma))
    throw config_error("prescale: gamma must be finite and nonzero");
  Matrix out = x;
  out *= gamma;
  return out;
}

double update_map_radius(const LaplacianPair& pair, std::uint64_t seed, double w) {
  const std::size_t n = pair.n();
  // I - 0.25 D⁺ (w·lap_y - lap_x) shares its spectrum with the symmetric
  // matrix I - 0.25 sqrt(D⁺) (w·lap_y - lap_x) sqrt(D⁺); the symmetric form
  // keeps the power-iteration magnitude estimate at or below the true radius.
  std::vector<double> root(n);
  for (std::size_t i = 0; i < n; ++i) root[i] = std::sqrt(pair.diag_lap_x_pinv(i, i));
  Matrix m = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (root[i] == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) -= 0.25 * root[i] * (w * pair.lap_y(i, j) - pair.lap_x(i, j)) * root[j];
  }
  return spectral_radius(m, 5000, 1e-10, seed).value;
}

double update_map_radius(const LaplacianPair& pair, std::uint64_t seed) {
  return update_map_radius(pair, seed, 1.0);
}

namespace {

EmbeddingResult run_impl(const Dataset& dataset, const SolverConfig& cfg,
                         const std::vector<std::size_t>& checkpoints,
                         std::vector<Matrix>* snapshots) {
  validate_config(cfg, dataset.x.cols());
  if (numerically_constant(dataset.x))
    throw degenerate_error("run: feature matrix is constant");

  EmbeddingResult result;
  double gamma = 1.0;
  if (cfg.gamma_policy == GammaPolicy::auto_midpoint)
    gamma = gamma_interval(dataset.x, dataset.y).midpoint();
  else if (cfg.gamma_policy == GammaPolicy::fixed)
    gamma = cfg.gamma_fixed;
  result.gamma_used = gamma;

  const Matrix xs = prescale(dataset.x, gamma);
  const LaplacianPair pair = build_laplacians(xs, dataset.y);
  Matrix lap_x_pinv;
  if (cfg.update == UpdateRule::cccp) lap_x_pinv = pinv_psd(pair.lap_x);

  Matrix xhat = initial_embedding(xs, dataset.y, cfg);
  const double anchor = frobenius_norm(xhat);
  if (!(anchor > 0.0)) throw degenerate_error("run: start embedding has zero norm");

  if (snapshots) snapshots->assign(checkpoints.size(), Matrix());
  auto capture = [&](std::size_t upto, const Matrix& value) {
    if (!snapshots) return;
    for (std::size_t c = 0; c < checkpoints.size(); ++c)
      if (checkpoints[c] == upto) (*snapshots)[c] = value;
  };
  capture(0, xhat);

  result.initial_dcor2_norm = lap_dcor2_or_zero(xhat, pair, DcorMode::normalized);
  {
    const double w0 = numerically_constant(xhat)
                          ? (cfg.w_schedule == WSchedule::fixed ? cfg.w_fixed : kWClampLo)
                          : choose_w(xhat, pair, cfg.w_schedule, cfg.w_fixed);
    result.initial_loss = loss_value(xhat, pair, w0);
  }

  result.stop_reason = StopReason::max_iter;
  double prev_loss = result.initial_loss;
  std::size_t executed = 0;
  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    const auto t0 = std::chrono::steady_clock::now();
    if (numerically_constant(xhat)) {
      // The iterate collapsed; nothing sensible left to compute.
      result.stop_reason = StopReason::numerical_stall;
      break;
    }
    const double w = choose_w(xhat, pair, cfg.w_schedule, cfg.w_fixed);

    Matrix next = cfg.update == UpdateRule::mm ? mm_step(xhat, pair, w)
                                               : cccp_step(xhat, pair, w, lap_x_pinv);
    if (!all_finite(next))
      throw nonfinite_error("run: iteration " + std::to_string(it) +
                            " produced non-finite values");
    const double norm_next = frobenius_norm(next);
    if (norm_next <= 1e-300) {
      result.stop_reason = StopReason::numerical_stall;
      break;
    }
    next *= anchor / norm_next;

    IterationRecord rec;
    rec.iter = it;
    rec.w = w;
    rec.step_norm = frobenius_norm(next - xhat);
    rec.loss = loss_value(next, pair, w);
    rec.dcor2_lap_norm = lap_dcor2_or_zero(next, pair, DcorMode::normalized);
    rec.dcor2_lap_stated = lap_dcor2_or_zero(next, pair, DcorMode::as_stated);
    rec.dcor2_classical = classical_dcor2(next, dataset.y);
    rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                 .count();
    result.trace.push_back(rec);

    xhat = std::move(next);
    executed = it;
    capture(it, xhat);

    if (rec.step_norm < kStallStepNorm) {
      result.stop_reason = StopReason::numerical_stall;
      break;
    }
    if (cfg.loss_tol > 0.0 &&
        std::fabs(rec.loss - prev_loss) < cfg.loss_tol * std::max(1.0, std::fabs(prev_loss))) {
      result.stop_reason = StopReason::loss_tol;
      break;
    }
    prev_loss = rec.loss;
  }

  if (snapshots)
    for (std::size_t c = 0; c < checkpoints.size(); ++c)
      if (checkpoints[c] > executed) (*snapshots)[c] = xhat;

  result.embedding = std::move(xhat);
  return result;
}

}  // namespace

EmbeddingResult run(const Dataset& dataset, const SolverConfig& config) {
  return run_impl(dataset, config, {}, nullptr);
}

EmbeddingResult run_with_snapshots(const Dataset& dataset, const SolverConfig& config,
                                   const std::vector<std::size_t>& checkpoints,
                                   std::vector<Matrix>& snapshots) {
  return run_impl(dataset, config, checkpoints, &snapshots);
}

}  // namespace discomax
