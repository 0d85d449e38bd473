#include "discomax/diagnostics.hpp"

#include <cmath>

#include "discomax/eigen.hpp"
#include "discomax/rng.hpp"

namespace discomax {

namespace {
constexpr double kPsdTol = 1e-9;
}

double grad_check(const Matrix& xhat, const LaplacianPair& pair, double w, double h,
                  std::uint64_t seed) {
  if (!(h > 0.0)) throw config_error("grad_check: h must be positive");
  const std::size_t n = xhat.rows();
  const std::size_t d = xhat.cols();

  // C·X̂ with C = lap_x - w·lap_y, shared across directions.
  Matrix cx = pair.lap_x * xhat;
  const Matrix ly_x = pair.lap_y * xhat;
  for (std::size_t i = 0; i < cx.size(); ++i) cx.data()[i] -= w * ly_x.data()[i];

  Rng rng(seed);
  const double floor = 1e-12 * (1.0 + 2.0 * frobenius_norm(cx));
  double worst = 0.0;
  for (int dir = 0; dir < 20; ++dir) {
    Matrix delta(n, d, 0.0);
    double norm_delta = 0.0;
    while (norm_delta == 0.0) {
      for (std::size_t i = 0; i < delta.size(); ++i) delta.data()[i] = rng.normal();
      norm_delta = frobenius_norm(delta);
    }
    delta *= 1.0 / norm_delta;

    const double analytic = 2.0 * dot(delta, cx);
    Matrix plus = xhat;
    Matrix minus = xhat;
    for (std::size_t i = 0; i < delta.size(); ++i) {
      plus.data()[i] += h * delta.data()[i];
      minus.data()[i] -= h * delta.data()[i];
    }
    const double numeric =
        (loss_value(plus, pair, w) - loss_value(minus, pair, w)) / (2.0 * h);

    const double denom = std::max({std::fabs(analytic), std::fabs(numeric), floor});
    if (denom > 0.0) worst = std::max(worst, std::fabs(analytic - numeric) / denom);
  }
  return worst;
}

TraceCondition trace_condition(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows()) throw shape_error("trace_condition: row counts differ");
  const double tr_x = frobenius_norm(x) * frobenius_norm(x);
  const double tr_y = frobenius_norm(y) * frobenius_norm(y);
  double row_norm_sum = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double sq = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) sq += x(i, j) * x(i, j);
    row_norm_sum += std::sqrt(sq);
  }
  TraceCondition cond;
  cond.lower_ok = tr_y >= tr_x;
  cond.upper_ok = tr_x + 4.0 * row_norm_sum >= tr_y;
  return cond;
}

bool trace_condition_check(const Matrix& x, const Matrix& y) {
  const TraceCondition cond = trace_condition(x, y);
  return cond.lower_ok && cond.upper_ok;
}

ConvergenceReport convergence_report(const Matrix& x, const Matrix& y, double gamma,
                                     std::uint64_t seed) {
  ConvergenceReport report;
  report.interval = gamma_interval(x, y);
  report.gamma_used = gamma;

  const Matrix xs = prescale(x, gamma);
  const LaplacianPair pair = build_laplacians(xs, y);
  const std::size_t n = pair.n();

  Matrix gap = pair.lap_y - pair.lap_x;
  gap *= 2.0;
  report.psd_lower_ok = min_eigenvalue(gap) >= -kPsdTol * frobenius_norm(gap);

  Matrix upper(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) upper(i, i) = 8.0 * pair.lap_x(i, i);
  upper -= gap;
  report.psd_upper_ok = min_eigenvalue(upper) >= -kPsdTol * frobenius_norm(upper);

  report.trace_condition_ok = trace_condition_check(xs, y);
  report.radius = update_map_radius(pair, seed);
  report.strong_attraction = report.radius < 1.0;
  return report;
}

}  // namespace discomax
