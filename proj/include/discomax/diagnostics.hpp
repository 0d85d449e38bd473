#pragma once

#include <cstdint>

#include "discomax/distance_stats.hpp"
#include "discomax/matrix.hpp"
#include "discomax/solver.hpp"

namespace discomax {

/// Worst relative error between the analytic directional derivative
/// 2·Tr(Δᵀ(lap_x - w·lap_y)X̂) and a central finite difference of the loss,
/// over 20 seeded random unit directions.
double grad_check(const Matrix& xhat, const LaplacianPair& pair, double w, double h,
                  std::uint64_t seed);

struct TraceCondition {
  bool lower_ok = false;  // Tr(YYᵀ) >= Tr(XXᵀ)
  bool upper_ok = false;  // Tr(XXᵀ) + 4·Σᵢ ||X_i.|| >= Tr(YYᵀ)
};

TraceCondition trace_condition(const Matrix& x, const Matrix& y);

/// Both trace inequalities, evaluated literally.
bool trace_condition_check(const Matrix& x, const Matrix& y);

struct ConvergenceReport {
  GammaInterval interval;
  double gamma_used = 1.0;
  bool psd_lower_ok = false;       // 0 ⪯ 2(lap_y - lap_x)
  bool psd_upper_ok = false;       // 2(lap_y - lap_x) ⪯ 8·Diag(lap_x)
  bool trace_condition_ok = false;
  double radius = 0.0;             // spectral radius of the update-map matrix
  bool strong_attraction = false;  // radius < 1
};

/// Builds Laplacians over (γ·X, Y) and evaluates every stability check; the
/// PSD tests use eigenvalue slack -1e-9·||.||_F since centered Gram matrices
/// are singular by construction.
ConvergenceReport convergence_report(const Matrix& x, const Matrix& y, double gamma,
                                     std::uint64_t seed = 0);

}  // namespace discomax
