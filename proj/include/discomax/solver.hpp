#pragma once

#include <cstdint>
#include <vector>

#include "discomax/dataset.hpp"
#include "discomax/distance_stats.hpp"
#include "discomax/matrix.hpp"

namespace discomax {

enum class UpdateRule { mm, cccp };
enum class WSchedule { fixed, dcor_per_iteration };
enum class GammaPolicy { auto_midpoint, fixed, off };
enum class InitPolicy { gaussian, feature_subset };
enum class StopReason { max_iter, loss_tol, numerical_stall };

const char* to_string(StopReason reason);

struct SolverConfig {
  std::size_t target_dim = 2;
  UpdateRule update = UpdateRule::mm;
  WSchedule w_schedule = WSchedule::dcor_per_iteration;
  double w_fixed = 1.0;  // used when w_schedule == fixed
  GammaPolicy gamma_policy = GammaPolicy::auto_midpoint;
  double gamma_fixed = 1.0;  // used when gamma_policy == fixed
  std::size_t max_iter = 100;
  double loss_tol = 0.0;  // relative loss-change stop; 0 disables
  std::uint64_t seed = 0;
  InitPolicy init = InitPolicy::gaussian;
};

struct IterationRecord {
  std::size_t iter = 0;
  double loss = 0.0;
  double dcor2_lap_norm = 0.0;
  double dcor2_lap_stated = 0.0;
  double dcor2_classical = 0.0;
  double w = 0.0;
  double step_norm = 0.0;
  double ms = 0.0;
};

using IterationTrace = std::vector<IterationRecord>;

struct GammaInterval {
  double lo = 0.0;
  double hi = 0.0;
  double midpoint() const noexcept { return 0.5 * (lo + hi); }
};

struct EmbeddingResult {
  Matrix embedding;
  double gamma_used = 1.0;
  IterationTrace trace;
  StopReason stop_reason = StopReason::max_iter;
  double initial_loss = 0.0;         // loss at the start embedding
  double initial_dcor2_norm = 0.0;   // normalized Laplacian dcor² at the start
};

/// Tr(X̂ᵀ lap_x X̂) - w · Tr(X̂ᵀ lap_y X̂).
double loss_value(const Matrix& xhat, const LaplacianPair& pair, double w);

/// 2 (lap_x - w·lap_y) X̂; matches the Fréchet differential of loss_value.
Matrix loss_gradient(const Matrix& xhat, const LaplacianPair& pair, double w);

/// Concave-convex step: w · lap_x⁺ · lap_y · X̂_prev. The caller supplies
/// pinv_psd(lap_x) so the decomposition happens once per run.
Matrix cccp_step(const Matrix& prev, const LaplacianPair& pair, double w,
                 const Matrix& lap_x_pinv);

/// Inversion-free majorization step:
/// X̂_prev + ½ Diag(lap_x)⁺ (w·lap_y - lap_x) X̂_prev.
/// Rows with a zero degree entry are left untouched by the correction.
Matrix mm_step(const Matrix& prev, const LaplacianPair& pair, double w);

/// Per-iteration weight. The dcor schedule returns the square root of the
/// normalized Laplacian dcor² of (prev, Y), clamped to [1e-6, 1].
double choose_w(const Matrix& prev, const LaplacianPair& pair, WSchedule schedule,
                double fixed_value);

/// Admissible prescale interval (sqrt(1/5)·r, r) with r = ||Y||_F / ||X||_F.
GammaInterval gamma_interval(const Matrix& x, const Matrix& y);

/// γ·X entrywise; γ must be nonzero.
Matrix prescale(const Matrix& x, double gamma);

// Spectral radius of the update-map stability matrix
//   I - 0.25 · Diag(lap_x)⁺ (lap_y - lap_x),
// the matrix whose radius the Ostrowski-style bound controls under
// 0 ⪯ 2(lap_y - lap_x) ⪯ 8 Diag(lap_x). Estimated by power iteration
// (5000 steps, tol 1e-10). The overload taking `w` scales lap_y by w.
double update_map_radius(const LaplacianPair& pair, std::uint64_t seed);
double update_map_radius(const LaplacianPair& pair, std::uint64_t seed, double w);

/// Full iteration: prescale per the gamma policy, build the Laplacians once,
/// initialize X̂₀ per config, then iterate the chosen update while recording a
/// per-iteration trace. Iterates are rescaled to the start norm each step
/// (the dcor statistics are scale-invariant, so this only guards against
/// floating-point overflow on norm-divergent instances).
EmbeddingResult run(const Dataset& dataset, const SolverConfig& config);

/// Same as run(), but stores copies of the embedding at the listed iteration
/// counts (0 means the start embedding). Checkpoints past the stopping
/// iteration receive the final embedding.
EmbeddingResult run_with_snapshots(const Dataset& dataset, const SolverConfig& config,
                                   const std::vector<std::size_t>& checkpoints,
                                   std::vector<Matrix>& snapshots);

}  // namespace discomax
