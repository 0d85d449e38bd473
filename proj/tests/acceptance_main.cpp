// Acceptance suite: one deterministic check per release criterion, each
// printed as a single PASS/FAIL line. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "discomax/dataset.hpp"
#include "discomax/diagnostics.hpp"
#include "discomax/distance_stats.hpp"
#include "discomax/eigen.hpp"
#include "discomax/evaluation.hpp"
#include "discomax/solver.hpp"
#include "support.hpp"

using namespace discomax;
using json = nlohmann::json;
namespace fs = std::filesystem;
using testsupport::column_matrix;
using testsupport::make_synthetic;
using testsupport::random_matrix;
using testsupport::read_file;
using testsupport::rel_close;
using testsupport::run_command;
using testsupport::weighted_pair_energy;

namespace {

const std::string kBin = DISCOMAX_CLI_BIN;

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Laplacian quadratic trace vs the brute-force weighted pair sum.
bool criterion_lemma_oracle(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(1001);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 5 + rng.below(26);
    const std::size_t q = 1 + rng.below(5);
    const std::size_t d = 1 + rng.below(4);
    const Matrix y = random_matrix(rng, n, q);
    const Matrix xhat = random_matrix(rng, n, d);
    const Matrix s = distance_adjacency(pairwise_distances(y).squared);
    const Matrix lap_y = graph_laplacian(s);

    const double via_trace = quad_trace(xhat, lap_y);
    const double via_sum = weighted_pair_energy(s, xhat);
    const double denom = std::max({std::fabs(via_trace), std::fabs(via_sum), 1e-12});
    worst = std::max(worst, std::fabs(via_trace - via_sum) / denom);
  }
  const double elapsed = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "worst relative gap %.3e over 100 instances, %.2fs", worst,
                elapsed);
  detail = buf;
  return worst <= 1e-8 && elapsed < 10.0;
}

// 2. Tr(Xᵀ L_Y X) == Tr(Yᵀ L_X Y).
bool criterion_trace_symmetry(std::string& detail) {
  Rng rng(1001);  // same instance stream as criterion 1
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 5 + rng.below(26);
    const std::size_t q = 1 + rng.below(5);
    const std::size_t d = 1 + rng.below(4);
    const Matrix y = random_matrix(rng, n, q);
    const Matrix x = random_matrix(rng, n, d);
    const LaplacianPair pair = build_laplacians(x, y);
    const double a = quad_trace(x, pair.lap_y);
    const double b = quad_trace(y, pair.lap_x);
    worst = std::max(worst, std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-12}));
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "worst relative asymmetry %.3e", worst);
  detail = buf;
  return worst <= 1e-8;
}

// 3. Classical distance correlation properties.
bool criterion_classical_dcor(std::string& detail) {
  Rng rng(1003);
  double worst_affine = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 4 + rng.below(17);
    Matrix p(n, 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) p(i, 0) = rng.normal();
    const double a = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (0.1 + 2.0 * rng.uniform());
    const double b = 3.0 * rng.normal();
    Matrix q = p;
    for (std::size_t i = 0; i < n; ++i) q(i, 0) = a * q(i, 0) + b;
    worst_affine = std::max(worst_affine, std::fabs(classical_dcor2(p, q) - 1.0));
  }

  bool in_range = true;
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 4 + rng.below(17);
    const Matrix p = random_matrix(rng, n, 1 + rng.below(4));
    const Matrix q = random_matrix(rng, n, 1 + rng.below(3));
    const double v = classical_dcor2(p, q);
    in_range = in_range && v >= 0.0 && v <= 1.0 + 1e-10;
  }

  const Matrix line = column_matrix({0.0, 1.0, 2.0});
  const double pinned = std::fabs(classical_dcov2(line, line) - 360.0 / 729.0);

  char buf[160];
  std::snprintf(buf, sizeof buf, "affine gap %.3e, range ok %d, dcov2 gap %.3e", worst_affine,
                in_range ? 1 : 0, pinned);
  detail = buf;
  return worst_affine <= 1e-8 && in_range && pinned <= 1e-12;
}

// 4. Analytic differential vs central differences.
bool criterion_gradient(std::string& detail) {
  Rng rng(1004);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 5 + rng.below(16);
    const Matrix x = random_matrix(rng, n, 1 + rng.below(5));
    const Matrix y = random_matrix(rng, n, 1 + rng.below(2));
    const LaplacianPair pair = build_laplacians(x, y);
    const Matrix xhat = random_matrix(rng, n, 1 + rng.below(3));
    const double w = 0.1 + 0.9 * rng.uniform();
    worst = std::max(worst, grad_check(xhat, pair, w, 1e-5, 2000 + rep));
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "worst relative error %.3e over 20x20 directions", worst);
  detail = buf;
  return worst <= 1e-5;
}

// 5. CCCP loss is non-increasing along the produced iterates at fixed w.
bool criterion_cccp_monotone(std::string& detail) {
  Rng rng(1005);
  double worst_rise = 0.0;
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t n = 6 + rng.below(12);
    const Matrix x = random_matrix(rng, n, 1 + rng.below(4));
    const Matrix y = random_matrix(rng, n, 1 + rng.below(2));
    const LaplacianPair pair = build_laplacians(x, y);
    const Matrix lap_x_pinv = pinv_psd(pair.lap_x);
    const double w = 0.2 + 0.8 * rng.uniform();

    Matrix xhat = cccp_step(random_matrix(rng, n, 1 + rng.below(3)), pair, w, lap_x_pinv);
    double prev = loss_value(xhat, pair, w);
    for (int it = 0; it < 50; ++it) {
      xhat = cccp_step(xhat, pair, w, lap_x_pinv);
      const double loss = loss_value(xhat, pair, w);
      worst_rise = std::max(worst_rise, (loss - prev) / (1.0 + std::fabs(prev)));
      prev = loss;
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "worst normalized rise %.3e over 25x50 steps", worst_rise);
  detail = buf;
  return worst_rise <= 1e-8;
}

// 6. MM update is a bit-exact fixed point when w*L_Y equals L_X.
bool criterion_mm_fixed_point(std::string& detail) {
  Rng rng(1006);
  double worst = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n = 5 + rng.below(12);
    const Matrix x = random_matrix(rng, n, 1 + rng.below(4));
    const LaplacianPair pair = build_laplacians(x, x);
    const Matrix prev = random_matrix(rng, n, 1 + rng.below(3));
    worst = std::max(worst, max_abs_diff(mm_step(prev, pair, 1.0), prev));
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "worst fixed-point drift %.3e", worst);
  detail = buf;
  return worst <= 1e-12;
}

// 7. PSD-ordered instances keep the update-map radius at or below one.
bool criterion_ostrowski(std::string& detail) {
  Rng rng(1007);
  int passing = 0;
  double worst_radius = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    Matrix x = random_matrix(rng, 5 + rng.below(10), 2 + rng.below(3));
    Matrix y;
    if (rep % 4 == 0) {
      // Constructed near-boundary instances guarantee gate coverage.
      const double c = 1.001 + 0.02 * rng.uniform();
      y = c * x;
    } else {
      y = random_matrix(rng, x.rows(), 1 + rng.below(3));
    }
    const LaplacianPair pair = build_laplacians(x, y);
    Matrix gap = pair.lap_y - pair.lap_x;
    gap *= 2.0;
    Matrix bound(pair.n(), pair.n(), 0.0);
    for (std::size_t i = 0; i < pair.n(); ++i) bound(i, i) = 8.0 * pair.lap_x(i, i);
    if (!psd_order_check(gap, bound, 1e-9)) continue;
    ++passing;
    worst_radius = std::max(worst_radius, update_map_radius(pair, 3000 + rep));
  }
  char buf[140];
  std::snprintf(buf, sizeof buf, "%d gate-passing instances, worst radius %.9f", passing,
                worst_radius);
  detail = buf;
  return passing >= 20 && worst_radius <= 1.0 + 1e-6;
}

// 8. Gamma interval arithmetic and the auto-midpoint trace inequality.
bool criterion_gamma_interval(std::string& detail) {
  Rng rng(1008);
  double worst_lo = 0.0, worst_hi = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix x = random_matrix(rng, 4 + rng.below(12), 1 + rng.below(5));
    Matrix y = random_matrix(rng, x.rows(), 1 + rng.below(3));
    y *= frobenius_norm(x) / frobenius_norm(y);  // equal Frobenius norms
    const GammaInterval gi = gamma_interval(x, y);
    worst_lo = std::max(worst_lo, std::fabs(gi.lo - std::sqrt(0.2)));
    worst_hi = std::max(worst_hi, std::fabs(gi.hi - 1.0));
  }

  bool trace_ok = true;
  for (int rep = 0; rep < 50; ++rep) {
    const Matrix x = random_matrix(rng, 4 + rng.below(12), 1 + rng.below(5));
    const Matrix y = random_matrix(rng, x.rows(), 1 + rng.below(3));
    const double gamma = gamma_interval(x, y).midpoint();
    const double tr_x = frobenius_norm(x) * frobenius_norm(x);
    const double tr_y = frobenius_norm(y) * frobenius_norm(y);
    trace_ok = trace_ok && gamma * gamma * tr_x <= tr_y * (1.0 + 1e-10);
  }

  char buf[140];
  std::snprintf(buf, sizeof buf, "endpoint gaps %.3e / %.3e, trace inequality ok %d", worst_lo,
                worst_hi, trace_ok ? 1 : 0);
  detail = buf;
  return worst_lo <= 1e-12 && worst_hi <= 1e-12 && trace_ok;
}

SolverConfig end_to_end_config(std::uint64_t seed) {
  SolverConfig cfg;
  cfg.target_dim = 2;
  cfg.update = UpdateRule::mm;
  cfg.w_schedule = WSchedule::dcor_per_iteration;
  cfg.gamma_policy = GammaPolicy::auto_midpoint;
  cfg.max_iter = 300;
  cfg.seed = seed;
  return cfg;
}

// 9. End-to-end improvement of the normalized dcor² on synthetic data.
bool criterion_end_to_end(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  int improved = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset ds = make_synthetic(4000 + seed);
    const EmbeddingResult result = run(ds, end_to_end_config(seed));
    if (!result.trace.empty() &&
        result.trace.back().dcor2_lap_norm >= result.initial_dcor2_norm)
      ++improved;
  }

  // Trace file shape, produced through the real CLI.
  const fs::path dir = fs::temp_directory_path() / "discomax_acceptance_e2e";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string data = (dir / "data.csv").string();
  testsupport::write_dataset_csv(make_synthetic(4000), data);
  const auto cmd = run_command(kBin + " embed --input " + data +
                               " --response y --dim 2 --iters 300 --update mm --w dcor"
                               " --gamma auto --init gaussian --seed 0 --out " +
                               (dir / "emb.csv").string() + " --trace " +
                               (dir / "trace.json").string());
  bool trend_ok = false;
  std::size_t records = 0;
  if (cmd.exit_code == 0) {
    const json trace = json::parse(read_file((dir / "trace.json").string()));
    records = trace.size();
    const std::size_t decile = std::max<std::size_t>(records / 10, 1);
    double first = 0.0, last = 0.0;
    for (std::size_t i = 0; i < decile; ++i) {
      first += trace[i]["dcor2_lap_norm"].get<double>();
      last += trace[records - 1 - i]["dcor2_lap_norm"].get<double>();
    }
    trend_ok = last >= first;
  }

  const double elapsed = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/10 seeds improved, trace records %zu, trend ok %d, %.1fs",
                improved, records, trend_ok ? 1 : 0, elapsed);
  detail = buf;
  return improved >= 9 && trend_ok && elapsed < 60.0;
}

// 10. Cross-validated k-NN on the learned embedding vs a random projection.
bool criterion_eval_protocol(std::string& detail) {
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset ds = make_synthetic(5000 + seed);
    const EmbeddingResult result = run(ds, end_to_end_config(seed));

    std::vector<double> y(ds.y.rows());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = ds.y(i, 0);
    const FoldPlan plan = kfold_plan(ds.x.rows(), 5, seed);

    const EvalReport ours = cv_rmse(result.embedding, y, plan, 5, "discomax");
    const Matrix projection = baseline_embeddings(ds.x, 2, seed).at("random_projection");
    const EvalReport baseline = cv_rmse(projection, y, plan, 5, "random_projection");
    if (ours.mean_rmse <= baseline.mean_rmse) ++wins;
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "%d/10 seeds at or below the random projection", wins);
  detail = buf;
  return wins >= 7;
}

// 11. Byte-identical outputs across two identical CLI runs.
bool criterion_determinism(std::string& detail) {
  const fs::path dir = fs::temp_directory_path() / "discomax_acceptance_det";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string data = (dir / "data.csv").string();
  testsupport::write_dataset_csv(make_synthetic(6000, 60, 6), data);

  const std::string cmd = kBin + " embed --input " + data +
                          " --response y --dim 2 --iters 40 --update mm --w dcor"
                          " --gamma auto --init gaussian --seed 17 --out " +
                          (dir / "emb.csv").string() + " --trace " +
                          (dir / "trace.json").string();
  if (run_command(cmd).exit_code != 0) {
    detail = "first run failed";
    return false;
  }
  const std::string emb1 = read_file((dir / "emb.csv").string());
  const std::string trace1 = read_file((dir / "trace.json").string());
  const std::string manifest1 = read_file((dir / "emb.manifest.json").string());
  if (run_command(cmd).exit_code != 0) {
    detail = "second run failed";
    return false;
  }
  const bool same = emb1 == read_file((dir / "emb.csv").string()) &&
                    trace1 == read_file((dir / "trace.json").string()) &&
                    manifest1 == read_file((dir / "emb.manifest.json").string());
  detail = same ? "embedding, trace and manifest bytes identical"
                : "outputs differ between runs";
  return same && !emb1.empty() && !trace1.empty() && !manifest1.empty();
}

struct Criterion {
  int id;
  const char* label;
  std::function<bool(std::string&)> fn;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "laplacian trace equals the brute-force pair sum", criterion_lemma_oracle},
      {2, "covariance trace symmetry", criterion_trace_symmetry},
      {3, "classical distance correlation properties", criterion_classical_dcor},
      {4, "gradient matches central differences", criterion_gradient},
      {5, "cccp monotonicity at fixed w", criterion_cccp_monotone},
      {6, "mm fixed point is bit-exact", criterion_mm_fixed_point},
      {7, "psd-gated update-map radius stays at or below one", criterion_ostrowski},
      {8, "gamma interval arithmetic", criterion_gamma_interval},
      {9, "end-to-end dcor improvement and trace trend", criterion_end_to_end},
      {10, "cv rmse at or below the random-projection baseline", criterion_eval_protocol},
      {11, "byte-identical reruns of cmd embed", criterion_determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    std::printf("criterion %2d: %s  %s (%s)\n", c.id, ok ? "PASS" : "FAIL", c.label,
                detail.c_str());
    std::fflush(stdout);
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
