#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "discomax/dataset.hpp"
#include "discomax/matrix.hpp"
#include "discomax/solver.hpp"

namespace discomax {

struct FoldPlan {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::size_t> assignments;  // fold index per sample
  std::uint64_t seed = 0;
};

/// Seeded permutation split round-robin into k folds whose sizes differ by
/// at most one.
FoldPlan kfold_plan(std::size_t n, std::size_t k, std::uint64_t seed);

/// k-nearest-neighbor regression: each prediction is the mean response of
/// the k nearest training rows by Euclidean distance, distance ties broken
/// by the lower row index.
std::vector<double> knn_predict(const Matrix& train_x, const std::vector<double>& train_y,
                                const Matrix& test_x, std::size_t k);

double rmse(const std::vector<double>& pred, const std::vector<double>& actual);

struct EvalReport {
  std::string method;
  std::vector<double> per_fold_rmse;
  double mean_rmse = 0.0;
  std::size_t dimension = 0;
  std::uint64_t seed = 0;
  std::size_t knn_k = 0;
};

EvalReport cv_rmse(const Matrix& features, const std::vector<double>& y, const FoldPlan& plan,
                   std::size_t knn_k, const std::string& method_name = "");

struct IterationSelection {
  std::size_t best_iteration = 0;
  std::vector<std::size_t> checkpoints;
  std::vector<EvalReport> reports;  // one per checkpoint
};

/// Runs the solver once to config.max_iter, snapshotting the embedding at
/// each checkpoint, and returns the checkpoint with the smallest mean CV
/// RMSE (ties go to the smallest iteration count). The embedding is computed
/// on all rows before cross-validation; only the regressor is cross-validated.
IterationSelection select_iterations_by_cv(const Dataset& dataset, const SolverConfig& config,
                                           const std::vector<std::size_t>& checkpoints,
                                           const FoldPlan& plan, std::size_t knn_k);

/// Reference embeddings: "identity" (the features unchanged) and
/// "random_projection" (X·G/sqrt(d) with a seeded Gaussian p×d matrix).
std::map<std::string, Matrix> baseline_embeddings(const Matrix& x, std::size_t d,
                                                  std::uint64_t seed);

}  // namespace discomax
