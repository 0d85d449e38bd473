#include "discomax/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "discomax/rng.hpp"

namespace discomax {

FoldPlan kfold_plan(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw config_error("kfold_plan: need at least 2 folds");
  if (k > n) throw config_error("kfold_plan: fold count exceeds sample count");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(perm);

  FoldPlan plan{n, k, std::vector<std::size_t>(n, 0), seed};
  for (std::size_t i = 0; i < n; ++i) plan.assignments[perm[i]] = i % k;
  return plan;
}

std::vector<double> knn_predict(const Matrix& train_x, const std::vector<double>& train_y,
                                const Matrix& test_x, std::size_t k) {
  const std::size_t m = train_x.rows();
  if (m == 0 || train_y.empty()) throw degenerate_error("knn_predict: empty training set");
  if (train_y.size() != m) throw shape_error("knn_predict: response length mismatch");
  if (train_x.cols() != test_x.cols()) throw shape_error("knn_predict: feature width mismatch");
  if (k < 1 || k > m)
    throw config_error("knn_predict: k must be in [1, " + std::to_string(m) + "]");
  if (!all_finite(train_x) || !all_finite(test_x))
    throw nonfinite_error("knn_predict: non-finite input");

  std::vector<double> out(test_x.rows(), 0.0);
  std::vector<std::pair<double, std::size_t>> dist(m);
  for (std::size_t t = 0; t < test_x.rows(); ++t) {
    for (std::size_t i = 0; i < m; ++i) {
      double sq = 0.0;
      for (std::size_t j = 0; j < train_x.cols(); ++j) {
        const double d = train_x(i, j) - test_x(t, j);
        sq += d * d;
      }
      dist[i] = {sq, i};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += train_y[dist[i].second];
    out[t] = sum / static_cast<double>(k);
  }
  return out;
}

double rmse(const std::vector<double>& pred, const std::vector<double>& actual) {
  if (pred.size() != actual.size() || pred.empty())
    throw shape_error("rmse: vectors must be nonempty and of equal length");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - actual[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(pred.size()));
}

EvalReport cv_rmse(const Matrix& features, const std::vector<double>& y, const FoldPlan& plan,
                   std::size_t knn_k, const std::string& method_name) {
  if (features.rows() != plan.n || y.size() != plan.n)
    throw shape_error("cv_rmse: features/response/plan sizes disagree");

  EvalReport report;
  report.method = method_name;
  report.dimension = features.cols();
  report.seed = plan.seed;
  report.knn_k = knn_k;

  for (std::size_t fold = 0; fold < plan.k; ++fold) {
    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t i = 0; i < plan.n; ++i)
      (plan.assignments[i] == fold ? test_idx : train_idx).push_back(i);

    Matrix train_x(train_idx.size(), features.cols());
    Matrix test_x(test_idx.size(), features.cols());
    std::vector<double> train_y(train_idx.size()), test_y(test_idx.size());
    for (std::size_t r = 0; r < train_idx.size(); ++r) {
      for (std::size_t j = 0; j < features.cols(); ++j)
        train_x(r, j) = features(train_idx[r], j);
      train_y[r] = y[train_idx[r]];
    }
    for (std::size_t r = 0; r < test_idx.size(); ++r) {
      for (std::size_t j = 0; j < features.cols(); ++j) test_x(r, j) = features(test_idx[r], j);
      test_y[r] = y[test_idx[r]];
    }

    const std::vector<double> pred = knn_predict(train_x, train_y, test_x, knn_k);
    report.per_fold_rmse.push_back(rmse(pred, test_y));
  }

  double sum = 0.0;
  for (const double v : report.per_fold_rmse) sum += v;
  report.mean_rmse = sum / static_cast<double>(report.per_fold_rmse.size());
  return report;
}

IterationSelection select_iterations_by_cv(const Dataset& dataset, const SolverConfig& config,
                                           const std::vector<std::size_t>& checkpoints,
                                           const FoldPlan& plan, std::size_t knn_k) {
  if (checkpoints.empty()) throw config_error("select_iterations_by_cv: no checkpoints");
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    if (checkpoints[c] < 1 || checkpoints[c] > config.max_iter)
      throw config_error("select_iterations_by_cv: checkpoint out of range");
    if (c > 0 && checkpoints[c] <= checkpoints[c - 1])
      throw config_error("select_iterations_by_cv: checkpoints must be strictly ascending");
  }

  std::vector<Matrix> snapshots;
  run_with_snapshots(dataset, config, checkpoints, snapshots);

  std::vector<double> y(dataset.y.rows());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = dataset.y(i, 0);

  IterationSelection selection;
  selection.checkpoints = checkpoints;
  std::size_t best = 0;
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    selection.reports.push_back(cv_rmse(snapshots[c], y, plan, knn_k,
                                        "iter_" + std::to_string(checkpoints[c])));
    if (selection.reports[c].mean_rmse < selection.reports[best].mean_rmse) best = c;
  }
  selection.best_iteration = checkpoints[best];
  return selection;
}

std::map<std::string, Matrix> baseline_embeddings(const Matrix& x, std::size_t d,
                                                  std::uint64_t seed) {
  if (d < 1 || d > x.cols())
    throw config_error("baseline_embeddings: dimension must be in [1, feature count]");
  std::map<std::string, Matrix> out;
  out.emplace("identity", x);

  Rng rng(seed);
  Matrix g(x.cols(), d, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] = rng.normal();
  Matrix proj = x * g;
  proj *= 1.0 / std::sqrt(static_cast<double>(d));
  out.emplace("random_projection", std::move(proj));
  return out;
}

}  // namespace discomax
