#pragma once

#include <string>
#include <vector>

#include "discomax/matrix.hpp"

namespace discomax {

// A regression dataset: feature matrix X, response matrix Y and the column
// labels they came from. Guaranteed finite, n >= 3, and the response columns
// are disjoint from the features by construction.
struct Dataset {
  Matrix x;
  Matrix y;
  std::vector<std::string> feature_names;
  std::vector<std::string> response_names;
  bool standardized = false;
};

/// Load a numeric CSV with a header row. All columns not named in
/// `response_columns` become features. Missing or non-numeric cells are
/// rejected with the offending row and column named; there is no imputation.
/// Standardization applies (x - mean) / std per feature column with a std
/// floor of 1e-12.
Dataset load_csv(const std::string& path, const std::vector<std::string>& response_columns,
                 bool standardize);

/// Read a header-plus-numeric-rows CSV into a matrix (the header is skipped).
Matrix read_csv_matrix(const std::string& path);

}  // namespace discomax
