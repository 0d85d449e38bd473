#pragma once

// Shared helpers for the unit and acceptance suites: seeded instance
// generators, comparison helpers and the brute-force oracles the library
// results are checked against. Everything here is test-only and independent
// of the code paths under test.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "discomax/dataset.hpp"
#include "discomax/matrix.hpp"
#include "discomax/rng.hpp"

namespace testsupport {

inline bool rel_close(double a, double b, double tol) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  if (scale < 1e-12) return std::fabs(a - b) <= tol;
  return std::fabs(a - b) <= tol * scale;
}

inline discomax::Matrix random_matrix(discomax::Rng& rng, std::size_t n, std::size_t p,
                                      double spread = 1.0) {
  discomax::Matrix m(n, p, 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = spread * rng.normal();
  return m;
}

inline discomax::Matrix random_symmetric(discomax::Rng& rng, std::size_t n) {
  discomax::Matrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = rng.normal();
  return m;
}

inline discomax::Matrix random_psd(discomax::Rng& rng, std::size_t n, std::size_t rank) {
  const discomax::Matrix b = random_matrix(rng, n, rank);
  return b * discomax::transpose(b);
}

inline discomax::Matrix column_matrix(const std::vector<double>& values) {
  discomax::Matrix m(values.size(), 1, 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) m(i, 0) = values[i];
  return m;
}

// Independent of the Laplacian code path: 0.5 * Σ_ij S_ij * ||x_i - x_j||².
inline double weighted_pair_energy(const discomax::Matrix& s, const discomax::Matrix& points) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = 0; j < s.cols(); ++j) {
      double sq = 0.0;
      for (std::size_t c = 0; c < points.cols(); ++c) {
        const double d = points(i, c) - points(j, c);
        sq += d * d;
      }
      sum += s(i, j) * sq;
    }
  return 0.5 * sum;
}

// n samples, p features, y = x1² + x2 + noise_scale * eps.
inline discomax::Dataset make_synthetic(std::uint64_t seed, std::size_t n = 150,
                                        std::size_t p = 10, double noise_scale = 0.1) {
  discomax::Rng rng(seed);
  discomax::Dataset ds;
  ds.x = random_matrix(rng, n, p);
  ds.y = discomax::Matrix(n, 1, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    ds.y(i, 0) = ds.x(i, 0) * ds.x(i, 0) + ds.x(i, 1) + noise_scale * rng.normal();
  for (std::size_t j = 0; j < p; ++j) ds.feature_names.push_back("x" + std::to_string(j + 1));
  ds.response_names.push_back("y");
  return ds;
}

inline void write_dataset_csv(const discomax::Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  for (std::size_t j = 0; j < ds.feature_names.size(); ++j) out << ds.feature_names[j] << ',';
  out << ds.response_names[0] << '\n';
  char buf[40];
  for (std::size_t i = 0; i < ds.x.rows(); ++i) {
    for (std::size_t j = 0; j < ds.x.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", ds.x(i, j));
      out << buf << ',';
    }
    std::snprintf(buf, sizeof buf, "%.17g", ds.y(i, 0));
    out << buf << '\n';
  }
}

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

inline CommandResult run_command(const std::string& cmd) {
  const std::string capture = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                              "/discomax_cmd_capture." + std::to_string(getpid()) + ".txt";
  const int raw = std::system((cmd + " > " + capture + " 2>&1").c_str());
  CommandResult result;
  result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(capture);
  std::stringstream ss;
  ss << in.rdbuf();
  result.output = ss.str();
  return result;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace testsupport
