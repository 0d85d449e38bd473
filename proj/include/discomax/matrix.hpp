#pragma once

#include <cstddef>
#include <vector>

#include "discomax/errors.hpp"

namespace discomax {

// Dense row-major matrix of doubles. Deliberately minimal: multiplication,
// norms and a few reductions are all the rest of the library needs.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const std::vector<double>& entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  std::size_t size() const noexcept { return data_.size(); }

  Matrix& operator*=(double s);
  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);

Matrix transpose(const Matrix& a);

double frobenius_norm(const Matrix& a);
/// Frobenius norm of the matrix after removing each column's mean.
double centered_frobenius(const Matrix& a);
double trace(const Matrix& a);
double max_abs(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);
/// Frobenius inner product <a, b>.
double dot(const Matrix& a, const Matrix& b);
/// Tr(mᵀ·l·m) for square l; the quadratic trace used throughout.
double quad_trace(const Matrix& m, const Matrix& l);

bool all_finite(const Matrix& a);
std::vector<double> diagonal_of(const Matrix& a);
std::vector<double> row_sums(const Matrix& a);
Matrix select_columns(const Matrix& a, const std::vector<std::size_t>& idx);
std::vector<double> mat_vec(const Matrix& a, const std::vector<double>& v);

void require_square(const Matrix& a, const char* what);
void require_same_shape(const Matrix& a, const Matrix& b, const char* what);

}  // namespace discomax
