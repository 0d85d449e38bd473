#include "discomax/matrix.hpp"

#include <cmath>
#include <string>

namespace discomax {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (rows == 0 || cols == 0) throw shape_error("matrix dimensions must be positive");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const std::vector<double>& entries) {
  Matrix m(entries.size(), entries.size(), 0.0);
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other, "matrix addition");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other, "matrix subtraction");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw shape_error("matrix product shape mismatch: " + std::to_string(a.rows()) + "x" +
                      std::to_string(a.cols()) + " * " + std::to_string(b.rows()) + "x" +
                      std::to_string(b.cols()));
  Matrix out(a.rows(), b.cols(), 0.0);
  // i-k-j order keeps the inner loop contiguous for row-major storage.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

Matrix operator*(double s, Matrix a) {
  a *= s;
  return a;
}

Matrix operator+(Matrix a, const Matrix& b) {
  a += b;
  return a;
}

Matrix operator-(Matrix a, const Matrix& b) {
  a -= b;
  return a;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

double frobenius_norm(const Matrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a.data()[i] * a.data()[i];
  return std::sqrt(sum);
}

double centered_frobenius(const Matrix& a) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) mean += a(i, j);
    mean /= static_cast<double>(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const double d = a(i, j) - mean;
      sum += d * d;
    }
  }
  return std::sqrt(sum);
}

double trace(const Matrix& a) {
  require_square(a, "trace");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) sum += a(i, i);
  return sum;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.data()[i]));
  return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
  return m;
}

double dot(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "frobenius inner product");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a.data()[i] * b.data()[i];
  return sum;
}

double quad_trace(const Matrix& m, const Matrix& l) {
  require_square(l, "quadratic trace");
  if (l.cols() != m.rows()) throw shape_error("quadratic trace shape mismatch");
  const Matrix lm = l * m;
  return dot(m, lm);
}

bool all_finite(const Matrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!std::isfinite(a.data()[i])) return false;
  return true;
}

std::vector<double> diagonal_of(const Matrix& a) {
  require_square(a, "diagonal_of");
  std::vector<double> d(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) d[i] = a(i, i);
  return d;
}

std::vector<double> row_sums(const Matrix& a) {
  std::vector<double> s(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s[i] += a(i, j);
  return s;
}

Matrix select_columns(const Matrix& a, const std::vector<std::size_t>& idx) {
  if (idx.empty()) throw shape_error("column selection needs at least one index");
  Matrix out(a.rows(), idx.size(), 0.0);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    if (idx[j] >= a.cols()) throw shape_error("column index out of range");
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, idx[j]);
  }
  return out;
}

std::vector<double> mat_vec(const Matrix& a, const std::vector<double>& v) {
  if (a.cols() != v.size()) throw shape_error("matrix-vector shape mismatch");
  std::vector<double> out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) sum += a(i, j) * v[j];
    out[i] = sum;
  }
  return out;
}

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols())
    throw shape_error(std::string(what) + ": expected a square matrix, got " +
                      std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw shape_error(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                      std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                      std::to_string(b.cols()));
}

}  // namespace discomax
