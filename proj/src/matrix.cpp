#include "bwmean/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bwmean/errors.hpp"

namespace bwm {

namespace {

void require_same_dim(const Matrix& a, const Matrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()) + ")");
  }
}

}  // namespace

Matrix::Matrix(std::size_t dim, double fill) : dim_(dim), data_(dim * dim, fill) {}

Matrix::Matrix(std::size_t dim, std::vector<double> row_major) : dim_(dim), data_(std::move(row_major)) {
  if (data_.size() != dim * dim) {
    throw DimensionError("Matrix: expected " + std::to_string(dim * dim) + " entries, got " +
                         std::to_string(data_.size()));
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) : dim_(rows.size()) {
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw DimensionError("Matrix: rows must form a square grid");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(std::size_t dim) {
  Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::trace() const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) s += (*this)(i, i);
  return s;
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_dim(*this, other, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_dim(*this, other, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) noexcept {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_dim(a, b, "operator*");
  const std::size_t n = a.dim();
  Matrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

double frobenius_norm(const Matrix& a) noexcept {
  // Scaled accumulation; entries can be large after 1/s powers.
  double scale = 0.0;
  for (double v : a.data()) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double sum = 0.0;
  for (double v : a.data()) {
    const double r = v / scale;
    sum += r * r;
  }
  return scale * std::sqrt(sum);
}

double relative_difference(const Matrix& a, const Matrix& b) {
  const double diff = frobenius_norm(a - b);
  const double ref = frobenius_norm(b);
  return ref > 0.0 ? diff / ref : diff;
}

double max_abs_difference(const Matrix& a, const Matrix& b) {
  require_same_dim(a, b, "max_abs_difference");
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

}  // namespace bwm
