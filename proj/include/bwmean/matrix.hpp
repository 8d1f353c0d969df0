#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace bwm {

/// Dense square matrix of doubles, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim, double fill = 0.0);
  Matrix(std::size_t dim, std::vector<double> row_major);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t dim);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * dim_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * dim_ + j]; }
  std::span<const double> data() const noexcept { return data_; }

  Matrix transpose() const;
  double trace() const noexcept;
  bool all_finite() const noexcept;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s) noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);

/// sqrt of the sum of squared entries.
double frobenius_norm(const Matrix& a) noexcept;

/// ||a - b||_F / ||b||_F, falling back to the absolute difference when b = 0.
double relative_difference(const Matrix& a, const Matrix& b);

/// Largest absolute entrywise difference.
double max_abs_difference(const Matrix& a, const Matrix& b);

}  // namespace bwm
