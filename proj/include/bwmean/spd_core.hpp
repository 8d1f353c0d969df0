#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "bwmean/matrix.hpp"

namespace bwm {

/// Real symmetric matrix. Construction symmetrizes the input as (M + M^T) / 2
/// and rejects non-finite entries.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(Matrix m);
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SymMatrix identity(std::size_t dim) { return SymMatrix(Matrix::identity(dim)); }
  static SymMatrix zero(std::size_t dim) { return SymMatrix(Matrix(dim)); }
  static SymMatrix diagonal(std::span<const double> diag) { return SymMatrix(Matrix::diagonal(diag)); }

  std::size_t dim() const noexcept { return m_.dim(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }
  operator const Matrix&() const noexcept { return m_; }  // NOLINT(google-explicit-constructor)
  double trace() const noexcept { return m_.trace(); }

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  Matrix m_;
};

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator*(double s, const SymMatrix& a);

/// Orthogonal factor q (eigenvectors in columns) and eigenvalues sorted
/// descending, so that a = q diag(lambda) q^T.
struct EigenDecomposition {
  Matrix q;
  std::vector<double> lambda;

  Matrix recompose() const;
  double max() const { return lambda.front(); }
  double min() const { return lambda.back(); }
};

struct JacobiOptions {
  int max_sweeps = 64;
  /// Stop once the off-diagonal Frobenius mass is at most rel_tol * ||a||_F.
  double rel_tol = 1e-14;
};

/// Cyclic Jacobi eigendecomposition. Throws ConvergenceError carrying the
/// remaining off-diagonal mass when max_sweeps is exhausted.
EigenDecomposition eigh(const SymMatrix& a, const JacobiOptions& opts = {});

/// Symmetric positive definite matrix. Admission requires
/// lambda_min > 1e-12 * lambda_max; the eigendecomposition computed for that
/// check is kept and reused by every spectral function.
class SpdMatrix {
 public:
  static constexpr double kAdmissionRatio = 1e-12;

  explicit SpdMatrix(SymMatrix a);
  explicit SpdMatrix(Matrix a) : SpdMatrix(SymMatrix(std::move(a))) {}
  SpdMatrix(std::initializer_list<std::initializer_list<double>> rows) : SpdMatrix(SymMatrix(rows)) {}

  static SpdMatrix identity(std::size_t dim) { return SpdMatrix(SymMatrix::identity(dim)); }

  std::size_t dim() const noexcept { return base_.dim(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return base_(i, j); }
  const SymMatrix& sym() const noexcept { return base_; }
  const Matrix& matrix() const noexcept { return base_.matrix(); }
  operator const SymMatrix&() const noexcept { return base_; }  // NOLINT(google-explicit-constructor)
  operator const Matrix&() const noexcept { return base_.matrix(); }  // NOLINT(google-explicit-constructor)
  const EigenDecomposition& eigen() const noexcept { return *eigen_; }
  double trace() const noexcept { return base_.trace(); }

 private:
  SymMatrix base_;
  std::shared_ptr<const EigenDecomposition> eigen_;
};

/// Scalar function applied through the spectral decomposition.
struct SpectralFunction {
  enum class Kind { kSqrt, kInvSqrt, kLog, kExp, kPower, kInverse };
  Kind kind;
  double exponent = 1.0;  // only read for kPower

  static SpectralFunction sqrt() { return {Kind::kSqrt}; }
  static SpectralFunction inv_sqrt() { return {Kind::kInvSqrt}; }
  static SpectralFunction log() { return {Kind::kLog}; }
  static SpectralFunction exp() { return {Kind::kExp}; }
  static SpectralFunction power(double p) { return {Kind::kPower, p}; }
  static SpectralFunction inverse() { return {Kind::kInverse}; }

  /// True when f is defined on every eigenvalue of a SymMatrix, not only SPD ones.
  bool total() const noexcept { return kind == Kind::kExp; }
};

/// q diag(f(lambda)) q^T. Throws DomainError when f is undefined on some
/// eigenvalue (any nonpositive eigenvalue for every kind except kExp).
SymMatrix apply_spectral(const EigenDecomposition& eig, SpectralFunction f);
SymMatrix apply_spectral(const SymMatrix& a, SpectralFunction f);

SpdMatrix sqrtm(const SpdMatrix& a);
SpdMatrix inv_sqrtm(const SpdMatrix& a);
SpdMatrix inverse(const SpdMatrix& a);
SpdMatrix powm(const SpdMatrix& a, double p);
SymMatrix logm(const SpdMatrix& a);
SpdMatrix expm(const SymMatrix& a);

/// x a x^T, symmetrized.
SymMatrix congruence(const Matrix& x, const SymMatrix& a);

/// Spectral radius max |lambda_i|.
double operator_norm(const SymMatrix& a);

struct LoewnerVerdict {
  bool holds;
  double witness;    // lambda_min(a - b)
  double threshold;  // -rel_tol * max(1, ||a||, ||b||)
};

/// a >= b in the Loewner order, up to the relative tolerance.
LoewnerVerdict loewner_geq(const SymMatrix& a, const SymMatrix& b, double rel_tol);

/// Product of eigenvalues.
double determinant(const SpdMatrix& a);
double log_determinant(const SpdMatrix& a);

}  // namespace bwm
