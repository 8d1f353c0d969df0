#include "bwmean/spd_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "bwmean/errors.hpp"

namespace bwm {

namespace {

Matrix symmetrize(Matrix m) {
  const std::size_t n = m.dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = avg;
      m(j, i) = avg;
    }
  }
  return m;
}

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

// One Jacobi rotation annihilating a(p, q); accumulates into v.
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const std::size_t n = a.dim();
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const double app = a(p, p) - t * apq;
  const double aqq = a(q, q) + t * apq;

  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, p) = app;
  a(q, q) = aqq;
  a(p, q) = 0.0;
  a(q, p) = 0.0;

  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

EigenDecomposition sorted_decomposition(const Matrix& diag_form, const Matrix& v) {
  const std::size_t n = diag_form.dim();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return diag_form(i, i) > diag_form(j, j); });
  EigenDecomposition out{Matrix(n), std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.lambda[k] = diag_form(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.q(i, k) = v(i, order[k]);
  }
  return out;
}

double spectral_value(SpectralFunction f, double lambda) {
  using Kind = SpectralFunction::Kind;
  switch (f.kind) {
    case Kind::kSqrt:
      return std::sqrt(lambda);
    case Kind::kInvSqrt:
      return 1.0 / std::sqrt(lambda);
    case Kind::kLog:
      return std::log(lambda);
    case Kind::kExp:
      return std::exp(lambda);
    case Kind::kPower:
      return std::pow(lambda, f.exponent);
    case Kind::kInverse:
      return 1.0 / lambda;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

SymMatrix::SymMatrix(Matrix m) : m_(symmetrize(std::move(m))) {
  if (!m_.all_finite()) throw DomainError("SymMatrix: non-finite entry");
}

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows) : SymMatrix(Matrix(rows)) {}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) { return SymMatrix(a.matrix() + b.matrix()); }
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) { return SymMatrix(a.matrix() - b.matrix()); }
SymMatrix operator*(double s, const SymMatrix& a) { return SymMatrix(s * a.matrix()); }

Matrix EigenDecomposition::recompose() const {
  const std::size_t n = q.dim();
  Matrix scaled = q;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) scaled(i, k) *= lambda[k];
  return symmetrize(scaled * q.transpose());
}

EigenDecomposition eigh(const SymMatrix& a, const JacobiOptions& opts) {
  const std::size_t n = a.dim();
  Matrix work = a.matrix();
  Matrix v = Matrix::identity(n);
  const double target = opts.rel_tol * frobenius_norm(work);

  double off = off_diagonal_norm(work);
  for (int sweep = 0; off > target; ++sweep) {
    if (sweep >= opts.max_sweeps) {
      std::ostringstream msg;
      msg << "eigh: no convergence after " << opts.max_sweeps << " sweeps, off-diagonal residual " << off;
      throw ConvergenceError(msg.str(), off);
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = work(p, q);
        if (apq == 0.0) continue;
        // Entries below the diagonals' rounding level are dropped outright.
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(work(p, p)) + g == std::abs(work(p, p)) &&
            std::abs(work(q, q)) + g == std::abs(work(q, q))) {
          work(p, q) = 0.0;
          work(q, p) = 0.0;
          continue;
        }
        rotate(work, v, p, q);
      }
    }
    off = off_diagonal_norm(work);
  }
  return sorted_decomposition(work, v);
}

SpdMatrix::SpdMatrix(SymMatrix a) : base_(std::move(a)) {
  if (base_.dim() == 0) throw DimensionError("SpdMatrix: empty matrix");
  auto eig = std::make_shared<EigenDecomposition>(eigh(base_));
  if (!(eig->max() > 0.0) || !(eig->min() > kAdmissionRatio * eig->max())) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "SpdMatrix: not positive definite (lambda_min = " << eig->min() << ", lambda_max = " << eig->max()
        << ")";
    throw DomainError(msg.str());
  }
  eigen_ = std::move(eig);
}

SymMatrix apply_spectral(const EigenDecomposition& eig, SpectralFunction f) {
  const std::size_t n = eig.q.dim();
  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = eig.lambda[k];
    if (!f.total() && !(lambda > 0.0)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "apply_spectral: function undefined at eigenvalue " << lambda;
      throw DomainError(msg.str());
    }
    values[k] = spectral_value(f, lambda);
    if (!std::isfinite(values[k])) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "apply_spectral: non-finite value at eigenvalue " << lambda;
      throw DomainError(msg.str());
    }
  }
  return SymMatrix(EigenDecomposition{eig.q, std::move(values)}.recompose());
}

SymMatrix apply_spectral(const SymMatrix& a, SpectralFunction f) { return apply_spectral(eigh(a), f); }

SpdMatrix sqrtm(const SpdMatrix& a) { return SpdMatrix(apply_spectral(a.eigen(), SpectralFunction::sqrt())); }
SpdMatrix inv_sqrtm(const SpdMatrix& a) {
  return SpdMatrix(apply_spectral(a.eigen(), SpectralFunction::inv_sqrt()));
}
SpdMatrix inverse(const SpdMatrix& a) { return SpdMatrix(apply_spectral(a.eigen(), SpectralFunction::inverse())); }
SpdMatrix powm(const SpdMatrix& a, double p) {
  return SpdMatrix(apply_spectral(a.eigen(), SpectralFunction::power(p)));
}
SymMatrix logm(const SpdMatrix& a) { return apply_spectral(a.eigen(), SpectralFunction::log()); }
SpdMatrix expm(const SymMatrix& a) { return SpdMatrix(apply_spectral(a, SpectralFunction::exp())); }

SymMatrix congruence(const Matrix& x, const SymMatrix& a) {
  if (x.dim() != a.dim()) throw DimensionError("congruence: dimension mismatch");
  return SymMatrix(x * a.matrix() * x.transpose());
}

double operator_norm(const SymMatrix& a) {
  if (a.dim() == 0) return 0.0;
  const auto eig = eigh(a);
  return std::max(std::abs(eig.max()), std::abs(eig.min()));
}

LoewnerVerdict loewner_geq(const SymMatrix& a, const SymMatrix& b, double rel_tol) {
  if (a.dim() != b.dim()) throw DimensionError("loewner_geq: dimension mismatch");
  const double witness = eigh(a - b).min();
  const double scale = std::max({1.0, operator_norm(a), operator_norm(b)});
  const double threshold = -rel_tol * scale;
  return {witness >= threshold, witness, threshold};
}

double determinant(const SpdMatrix& a) {
  double d = 1.0;
  for (double l : a.eigen().lambda) d *= l;
  return d;
}

double log_determinant(const SpdMatrix& a) {
  double s = 0.0;
  for (double l : a.eigen().lambda) s += std::log(l);
  return s;
}

}  // namespace bwm
