#include "bwmean/barycenter.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bwmean/errors.hpp"
#include "bwmean/means_geometry.hpp"

namespace bwm {

namespace {

SpdMatrix initial_point(const MeanProblem& p, const SolverConfig& cfg) {
  switch (cfg.initial) {
    case InitialPoint::kArithmeticMean:
      return arithmetic_mean(p);
    case InitialPoint::kIdentity:
      return SpdMatrix::identity(p.dim());
    case InitialPoint::kGiven:
      if (cfg.given->dim() != p.dim()) throw DimensionError("SolverConfig: given start point has wrong dimension");
      return *cfg.given;
  }
  return arithmetic_mean(p);
}

// sum_j w_j (X^{1/2} A_j X^{1/2})^{1/2}
SymMatrix fixed_point_image(const SpdMatrix& x_half, const MeanProblem& p) {
  Matrix acc(p.dim());
  for (std::size_t j = 0; j < p.size(); ++j) {
    const SpdMatrix inner(congruence(x_half, p[j]));
    acc += p.weights()[j] * sqrtm(inner).matrix();
  }
  return SymMatrix(std::move(acc));
}

// sum_j w_j log(X^{-1/2} A_j X^{-1/2})
SymMatrix karcher_direction(const SpdMatrix& x_inv_half, const MeanProblem& p) {
  Matrix acc(p.dim());
  for (std::size_t j = 0; j < p.size(); ++j) {
    const SpdMatrix inner(congruence(x_inv_half, p[j]));
    acc += p.weights()[j] * logm(inner).matrix();
  }
  return SymMatrix(std::move(acc));
}

template <typename Step>
SpdMatrix guarded_step(Step&& step, int iteration) {
  try {
    return step();
  } catch (const DomainError& e) {
    std::ostringstream msg;
    msg << "iterate " << iteration + 1 << " left the SPD cone: " << e.what();
    throw SolverError(msg.str());
  }
}

}  // namespace

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
  if (w_.empty()) throw DomainError("WeightVector: n >= 1 required");
  double sum = 0.0;
  for (std::size_t j = 0; j < w_.size(); ++j) {
    if (!std::isfinite(w_[j]) || !(w_[j] > 0.0)) {
      std::ostringstream msg;
      msg << "WeightVector: weight " << j << " = " << w_[j] << " is not a positive finite number";
      throw DomainError(msg.str());
    }
    sum += w_[j];
  }
  for (double& v : w_) v /= sum;
}

WeightVector WeightVector::uniform(std::size_t n) { return WeightVector(std::vector<double>(n, 1.0)); }

MeanProblem::MeanProblem(std::vector<SpdMatrix> matrices, WeightVector weights)
    : matrices_(std::move(matrices)), weights_(std::move(weights)) {
  if (matrices_.empty()) throw DomainError("MeanProblem: n >= 1 required");
  if (weights_.size() != matrices_.size()) {
    throw DimensionError("MeanProblem: " + std::to_string(weights_.size()) + " weights for " +
                         std::to_string(matrices_.size()) + " matrices");
  }
  for (std::size_t j = 1; j < matrices_.size(); ++j) {
    if (matrices_[j].dim() != matrices_[0].dim()) {
      throw DimensionError("MeanProblem: matrix " + std::to_string(j) + " has dimension " +
                           std::to_string(matrices_[j].dim()) + ", expected " +
                           std::to_string(matrices_[0].dim()));
    }
  }
}

void SolverConfig::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("SolverConfig: rel_tol must be > 0");
  if (max_iter < 1) throw DomainError("SolverConfig: max_iter must be >= 1");
  if (initial == InitialPoint::kGiven && !given) throw DomainError("SolverConfig: given start point missing");
}

SpdMatrix arithmetic_mean(const MeanProblem& p) {
  Matrix acc(p.dim());
  for (std::size_t j = 0; j < p.size(); ++j) acc += p.weights()[j] * p[j].matrix();
  return SpdMatrix(std::move(acc));
}

SpdMatrix harmonic_mean(const MeanProblem& p) {
  Matrix acc(p.dim());
  for (std::size_t j = 0; j < p.size(); ++j) acc += p.weights()[j] * inverse(p[j]).matrix();
  return inverse(SpdMatrix(std::move(acc)));
}

SpdMatrix log_euclidean_mean(const MeanProblem& p) {
  Matrix acc(p.dim());
  for (std::size_t j = 0; j < p.size(); ++j) acc += p.weights()[j] * logm(p[j]).matrix();
  return expm(SymMatrix(std::move(acc)));
}

double residual(const SpdMatrix& x, const MeanProblem& p) {
  if (x.dim() != p.dim()) throw DimensionError("residual: dimension mismatch");
  const SymMatrix image = fixed_point_image(sqrtm(x), p);
  return frobenius_norm(x.matrix() - image.matrix()) / frobenius_norm(x.matrix());
}

double equivalent_equation_residual(const SpdMatrix& x, const MeanProblem& p) {
  if (x.dim() != p.dim()) throw DimensionError("equivalent_equation_residual: dimension mismatch");
  const SpdMatrix x_inv = inverse(x);
  Matrix acc = Matrix::identity(p.dim());
  for (std::size_t j = 0; j < p.size(); ++j)
    acc -= p.weights()[j] * geometric_mean(p[j], x_inv, GeodesicParam(0.5)).matrix();
  return frobenius_norm(acc);
}

SolverResult wasserstein_mean(const MeanProblem& p, const SolverConfig& cfg) {
  cfg.validate();
  SpdMatrix x = initial_point(p, cfg);
  std::vector<double> history;
  for (int iter = 0;; ++iter) {
    const SymMatrix image = fixed_point_image(sqrtm(x), p);
    const double res = frobenius_norm(x.matrix() - image.matrix()) / frobenius_norm(x.matrix());
    history.push_back(res);
    if (res <= cfg.rel_tol) return {std::move(x), iter, res, true, std::move(history)};
    if (iter == cfg.max_iter) return {std::move(x), iter, res, false, std::move(history)};
    x = guarded_step(
        [&] {
          const Matrix m = inv_sqrtm(x).matrix() * image.matrix();
          return SpdMatrix(congruence(m, SymMatrix::identity(p.dim())));
        },
        iter);
  }
}

SolverResult karcher_mean(const MeanProblem& p, const SolverConfig& cfg) {
  cfg.validate();
  SpdMatrix x = initial_point(p, cfg);
  std::vector<double> history;
  for (int iter = 0;; ++iter) {
    const SymMatrix direction = karcher_direction(inv_sqrtm(x), p);
    const double res = frobenius_norm(direction.matrix());
    history.push_back(res);
    if (res <= cfg.rel_tol) return {std::move(x), iter, res, true, std::move(history)};
    if (iter == cfg.max_iter) return {std::move(x), iter, res, false, std::move(history)};
    x = guarded_step([&] { return SpdMatrix(congruence(sqrtm(x), expm(direction))); }, iter);
  }
}

BoundsReport bounds_report(const MeanProblem& p) {
  const std::size_t m = p.dim();
  const SymMatrix two_i = 2.0 * SymMatrix::identity(m);
  Matrix inv_sum(m);
  double root_norm_sum = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    inv_sum += p.weights()[j] * inverse(p[j]).matrix();
    root_norm_sum += p.weights()[j] * std::sqrt(p[j].eigen().max());
  }
  SpdMatrix arith = arithmetic_mean(p);
  std::optional<SpdMatrix> upper_inverse;
  const SymMatrix gap = two_i - arith.sym();
  if (eigh(gap).min() > 0.0) {
    try {
      upper_inverse = inverse(SpdMatrix(gap));
    } catch (const DomainError&) {
      // gap is positive but below the SPD admission ratio; bound is unusable.
    }
  }
  return {two_i - SymMatrix(std::move(inv_sum)), std::move(arith), std::move(upper_inverse),
          root_norm_sum * root_norm_sum};
}

bool BoundsVerdicts::all_hold() const noexcept {
  return arithmetic_upper.holds && lie_trotter_lower.holds && (!inverse_upper || inverse_upper->holds) &&
         opnorm_holds;
}

BoundsVerdicts check_bounds(const BoundsReport& bounds, const SpdMatrix& mean, double loewner_tol,
                            double opnorm_slack) {
  BoundsVerdicts v{loewner_geq(bounds.upper_arithmetic, mean, loewner_tol),
                   loewner_geq(mean, bounds.lower_lie_trotter, loewner_tol), std::nullopt, mean.eigen().max(),
                   false};
  if (bounds.upper_inverse) v.inverse_upper = loewner_geq(*bounds.upper_inverse, mean, loewner_tol);
  v.opnorm_holds = v.mean_opnorm <= bounds.opnorm_bound + opnorm_slack;
  return v;
}

DetInequalityReport det_inequality_check(const MeanProblem& p, const SpdMatrix& mean) {
  double log_geo = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) log_geo += p.weights()[j] * log_determinant(p[j]);
  const double det_geo = std::exp(log_geo);
  const double det_mean = determinant(mean);
  return {det_mean, det_geo, det_mean >= det_geo - 1e-9 * std::max(1.0, det_geo)};
}

std::vector<ChainLink> bound_ordering_checks(const MeanProblem& p, double loewner_tol) {
  std::vector<ChainLink> links;
  const BoundsReport b = bounds_report(p);
  const SpdMatrix harmonic = harmonic_mean(p);

  const auto lower = loewner_geq(harmonic, b.lower_lie_trotter, loewner_tol);
  links.push_back({"lie_trotter_lower_below_harmonic", lower.holds, lower.witness - lower.threshold});

  if (b.upper_inverse) {
    const auto upper = loewner_geq(*b.upper_inverse, b.upper_arithmetic, loewner_tol);
    links.push_back({"inverse_upper_above_arithmetic", upper.holds, upper.witness - upper.threshold});
  }

  double norm_avg = 0.0;
  double log_det_avg = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    norm_avg += p.weights()[j] * p[j].eigen().max();
    log_det_avg += p.weights()[j] * log_determinant(p[j]);
  }
  const double scalar_slack = 1e-12 * std::max(1.0, norm_avg);
  const double sharp_gap = norm_avg - b.opnorm_bound;
  links.push_back({"opnorm_bound_below_mean_norm", sharp_gap >= -scalar_slack, sharp_gap});
  const double triangle_gap = norm_avg - b.upper_arithmetic.eigen().max();
  links.push_back({"arithmetic_norm_triangle", triangle_gap >= -scalar_slack, triangle_gap});
  const double concavity_gap = log_determinant(b.upper_arithmetic) - log_det_avg;
  links.push_back({"log_det_concavity", concavity_gap >= -1e-9, concavity_gap});
  return links;
}

}  // namespace bwm
