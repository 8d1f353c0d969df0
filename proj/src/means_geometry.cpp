#include "bwmean/means_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bwmean/errors.hpp"

namespace bwm {

namespace {

void require_same_dim(const SpdMatrix& a, const SpdMatrix& b, const char* op) {
  if (a.dim() != b.dim()) throw DimensionError(std::string(op) + ": dimension mismatch");
}

// Below this fraction of the trace scale the trace-difference radicand has
// lost about half its significant digits.
constexpr double kCancellationRatio = 1e-6;
constexpr double kClampWindow = 1e-12;

double polar_form_distance(const SpdMatrix& a, const SpdMatrix& b) {
  const SpdMatrix a_half = sqrtm(a);
  const SpdMatrix b_half = sqrtm(b);
  const SpdMatrix inner = SpdMatrix(congruence(a_half, b));
  const Matrix u = b_half.matrix() * a_half.matrix() * inv_sqrtm(inner).matrix();
  return frobenius_norm(a_half.matrix() - b_half.matrix() * u) / std::numbers::sqrt2;
}

Matrix rotation2(double theta, bool reflect) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  if (reflect) return Matrix{{c, s}, {s, -c}};
  return Matrix{{c, -s}, {s, c}};
}

}  // namespace

GeodesicParam::GeodesicParam(double t) : t_(t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    std::ostringstream msg;
    msg << "GeodesicParam: t = " << t << " outside [0, 1]";
    throw DomainError(msg.str());
  }
}

SpdMatrix geometric_mean(const SpdMatrix& a, const SpdMatrix& b, GeodesicParam t) {
  require_same_dim(a, b, "geometric_mean");
  const SpdMatrix a_half = sqrtm(a);
  const SpdMatrix a_inv_half = inv_sqrtm(a);
  const SpdMatrix inner(congruence(a_inv_half, b));
  return SpdMatrix(congruence(a_half, powm(inner, t.value())));
}

double riemannian_distance(const SpdMatrix& a, const SpdMatrix& b) {
  require_same_dim(a, b, "riemannian_distance");
  const SpdMatrix inner(congruence(inv_sqrtm(a), b));
  double s = 0.0;
  for (double l : inner.eigen().lambda) s += std::log(l) * std::log(l);
  return std::sqrt(s);
}

double fidelity(const SpdMatrix& a, const SpdMatrix& b) {
  require_same_dim(a, b, "fidelity");
  const SpdMatrix inner(congruence(sqrtm(a), b));
  double s = 0.0;
  for (double l : inner.eigen().lambda) s += std::sqrt(l);
  return s;
}

double wasserstein_distance(const SpdMatrix& a, const SpdMatrix& b) {
  require_same_dim(a, b, "wasserstein_distance");
  const double half_trace = 0.5 * (a.trace() + b.trace());
  const double radicand = half_trace - fidelity(a, b);
  const double scale = std::max(1.0, half_trace);
  if (radicand < -kClampWindow * scale) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "wasserstein_distance: negative radicand " << radicand;
    throw DomainError(msg.str());
  }
  if (radicand <= kCancellationRatio * scale) return polar_form_distance(a, b);
  return std::sqrt(radicand);
}

double wasserstein_distance_oracle_2x2(const SpdMatrix& a, const SpdMatrix& b, int grid_size) {
  if (a.dim() != 2 || b.dim() != 2) throw DimensionError("wasserstein_distance_oracle_2x2: dim must be 2");
  if (grid_size < 4) throw DomainError("wasserstein_distance_oracle_2x2: grid_size must be >= 4");
  const Matrix a_half = sqrtm(a).matrix();
  const Matrix b_half = sqrtm(b).matrix();
  auto objective = [&](double theta, bool reflect) {
    return frobenius_norm(a_half - b_half * rotation2(theta, reflect));
  };

  double best = std::numeric_limits<double>::infinity();
  for (bool reflect : {false, true}) {
    double step = 2.0 * std::numbers::pi / grid_size;
    double center = 0.0;
    double branch_best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid_size; ++k) {
      const double theta = k * step;
      const double v = objective(theta, reflect);
      if (v < branch_best) {
        branch_best = v;
        center = theta;
      }
    }
    for (int pass = 0; pass < 2; ++pass) {
      const double lo = center - step;
      const double fine = 2.0 * step / grid_size;
      for (int k = 0; k <= grid_size; ++k) {
        const double theta = lo + k * fine;
        const double v = objective(theta, reflect);
        if (v < branch_best) {
          branch_best = v;
          center = theta;
        }
      }
      step = fine;
    }
    best = std::min(best, branch_best);
  }
  return best / std::numbers::sqrt2;
}

Matrix sqrt_product(const SpdMatrix& a, const SpdMatrix& b) {
  require_same_dim(a, b, "sqrt_product");
  const SpdMatrix a_half = sqrtm(a);
  const SpdMatrix inner(congruence(a_half, b));
  return a_half.matrix() * sqrtm(inner).matrix() * inv_sqrtm(a).matrix();
}

SpdMatrix wasserstein_geodesic(const SpdMatrix& a, const SpdMatrix& b, GeodesicParam t) {
  require_same_dim(a, b, "wasserstein_geodesic");
  const double s = t.value();
  if (s == 0.0) return a;
  if (s == 1.0) return b;
  const Matrix ab = sqrt_product(a, b);
  const Matrix cross = ab + ab.transpose();  // (BA)^{1/2} = ((AB)^{1/2})^T
  Matrix g = (1.0 - s) * (1.0 - s) * a.matrix();
  g += s * s * b.matrix();
  g += s * (1.0 - s) * cross;
  return SpdMatrix(std::move(g));
}

DistanceBoundReport geodesic_perturbation_bound(const SpdMatrix& a, const SpdMatrix& b, const SpdMatrix& c,
                                                GeodesicParam t) {
  require_same_dim(a, b, "geodesic_perturbation_bound");
  require_same_dim(a, c, "geodesic_perturbation_bound");
  const double lambda1 = a.eigen().max();
  const double lhs = wasserstein_distance(wasserstein_geodesic(a, b, t), wasserstein_geodesic(a, c, t));
  const SpdMatrix a_inv = inverse(a);
  const GeodesicParam half(0.5);
  const Matrix diff = geometric_mean(a_inv, b, half).matrix() - geometric_mean(a_inv, c, half).matrix();
  const double rhs = t.value() * std::sqrt(lambda1 / 2.0) * frobenius_norm(diff);
  return {lhs, rhs, lambda1};
}

}  // namespace bwm
