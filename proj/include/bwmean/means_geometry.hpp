#pragma once

#include "bwmean/spd_core.hpp"

namespace bwm {

/// Curve parameter t, restricted to [0, 1].
class GeodesicParam {
 public:
  explicit GeodesicParam(double t);
  double value() const noexcept { return t_; }

 private:
  double t_;
};

/// A #_t B = A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}, the geodesic of the
/// affine-invariant (trace) metric.
SpdMatrix geometric_mean(const SpdMatrix& a, const SpdMatrix& b, GeodesicParam t);

/// delta(A, B) = || log(A^{-1/2} B A^{-1/2}) ||_F.
double riemannian_distance(const SpdMatrix& a, const SpdMatrix& b);

/// tr (A^{1/2} B A^{1/2})^{1/2}.
double fidelity(const SpdMatrix& a, const SpdMatrix& b);

/// Bures-Wasserstein distance [tr((A+B)/2) - fidelity(A, B)]^{1/2}.
///
/// The radicand is clamped to zero when it lies in [-1e-12 s, 0] with
/// s = max(1, tr((A+B)/2)); anything more negative throws DomainError.
/// When the radicand is small enough that the trace difference has lost most
/// of its digits (A close to B) the value is evaluated from the equivalent
/// polar form 2^{-1/2} ||A^{1/2} - B^{1/2} U||_F, U the polar factor of
/// B^{1/2} A^{1/2}.
double wasserstein_distance(const SpdMatrix& a, const SpdMatrix& b);

/// Brute-force 2x2 evaluation of 2^{-1/2} min_U ||A^{1/2} - B^{1/2} U||_F over
/// the orthogonal group (rotations and reflections). grid_size angles are
/// sampled on each branch, then two zoom passes resample grid_size angles
/// across one step either side of the incumbent.
double wasserstein_distance_oracle_2x2(const SpdMatrix& a, const SpdMatrix& b, int grid_size = 720);

/// Principal square root of AB, A^{1/2} (A^{1/2} B A^{1/2})^{1/2} A^{-1/2}.
Matrix sqrt_product(const SpdMatrix& a, const SpdMatrix& b);

/// A <>_t B = (1-t)^2 A + t^2 B + t(1-t) [(AB)^{1/2} + (BA)^{1/2}].
SpdMatrix wasserstein_geodesic(const SpdMatrix& a, const SpdMatrix& b, GeodesicParam t);

struct DistanceBoundReport {
  double lhs;      // d(A <>_t B, A <>_t C)
  double rhs;      // t sqrt(lambda1 / 2) ||A^{-1} # B - A^{-1} # C||_F
  double lambda1;  // largest eigenvalue of A
};

/// Both sides of the geodesic perturbation bound. Does not assert lhs <= rhs.
DistanceBoundReport geodesic_perturbation_bound(const SpdMatrix& a, const SpdMatrix& b, const SpdMatrix& c,
                                                GeodesicParam t);

}  // namespace bwm
