#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bwmean/spd_core.hpp"

namespace bwm {

/// Positive probability vector. Normalized to unit sum at construction.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> w);
  static WeightVector uniform(std::size_t n);

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t j) const noexcept { return w_[j]; }
  const std::vector<double>& values() const noexcept { return w_; }

 private:
  std::vector<double> w_;
};

/// n >= 1 SPD matrices of one dimension with their weights.
class MeanProblem {
 public:
  MeanProblem(std::vector<SpdMatrix> matrices, WeightVector weights);

  std::size_t size() const noexcept { return matrices_.size(); }
  std::size_t dim() const noexcept { return matrices_.front().dim(); }
  const std::vector<SpdMatrix>& matrices() const noexcept { return matrices_; }
  const SpdMatrix& operator[](std::size_t j) const noexcept { return matrices_[j]; }
  const WeightVector& weights() const noexcept { return weights_; }

 private:
  std::vector<SpdMatrix> matrices_;
  WeightVector weights_;
};

enum class InitialPoint { kArithmeticMean, kIdentity, kGiven };

struct SolverConfig {
  double rel_tol = 1e-12;
  int max_iter = 500;
  InitialPoint initial = InitialPoint::kArithmeticMean;
  std::optional<SpdMatrix> given;  // read when initial == kGiven

  /// Throws DomainError unless rel_tol > 0, max_iter >= 1 and a given start
  /// point is present when requested.
  void validate() const;
};

struct SolverResult {
  SpdMatrix mean;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::vector<double> residual_history;
};

SpdMatrix arithmetic_mean(const MeanProblem& p);
SpdMatrix harmonic_mean(const MeanProblem& p);

/// exp(sum_j w_j log A_j).
SpdMatrix log_euclidean_mean(const MeanProblem& p);

/// ||X - sum_j w_j (X^{1/2} A_j X^{1/2})^{1/2}||_F / ||X||_F.
double residual(const SpdMatrix& x, const MeanProblem& p);

/// ||I - sum_j w_j (A_j # X^{-1})||_F.
double equivalent_equation_residual(const SpdMatrix& x, const MeanProblem& p);

/// Wasserstein barycenter by the fixed-point map
///   X <- X^{-1/2} (sum_j w_j (X^{1/2} A_j X^{1/2})^{1/2})^2 X^{-1/2},
/// stopped once residual(X) <= rel_tol. Hitting max_iter returns
/// converged = false with the full history; a non-SPD iterate throws SolverError.
SolverResult wasserstein_mean(const MeanProblem& p, const SolverConfig& cfg = {});

/// Karcher mean by unit-step Riemannian gradient iteration
///   X <- X^{1/2} exp(sum_j w_j log(X^{-1/2} A_j X^{-1/2})) X^{1/2}.
/// The reported residual is the Frobenius norm of the exponent.
SolverResult karcher_mean(const MeanProblem& p, const SolverConfig& cfg = {});

struct BoundsReport {
  SymMatrix lower_lie_trotter;               // 2I - sum w_j A_j^{-1}
  SpdMatrix upper_arithmetic;                // sum w_j A_j
  std::optional<SpdMatrix> upper_inverse;    // [2I - sum w_j A_j]^{-1}, iff sum w_j A_j < 2I
  double opnorm_bound = 0.0;                 // (sum w_j ||A_j||^{1/2})^2
};

BoundsReport bounds_report(const MeanProblem& p);

/// Loewner verdicts of the bounds against a computed mean.
struct BoundsVerdicts {
  LoewnerVerdict arithmetic_upper;              // upper_arithmetic >= mean
  LoewnerVerdict lie_trotter_lower;             // mean >= lower_lie_trotter
  std::optional<LoewnerVerdict> inverse_upper;  // upper_inverse >= mean
  double mean_opnorm = 0.0;
  bool opnorm_holds = false;                    // mean_opnorm <= opnorm_bound + opnorm_slack
  bool all_hold() const noexcept;
};

BoundsVerdicts check_bounds(const BoundsReport& bounds, const SpdMatrix& mean, double loewner_tol = 1e-8,
                            double opnorm_slack = 1e-9);

struct DetInequalityReport {
  double det_mean;
  double det_geo_product;  // prod_j (det A_j)^{w_j}
  bool holds;
};

DetInequalityReport det_inequality_check(const MeanProblem& p, const SpdMatrix& mean);

/// One comparison in a chain of bounds. witness >= 0 means the link holds.
struct ChainLink {
  std::string name;
  bool holds;
  double witness;
};

/// Orderings between the bounds themselves (no mean needed):
///   2I - sum w A^{-1} <= [sum w A^{-1}]^{-1}
///   [2I - sum w A]^{-1} >= sum w A          (only when sum w A < 2I)
///   (sum w ||A||^{1/2})^2 <= sum w ||A||
///   ||sum w A|| <= sum w ||A||
///   log det(sum w A) >= sum w log det A
std::vector<ChainLink> bound_ordering_checks(const MeanProblem& p, double loewner_tol = 1e-8);

}  // namespace bwm
