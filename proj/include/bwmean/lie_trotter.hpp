#pragma once

#include <optional>
#include <vector>

#include "bwmean/barycenter.hpp"

namespace bwm {

/// Differentiable SPD-valued curve through the identity at s = 0.
class CurveSpec {
 public:
  enum class Kind { kPower, kAffine, kExpLine };

  /// gamma(s) = base^s
  static CurveSpec power(SpdMatrix base);
  /// gamma(s) = I + s * direction, admissible while |s| ||direction|| < 1
  static CurveSpec affine(SymMatrix direction);
  /// gamma(s) = exp(s * direction)
  static CurveSpec exp_line(SymMatrix direction);

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return derivative_.dim(); }
  /// gamma'(0): log base, direction, direction respectively.
  const SymMatrix& derivative_at_zero() const noexcept { return derivative_; }
  bool admissible(double s) const noexcept;

  /// Throws DomainError when s is outside the admissible interval.
  SpdMatrix evaluate(double s) const;

 private:
  CurveSpec(Kind kind, std::optional<SpdMatrix> base, SymMatrix derivative, double radius);

  Kind kind_;
  std::optional<SpdMatrix> base_;
  SymMatrix derivative_;
  double radius_;  // ||derivative||, used for the affine admissibility test
};

SpdMatrix evaluate_curve(const CurveSpec& c, double s);

/// Omega(w; gamma_1(s), ..., gamma_n(s))^{1/s}.
SpdMatrix lie_trotter_value(const WeightVector& w, const std::vector<CurveSpec>& curves, double s,
                            const SolverConfig& cfg = {});

/// exp(sum_j w_j gamma_j'(0)).
SpdMatrix lie_trotter_target(const WeightVector& w, const std::vector<CurveSpec>& curves);

struct LieTrotterTrace {
  std::vector<double> s_values;                     // descending, positive
  std::vector<std::optional<double>> errors;        // at +s; empty entry = solver failure
  std::vector<std::optional<double>> mirror_errors; // at -s; empty unless requested
  SpdMatrix target;
};

/// 2^{-1}, ..., 2^{-count}.
std::vector<double> dyadic_schedule(int count);

/// Frobenius error of the Lie-Trotter value against the target along the
/// schedule. The solver tolerance is tightened to at most 1e-13.
LieTrotterTrace convergence_trace(const WeightVector& w, const std::vector<CurveSpec>& curves,
                                  const std::vector<double>& s_schedule, const SolverConfig& cfg = {},
                                  bool include_mirror = false);

struct DerivativeSample {
  double t;
  double error_pos;  // ||(Omega(I + tX) - I)/t - sum w X||_F
  double error_neg;  // same at -t
};

/// Finite-difference check of D Omega at the identity tuple.
std::vector<DerivativeSample> derivative_at_identity_check(const WeightVector& w,
                                                           const std::vector<SymMatrix>& directions,
                                                           const std::vector<double>& t_schedule,
                                                           const SolverConfig& cfg = {});

/// First-order convergence diagnostics shared by the suite and the CLI.
struct RateSummary {
  bool eventually_monotone;  // strictly decreasing over the second half
  double final_over_initial;
  std::vector<double> tail_ratios;  // error(s/2)/error(s) for the last four halvings
  bool exact;                       // every error <= 1e-12: nothing to converge
};

RateSummary summarize_rates(const std::vector<double>& errors);

}  // namespace bwm
