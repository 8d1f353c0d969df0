#include "bwmean/lie_trotter.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bwmean/errors.hpp"

namespace bwm {

namespace {

void require_curves(const WeightVector& w, const std::vector<CurveSpec>& curves) {
  if (curves.empty()) throw DomainError("lie_trotter: at least one curve required");
  if (curves.size() != w.size()) throw DimensionError("lie_trotter: weight count differs from curve count");
  for (const auto& c : curves)
    if (c.dim() != curves.front().dim()) throw DimensionError("lie_trotter: curves of different dimension");
}

SolverConfig tightened(SolverConfig cfg) {
  cfg.rel_tol = std::min(cfg.rel_tol, 1e-13);
  return cfg;
}

std::optional<double> trace_point(const WeightVector& w, const std::vector<CurveSpec>& curves, double s,
                                  const SolverConfig& cfg, const SpdMatrix& target) {
  try {
    return frobenius_norm(lie_trotter_value(w, curves, s, cfg).matrix() - target.matrix());
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

CurveSpec::CurveSpec(Kind kind, std::optional<SpdMatrix> base, SymMatrix derivative, double radius)
    : kind_(kind), base_(std::move(base)), derivative_(std::move(derivative)), radius_(radius) {}

CurveSpec CurveSpec::power(SpdMatrix base) {
  SymMatrix log_base = logm(base);
  return {Kind::kPower, std::move(base), std::move(log_base), 0.0};
}

CurveSpec CurveSpec::affine(SymMatrix direction) {
  const double radius = operator_norm(direction);
  return {Kind::kAffine, std::nullopt, std::move(direction), radius};
}

CurveSpec CurveSpec::exp_line(SymMatrix direction) {
  return {Kind::kExpLine, std::nullopt, std::move(direction), 0.0};
}

bool CurveSpec::admissible(double s) const noexcept {
  if (!std::isfinite(s)) return false;
  return kind_ != Kind::kAffine || std::abs(s) * radius_ < 1.0;
}

SpdMatrix CurveSpec::evaluate(double s) const {
  if (!admissible(s)) {
    std::ostringstream msg;
    msg << "CurveSpec: s = " << s << " outside the admissible interval";
    throw DomainError(msg.str());
  }
  if (s == 0.0) return SpdMatrix::identity(dim());
  switch (kind_) {
    case Kind::kPower:
      return powm(*base_, s);
    case Kind::kAffine:
      return SpdMatrix(SymMatrix::identity(dim()) + s * derivative_);
    case Kind::kExpLine:
      return expm(s * derivative_);
  }
  return SpdMatrix::identity(dim());
}

SpdMatrix evaluate_curve(const CurveSpec& c, double s) { return c.evaluate(s); }

SpdMatrix lie_trotter_value(const WeightVector& w, const std::vector<CurveSpec>& curves, double s,
                            const SolverConfig& cfg) {
  require_curves(w, curves);
  if (s == 0.0) throw DomainError("lie_trotter_value: s must be nonzero");
  std::vector<SpdMatrix> points;
  points.reserve(curves.size());
  for (const auto& c : curves) points.push_back(c.evaluate(s));
  const SolverResult r = wasserstein_mean(MeanProblem(std::move(points), w), cfg);
  if (!r.converged) {
    std::ostringstream msg;
    msg << "lie_trotter_value: barycenter did not converge at s = " << s << " (residual " << r.residual << ")";
    throw SolverError(msg.str());
  }
  return powm(r.mean, 1.0 / s);
}

SpdMatrix lie_trotter_target(const WeightVector& w, const std::vector<CurveSpec>& curves) {
  require_curves(w, curves);
  Matrix acc(curves.front().dim());
  for (std::size_t j = 0; j < curves.size(); ++j) acc += w[j] * curves[j].derivative_at_zero().matrix();
  return expm(SymMatrix(std::move(acc)));
}

std::vector<double> dyadic_schedule(int count) {
  if (count < 1) throw DomainError("dyadic_schedule: count must be >= 1");
  std::vector<double> s(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) s[static_cast<std::size_t>(k)] = std::ldexp(1.0, -(k + 1));
  return s;
}

LieTrotterTrace convergence_trace(const WeightVector& w, const std::vector<CurveSpec>& curves,
                                  const std::vector<double>& s_schedule, const SolverConfig& cfg,
                                  bool include_mirror) {
  require_curves(w, curves);
  for (std::size_t k = 0; k < s_schedule.size(); ++k) {
    const double s = s_schedule[k];
    if (!(s > 0.0) || (k > 0 && !(s < s_schedule[k - 1])))
      throw DomainError("convergence_trace: schedule must be positive and strictly descending");
    for (const auto& c : curves)
      if (!c.admissible(s)) throw DomainError("convergence_trace: schedule leaves a curve's admissible interval");
  }
  const SolverConfig inner = tightened(cfg);
  LieTrotterTrace trace{s_schedule, {}, {}, lie_trotter_target(w, curves)};
  for (double s : s_schedule) {
    trace.errors.push_back(trace_point(w, curves, s, inner, trace.target));
    if (include_mirror) trace.mirror_errors.push_back(trace_point(w, curves, -s, inner, trace.target));
  }
  return trace;
}

std::vector<DerivativeSample> derivative_at_identity_check(const WeightVector& w,
                                                           const std::vector<SymMatrix>& directions,
                                                           const std::vector<double>& t_schedule,
                                                           const SolverConfig& cfg) {
  if (directions.size() != w.size()) throw DimensionError("derivative_at_identity_check: count mismatch");
  const std::size_t m = directions.front().dim();
  Matrix expected(m);
  double rho = 0.0;
  for (std::size_t j = 0; j < directions.size(); ++j) {
    if (directions[j].dim() != m) throw DimensionError("derivative_at_identity_check: dimension mismatch");
    expected += w[j] * directions[j].matrix();
    rho = std::max(rho, operator_norm(directions[j]));
  }
  const SolverConfig inner = tightened(cfg);
  auto quotient_error = [&](double t) {
    std::vector<SpdMatrix> points;
    for (const auto& x : directions) points.emplace_back(SymMatrix::identity(m) + t * x);
    const SolverResult r = wasserstein_mean(MeanProblem(std::move(points), w), inner);
    Matrix q = r.mean.matrix() - Matrix::identity(m);
    q *= 1.0 / t;
    return frobenius_norm(q - expected);
  };
  std::vector<DerivativeSample> out;
  for (double t : t_schedule) {
    if (!(t > 0.0) || !(t * rho < 1.0))
      throw DomainError("derivative_at_identity_check: need 0 < t < 1 / max spectral radius");
    out.push_back({t, quotient_error(t), quotient_error(-t)});
  }
  return out;
}

RateSummary summarize_rates(const std::vector<double>& errors) {
  RateSummary r{false, 0.0, {}, false};
  if (errors.empty()) return r;
  r.exact = std::all_of(errors.begin(), errors.end(), [](double e) { return e <= 1e-12; });
  r.final_over_initial = errors.front() > 0.0 ? errors.back() / errors.front() : 0.0;
  const std::size_t half = errors.size() / 2;
  r.eventually_monotone = true;
  for (std::size_t k = std::max<std::size_t>(half, 1); k < errors.size(); ++k)
    if (!(errors[k] < errors[k - 1])) r.eventually_monotone = false;
  const std::size_t first = errors.size() > 4 ? errors.size() - 4 : 1;
  for (std::size_t k = first; k < errors.size(); ++k)
    r.tail_ratios.push_back(errors[k - 1] > 0.0 ? errors[k] / errors[k - 1] : 0.0);
  return r;
}

}  // namespace bwm
