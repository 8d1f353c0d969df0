#include "bwmean/suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "bwmean/barycenter.hpp"
#include "bwmean/errors.hpp"
#include "bwmean/json_writer.hpp"
#include "bwmean/lie_trotter.hpp"
#include "bwmean/means_geometry.hpp"
#include "bwmean/random.hpp"

namespace bwm {

namespace {

using Witness = std::vector<std::pair<std::string, double>>;

// Thresholds shared with the acceptance suite.
constexpr double kOracleTol = 1e-6;
constexpr double kSymmetryTol = 1e-10;
constexpr double kTriangleSlack = 1e-9;
constexpr double kPerturbationSlack = 1e-9;
constexpr double kGeomeanTol = 1e-9;
constexpr double kRiccatiTol = 1e-10;
constexpr double kResidualTol = 1e-12;
constexpr double kEquivalentTol = 1e-10;
constexpr double kTwoPointTol = 1e-8;
constexpr double kLoewnerTol = 1e-8;
constexpr double kOpnormSlack = 1e-9;
constexpr double kInvarianceTol = 1e-9;
constexpr double kUniquenessTol = 1e-8;
constexpr double kDetEqualityTol = 1e-10;

class Recorder {
 public:
  Recorder(std::size_t index, std::uint64_t seed) : index_(index), seed_(seed) {}

  void add(std::string id, bool pass, Witness w = {}) {
    records_.push_back({std::move(id), index_, seed_, pass, std::move(w), {}});
  }

  // Runs body; an exception becomes a failing record carrying its message.
  void guarded(const std::string& id, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      records_.push_back({id, index_, seed_, false, {}, e.what()});
    }
  }

  std::vector<CheckRecord> take() { return std::move(records_); }

 private:
  std::size_t index_;
  std::uint64_t seed_;
  std::vector<CheckRecord> records_;
};

struct Instance {
  Rng rng;
  const EnsembleSpec& spec;

  std::size_t dim() { return static_cast<std::size_t>(rng.uniform_int(spec.dim_range.lo, spec.dim_range.hi)); }
  std::size_t n() { return static_cast<std::size_t>(rng.uniform_int(spec.n_range.lo, spec.n_range.hi)); }
  SpdMatrix spd(std::size_t m) { return random_spd(rng, m, spec.condition_max); }

  MeanProblem problem() {
    const std::size_t m = dim();
    const std::size_t count = n();
    std::vector<SpdMatrix> mats;
    for (std::size_t j = 0; j < count; ++j) mats.push_back(spd(m));
    return MeanProblem(std::move(mats), WeightVector(random_weights(rng, count)));
  }

  // Nonsingular with singular values in [0.5, 2].
  Matrix nonsingular(std::size_t m) {
    const Matrix u = random_orthogonal(rng, m);
    const Matrix v = random_orthogonal(rng, m);
    Matrix d(m);
    for (std::size_t i = 0; i < m; ++i) d(i, i) = std::exp(rng.uniform(std::log(0.5), std::log(2.0)));
    return u * d * v;
  }
};

SolverResult solve_or_throw(const MeanProblem& p, const SolverConfig& cfg = {}) {
  SolverResult r = wasserstein_mean(p, cfg);
  if (!r.converged) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "wasserstein_mean did not converge (residual " << r.residual << " after " << r.iterations
        << " iterations)";
    throw SolverError(msg.str());
  }
  return r;
}

void metric_checks(Instance& in, Recorder& rec) {
  rec.guarded("metric.oracle_2x2", [&] {
    const SpdMatrix a = in.spd(2), b = in.spd(2);
    const double formula = wasserstein_distance(a, b);
    const double oracle = wasserstein_distance_oracle_2x2(a, b);
    const double diff = std::abs(formula - oracle);
    rec.add("metric.oracle_2x2", diff <= kOracleTol, {{"formula", formula}, {"oracle", oracle}, {"diff", diff}});
  });
  const std::size_t m = in.dim();
  const SpdMatrix a = in.spd(m), b = in.spd(m), c = in.spd(m);
  rec.guarded("metric.identity", [&] {
    const double d = wasserstein_distance(a, a);
    rec.add("metric.identity", d <= kSymmetryTol, {{"d_aa", d}});
  });
  rec.guarded("metric.symmetry", [&] {
    const double ab = wasserstein_distance(a, b), ba = wasserstein_distance(b, a);
    rec.add("metric.symmetry", std::abs(ab - ba) <= kSymmetryTol, {{"d_ab", ab}, {"d_ba", ba}});
  });
  rec.guarded("metric.triangle", [&] {
    const double ac = wasserstein_distance(a, c);
    const double slack = wasserstein_distance(a, b) + wasserstein_distance(b, c) - ac;
    rec.add("metric.triangle", slack >= -kTriangleSlack, {{"d_ac", ac}, {"slack", slack}});
  });
  rec.guarded("metric.riemannian_symmetry", [&] {
    const double ab = riemannian_distance(a, b), ba = riemannian_distance(b, a);
    rec.add("metric.riemannian_symmetry", std::abs(ab - ba) <= kSymmetryTol, {{"delta_ab", ab}, {"delta_ba", ba}});
  });
  const double t = in.rng.uniform();
  rec.guarded("metric.perturbation_bound", [&] {
    const auto r = geodesic_perturbation_bound(a, b, c, GeodesicParam(t));
    rec.add("metric.perturbation_bound", r.lhs <= r.rhs + kPerturbationSlack,
            {{"t", t}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"lambda1", r.lambda1}});
  });
  rec.guarded("metric.geodesic_endpoints", [&] {
    const bool exact = wasserstein_geodesic(a, b, GeodesicParam(0.0)).matrix() == a.matrix() &&
                       wasserstein_geodesic(a, b, GeodesicParam(1.0)).matrix() == b.matrix();
    rec.add("metric.geodesic_endpoints", exact);
  });
  rec.guarded("metric.geodesic_affine", [&] {
    const double s = in.rng.uniform(), u = in.rng.uniform();
    const SpdMatrix lhs = wasserstein_geodesic(wasserstein_geodesic(a, b, GeodesicParam(s)),
                                               wasserstein_geodesic(a, b, GeodesicParam(t)), GeodesicParam(u));
    const SpdMatrix rhs = wasserstein_geodesic(a, b, GeodesicParam((1.0 - u) * s + u * t));
    const double err = relative_difference(lhs, rhs);
    rec.add("metric.geodesic_affine", err <= kGeomeanTol, {{"s", s}, {"t", t}, {"u", u}, {"rel_error", err}});
  });
}

void geomean_checks(Instance& in, Recorder& rec) {
  const std::size_t m = in.dim();
  const SpdMatrix a = in.spd(m), b = in.spd(m);
  const double t = in.rng.uniform(0.01, 0.99);
  const GeodesicParam tp(t);
  rec.guarded("geomean.riccati", [&] {
    const SpdMatrix x = geometric_mean(a, b, GeodesicParam(0.5));
    const double err = relative_difference(x.matrix() * inverse(a).matrix() * x.matrix(), b);
    rec.add("geomean.riccati", err <= kRiccatiTol, {{"rel_error", err}});
  });
  rec.guarded("geomean.swap", [&] {
    const double err = relative_difference(geometric_mean(a, b, tp), geometric_mean(b, a, GeodesicParam(1.0 - t)));
    rec.add("geomean.swap", err <= kGeomeanTol, {{"t", t}, {"rel_error", err}});
  });
  rec.guarded("geomean.congruence", [&] {
    const Matrix x = in.nonsingular(m);
    const SymMatrix lhs = congruence(x, geometric_mean(a, b, tp));
    const SpdMatrix rhs = geometric_mean(SpdMatrix(congruence(x, a)), SpdMatrix(congruence(x, b)), tp);
    const double err = relative_difference(lhs, rhs);
    rec.add("geomean.congruence", err <= kGeomeanTol, {{"t", t}, {"rel_error", err}});
  });
  rec.guarded("geomean.inverse", [&] {
    const double err =
        relative_difference(inverse(geometric_mean(a, b, tp)), geometric_mean(inverse(a), inverse(b), tp));
    rec.add("geomean.inverse", err <= kGeomeanTol, {{"t", t}, {"rel_error", err}});
  });
  rec.guarded("geomean.determinant", [&] {
    const double lhs = log_determinant(geometric_mean(a, b, tp));
    const double rhs = (1.0 - t) * log_determinant(a) + t * log_determinant(b);
    const double err = std::abs(std::expm1(lhs - rhs));
    rec.add("geomean.determinant", err <= kGeomeanTol, {{"t", t}, {"rel_error", err}});
  });
  rec.guarded("geomean.agh", [&] {
    const MeanProblem p({a, b}, WeightVector({1.0 - t, t}));
    const SpdMatrix g = geometric_mean(a, b, tp);
    const auto upper = loewner_geq(arithmetic_mean(p), g, kGeomeanTol);
    const auto lower = loewner_geq(g, harmonic_mean(p), kGeomeanTol);
    rec.add("geomean.agh", upper.holds && lower.holds,
            {{"t", t}, {"upper_witness", upper.witness}, {"lower_witness", lower.witness}});
  });
  rec.guarded("geomean.karcher_two_point", [&] {
    const double tt = in.rng.uniform(0.05, 0.95);
    const SolverResult r = karcher_mean(MeanProblem({a, b}, WeightVector({1.0 - tt, tt})));
    const double err = relative_difference(r.mean, geometric_mean(a, b, GeodesicParam(tt)));
    rec.add("geomean.karcher_two_point", r.converged && err <= kGeomeanTol,
            {{"t", tt}, {"rel_error", err}, {"iterations", r.iterations}});
  });
}

void fixed_point_checks(Instance& in, Recorder& rec) {
  const MeanProblem p = in.problem();
  rec.guarded("fixed_point.certificate", [&] {
    const SolverResult r = wasserstein_mean(p);
    const double eq = equivalent_equation_residual(r.mean, p);
    const bool ok = r.converged && r.residual <= kResidualTol && eq <= kEquivalentTol;
    rec.add("fixed_point.certificate", ok,
            {{"n", static_cast<double>(p.size())},
             {"dim", static_cast<double>(p.dim())},
             {"iterations", r.iterations},
             {"residual", r.residual},
             {"equivalent_residual", eq}});
  });
}

void two_point_checks(Instance& in, Recorder& rec) {
  const std::size_t m = in.dim();
  const SpdMatrix a = in.spd(m), b = in.spd(m);
  const double t = in.rng.uniform(0.01, 0.99);
  rec.guarded("two_point.closed_form", [&] {
    const SolverResult r = solve_or_throw(MeanProblem({a, b}, WeightVector({1.0 - t, t})));
    const double err = relative_difference(r.mean, wasserstein_geodesic(a, b, GeodesicParam(t)));
    rec.add("two_point.closed_form", err <= kTwoPointTol, {{"t", t}, {"rel_error", err}});
  });
}

void record_bounds(Recorder& rec, const std::string& prefix, const BoundsReport& b, const SpdMatrix& mean) {
  const BoundsVerdicts v = check_bounds(b, mean, kLoewnerTol, kOpnormSlack);
  rec.add(prefix + "arithmetic_upper", v.arithmetic_upper.holds, {{"witness", v.arithmetic_upper.witness}});
  rec.add(prefix + "lie_trotter_lower", v.lie_trotter_lower.holds, {{"witness", v.lie_trotter_lower.witness}});
  rec.add(prefix + "opnorm", v.opnorm_holds, {{"mean_opnorm", v.mean_opnorm}, {"bound", b.opnorm_bound}});
  if (v.inverse_upper) rec.add(prefix + "inverse_upper", v.inverse_upper->holds, {{"witness", v.inverse_upper->witness}});
}

void bounds_checks(Instance& in, Recorder& rec) {
  const MeanProblem p = in.problem();
  rec.guarded("bounds.sandwich", [&] {
    const SolverResult r = solve_or_throw(p);
    record_bounds(rec, "bounds.", bounds_report(p), r.mean);
  });
  rec.guarded("bounds.harmonic_below_arithmetic", [&] {
    const auto v = loewner_geq(arithmetic_mean(p), harmonic_mean(p), kLoewnerTol);
    rec.add("bounds.harmonic_below_arithmetic", v.holds, {{"witness", v.witness}});
  });
  rec.guarded("bounds.chain", [&] {
    for (const auto& link : bound_ordering_checks(p, kLoewnerTol))
      rec.add("bounds.chain." + link.name, link.holds, {{"witness", link.witness}});
  });
  // Rescaled so that sum w A = 1.5 I at most, which activates the conditional
  // [2I - sum w A]^{-1} upper bound.
  rec.guarded("bounds.scaled", [&] {
    const double scale = 1.5 / arithmetic_mean(p).eigen().max();
    std::vector<SpdMatrix> scaled;
    for (const auto& a : p.matrices()) scaled.emplace_back(scale * a.sym());
    const MeanProblem q(std::move(scaled), p.weights());
    const SolverResult r = solve_or_throw(q);
    record_bounds(rec, "bounds.scaled.", bounds_report(q), r.mean);
    for (const auto& link : bound_ordering_checks(q, kLoewnerTol))
      rec.add("bounds.scaled.chain." + link.name, link.holds, {{"witness", link.witness}});
  });
}

void det_checks(Instance& in, Recorder& rec) {
  const MeanProblem p = in.problem();
  rec.guarded("det.inequality", [&] {
    const SolverResult r = solve_or_throw(p);
    const auto d = det_inequality_check(p, r.mean);
    rec.add("det.inequality", d.holds, {{"det_mean", d.det_mean}, {"det_geo_product", d.det_geo_product}});
  });
  rec.guarded("det.equality_case", [&] {
    const MeanProblem eq(std::vector<SpdMatrix>(p.size(), p[0]), p.weights());
    const SolverResult r = solve_or_throw(eq);
    const auto d = det_inequality_check(eq, r.mean);
    const double rel = std::abs(d.det_mean - d.det_geo_product) / std::max(1.0, d.det_geo_product);
    rec.add("det.equality_case", rel <= kDetEqualityTol,
            {{"det_mean", d.det_mean}, {"det_geo_product", d.det_geo_product}, {"rel_gap", rel}});
  });
}

void invariance_checks(Instance& in, Recorder& rec) {
  const MeanProblem p = in.problem();
  const Matrix q = random_orthogonal(in.rng, p.dim());
  std::vector<std::size_t> perm(p.size());
  for (std::size_t j = 0; j < perm.size(); ++j) perm[j] = j;
  for (std::size_t j = perm.size(); j > 1; --j) std::swap(perm[j - 1], perm[static_cast<std::size_t>(in.rng.uniform_int(0, static_cast<int>(j) - 1))]);

  rec.guarded("invariance.base", [&] {
    const SpdMatrix omega = solve_or_throw(p).mean;
    for (double alpha : {0.1, 3.0}) {
      std::vector<SpdMatrix> scaled;
      for (const auto& a : p.matrices()) scaled.emplace_back(alpha * a.sym());
      const SpdMatrix lhs = solve_or_throw(MeanProblem(std::move(scaled), p.weights())).mean;
      const double err = relative_difference(lhs, alpha * omega.matrix());
      rec.add(alpha < 1.0 ? "invariance.homogeneity_0.1" : "invariance.homogeneity_3", err <= kInvarianceTol,
              {{"alpha", alpha}, {"rel_error", err}});
    }
    {
      std::vector<SpdMatrix> mats;
      std::vector<double> ws;
      for (std::size_t j : perm) {
        mats.push_back(p[j]);
        ws.push_back(p.weights()[j]);
      }
      const SpdMatrix lhs = solve_or_throw(MeanProblem(std::move(mats), WeightVector(std::move(ws)))).mean;
      const double err = relative_difference(lhs, omega);
      rec.add("invariance.permutation", err <= kInvarianceTol, {{"rel_error", err}});
    }
    {
      std::vector<SpdMatrix> mats = p.matrices();
      mats.insert(mats.end(), p.matrices().begin(), p.matrices().end());
      std::vector<double> ws = p.weights().values();
      ws.insert(ws.end(), p.weights().values().begin(), p.weights().values().end());
      const SpdMatrix lhs = solve_or_throw(MeanProblem(std::move(mats), WeightVector(std::move(ws)))).mean;
      const double err = relative_difference(lhs, omega);
      rec.add("invariance.repetition", err <= kInvarianceTol, {{"k", 2.0}, {"rel_error", err}});
    }
    {
      std::vector<SpdMatrix> mats;
      for (const auto& a : p.matrices()) mats.emplace_back(congruence(q, a));
      const SpdMatrix lhs = solve_or_throw(MeanProblem(std::move(mats), p.weights())).mean;
      const double err = relative_difference(lhs, congruence(q, omega));
      rec.add("invariance.orthogonal_congruence", err <= kInvarianceTol, {{"rel_error", err}});
    }
    {
      SolverConfig identity_start;
      identity_start.initial = InitialPoint::kIdentity;
      const SpdMatrix other = solve_or_throw(p, identity_start).mean;
      const double err = relative_difference(other, omega);
      rec.add("invariance.uniqueness", err <= kUniquenessTol, {{"rel_error", err}});
    }
  });
}

void lie_trotter_checks(Instance& in, Recorder& rec) {
  const int n_hi = std::max(2, std::min(4, in.spec.n_range.hi));
  const int n_lo = std::min(n_hi, std::max(2, in.spec.n_range.lo));
  const int d_hi = std::max(1, std::min(6, in.spec.dim_range.hi));
  const int d_lo = std::min(d_hi, std::max(1, in.spec.dim_range.lo));
  const auto n = static_cast<std::size_t>(in.rng.uniform_int(n_lo, n_hi));
  const auto m = static_cast<std::size_t>(in.rng.uniform_int(d_lo, d_hi));
  const double kappa = std::min(in.spec.condition_max, 100.0);

  std::vector<CurveSpec> curves;
  for (std::size_t j = 0; j < n; ++j) {
    switch (in.rng.uniform_int(0, 2)) {
      case 0:
        curves.push_back(CurveSpec::power(random_spd(in.rng, m, kappa)));
        break;
      case 1:
        curves.push_back(CurveSpec::affine(random_symmetric(in.rng, m, in.rng.uniform(0.2, 1.0))));
        break;
      default:
        curves.push_back(CurveSpec::exp_line(random_symmetric(in.rng, m, in.rng.uniform(0.2, 1.5))));
        break;
    }
  }
  const WeightVector w(random_weights(in.rng, n));
  const auto schedule = dyadic_schedule(10);

  auto rate_witness = [](const RateSummary& r, Witness& wit) {
    wit.emplace_back("final_over_initial", r.final_over_initial);
    for (std::size_t k = 0; k < r.tail_ratios.size(); ++k) wit.emplace_back("tail_ratio_" + std::to_string(k), r.tail_ratios[k]);
  };
  auto rates_ok = [](const RateSummary& r) {
    if (r.exact) return true;
    const bool ratios = std::all_of(r.tail_ratios.begin(), r.tail_ratios.end(),
                                    [](double q) { return q >= 0.25 && q <= 0.75; });
    return r.eventually_monotone && r.final_over_initial <= 1e-2 && ratios;
  };

  rec.guarded("lie_trotter.trace", [&] {
    const LieTrotterTrace trace = convergence_trace(w, curves, schedule, {}, true);
    std::vector<double> pos, neg;
    for (std::size_t k = 0; k < schedule.size(); ++k) {
      if (!trace.errors[k] || !trace.mirror_errors[k])
        throw SolverError("trace point s = " + format_number(schedule[k], 6) + " failed");
      pos.push_back(*trace.errors[k]);
      neg.push_back(*trace.mirror_errors[k]);
    }
    const RateSummary rp = summarize_rates(pos);
    Witness wit{{"n", static_cast<double>(n)}, {"dim", static_cast<double>(m)}, {"initial_error", pos.front()},
                {"final_error", pos.back()}};
    rate_witness(rp, wit);
    rec.add("lie_trotter.trace", rates_ok(rp), std::move(wit));

    const RateSummary rn = summarize_rates(neg);
    Witness nwit{{"final_error", neg.back()}};
    rate_witness(rn, nwit);
    rec.add("lie_trotter.trace_negative", rates_ok(rn), std::move(nwit));

    const double fp = pos.back(), fn = neg.back();
    const bool two_sided = (rp.exact && rn.exact) || (fn <= 2.0 * fp && fp <= 2.0 * fn);
    rec.add("lie_trotter.two_sided", two_sided, {{"final_error_pos", fp}, {"final_error_neg", fn}});
  });

  rec.guarded("lie_trotter.derivative", [&] {
    std::vector<SymMatrix> dirs;
    for (std::size_t j = 0; j < n; ++j) dirs.push_back(random_symmetric(in.rng, m, in.rng.uniform(0.2, 1.0)));
    const auto samples = derivative_at_identity_check(w, dirs, schedule);
    std::vector<double> pos, neg;
    for (const auto& s : samples) {
      pos.push_back(s.error_pos);
      neg.push_back(s.error_neg);
    }
    const RateSummary rp = summarize_rates(pos), rn = summarize_rates(neg);
    Witness wit{{"final_error_pos", pos.back()}, {"final_error_neg", neg.back()}};
    rate_witness(rp, wit);
    rec.add("lie_trotter.derivative", rates_ok(rp) && rates_ok(rn), std::move(wit));
  });

  rec.guarded("lie_trotter.log_euclidean_limit", [&] {
    std::vector<SpdMatrix> bases;
    std::vector<CurveSpec> powers;
    for (std::size_t j = 0; j < n; ++j) {
      bases.push_back(random_spd(in.rng, m, kappa));
      powers.push_back(CurveSpec::power(bases.back()));
    }
    const SpdMatrix via_curves = lie_trotter_target(w, powers);
    const SpdMatrix via_logs = log_euclidean_mean(MeanProblem(bases, w));
    const double diff = max_abs_difference(via_curves, via_logs);
    rec.add("lie_trotter.log_euclidean_limit", diff == 0.0, {{"max_abs_diff", diff}});
  });
}

void dispatch(SuiteKind suite, Instance& in, Recorder& rec) {
  switch (suite) {
    case SuiteKind::kMetric: return metric_checks(in, rec);
    case SuiteKind::kGeomean: return geomean_checks(in, rec);
    case SuiteKind::kFixedPoint: return fixed_point_checks(in, rec);
    case SuiteKind::kTwoPoint: return two_point_checks(in, rec);
    case SuiteKind::kBounds: return bounds_checks(in, rec);
    case SuiteKind::kDet: return det_checks(in, rec);
    case SuiteKind::kInvariance: return invariance_checks(in, rec);
    case SuiteKind::kLieTrotter: return lie_trotter_checks(in, rec);
  }
}

// Each suite draws from its own stream so selecting a subset of suites does
// not change any instance.
std::uint64_t suite_stream(SuiteKind suite, std::uint64_t instance_seed) {
  SplitMix64 sm(instance_seed ^ (0x51ed2701a3c4f5e9ULL * (static_cast<std::uint64_t>(suite) + 1)));
  return sm.next();
}

}  // namespace

std::string_view suite_name(SuiteKind k) noexcept {
  switch (k) {
    case SuiteKind::kMetric: return "metric";
    case SuiteKind::kGeomean: return "geomean";
    case SuiteKind::kFixedPoint: return "fixed-point";
    case SuiteKind::kTwoPoint: return "two-point";
    case SuiteKind::kBounds: return "bounds";
    case SuiteKind::kDet: return "det";
    case SuiteKind::kInvariance: return "invariance";
    case SuiteKind::kLieTrotter: return "lie-trotter";
  }
  return "?";
}

const std::vector<SuiteKind>& all_suites() {
  static const std::vector<SuiteKind> kAll{SuiteKind::kMetric,   SuiteKind::kGeomean, SuiteKind::kFixedPoint,
                                           SuiteKind::kTwoPoint, SuiteKind::kBounds,  SuiteKind::kDet,
                                           SuiteKind::kInvariance, SuiteKind::kLieTrotter};
  return kAll;
}

std::vector<SuiteKind> parse_suite_selector(std::string_view selector) {
  if (selector == "all") return all_suites();
  std::vector<SuiteKind> out;
  std::size_t start = 0;
  while (start <= selector.size()) {
    const std::size_t comma = selector.find(',', start);
    const std::string_view item = selector.substr(start, comma == std::string_view::npos ? selector.npos : comma - start);
    const auto& all = all_suites();
    const auto it = std::find_if(all.begin(), all.end(), [&](SuiteKind k) { return suite_name(k) == item; });
    if (it == all.end()) throw InputError("unknown suite '" + std::string(item) + "'");
    if (std::find(out.begin(), out.end(), *it) == out.end()) out.push_back(*it);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  // Canonical order keeps reports independent of how the selector was spelled.
  std::vector<SuiteKind> ordered;
  for (SuiteKind k : all_suites())
    if (std::find(out.begin(), out.end(), k) != out.end()) ordered.push_back(k);
  return ordered;
}

void EnsembleSpec::validate() const {
  if (count < 0) throw InputError("ensemble: count must be >= 0");
  if (n_range.lo < 1 || n_range.hi < n_range.lo) throw InputError("ensemble: invalid n range");
  if (dim_range.lo < 1 || dim_range.hi < dim_range.lo) throw InputError("ensemble: invalid dim range");
  if (!(condition_max >= 1.0) || !std::isfinite(condition_max))
    throw InputError("ensemble: condition_max must be >= 1");
}

std::size_t SuiteReport::passed() const noexcept {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; }));
}

std::string SuiteReport::to_json(bool failures_only) const {
  JsonWriter w;
  w.begin_object();
  w.key("schema_version").value(1);
  w.key("spec").begin_object();
  w.key("seed").value(spec.seed);
  w.key("count").value(spec.count);
  w.key("n_range").numbers({double(spec.n_range.lo), double(spec.n_range.hi)});
  w.key("dim_range").numbers({double(spec.dim_range.lo), double(spec.dim_range.hi)});
  w.key("condition_max").value(spec.condition_max);
  w.end_object();
  w.key("suites").begin_array();
  for (SuiteKind k : suites) w.value(suite_name(k));
  w.end_array();
  w.key("summary").begin_object();
  w.key("total").value(total());
  w.key("passed").value(passed());
  w.key("failed").value(failed());
  w.end_object();
  w.key("records").begin_array();
  for (const auto& r : records) {
    if (failures_only && r.pass) continue;
    w.begin_object();
    w.key("check_id").value(r.check_id);
    w.key("instance_index").value(r.instance_index);
    w.key("instance_seed").value(r.instance_seed);
    w.key("pass").value(r.pass);
    w.key("witness").begin_object();
    for (const auto& [name, v] : r.witness) w.key(name).value(v);
    w.end_object();
    if (!r.note.empty()) w.key("note").value(r.note);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

std::string SuiteReport::summary_text() const {
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_suite;  // passed, total
  for (const auto& r : records) {
    auto& slot = per_suite[r.check_id.substr(0, r.check_id.find('.'))];
    slot.second += 1;
    if (r.pass) slot.first += 1;
  }
  std::ostringstream out;
  out.precision(6);
  for (const auto& [name, counts] : per_suite)
    out << name << ": " << counts.first << "/" << counts.second << " passed\n";
  out << "total: " << passed() << "/" << total() << " passed ("
      << (total() ? 100.0 * static_cast<double>(passed()) / static_cast<double>(total()) : 100.0) << "%)\n";
  return out.str();
}

std::vector<CheckRecord> run_instance(SuiteKind suite, const EnsembleSpec& spec, std::uint64_t instance_seed,
                                      std::size_t instance_index) {
  spec.validate();
  Instance in{Rng(suite_stream(suite, instance_seed)), spec};
  Recorder rec(instance_index, instance_seed);
  dispatch(suite, in, rec);
  return rec.take();
}

SuiteReport run_suite(const EnsembleSpec& spec, const std::vector<SuiteKind>& suites) {
  spec.validate();
  SuiteReport report{spec, suites, {}};
  for (int i = 0; i < spec.count; ++i) {
    const auto index = static_cast<std::size_t>(i);
    const std::uint64_t seed = instance_seed(spec.seed, index);
    for (SuiteKind k : suites) {
      auto recs = run_instance(k, spec, seed, index);
      report.records.insert(report.records.end(), std::make_move_iterator(recs.begin()),
                            std::make_move_iterator(recs.end()));
    }
  }
  return report;
}

}  // namespace bwm
