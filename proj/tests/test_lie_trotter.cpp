#include <doctest.h>

#include <cmath>

#include "bwmean/errors.hpp"
#include "bwmean/lie_trotter.hpp"
#include "test_support.hpp"

using namespace bwm;

namespace {

SpdMatrix diag(std::vector<double> d) { return SpdMatrix(SymMatrix::diagonal(d)); }

// ((sum w a^{s/2})^2)^{1/s}, the scalar value for power curves through a.
double scalar_value(const std::vector<double>& w, const std::vector<double>& a, double s) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += w[j] * std::pow(a[j], s / 2.0);
  return std::pow(acc * acc, 1.0 / s);
}

}  // namespace

TEST_CASE("dyadic schedule") {
  const auto s = dyadic_schedule(4);
  CHECK((s == std::vector<double>{0.5, 0.25, 0.125, 0.0625}));
  CHECK_THROWS_AS(dyadic_schedule(0), DomainError);
}

TEST_CASE("curve evaluation") {
  const SpdMatrix base{{2, 1}, {1, 3}};
  const auto p = CurveSpec::power(base);
  CHECK(p.kind() == CurveSpec::Kind::kPower);
  CHECK(p.evaluate(0.0) == SpdMatrix::identity(2).sym());
  CHECK(relative_difference(p.evaluate(1.0), base) <= 1e-13);
  CHECK(relative_difference(p.derivative_at_zero(), logm(base)) <= 1e-15);

  const SymMatrix x{{0, 2}, {2, 0}};  // spectral radius 2
  const auto a = CurveSpec::affine(x);
  CHECK(a.admissible(0.49));
  CHECK_FALSE(a.admissible(0.5));
  CHECK_FALSE(a.admissible(-0.5));
  CHECK_THROWS_AS(a.evaluate(0.6), DomainError);
  CHECK(max_abs_difference(evaluate_curve(a, 0.25), Matrix{{1, 0.5}, {0.5, 1}}) <= 1e-15);

  const auto e = CurveSpec::exp_line(x);
  CHECK(e.admissible(100.0));
  const SpdMatrix v = e.evaluate(0.5);
  CHECK(v(0, 0) == doctest::Approx(std::cosh(1.0)).epsilon(1e-13));
  CHECK(v(0, 1) == doctest::Approx(std::sinh(1.0)).epsilon(1e-13));
}

TEST_CASE("lie_trotter_value matches the scalar closed form on diagonal power curves") {
  const std::vector<double> w{0.3, 0.7};
  const std::vector<double> a0{2.0, 5.0}, a1{0.5, 3.0};
  const std::vector<CurveSpec> curves{CurveSpec::power(diag({a0[0], a1[0]})), CurveSpec::power(diag({a0[1], a1[1]}))};
  for (double s : {1.0, 0.5, 0.1, -0.25}) {
    const SpdMatrix v = lie_trotter_value(WeightVector(w), curves, s);
    CHECK(v(0, 0) == doctest::Approx(scalar_value(w, a0, s)).epsilon(1e-11));
    CHECK(v(1, 1) == doctest::Approx(scalar_value(w, a1, s)).epsilon(1e-11));
    CHECK(std::abs(v(0, 1)) <= 1e-14);
  }
  CHECK_THROWS_AS(lie_trotter_value(WeightVector(w), curves, 0.0), DomainError);
  const SpdMatrix target = lie_trotter_target(WeightVector(w), curves);
  CHECK(target(0, 0) == doctest::Approx(std::exp(0.3 * std::log(2.0) + 0.7 * std::log(5.0))).epsilon(1e-13));
}

TEST_CASE("input validation") {
  const std::vector<CurveSpec> one{CurveSpec::exp_line(SymMatrix::identity(2))};
  CHECK_THROWS_AS(lie_trotter_target(WeightVector::uniform(2), one), DimensionError);
  const std::vector<CurveSpec> mixed{CurveSpec::exp_line(SymMatrix::identity(2)),
                                     CurveSpec::exp_line(SymMatrix::identity(3))};
  CHECK_THROWS_AS(lie_trotter_target(WeightVector::uniform(2), mixed), DimensionError);
  CHECK_THROWS_AS((convergence_trace(WeightVector::uniform(1), one, {0.25, 0.5})), DomainError);
  const std::vector<CurveSpec> aff{CurveSpec::affine(SymMatrix{{4, 0}, {0, 1}})};
  CHECK_THROWS_AS(convergence_trace(WeightVector::uniform(1), aff, {0.5}), DomainError);
}

TEST_CASE("commuting exp lines") {
  const double d1[] = {1.0, -2.0}, d2[] = {0.5, 0.5};
  const std::vector<CurveSpec> curves{CurveSpec::exp_line(SymMatrix::diagonal(d1)),
                                      CurveSpec::exp_line(SymMatrix::diagonal(d2))};
  // identical curves: the mean is the curve itself
  const double same[] = {0.7, -0.3};
  const std::vector<CurveSpec> equal{CurveSpec::exp_line(SymMatrix::diagonal(same)),
                                     CurveSpec::exp_line(SymMatrix::diagonal(same))};
  const auto trace = convergence_trace(WeightVector::uniform(2), equal, dyadic_schedule(5));
  for (const auto& e : trace.errors) {
    REQUIRE(e.has_value());
    CHECK(*e <= 1e-12);
  }
  std::vector<double> errs;
  for (const auto& e : trace.errors) errs.push_back(*e);
  CHECK(summarize_rates(errs).exact);

  const auto t2 = convergence_trace(WeightVector::uniform(2), curves, dyadic_schedule(8), {}, true);
  REQUIRE(t2.mirror_errors.size() == 8);
  std::vector<double> pos;
  for (const auto& e : t2.errors) pos.push_back(e.value());
  const auto r = summarize_rates(pos);
  CHECK_FALSE(r.exact);
  CHECK(r.eventually_monotone);
  for (double q : r.tail_ratios) CHECK(q == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("derivative quotient matches the scalar closed form") {
  const double x1[] = {0.8, -0.4}, x2[] = {-0.6, 0.2};
  const std::vector<SymMatrix> dirs{SymMatrix::diagonal(x1), SymMatrix::diagonal(x2)};
  const std::vector<double> w{0.25, 0.75};
  const auto samples = derivative_at_identity_check(WeightVector(w), dirs, {0.5, 0.25, 0.125});
  REQUIRE(samples.size() == 3);
  auto quotient = [&](std::size_t i, double t) {
    const double r = w[0] * std::sqrt(1 + t * x1[i]) + w[1] * std::sqrt(1 + t * x2[i]);
    return (r * r - 1) / t - (w[0] * x1[i] + w[1] * x2[i]);
  };
  for (const auto& s : samples) {
    const double ep = std::hypot(quotient(0, s.t), quotient(1, s.t));
    const double en = std::hypot(quotient(0, -s.t), quotient(1, -s.t));
    CHECK(s.error_pos == doctest::Approx(ep).epsilon(1e-9));
    CHECK(s.error_neg == doctest::Approx(en).epsilon(1e-9));
  }
  CHECK_THROWS_AS(derivative_at_identity_check(WeightVector(w), dirs, {2.0}), DomainError);
}

TEST_CASE("summarize_rates") {
  const auto r = summarize_rates({8, 4, 2, 1, 0.5, 0.25});
  CHECK(r.eventually_monotone);
  CHECK(r.final_over_initial == doctest::Approx(1.0 / 32));
  CHECK(r.tail_ratios.size() == 4);
  for (double q : r.tail_ratios) CHECK(q == 0.5);
  CHECK_FALSE(r.exact);

  // non-monotone in the second half
  CHECK_FALSE(summarize_rates({8, 4, 2, 1, 2, 0.5}).eventually_monotone);
  // transients in the first half are tolerated
  CHECK(summarize_rates({1, 3, 2, 1, 0.5, 0.25}).eventually_monotone);
  CHECK(summarize_rates({0, 1e-13, 0}).exact);
}

TEST_CASE("random mixed curves converge at first order") {
  Rng rng(515);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t m = static_cast<std::size_t>(rng.uniform_int(2, 4));
    std::vector<CurveSpec> curves{CurveSpec::power(random_spd(rng, m, 50.0)),
                                  CurveSpec::affine(random_symmetric(rng, m, 0.8)),
                                  CurveSpec::exp_line(random_symmetric(rng, m, 1.0))};
    const WeightVector w(random_weights(rng, 3));
    const auto trace = convergence_trace(w, curves, dyadic_schedule(10));
    std::vector<double> errs;
    for (const auto& e : trace.errors) errs.push_back(e.value());
    const auto r = summarize_rates(errs);
    CHECK(r.eventually_monotone);
    CHECK(r.final_over_initial <= 1e-2);
    for (double q : r.tail_ratios) {
      CHECK(q >= 0.25);
      CHECK(q <= 0.75);
    }
  }
}
