#include <doctest.h>

#include <cmath>

#include "bwmean/errors.hpp"
#include "bwmean/barycenter.hpp"
#include "bwmean/means_geometry.hpp"
#include "test_support.hpp"

using namespace bwm;
using bwm::testing::fixture_a;
using bwm::testing::fixture_b;

namespace {

MeanProblem pair_problem() { return MeanProblem({fixture_a(), fixture_b()}, WeightVector::uniform(2)); }

SpdMatrix diag(std::initializer_list<double> d) {
  const std::vector<double> v(d);
  return SpdMatrix(SymMatrix::diagonal(v));
}

}  // namespace

TEST_CASE("WeightVector") {
  const WeightVector w({1.0, 3.0});
  CHECK(w[0] == 0.25);
  CHECK(w[1] == 0.75);
  CHECK(WeightVector::uniform(4)[2] == 0.25);
  CHECK_THROWS_AS(WeightVector(std::vector<double>{}), DomainError);
  CHECK_THROWS_AS((WeightVector({1.0, 0.0})), DomainError);
  CHECK_THROWS_AS((WeightVector({1.0, -2.0})), DomainError);
}

TEST_CASE("MeanProblem validation") {
  CHECK_THROWS_AS(MeanProblem(std::vector<SpdMatrix>{}, WeightVector::uniform(1)), DomainError);
  CHECK_THROWS_AS(MeanProblem(std::vector<SpdMatrix>(1, fixture_a()), WeightVector::uniform(2)), DimensionError);
  CHECK_THROWS_AS((MeanProblem({fixture_a(), SpdMatrix::identity(3)}, WeightVector::uniform(2))), DimensionError);
}

TEST_CASE("SolverConfig validation") {
  SolverConfig cfg;
  cfg.rel_tol = 0.0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.max_iter = 0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.initial = InitialPoint::kGiven;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("fixture pair: wasserstein mean") {
  const auto r = wasserstein_mean(pair_problem());
  REQUIRE(r.converged);
  CHECK(max_abs_difference(r.mean, 0.25 * Matrix{{9, 12}, {12, 20}}) <= 1e-8);
  CHECK(determinant(r.mean) == doctest::Approx(2.25).epsilon(1e-10));
  CHECK(r.residual <= 1e-12);
  CHECK(r.residual_history.size() == static_cast<std::size_t>(r.iterations) + 1);
}

TEST_CASE("fixture pair: karcher mean") {
  const auto r = karcher_mean(pair_problem());
  REQUIRE(r.converged);
  const Matrix printed{{1.6641, 2.2188}, {2.2188, 4.1603}};
  CHECK(max_abs_difference(r.mean, printed) <= 5e-4);
  CHECK(determinant(r.mean) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("fixture pair: closed-form means and bounds") {
  const auto p = pair_problem();
  CHECK(max_abs_difference(arithmetic_mean(p), Matrix{{2.5, 3}, {3, 5}}) <= 1e-15);
  // A^{-1} = [[5,-2],[-2,1]], B^{-1} = [[5,-4],[-4,4]]/4
  const Matrix hinv{{3.125, -1.5}, {-1.5, 1.0}};
  CHECK(relative_difference(inverse(harmonic_mean(p)), hinv) <= 1e-13);
  const auto b = bounds_report(p);
  CHECK(max_abs_difference(b.lower_lie_trotter, Matrix{{-1.125, 1.5}, {1.5, 1.0}}) <= 1e-13);
  CHECK_FALSE(b.upper_inverse.has_value());
  // (sum w sqrt ||A||)^2 with ||A|| = 3 + 2 sqrt 2, ||B|| = (9 + sqrt 65)/2
  const double na = 3 + 2 * std::sqrt(2.0), nb = (9 + std::sqrt(65.0)) / 2;
  CHECK(b.opnorm_bound == doctest::Approx(std::pow(0.5 * std::sqrt(na) + 0.5 * std::sqrt(nb), 2)).epsilon(1e-13));
}

TEST_CASE("commuting inputs match the scalar closed form") {
  Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 5));
    const std::size_t dim = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const Matrix q = random_orthogonal(rng, dim);
    std::vector<std::vector<double>> eig(n, std::vector<double>(dim));
    std::vector<SpdMatrix> mats;
    for (auto& e : eig) {
      for (double& x : e) x = std::exp(rng.uniform(-2.0, 2.0));
      mats.emplace_back(congruence(q, SymMatrix::diagonal(e)));
    }
    const WeightVector w(random_weights(rng, n));
    std::vector<double> expected(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += w[j] * std::sqrt(eig[j][i]);
      expected[i] = s * s;
    }
    const auto r = wasserstein_mean(MeanProblem(mats, w));
    REQUIRE(r.converged);
    CHECK(relative_difference(r.mean, congruence(q, SymMatrix::diagonal(expected))) <= 1e-10);
  }
}

TEST_CASE("single matrix problem is a fixed point") {
  const SpdMatrix a{{3, 1}, {1, 2}};
  const MeanProblem p({a}, WeightVector::uniform(1));
  const auto r = wasserstein_mean(p);
  CHECK(r.converged);
  CHECK(relative_difference(r.mean, a) <= 1e-12);
  CHECK(residual(a, p) <= 1e-12);
  CHECK(relative_difference(karcher_mean(p).mean, a) <= 1e-12);
}

TEST_CASE("residuals vanish at the mean and not elsewhere") {
  const auto p = pair_problem();
  const SpdMatrix omega = wasserstein_mean(p).mean;
  CHECK(residual(omega, p) <= 1e-12);
  CHECK(equivalent_equation_residual(omega, p) <= 1e-10);
  CHECK(residual(SpdMatrix::identity(2), p) > 1e-2);
  CHECK(equivalent_equation_residual(SpdMatrix::identity(2), p) > 1e-2);
}

TEST_CASE("non-convergence is reported, not thrown") {
  Rng rng(40);
  const auto p = testing::random_problem(rng, 4, 6, 100.0);
  SolverConfig cfg;
  cfg.max_iter = 1;
  cfg.initial = InitialPoint::kIdentity;
  const auto r = wasserstein_mean(p, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 1);
  CHECK(r.residual > cfg.rel_tol);
}

TEST_CASE("given initial point") {
  const auto p = pair_problem();
  SolverConfig cfg;
  cfg.initial = InitialPoint::kGiven;
  cfg.given = SpdMatrix{{2.25, 3}, {3, 5}};
  const auto r = wasserstein_mean(p, cfg);
  CHECK(r.converged);
  CHECK(r.iterations <= 2);
}

TEST_CASE("ensemble: certificate, bounds, determinant, chain") {
  Rng rng(606);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 5));
    const std::size_t dim = static_cast<std::size_t>(rng.uniform_int(2, 8));
    const auto p = testing::random_problem(rng, n, dim, 100.0);
    const auto r = wasserstein_mean(p);
    REQUIRE(r.converged);
    CHECK(residual(r.mean, p) <= 1e-12);
    CHECK(equivalent_equation_residual(r.mean, p) <= 1e-10);
    const auto v = check_bounds(bounds_report(p), r.mean);
    CHECK(v.all_hold());
    CHECK(det_inequality_check(p, r.mean).holds);
    for (const auto& link : bound_ordering_checks(p)) {
      INFO(link.name);
      CHECK(link.holds);
    }
    // residual history ends at the reported residual
    CHECK(r.residual_history.back() == r.residual);
  }
}

TEST_CASE("inverse upper bound for a small diagonal problem") {
  // A = diag(0.5, 1), B = diag(0.8, 0.9); sum w A = diag(0.65, 0.95)
  const MeanProblem p({diag({0.5, 1.0}), diag({0.8, 0.9})}, WeightVector::uniform(2));
  const auto b = bounds_report(p);
  REQUIRE(b.upper_inverse.has_value());
  CHECK(max_abs_difference(*b.upper_inverse, diag({1.0 / 1.35, 1.0 / 1.05})) <= 1e-14);
  const auto r = wasserstein_mean(p);
  const double m0 = std::pow(0.5 * std::sqrt(0.5) + 0.5 * std::sqrt(0.8), 2);
  const double m1 = std::pow(0.5 * std::sqrt(1.0) + 0.5 * std::sqrt(0.9), 2);
  CHECK(max_abs_difference(r.mean, diag({m0, m1})) <= 1e-12);
  const auto v = check_bounds(b, r.mean);
  REQUIRE(v.inverse_upper.has_value());
  CHECK(v.inverse_upper->holds);
}

TEST_CASE("determinant equality when all inputs coincide") {
  const SpdMatrix a{{4, 1}, {1, 3}};
  const MeanProblem p({a, a, a}, WeightVector({0.2, 0.3, 0.5}));
  const auto r = wasserstein_mean(p);
  const auto d = det_inequality_check(p, r.mean);
  CHECK(d.holds);
  CHECK(std::abs(d.det_mean - d.det_geo_product) <= 1e-10 * d.det_geo_product);
}

TEST_CASE("karcher mean of two matrices is the geometric mean") {
  Rng rng(73);
  for (int trial = 0; trial < 15; ++trial) {
    const SpdMatrix a = random_spd(rng, 4, 100.0), b = random_spd(rng, 4, 100.0);
    const double t = rng.uniform(0.05, 0.95);
    const auto r = karcher_mean(MeanProblem({a, b}, WeightVector({1 - t, t})));
    REQUIRE(r.converged);
    CHECK(relative_difference(r.mean, geometric_mean(a, b, GeodesicParam(t))) <= 1e-9);
  }
}

TEST_CASE("mean ordering: harmonic <= karcher and wasserstein <= arithmetic") {
  Rng rng(88);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = testing::random_problem(rng, 3, 4, 100.0);
    const SpdMatrix h = harmonic_mean(p), k = karcher_mean(p).mean, a = arithmetic_mean(p);
    CHECK(loewner_geq(k, h, 1e-9).holds);
    CHECK(loewner_geq(a, k, 1e-9).holds);
    CHECK(loewner_geq(a, wasserstein_mean(p).mean, 1e-8).holds);
    CHECK(log_determinant(log_euclidean_mean(p)) == doctest::Approx(log_determinant(k)).epsilon(1e-9));
  }
}
