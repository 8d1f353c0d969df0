#include <doctest.h>

#include <cmath>

#include "bwmean/errors.hpp"
#include "bwmean/means_geometry.hpp"
#include "test_support.hpp"

using namespace bwm;
using bwm::testing::fixture_a;
using bwm::testing::fixture_b;

TEST_CASE("GeodesicParam domain") {
  CHECK_NOTHROW(GeodesicParam(0.0));
  CHECK_NOTHROW(GeodesicParam(1.0));
  CHECK_THROWS_AS(GeodesicParam(-0.01), DomainError);
  CHECK_THROWS_AS(GeodesicParam(1.5), DomainError);
  CHECK_THROWS_AS(GeodesicParam(std::nan("")), DomainError);
}

TEST_CASE("geometric mean of the fixture pair") {
  // 2x2 closed form: A # B = sqrt(sqrt(det A det B) / det S) S with S = sqrt(det B) A + sqrt(det A) B
  const SpdMatrix a = fixture_a(), b = fixture_b();
  const Matrix s = 2.0 * a.matrix() + 1.0 * b.matrix();
  const double ds = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
  const Matrix expected = (std::sqrt(2.0) / std::sqrt(ds)) * s;
  const SpdMatrix g = geometric_mean(a, b, GeodesicParam(0.5));
  CHECK(max_abs_difference(g, expected) <= 1e-12);
  CHECK(g(0, 0) == doctest::Approx(1.6641).epsilon(5e-4));
  CHECK(g(1, 1) == doctest::Approx(4.1603).epsilon(5e-4));
  CHECK(determinant(g) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("geometric mean properties") {
  Rng rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 6));
    const SpdMatrix a = random_spd(rng, n, 100.0), b = random_spd(rng, n, 100.0);
    const double t = rng.uniform(0.0, 1.0);
    const SpdMatrix g = geometric_mean(a, b, GeodesicParam(t));
    CHECK(relative_difference(geometric_mean(a, b, GeodesicParam(0.0)), a) <= 1e-12);
    CHECK(relative_difference(geometric_mean(a, b, GeodesicParam(1.0)), b) <= 1e-10);
    CHECK(relative_difference(geometric_mean(b, a, GeodesicParam(1.0 - t)), g) <= 1e-9);
    // Riccati: X A^{-1} X = B at t = 1/2
    const SpdMatrix h = geometric_mean(a, b, GeodesicParam(0.5));
    CHECK(relative_difference(h.matrix() * inverse(a).matrix() * h.matrix(), b) <= 1e-10);
    // det(A #_t B) = det(A)^{1-t} det(B)^t
    CHECK(log_determinant(g) == doctest::Approx((1 - t) * log_determinant(a) + t * log_determinant(b)).epsilon(1e-10));
  }
}

TEST_CASE("riemannian distance") {
  const double d13[] = {1, 3};
  const double d31[] = {3, 1};
  const SpdMatrix x(SymMatrix::diagonal(d13)), y(SymMatrix::diagonal(d31));
  CHECK(riemannian_distance(x, y) == doctest::Approx(std::sqrt(2.0) * std::log(3.0)).epsilon(1e-13));
  CHECK(riemannian_distance(x, x) <= 1e-14);
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const SpdMatrix a = random_spd(rng, 4, 100.0), b = random_spd(rng, 4, 100.0);
    CHECK(std::abs(riemannian_distance(a, b) - riemannian_distance(b, a)) <= 1e-10);
    // invariant under inversion
    CHECK(std::abs(riemannian_distance(inverse(a), inverse(b)) - riemannian_distance(a, b)) <= 1e-9);
  }
}

TEST_CASE("wasserstein distance on the fixture pair") {
  const SpdMatrix a = fixture_a(), b = fixture_b();
  CHECK(fidelity(a, b) == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(wasserstein_distance(a, b) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(wasserstein_distance_oracle_2x2(a, b) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
}

TEST_CASE("wasserstein distance degenerate and commuting cases") {
  Rng rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 8));
    const SpdMatrix a = random_spd(rng, n, 100.0);
    CHECK(wasserstein_distance(a, a) <= 1e-10);
  }
  // commuting diagonal pair: d^2 = sum (sqrt a_i - sqrt b_i)^2 / 2
  const double da[] = {1, 4, 9};
  const double db[] = {4, 1, 16};
  const double expected = std::sqrt((1.0 + 1.0 + 1.0) / 2.0);
  CHECK(wasserstein_distance(SpdMatrix(SymMatrix::diagonal(da)), SpdMatrix(SymMatrix::diagonal(db))) ==
        doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("wasserstein distance against independent 2x2 closed form and oracle") {
  Rng rng(31337);
  for (int trial = 0; trial < 50; ++trial) {
    const SpdMatrix a = random_spd(rng, 2, 100.0), b = random_spd(rng, 2, 100.0);
    const double d = wasserstein_distance(a, b);
    CHECK(std::abs(d - testing::wasserstein2(a, b)) <= 1e-7);
    CHECK(std::abs(d - wasserstein_distance_oracle_2x2(a, b)) <= 1e-6);
    CHECK(std::abs(fidelity(a, b) - testing::fidelity2(a, b)) <= 1e-11 * std::max(1.0, a.trace() + b.trace()));
  }
  CHECK_THROWS_AS(wasserstein_distance_oracle_2x2(random_spd(rng, 3, 10.0), random_spd(rng, 3, 10.0)),
                  DimensionError);
}

TEST_CASE("wasserstein metric axioms") {
  Rng rng(2718);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 6));
    const SpdMatrix a = random_spd(rng, n, 100.0), b = random_spd(rng, n, 100.0), c = random_spd(rng, n, 100.0);
    const double ab = wasserstein_distance(a, b);
    CHECK(std::abs(ab - wasserstein_distance(b, a)) <= 1e-10);
    CHECK(wasserstein_distance(a, c) <= ab + wasserstein_distance(b, c) + 1e-9);
  }
}

TEST_CASE("sqrt_product squares to AB") {
  Rng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const SpdMatrix a = random_spd(rng, 5, 50.0), b = random_spd(rng, 5, 50.0);
    const Matrix r = sqrt_product(a, b);
    CHECK(relative_difference(r * r, a.matrix() * b.matrix()) <= 1e-10);
  }
}

TEST_CASE("wasserstein geodesic") {
  const SpdMatrix a = fixture_a(), b = fixture_b();
  const SpdMatrix mid = wasserstein_geodesic(a, b, GeodesicParam(0.5));
  CHECK(max_abs_difference(mid, 0.25 * Matrix{{9, 12}, {12, 20}}) <= 1e-12);

  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const SpdMatrix x = random_spd(rng, 2, 100.0), y = random_spd(rng, 2, 100.0);
    const double t = rng.uniform(0.0, 1.0);
    CHECK(relative_difference(wasserstein_geodesic(x, y, GeodesicParam(t)), testing::geodesic2(x, y, t)) <= 1e-10);
    CHECK(wasserstein_geodesic(x, y, GeodesicParam(0.0)) == x.sym());
    CHECK(wasserstein_geodesic(x, y, GeodesicParam(1.0)) == y.sym());
    // constant speed: d(A, gamma(t)) = t d(A, B)
    const double d = wasserstein_distance(x, y);
    CHECK(std::abs(wasserstein_distance(x, wasserstein_geodesic(x, y, GeodesicParam(t))) - t * d) <= 1e-7);
  }
}

TEST_CASE("geodesic perturbation bound") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 6));
    const SpdMatrix a = random_spd(rng, n, 100.0), b = random_spd(rng, n, 100.0), c = random_spd(rng, n, 100.0);
    const auto r = geodesic_perturbation_bound(a, b, c, GeodesicParam(rng.uniform(0.0, 1.0)));
    CHECK(r.lambda1 == doctest::Approx(a.eigen().max()));
    CHECK(r.lhs <= r.rhs + 1e-9);
  }
  const SpdMatrix a = fixture_a(), b = fixture_b();
  const auto same = geodesic_perturbation_bound(a, b, b, GeodesicParam(0.3));
  CHECK(same.lhs <= 1e-10);
  CHECK(same.rhs == 0.0);
}
