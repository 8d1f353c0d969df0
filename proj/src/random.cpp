#include "bwmean/random.hpp"

#include <cmath>
#include <numbers>

#include "bwmean/errors.hpp"

namespace bwm {

std::uint64_t SplitMix64::next() noexcept {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t instance_seed(std::uint64_t suite_seed, std::uint64_t index) noexcept {
  SplitMix64 sm(suite_seed + index * 0x9e3779b97f4a7c15ULL);
  return sm.next();
}

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) noexcept {
  SplitMix64 sm(seed);
  for (auto& word : s_) word = sm.next();
}

Rng::result_type Rng::operator()() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

int Rng::uniform_int(int lo, int hi) noexcept {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>((*this)() % span);
}

double Rng::normal() noexcept {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Matrix random_orthogonal(Rng& rng, std::size_t dim) {
  Matrix a(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) a(i, j) = rng.normal();

  // Householder QR: a is reduced to R in place, Q accumulated explicitly.
  Matrix q = Matrix::identity(dim);
  std::vector<double> v(dim);
  for (std::size_t k = 0; k + 1 < dim; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < dim; ++i) norm += a(i, k) * a(i, k);
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    const double alpha = a(k, k) > 0.0 ? -norm : norm;
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < dim; ++i) {
      v[i] = a(i, k) - (i == k ? alpha : 0.0);
      vnorm2 += v[i] * v[i];
    }
    if (vnorm2 == 0.0) continue;
    for (std::size_t j = 0; j < dim; ++j) {
      double dot = 0.0;
      for (std::size_t i = k; i < dim; ++i) dot += v[i] * a(i, j);
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t i = k; i < dim; ++i) a(i, j) -= f * v[i];
    }
    for (std::size_t i = 0; i < dim; ++i) {
      double dot = 0.0;
      for (std::size_t l = k; l < dim; ++l) dot += q(i, l) * v[l];
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t l = k; l < dim; ++l) q(i, l) -= f * v[l];
    }
  }
  for (std::size_t j = 0; j < dim; ++j) {
    if (a(j, j) < 0.0)
      for (std::size_t i = 0; i < dim; ++i) q(i, j) = -q(i, j);
  }
  return q;
}

SpdMatrix random_spd(Rng& rng, std::size_t dim, double condition_max) {
  if (dim < 1) throw DomainError("random_spd: dim must be >= 1");
  if (!(condition_max >= 1.0)) throw DomainError("random_spd: condition_max must be >= 1");
  const double half_log = 0.5 * std::log(condition_max);
  std::vector<double> eig(dim);
  for (double& e : eig) e = std::exp(rng.uniform(-half_log, half_log));
  const Matrix q = random_orthogonal(rng, dim);
  return SpdMatrix(congruence(q, SymMatrix::diagonal(eig)));
}

SpdMatrix random_spd(std::uint64_t seed, std::size_t dim, double condition_max) {
  Rng rng(seed);
  return random_spd(rng, dim, condition_max);
}

SymMatrix random_symmetric(Rng& rng, std::size_t dim, double spectral_radius) {
  Matrix g(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i; j < dim; ++j) g(i, j) = g(j, i) = rng.normal();
  SymMatrix s(std::move(g));
  const double r = operator_norm(s);
  return r > 0.0 ? (spectral_radius / r) * s : s;
}

std::vector<double> random_weights(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& x : w) sum += (x = rng.uniform(0.1, 1.0));
  for (double& x : w) x /= sum;
  return w;
}

}  // namespace bwm
