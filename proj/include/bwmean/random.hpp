#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "bwmean/spd_core.hpp"

namespace bwm {

/// SplitMix64 (Steele, Lea, Flood). Used for seed derivation.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}
  std::uint64_t next() noexcept;

 private:
  std::uint64_t state_;
};

/// instance_seed(s, i) is the (i+1)-th SplitMix64 output from state s.
std::uint64_t instance_seed(std::uint64_t suite_seed, std::uint64_t index) noexcept;

/// xoshiro256** 1.0, state filled from SplitMix64(seed). Deviates are
/// produced by explicit formulas so streams agree across platforms.
class Rng {
 public:
  using result_type = std::uint64_t;
  explicit Rng(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept;

  /// [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Integer in [lo, hi].
  int uniform_int(int lo, int hi) noexcept;
  /// Standard normal, Box-Muller (no cached second deviate).
  double normal() noexcept;

 private:
  std::array<std::uint64_t, 4> s_;
};

/// Orthogonal factor of a Householder QR of a Gaussian grid, with the signs of
/// R's diagonal folded in so the distribution is Haar.
Matrix random_orthogonal(Rng& rng, std::size_t dim);

/// Eigenvalues log-uniform in [kappa^{-1/2}, kappa^{1/2}], conjugated by a
/// random orthogonal matrix. Deterministic per seed.
SpdMatrix random_spd(std::uint64_t seed, std::size_t dim, double condition_max);
SpdMatrix random_spd(Rng& rng, std::size_t dim, double condition_max);

/// Symmetric matrix with Gaussian entries rescaled to the given spectral radius.
SymMatrix random_symmetric(Rng& rng, std::size_t dim, double spectral_radius);

/// Positive weights drawn uniformly from [0.1, 1] and normalized.
std::vector<double> random_weights(Rng& rng, std::size_t n);

}  // namespace bwm
