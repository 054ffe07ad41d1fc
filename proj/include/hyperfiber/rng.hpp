#pragma once

#include <cstdint>
#include <random>

#include "hyperfiber/scalar.hpp"

namespace hyperfiber {

using Rng = std::mt19937_64;

/// Per-sample generator derived from (seed, stream, index). Results do not
/// depend on which worker draws the sample.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

inline long uniform_int(Rng& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

/// Small random rational p/q with |p| <= num_bound, 1 <= q <= den_bound.
/// The float backend gets the same value rounded, so both backends see
/// comparable instances.
template <class S>
S random_rational(Rng& rng, long num_bound = 5, long den_bound = 4) {
  long p = uniform_int(rng, -num_bound, num_bound);
  long q = uniform_int(rng, 1, den_bound);
  return ScalarTraits<S>::from_ratio(p, q);
}

template <class S>
Complex<S> random_gaussian_int(Rng& rng, long bound = 3) {
  return Complex<S>(ScalarTraits<S>::from_int(uniform_int(rng, -bound, bound)),
                    ScalarTraits<S>::from_int(uniform_int(rng, -bound, bound)));
}

template <class S>
Complex<S> random_complex(Rng& rng, long num_bound = 5, long den_bound = 4) {
  S re = random_rational<S>(rng, num_bound, den_bound);
  S im = random_rational<S>(rng, num_bound, den_bound);
  return Complex<S>(re, im);
}

}  // namespace hyperfiber
