#pragma once

// Seeded generators for test and campaign inputs. Everything is driven by a
// splitmix64 stream so that results do not depend on the standard library's
// distribution implementations.

#include <cstdint>
#include <vector>

#include "knaster/pl_map.hpp"

namespace knaster {

std::uint64_t splitmix64(std::uint64_t& state);

/// Seed of trial `index` in a campaign; independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t campaign_seed, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return splitmix64(state_); }
  /// Uniform integer in [lo, hi].
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);
  bool coin() { return (next() >> 63) != 0; }
  /// k distinct sorted values drawn from {1/den, ..., (den-1)/den} mapped
  /// affinely into the open interval (lo, hi).
  std::vector<Rational> sorted_points(std::size_t k, const Rational& lo, const Rational& hi);
  /// Random fraction in [num_lo/den, num_hi/den].
  Rational fraction(std::uint64_t num_lo, std::uint64_t num_hi, std::uint64_t den);

 private:
  std::uint64_t state_;
};

/// Random order-preserving homeomorphism with at most max_breakpoints points.
PLHomeo random_homeo(Rng& rng, std::size_t max_breakpoints);

/// Random open map with the given degree and f(0) = 0; up to extra_per_lap
/// additional breakpoints inside each lap.
OpenPLMap random_open_map(Rng& rng, std::size_t degree, std::size_t extra_per_lap);

/// Homeo within `radius` of g (strictly closer unless radius is attained by
/// the mixing weight): a convex combination of g with a random homeo.
PLHomeo random_nearby_homeo(Rng& rng, const PLHomeo& g, const Rational& radius, std::size_t max_breakpoints);

/// Homeo p with sup_dist(p, g) >= radius, obtained by mixing g with a random
/// homeo far enough away; the weight is chosen so the distance lands in
/// [radius, 2 radius] when possible.
PLHomeo random_distant_homeo(Rng& rng, const PLHomeo& g, const Rational& radius, std::size_t max_breakpoints);

}  // namespace knaster
