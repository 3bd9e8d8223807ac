#pragma once

// Tent maps, block sums and the straightening construction.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "knaster/pl_map.hpp"

namespace knaster {

/// Standard degree-d tent map: peaks alternate between 1 and 0 on the grid m/d.
/// Throws InvalidArgument for d == 0.
OpenPLMap tent(std::uint64_t d);
/// T_d(x) straight from the formula; x must lie in [0,1].
Rational tent_value(std::uint64_t d, const Rational& x);

/// Block sum: on [i/n, (i+1)/n] the value is (parts[i](n x - i) + i) / n.
PLHomeo block_sum(std::span<const PLHomeo> parts);

/// Block sum of d copies alternating g and its reflection.
PLHomeo oplus_power(const PLHomeo& g, std::uint64_t d);

/// Rescaled restriction of h to the i-th of n blocks: x -> n h((x + i)/n) - i.
/// Throws Precondition unless h fixes i/n and (i+1)/n.
PLHomeo block_part(const PLHomeo& h, std::uint64_t i, std::uint64_t n);

struct SemiconjugacyRecord {
  PLMap lhs;  ///< g o T_d
  PLMap rhs;  ///< T_d o oplus_power(g, d)
  bool equal;
  std::optional<Rational> counterexample;  ///< first merged breakpoint where they differ
};

SemiconjugacyRecord verify_semiconjugacy(const PLHomeo& g, std::uint64_t d);

/// Returns h with g o h = f. Requires f(0) = g(0) = 0 and equal degrees;
/// the postcondition is checked exactly before returning.
PLHomeo straighten(const OpenPLMap& f, const OpenPLMap& g);

}  // namespace knaster
