#pragma once

/**
 * Conjugacy of order-preserving PL homeomorphisms of [0,1].
 *
 * The complement of the fixed-point set of a PL homeomorphism is a finite
 * union of open intervals. Listing them left to right, each marked +1 when
 * f(x) > x and -1 when f(x) < x, gives the fixed signature: the marked
 * linear order that classifies f up to conjugacy.
 *
 * Exact conjugators between PL maps are generally not PL, so synthesis is
 * approximate: the returned conjugator h satisfies
 * sup_dist(h^-1 o f o h, g) < eta, and that inequality is checked exactly
 * before anything is returned.
 */

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "knaster/pl_map.hpp"

namespace knaster {

struct FixedSignature {
  std::vector<int> signs;  ///< entries are +1 or -1

  /// "+-+" form; the identity signature is "".
  std::string str() const;
  static FixedSignature parse(std::string_view text);

  friend bool operator==(const FixedSignature&, const FixedSignature&) = default;
};

struct NonFixedInterval {
  Rational lo;
  Rational hi;
  int sign;
};

/// Maximal open intervals of non-fixed points, left to right.
std::vector<NonFixedInterval> non_fixed_intervals(const PLHomeo& f);

FixedSignature signature(const PLHomeo& f);
/// Reverse, then flip every sign (signature of the reflected map).
FixedSignature signature_reflect(const FixedSignature& s);
/// d copies alternating s and its reflection.
FixedSignature signature_oplus(const FixedSignature& s, std::uint64_t d);

/// Conjugacy up to the layout of fixed intervals: equal marked orders.
bool decide_conjugate(const PLHomeo& f, const PLHomeo& g);

/// h^-1 o f o h
PLHomeo conjugate(const PLHomeo& f, const PLHomeo& h);

struct ConjugatorOptions {
  std::uint64_t iteration_cap = 1'000'000;  ///< total orbit steps over all attempts
};

struct ConjugatorCertificate {
  PLHomeo f;
  PLHomeo g;
  PLHomeo conjugator;
  Rational achieved;  ///< sup_dist(conjugator^-1 o f o conjugator, g), exact
  Rational eta;
};

/// Throws SignatureMismatch if the signatures differ and IterationCap if the
/// orbit budget runs out before the certificate closes.
ConjugatorCertificate approx_conjugator(const PLHomeo& f, const PLHomeo& g, const Rational& eta,
                                        const ConjugatorOptions& options = {});

struct BlockConjugateResult {
  PLHomeo conjugator;
  std::vector<PLHomeo> parts;  ///< rescaled blocks of the conjugator
  Rational achieved;           ///< sup_dist(conjugator^-1 o oplus^d(f) o conjugator, h)
  Rational eta;
  Rational norm;            ///< sup_dist(conjugator, id)
  Rational max_block_norm;  ///< max_i sup_dist(parts[i], id); norm == max_block_norm / d
};

/// Conjugates oplus_power(f, d) close to h blockwise. h must fix every grid
/// point i/d (Precondition otherwise); block i of h must have the signature of
/// f (i even) or of its reflection (i odd) (SignatureMismatch otherwise).
BlockConjugateResult grid_block_conjugate(const PLHomeo& f, std::uint64_t d, const PLHomeo& h,
                                          const Rational& eta,
                                          const ConjugatorOptions& options = {});

/// Pulls h onto the grid {i/d}: inside every non-fixed interval of h that
/// contains a grid point, h is replaced by a map squeezed between the
/// identity and h that fixes those grid points. The reference must fix the
/// grid and satisfy sup_dist(h, reference) < delta/d (Precondition); the
/// result never moves farther from the reference than h.
PLHomeo snap_to_grid(const PLHomeo& h, std::uint64_t d, const PLHomeo& reference,
                     const Rational& delta);

/// Finite stand-in for a generic element: k non-fixed intervals with the
/// requested signs (alternating from +1 when `signs` is empty), randomized
/// lengths and bump shapes.
struct PseudoGenericSpec {
  std::size_t k = 1;
  std::vector<int> signs;
  std::uint64_t seed = 0;
  bool fixed_intervals = false;  ///< widen some fixed points into fixed intervals
};

PLHomeo pseudo_generic(const PseudoGenericSpec& spec);

}  // namespace knaster
