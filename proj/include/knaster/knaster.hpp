#pragma once

/**
 * Finite truncations of the Knaster continuum K = lim (I_n, T_{p_n}).
 *
 * A point is represented by its first N+1 coordinates (x_0, ..., x_N) with
 * x_{m-1} = T_{p_m}(x_m); it stands for every point of K extending it.
 * Distances between such cylinders are reported as certified intervals:
 * the partial metric sum through N plus an explicit tail bound.
 *
 * Metric weights are w_0 = 1/2 and w_i = 1/(p_1 ... p_i).
 */

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "knaster/pl_map.hpp"

namespace knaster {

class PrimeSequence {
 public:
  /// 2, 2, 2, ...
  static PrimeSequence all2();
  /// 2, 2,3, 2,3,5, 2,3,5,7, ... (every prime recurs)
  static PrimeSequence diagonal();
  /// The given primes repeated periodically.
  static PrimeSequence cycle(std::vector<std::uint64_t> primes);
  /// "all2", "diagonal", or a comma separated prime list.
  static PrimeSequence parse(std::string_view spec);

  /// p_i, 1-based.
  std::uint64_t operator[](std::size_t i) const;
  std::string description() const;

  /// p_from * ... * p_to; empty products are 1.
  Integer product(std::size_t from, std::size_t to) const;
  /// p_{from} ... p_{to} as a machine integer (InvalidArgument on overflow).
  std::uint64_t small_product(std::size_t from, std::size_t to) const;
  Rational weight(std::size_t i) const;
  /// Closed-form bound on sum_{i > n} w_i, namely 1/(p_1 ... p_n).
  Rational tail(std::size_t n) const;

 private:
  enum class Kind { All2, Diagonal, Cycle };
  PrimeSequence(Kind kind, std::vector<std::uint64_t> primes) : kind_(kind), primes_(std::move(primes)) {}
  Kind kind_;
  std::vector<std::uint64_t> primes_;
};

struct TruncatedKnasterPoint {
  std::vector<Rational> coords;  ///< x_0 .. x_N

  std::size_t depth() const { return coords.size() - 1; }
  bool coherent(const PrimeSequence& p) const;
  friend bool operator==(const TruncatedKnasterPoint&, const TruncatedKnasterPoint&) = default;
};

/// Coherent point with x_N given; lower coordinates by the bonding tents.
TruncatedKnasterPoint extend_point(const Rational& x_n, std::size_t n, const PrimeSequence& p);

struct CertifiedDistance {
  Rational lower;
  Rational upper;
  std::size_t depth = 0;
  std::optional<TruncatedKnasterPoint> witness;
};

/// Throws InvalidArgument on a depth mismatch or incoherent input.
CertifiedDistance knaster_dist(const TruncatedKnasterPoint& x, const TruncatedKnasterPoint& y,
                               const PrimeSequence& p);

/// Degree-one homeomorphism of K induced at coordinate `coord` by `map`.
struct DiagonalHomeo {
  std::size_t coord = 0;
  PLHomeo map = PLHomeo::identity();
};

DiagonalHomeo lift(const DiagonalHomeo& f, std::size_t m, const PrimeSequence& p);
bool same_diagonal(const DiagonalHomeo& f, const DiagonalHomeo& g, const PrimeSequence& p);
DiagonalHomeo compose(const DiagonalHomeo& f, const DiagonalHomeo& g, const PrimeSequence& p);
DiagonalHomeo invert(const DiagonalHomeo& f);
TruncatedKnasterPoint eval_diagonal(const DiagonalHomeo& f, const TruncatedKnasterPoint& x,
                                    const PrimeSequence& p);

/// Sup over K of d_K(F x, G x), certified from the truncation at depth n.
/// The lower bound is exact for the truncated sum and is attained at the
/// returned witness.
CertifiedDistance diag_dist(const DiagonalHomeo& f, const DiagonalHomeo& g, std::size_t n,
                            const PrimeSequence& p);

/// pi_target o F = window o pi_source.
struct GeneralDiagonalMap {
  std::size_t target = 0;
  std::size_t source = 0;
  OpenPLMap window;
};

GeneralDiagonalMap as_general(const DiagonalHomeo& f);
/// F o G; requires g.target == f.source.
GeneralDiagonalMap compose(const GeneralDiagonalMap& f, const GeneralDiagonalMap& g);
/// deg(window) * (p_1 ... p_target) / (p_1 ... p_source).
Rational degree_diagonal(const GeneralDiagonalMap& f, const PrimeSequence& p);

struct ModBoundCertificate {
  CertifiedDistance distance;
  Rational epsilon;
  Rational radius;  ///< epsilon / (p_1 ... p_n)
  bool certified;
};

/// Certifies d(i(n, g), i(n, h)) < epsilon whenever sup_dist(g, h) is below
/// epsilon/(p_1 ... p_n), searching depths up to max_depth.
ModBoundCertificate certify_mod_bound(const PLHomeo& g, const PLHomeo& h, std::size_t n,
                                      const Rational& epsilon, const PrimeSequence& p,
                                      std::size_t max_depth = 40);

enum class WitnessMode { Exhaustive, ProofTrace };

struct TentWitness {
  Rational x;
  int kind;        ///< 1: gap >= delta; 2: gap >= delta/2 with a value in {0,1}
  Rational gap;    ///< |T_d f(x) - T_d g(x)|
  Rational tf;     ///< T_d f(x)
  Rational tg;     ///< T_d g(x)
};

/// Requires delta < 1/4 and sup_dist(f, g) >= delta/d (Precondition);
/// NoWitness means the amplification bound failed on this input.
TentWitness tent_witness(const PLHomeo& f, const PLHomeo& g, std::uint64_t d, const Rational& delta,
                         WitnessMode mode = WitnessMode::Exhaustive);

struct LowerBoundCertificate {
  TruncatedKnasterPoint point;  ///< x in K
  TruncatedKnasterPoint image_f;
  TruncatedKnasterPoint image_g;
  Rational lower;               ///< truncated d_K(image_f, image_g)
  Rational bound;               ///< the claimed bound
  std::size_t coordinate;       ///< coordinate carrying the bound
  Rational term;                ///< weighted gap at that coordinate
  std::optional<TentWitness> tent;
  bool certified;
};

/// F at coordinate n against h at coordinate m > n: certifies
/// d(F, (m, h)) >= eta/(p_1 ... p_m) at x_m = 1/d, d = p_{n+1} ... p_m.
LowerBoundCertificate separation_lower_bound(const DiagonalHomeo& f, std::size_t m,
                                             const PLHomeo& h_window, const Rational& eta,
                                             const PrimeSequence& p);

/// p' at coordinate n >= j against g_phi at coordinate j: certifies
/// d(i(n, p'), i(j, g_phi)) >= delta/(p_1 ... p_j).
LowerBoundCertificate comod_lower_bound_check(const PLHomeo& p_prime, std::size_t n,
                                              const PLHomeo& g_phi, std::size_t j,
                                              const Rational& delta, const PrimeSequence& p);

/// Homeo equal to the identity outside (c - s, c + s), c = k_index/d,
/// s = delta/d, sending c + s/2 to c - s/2. Composed after a map it moves
/// values across the grid point c by exactly delta/d while keeping
/// |T_d o drag - T_d| <= 2 delta / 3.
PLHomeo grid_drag(std::uint64_t d, std::uint64_t k_index, const Rational& delta);

/// p' = k o psi where psi is g_phi lifted to coordinate n and k drags the
/// values near c = k_index/d (d = p_{j+1} ... p_n) so that the tent gap never
/// reaches delta but sup_dist(p', psi) = delta/d. Exercises the second case
/// of comod_lower_bound_check.
PLHomeo near_grid_perturbation(const PLHomeo& g_phi, std::size_t n, std::size_t j,
                               std::uint64_t k_index, const Rational& delta, const PrimeSequence& p);

}  // namespace knaster
