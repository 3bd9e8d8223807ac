#pragma once

/**
 * Continuous piecewise-linear maps with exact rational breakpoints.
 *
 * Polyline is the general carrier: a PL function on a closed interval
 * [front().x, back().x] given by strictly increasing x-coordinates. PLMap
 * restricts it to self-maps of [0,1]; PLHomeo and OpenPLMap add the
 * order-preserving-homeomorphism and openness invariants.
 *
 * Every constructor canonicalizes: breakpoints collinear with both neighbours
 * are dropped, so two maps are equal iff their breakpoint lists are equal.
 */

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "knaster/rational.hpp"

namespace knaster {

struct Point {
  Rational x;
  Rational y;
  friend bool operator==(const Point&, const Point&) = default;
};

class Polyline {
 public:
  /// Throws InvalidArgument unless there are >= 2 points with strictly
  /// increasing x. Output is canonical.
  explicit Polyline(std::vector<Point> points);

  const std::vector<Point>& points() const { return pts_; }
  const Rational& lo() const { return pts_.front().x; }
  const Rational& hi() const { return pts_.back().x; }

  /// Throws Domain if x lies outside [lo, hi].
  Rational operator()(const Rational& x) const;

  Rational min_value() const;
  Rational max_value() const;
  bool strictly_increasing() const;

  friend bool operator==(const Polyline&, const Polyline&) = default;

 private:
  std::vector<Point> pts_;
};

/// Drops breakpoints collinear with both neighbours.
std::vector<Point> canonical_points(std::vector<Point> points);

/// outer o inner; the range of inner must lie in the domain of outer.
Polyline compose(const Polyline& outer, const Polyline& inner);
/// Restriction to [lo, hi] within the domain.
Polyline restrict(const Polyline& f, const Rational& lo, const Rational& hi);
/// Inverse of a strictly increasing polyline (as a map from its range).
Polyline inverse(const Polyline& increasing);
/// All x with f(x) = y; segments lying on y contribute both endpoints.
std::vector<Rational> preimages(const Polyline& f, const Rational& y);

class PLMap {
 public:
  /// Requires x from 0 to 1 strictly increasing and every y in [0,1].
  explicit PLMap(std::vector<Point> points);
  explicit PLMap(Polyline line);

  static PLMap identity();

  const Polyline& line() const { return line_; }
  const std::vector<Point>& breakpoints() const { return line_.points(); }
  Rational operator()(const Rational& x) const { return line_(x); }

  friend bool operator==(const PLMap&, const PLMap&) = default;

 private:
  Polyline line_;
};

class PLHomeo {
 public:
  /// Throws NotHomeomorphism unless y is strictly increasing from 0 to 1.
  explicit PLHomeo(PLMap map);
  explicit PLHomeo(std::vector<Point> points) : PLHomeo(PLMap(std::move(points))) {}

  static PLHomeo identity() { return PLHomeo(PLMap::identity()); }

  const PLMap& map() const { return map_; }
  const std::vector<Point>& breakpoints() const { return map_.breakpoints(); }
  Rational operator()(const Rational& x) const { return map_(x); }

  friend bool operator==(const PLHomeo&, const PLHomeo&) = default;

 private:
  PLMap map_;
};

/// A lap is a maximal closed interval on which the map is monotone.
struct Lap {
  Rational lo;
  Rational hi;
  bool increasing;
};

class OpenPLMap {
 public:
  /// Throws NotOpen unless every lap runs between 0 and 1 (no flat pieces,
  /// every turning value and both end values in {0,1}).
  explicit OpenPLMap(PLMap map);
  explicit OpenPLMap(std::vector<Point> points) : OpenPLMap(PLMap(std::move(points))) {}
  explicit OpenPLMap(const PLHomeo& h) : OpenPLMap(h.map()) {}

  const PLMap& map() const { return map_; }
  const std::vector<Point>& breakpoints() const { return map_.breakpoints(); }
  Rational operator()(const Rational& x) const { return map_(x); }
  const std::vector<Lap>& laps() const { return laps_; }

  friend bool operator==(const OpenPLMap& a, const OpenPLMap& b) { return a.map_ == b.map_; }

 private:
  PLMap map_;
  std::vector<Lap> laps_;
};

/// Laps of an arbitrary PL map (flat pieces are not allowed).
std::vector<Lap> monotone_laps(const PLMap& f);
/// True iff the map satisfies the openness criterion.
bool is_open(const PLMap& f);

Rational eval(const PLMap& f, const Rational& x);

PLMap compose(const PLMap& f, const PLMap& g);
PLHomeo compose(const PLHomeo& f, const PLHomeo& g);
OpenPLMap compose(const OpenPLMap& f, const OpenPLMap& g);

PLHomeo invert(const PLHomeo& h);

struct SupDistance {
  Rational value;
  Rational at;  ///< leftmost x attaining the supremum
};

/// Exact sup |f - g|, attained at a merged breakpoint.
SupDistance sup_dist(const PLMap& f, const PLMap& g);
inline SupDistance sup_dist(const PLHomeo& f, const PLHomeo& g) { return sup_dist(f.map(), g.map()); }

/// Number of laps.
std::size_t degree(const OpenPLMap& f);

/// x -> 1 - f(1 - x)
PLHomeo reflect(const PLHomeo& f);

/// (1 - t) f + t g, pointwise; t in [0,1].
PLMap convex_combination(const PLMap& f, const PLMap& g, const Rational& t);
PLHomeo convex_combination(const PLHomeo& f, const PLHomeo& g, const Rational& t);

/// Sorted union of the breakpoint x-coordinates of several maps.
std::vector<Rational> merged_breakpoints(std::span<const Polyline* const> lines);

}  // namespace knaster
