#include "knaster/pl_map.hpp"

#include <algorithm>

#include "knaster/error.hpp"

namespace knaster {

namespace {

bool collinear(const Point& a, const Point& b, const Point& c) {
  return (b.y - a.y) * (c.x - b.x) == (c.y - b.y) * (b.x - a.x);
}

// Index i of the segment [x_i, x_{i+1}] containing x (x inside the domain).
std::size_t segment_index(const std::vector<Point>& pts, const Rational& x) {
  auto it = std::upper_bound(pts.begin(), pts.end(), x,
                             [](const Rational& v, const Point& p) { return v < p.x; });
  std::size_t i = static_cast<std::size_t>(it - pts.begin());
  if (i == 0) return 0;
  --i;
  return std::min(i, pts.size() - 2);
}

Rational interpolate(const Point& a, const Point& b, const Rational& x) {
  if (x == a.x) return a.y;
  if (x == b.x) return b.y;
  return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
}

}  // namespace

std::vector<Point> canonical_points(std::vector<Point> points) {
  std::vector<Point> out;
  out.reserve(points.size());
  for (auto& p : points) {
    while (out.size() >= 2 && collinear(out[out.size() - 2], out.back(), p)) out.pop_back();
    out.push_back(std::move(p));
  }
  return out;
}

Polyline::Polyline(std::vector<Point> points) {
  if (points.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "a polyline needs at least two breakpoints");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i - 1].x < points[i].x)) {
      throw Error(ErrorCode::InvalidArgument,
                  "breakpoint x-coordinates must be strictly increasing (at " +
                      points[i].x.str() + ")");
    }
  }
  pts_ = canonical_points(std::move(points));
}

Rational Polyline::operator()(const Rational& x) const {
  if (x < lo() || x > hi()) {
    throw Error(ErrorCode::Domain, "evaluation point " + x.str() + " outside [" + lo().str() +
                                       ", " + hi().str() + "]");
  }
  const std::size_t i = segment_index(pts_, x);
  return interpolate(pts_[i], pts_[i + 1], x);
}

Rational Polyline::min_value() const {
  return std::min_element(pts_.begin(), pts_.end(),
                          [](const Point& a, const Point& b) { return a.y < b.y; })
      ->y;
}

Rational Polyline::max_value() const {
  return std::max_element(pts_.begin(), pts_.end(),
                          [](const Point& a, const Point& b) { return a.y < b.y; })
      ->y;
}

bool Polyline::strictly_increasing() const {
  for (std::size_t i = 1; i < pts_.size(); ++i) {
    if (!(pts_[i - 1].y < pts_[i].y)) return false;
  }
  return true;
}

Polyline compose(const Polyline& outer, const Polyline& inner) {
  if (inner.min_value() < outer.lo() || inner.max_value() > outer.hi()) {
    throw Error(ErrorCode::Domain, "inner map range leaves the domain of the outer map");
  }
  const auto& in = inner.points();
  const auto& op = outer.points();
  std::vector<Point> out;
  out.reserve(in.size() + op.size());
  out.push_back({in.front().x, outer(in.front().y)});
  for (std::size_t i = 0; i + 1 < in.size(); ++i) {
    const Point& a = in[i];
    const Point& b = in[i + 1];
    if (a.y != b.y) {
      const bool up = a.y < b.y;
      const Rational& ylo = up ? a.y : b.y;
      const Rational& yhi = up ? b.y : a.y;
      // outer breakpoints strictly inside (ylo, yhi)
      auto first = std::upper_bound(op.begin(), op.end(), ylo,
                                    [](const Rational& v, const Point& p) { return v < p.x; });
      auto last = std::lower_bound(op.begin(), op.end(), yhi,
                                   [](const Point& p, const Rational& v) { return p.x < v; });
      const Rational slope_inv = (b.x - a.x) / (b.y - a.y);
      auto emit = [&](const Point& u) { out.push_back({a.x + (u.x - a.y) * slope_inv, u.y}); };
      if (up) {
        for (auto it = first; it < last; ++it) emit(*it);
      } else {
        for (auto it = last; it > first;) emit(*--it);
      }
    }
    out.push_back({b.x, outer(b.y)});
  }
  return Polyline(std::move(out));
}

Polyline restrict(const Polyline& f, const Rational& lo, const Rational& hi) {
  if (!(lo < hi) || lo < f.lo() || hi > f.hi()) {
    throw Error(ErrorCode::Domain, "restriction interval [" + lo.str() + ", " + hi.str() +
                                       "] is not a proper subinterval of the domain");
  }
  std::vector<Point> out;
  out.push_back({lo, f(lo)});
  for (const auto& p : f.points()) {
    if (lo < p.x && p.x < hi) out.push_back(p);
  }
  out.push_back({hi, f(hi)});
  return Polyline(std::move(out));
}

Polyline inverse(const Polyline& increasing) {
  if (!increasing.strictly_increasing()) {
    throw Error(ErrorCode::NotHomeomorphism, "only strictly increasing polylines are invertible");
  }
  std::vector<Point> out;
  out.reserve(increasing.points().size());
  for (const auto& p : increasing.points()) out.push_back({p.y, p.x});
  return Polyline(std::move(out));
}

std::vector<Rational> preimages(const Polyline& f, const Rational& y) {
  std::vector<Rational> out;
  const auto& pts = f.points();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Point& a = pts[i];
    const Point& b = pts[i + 1];
    if (a.y == y) out.push_back(a.x);
    if (b.y == y) out.push_back(b.x);
    if ((a.y < y && y < b.y) || (b.y < y && y < a.y)) {
      out.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PLMap::PLMap(std::vector<Point> points) : PLMap(Polyline(std::move(points))) {}

PLMap::PLMap(Polyline line) : line_(std::move(line)) {
  if (line_.lo() != Rational(0) || line_.hi() != Rational(1)) {
    throw Error(ErrorCode::InvalidArgument, "a map of [0,1] must have breakpoints at x=0 and x=1");
  }
  if (line_.min_value() < Rational(0) || line_.max_value() > Rational(1)) {
    throw Error(ErrorCode::InvalidArgument, "map values must lie in [0,1]");
  }
}

PLMap PLMap::identity() { return PLMap({{0, 0}, {1, 1}}); }

PLHomeo::PLHomeo(PLMap map) : map_(std::move(map)) {
  const auto& pts = map_.breakpoints();
  if (pts.front().y != Rational(0) || pts.back().y != Rational(1) ||
      !map_.line().strictly_increasing()) {
    throw Error(ErrorCode::NotHomeomorphism,
                "an order-preserving homeomorphism must be strictly increasing with 0->0 and 1->1");
  }
}

std::vector<Lap> monotone_laps(const PLMap& f) {
  const auto& pts = f.breakpoints();
  std::vector<Lap> laps;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const int dir = (pts[i + 1].y - pts[i].y).sign();
    if (dir == 0) {
      throw Error(ErrorCode::NotOpen, "map is constant on [" + pts[i].x.str() + ", " +
                                          pts[i + 1].x.str() + "]");
    }
    const bool inc = dir > 0;
    if (!laps.empty() && laps.back().increasing == inc) {
      laps.back().hi = pts[i + 1].x;
    } else {
      laps.push_back({pts[i].x, pts[i + 1].x, inc});
    }
  }
  return laps;
}

namespace {

bool is_unit_endpoint(const Rational& v) { return v == Rational(0) || v == Rational(1); }

}  // namespace

bool is_open(const PLMap& f) {
  try {
    OpenPLMap checked(f);
    return true;
  } catch (const Error&) {
    return false;
  }
}

OpenPLMap::OpenPLMap(PLMap map) : map_(std::move(map)), laps_(monotone_laps(map_)) {
  for (const auto& lap : laps_) {
    if (!is_unit_endpoint(map_(lap.lo)) || !is_unit_endpoint(map_(lap.hi))) {
      throw Error(ErrorCode::NotOpen, "lap [" + lap.lo.str() + ", " + lap.hi.str() +
                                          "] does not run between 0 and 1");
    }
  }
}

Rational eval(const PLMap& f, const Rational& x) { return f(x); }

PLMap compose(const PLMap& f, const PLMap& g) { return PLMap(compose(f.line(), g.line())); }

PLHomeo compose(const PLHomeo& f, const PLHomeo& g) { return PLHomeo(compose(f.map(), g.map())); }

OpenPLMap compose(const OpenPLMap& f, const OpenPLMap& g) {
  return OpenPLMap(compose(f.map(), g.map()));
}

PLHomeo invert(const PLHomeo& h) { return PLHomeo(PLMap(inverse(h.map().line()))); }

std::vector<Rational> merged_breakpoints(std::span<const Polyline* const> lines) {
  std::vector<Rational> xs;
  for (const Polyline* line : lines) {
    for (const auto& p : line->points()) xs.push_back(p.x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

SupDistance sup_dist(const PLMap& f, const PLMap& g) {
  const Polyline* lines[] = {&f.line(), &g.line()};
  SupDistance best{Rational(-1), Rational(0)};
  for (const auto& x : merged_breakpoints(lines)) {
    Rational d = (f(x) - g(x)).abs();
    if (d > best.value) best = {std::move(d), x};
  }
  return best;
}

std::size_t degree(const OpenPLMap& f) { return f.laps().size(); }

PLHomeo reflect(const PLHomeo& f) {
  const auto& pts = f.breakpoints();
  std::vector<Point> out;
  out.reserve(pts.size());
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    out.push_back({Rational(1) - it->x, Rational(1) - it->y});
  }
  return PLHomeo(std::move(out));
}

PLMap convex_combination(const PLMap& f, const PLMap& g, const Rational& t) {
  if (t < Rational(0) || t > Rational(1)) {
    throw Error(ErrorCode::InvalidArgument, "convex weight must lie in [0,1]");
  }
  const Polyline* lines[] = {&f.line(), &g.line()};
  std::vector<Point> out;
  const Rational s = Rational(1) - t;
  for (const auto& x : merged_breakpoints(lines)) out.push_back({x, s * f(x) + t * g(x)});
  return PLMap(std::move(out));
}

PLHomeo convex_combination(const PLHomeo& f, const PLHomeo& g, const Rational& t) {
  return PLHomeo(convex_combination(f.map(), g.map(), t));
}

}  // namespace knaster
