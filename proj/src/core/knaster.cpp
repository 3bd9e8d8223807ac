#include "knaster/knaster.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "knaster/error.hpp"
#include "knaster/tent.hpp"

namespace knaster {

namespace {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t k = 2; k * k <= n; ++k) {
    if (n % k == 0) return false;
  }
  return true;
}

std::uint64_t nth_prime(std::size_t n) {
  std::uint64_t candidate = 1;
  while (n > 0) {
    ++candidate;
    if (is_prime(candidate)) --n;
  }
  return candidate;
}

Rational from_u64(std::uint64_t v) { return Rational(Integer(static_cast<unsigned long>(v))); }

}  // namespace

PrimeSequence PrimeSequence::all2() { return PrimeSequence(Kind::All2, {}); }

PrimeSequence PrimeSequence::diagonal() { return PrimeSequence(Kind::Diagonal, {}); }

PrimeSequence PrimeSequence::cycle(std::vector<std::uint64_t> primes) {
  if (primes.empty()) throw Error(ErrorCode::InvalidArgument, "empty prime list");
  for (auto p : primes) {
    if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
  }
  return PrimeSequence(Kind::Cycle, std::move(primes));
}

PrimeSequence PrimeSequence::parse(std::string_view spec) {
  if (spec == "all2") return all2();
  if (spec == "diagonal") return diagonal();
  std::vector<std::uint64_t> primes;
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t end = spec.find(',', start);
    if (end == std::string_view::npos) end = spec.size();
    const auto token = spec.substr(start, end - start);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
      throw Error(ErrorCode::Parse, "bad prime sequence '" + std::string(spec) +
                                        "' (expected all2, diagonal or a list like 2,3,5)");
    }
    primes.push_back(value);
    start = end + 1;
  }
  return cycle(std::move(primes));
}

std::uint64_t PrimeSequence::operator[](std::size_t i) const {
  if (i == 0) throw Error(ErrorCode::InvalidArgument, "primes are indexed from 1");
  switch (kind_) {
    case Kind::All2:
      return 2;
    case Kind::Cycle:
      return primes_[(i - 1) % primes_.size()];
    case Kind::Diagonal: {
      std::size_t block = 1;
      while (block * (block + 1) / 2 < i) ++block;
      return nth_prime(i - block * (block - 1) / 2);
    }
  }
  return 2;
}

std::string PrimeSequence::description() const {
  switch (kind_) {
    case Kind::All2:
      return "all2";
    case Kind::Diagonal:
      return "diagonal";
    case Kind::Cycle:
      break;
  }
  std::string out;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(primes_[i]);
  }
  return out;
}

Integer PrimeSequence::product(std::size_t from, std::size_t to) const {
  Integer out(1);
  for (std::size_t i = from; i <= to; ++i) out *= static_cast<unsigned long>((*this)[i]);
  return out;
}

std::uint64_t PrimeSequence::small_product(std::size_t from, std::size_t to) const {
  std::uint64_t out = 1;
  for (std::size_t i = from; i <= to; ++i) {
    const std::uint64_t p = (*this)[i];
    if (out > std::numeric_limits<std::uint64_t>::max() / p) {
      throw Error(ErrorCode::InvalidArgument, "prime product overflows 64 bits");
    }
    out *= p;
  }
  return out;
}

Rational PrimeSequence::weight(std::size_t i) const {
  if (i == 0) return Rational(1, 2);
  return Rational(Integer(1), product(1, i));
}

Rational PrimeSequence::tail(std::size_t n) const { return Rational(Integer(1), product(1, n)); }

bool TruncatedKnasterPoint::coherent(const PrimeSequence& p) const {
  if (coords.empty()) return false;
  for (const auto& c : coords) {
    if (c < 0 || c > 1) return false;
  }
  for (std::size_t m = 1; m < coords.size(); ++m) {
    if (tent_value(p[m], coords[m]) != coords[m - 1]) return false;
  }
  return true;
}

TruncatedKnasterPoint extend_point(const Rational& x_n, std::size_t n, const PrimeSequence& p) {
  if (x_n < 0 || x_n > 1) throw Error(ErrorCode::Domain, "coordinate outside [0,1]: " + x_n.str());
  TruncatedKnasterPoint out;
  out.coords.resize(n + 1);
  out.coords[n] = x_n;
  for (std::size_t m = n; m >= 1; --m) out.coords[m - 1] = tent_value(p[m], out.coords[m]);
  return out;
}

CertifiedDistance knaster_dist(const TruncatedKnasterPoint& x, const TruncatedKnasterPoint& y,
                               const PrimeSequence& p) {
  if (x.coords.size() != y.coords.size() || x.coords.empty()) {
    throw Error(ErrorCode::InvalidArgument, "truncated points must have the same depth");
  }
  if (!x.coherent(p) || !y.coherent(p)) {
    throw Error(ErrorCode::InvalidArgument, "truncated point is not coherent");
  }
  CertifiedDistance out;
  out.depth = x.depth();
  out.lower = Rational(0);
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    out.lower += p.weight(i) * (x.coords[i] - y.coords[i]).abs();
  }
  out.upper = out.lower + p.tail(out.depth);
  return out;
}

DiagonalHomeo lift(const DiagonalHomeo& f, std::size_t m, const PrimeSequence& p) {
  if (m < f.coord) {
    throw Error(ErrorCode::InvalidArgument, "cannot lift from coordinate " + std::to_string(f.coord) +
                                                " down to " + std::to_string(m));
  }
  if (m == f.coord) return f;
  return {m, oplus_power(f.map, p.small_product(f.coord + 1, m))};
}

bool same_diagonal(const DiagonalHomeo& f, const DiagonalHomeo& g, const PrimeSequence& p) {
  const std::size_t m = std::max(f.coord, g.coord);
  return lift(f, m, p).map == lift(g, m, p).map;
}

DiagonalHomeo compose(const DiagonalHomeo& f, const DiagonalHomeo& g, const PrimeSequence& p) {
  const std::size_t m = std::max(f.coord, g.coord);
  return {m, compose(lift(f, m, p).map, lift(g, m, p).map)};
}

DiagonalHomeo invert(const DiagonalHomeo& f) { return {f.coord, invert(f.map)}; }

TruncatedKnasterPoint eval_diagonal(const DiagonalHomeo& f, const TruncatedKnasterPoint& x,
                                    const PrimeSequence& p) {
  if (x.coords.empty() || x.depth() < f.coord) {
    throw Error(ErrorCode::InvalidArgument, "truncation shorter than the inducing coordinate");
  }
  if (!x.coherent(p)) throw Error(ErrorCode::InvalidArgument, "truncated point is not coherent");
  const DiagonalHomeo top = lift(f, x.depth(), p);
  return extend_point(top.map(x.coords.back()), x.depth(), p);
}

CertifiedDistance diag_dist(const DiagonalHomeo& f, const DiagonalHomeo& g, std::size_t n,
                            const PrimeSequence& p) {
  if (n < f.coord || n < g.coord) {
    throw Error(ErrorCode::InvalidArgument, "truncation depth below an inducing coordinate");
  }
  // coordinate m of F(x) as a function of t = x_n
  std::vector<Polyline> a, b;
  a.push_back(lift(f, n, p).map.map().line());
  b.push_back(lift(g, n, p).map.map().line());
  for (std::size_t m = n; m >= 1; --m) {
    const Polyline t = tent(p[m]).map().line();
    a.push_back(compose(t, a.back()));
    b.push_back(compose(t, b.back()));
  }
  std::reverse(a.begin(), a.end());
  std::reverse(b.begin(), b.end());

  std::vector<const Polyline*> lines;
  for (std::size_t m = 0; m <= n; ++m) {
    lines.push_back(&a[m]);
    lines.push_back(&b[m]);
  }
  std::vector<Rational> xs = merged_breakpoints(lines);
  // every coordinate difference is affine between merged breakpoints; add its roots
  std::vector<Rational> roots;
  for (std::size_t m = 0; m <= n; ++m) {
    Rational prev = a[m](xs[0]) - b[m](xs[0]);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      Rational next = a[m](xs[i + 1]) - b[m](xs[i + 1]);
      if (prev.sign() * next.sign() < 0) {
        roots.push_back(xs[i] - prev * (xs[i + 1] - xs[i]) / (next - prev));
      }
      prev = std::move(next);
    }
  }
  xs.insert(xs.end(), roots.begin(), roots.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<Rational> weights;
  for (std::size_t m = 0; m <= n; ++m) weights.push_back(p.weight(m));
  Rational best(-1);
  Rational best_at(0);
  for (const auto& x : xs) {
    Rational s(0);
    for (std::size_t m = 0; m <= n; ++m) s += weights[m] * (a[m](x) - b[m](x)).abs();
    if (s > best) {
      best = std::move(s);
      best_at = x;
    }
  }
  CertifiedDistance out;
  out.depth = n;
  out.lower = best;
  out.upper = best + p.tail(n);
  out.witness = extend_point(best_at, n, p);
  return out;
}

GeneralDiagonalMap as_general(const DiagonalHomeo& f) { return {f.coord, f.coord, OpenPLMap(f.map)}; }

GeneralDiagonalMap compose(const GeneralDiagonalMap& f, const GeneralDiagonalMap& g) {
  if (g.target != f.source) {
    throw Error(ErrorCode::InvalidArgument, "composition needs the inner target coordinate (" +
                                                std::to_string(g.target) +
                                                ") to equal the outer source coordinate (" +
                                                std::to_string(f.source) + ")");
  }
  return {f.target, g.source, compose(f.window, g.window)};
}

Rational degree_diagonal(const GeneralDiagonalMap& f, const PrimeSequence& p) {
  if (f.source < f.target) throw Error(ErrorCode::InvalidArgument, "source coordinate below target");
  if (f.window(Rational(0)) != 0) throw Error(ErrorCode::Precondition, "window must fix 0");
  return Rational(static_cast<long>(degree(f.window))) * Rational(p.product(1, f.target)) /
         Rational(p.product(1, f.source));
}

ModBoundCertificate certify_mod_bound(const PLHomeo& g, const PLHomeo& h, std::size_t n,
                                      const Rational& epsilon, const PrimeSequence& p,
                                      std::size_t max_depth) {
  if (epsilon.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  const Rational radius = epsilon / Rational(p.product(1, n));
  const Rational gap = sup_dist(g, h).value;
  if (!(gap < radius)) {
    throw Error(ErrorCode::Precondition,
                "sup_dist(g, h) = " + gap.str() + " is not below epsilon/(p_1...p_n) = " + radius.str());
  }
  const DiagonalHomeo f1{n, g};
  const DiagonalHomeo f2{n, h};
  std::size_t depth = n;
  while (depth <= max_depth && !(p.tail(depth) < epsilon)) ++depth;
  CertifiedDistance last;
  while (depth <= max_depth) {
    last = diag_dist(f1, f2, depth, p);
    if (last.upper < epsilon) return {std::move(last), epsilon, radius, true};
    // the lower bound only grows with depth, so the tail has to beat the slack
    const Rational slack = epsilon - last.lower;
    if (slack.sign() <= 0) break;
    ++depth;
    while (depth <= max_depth && !(p.tail(depth) < slack)) ++depth;
  }
  return {std::move(last), epsilon, radius, false};
}

namespace {

TentWitness make_witness(const PLHomeo& f, const PLHomeo& g, std::uint64_t d, const Rational& x) {
  TentWitness w;
  w.x = x;
  w.tf = tent_value(d, f(x));
  w.tg = tent_value(d, g(x));
  w.gap = (w.tf - w.tg).abs();
  w.kind = 0;
  return w;
}

bool at_end(const Rational& v) { return v == 0 || v == 1; }

bool case_two(const TentWitness& w, const Rational& delta) {
  return w.gap >= delta / 2 && (at_end(w.tf) || at_end(w.tg));
}

// The chase from the amplification proof: `lower` lies below `upper` at the
// start and upper(x) - j/d >= delta/(2d). Walks grid preimages of `lower`
// upward until a second-case witness appears.
std::optional<TentWitness> chase(const PLHomeo& lower, const PLHomeo& upper, std::uint64_t d,
                                 const Rational& delta, std::uint64_t j) {
  const PLHomeo lower_inv = invert(lower);
  const Rational dd = from_u64(d);
  std::uint64_t c = j;
  while (c < d) {
    const Rational x = lower_inv(from_u64(c) / dd);
    TentWitness w = make_witness(lower, upper, d, x);
    if (case_two(w, delta)) return w;
    // otherwise upper(x) sits within delta/(2d) of a grid point k/d, k = c mod 2
    const Integer k_int = (upper(x) * dd + Rational(1, 2)).floor();
    const std::uint64_t k = k_int.get_ui();
    if (k <= c) return std::nullopt;
    c = k - 1;
  }
  const Rational x = lower_inv(from_u64(d - 1) / dd);
  TentWitness w = make_witness(lower, upper, d, x);
  if (case_two(w, delta)) return w;
  return std::nullopt;
}

}  // namespace

TentWitness tent_witness(const PLHomeo& f, const PLHomeo& g, std::uint64_t d, const Rational& delta,
                         WitnessMode mode) {
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "d must be positive");
  if (delta.sign() <= 0 || !(delta < Rational(1, 4))) {
    throw Error(ErrorCode::Precondition, "delta must lie in (0, 1/4), got " + delta.str());
  }
  const Rational dd = from_u64(d);
  const SupDistance s = sup_dist(f, g);
  if (s.value < delta / dd) {
    throw Error(ErrorCode::Precondition,
                "sup_dist(f, g) = " + s.value.str() + " is below delta/d = " + (delta / dd).str());
  }
  const PLMap td = tent(d).map();
  if (mode == WitnessMode::Exhaustive) {
    const SupDistance m = sup_dist(compose(td, f.map()), compose(td, g.map()));
    if (m.value >= delta) {
      TentWitness w = make_witness(f, g, d, m.at);
      w.kind = 1;
      return w;
    }
    std::vector<Rational> xs;
    const PLHomeo fi = invert(f);
    const PLHomeo gi = invert(g);
    for (std::uint64_t k = 0; k <= d; ++k) {
      const Rational y = from_u64(k) / dd;
      xs.push_back(fi(y));
      xs.push_back(gi(y));
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (const auto& x : xs) {
      TentWitness w = make_witness(f, g, d, x);
      if (case_two(w, delta)) {
        w.kind = 2;
        return w;
      }
    }
  } else {
    const Rational& x = s.at;
    TentWitness first = make_witness(f, g, d, x);
    if (first.gap >= delta) {
      first.kind = 1;
      return first;
    }
    const bool f_below = f(x) < g(x);
    const PLHomeo& lo = f_below ? f : g;
    const PLHomeo& hi = f_below ? g : f;
    const Rational lv = lo(x);
    const Rational hv = hi(x);
    const Rational half = delta / (dd * 2);
    for (std::uint64_t j = 0; j <= d; ++j) {
      const Rational grid = from_u64(j) / dd;
      if (grid < lv || grid > hv) continue;
      std::optional<TentWitness> found;
      if (hv - grid >= half) {
        found = chase(lo, hi, d, delta, j);
        if (found && !f_below) std::swap(found->tf, found->tg);
      } else if (grid - lv >= half) {
        // mirror image: reflect both maps, the roles of lower and upper swap
        found = chase(reflect(hi), reflect(lo), d, delta, d - j);
        if (found) {
          found = make_witness(f, g, d, Rational(1) - found->x);
          if (!case_two(*found, delta)) found.reset();
        }
      }
      if (found) {
        found->kind = found->gap >= delta ? 1 : 2;
        return *found;
      }
    }
  }
  throw Error(ErrorCode::NoWitness, "no witness for d = " + std::to_string(d) + ", delta = " +
                                        delta.str() + ", sup_dist = " + s.value.str() + " at " +
                                        s.at.str());
}

LowerBoundCertificate separation_lower_bound(const DiagonalHomeo& f, std::size_t m,
                                             const PLHomeo& h_window, const Rational& eta,
                                             const PrimeSequence& p) {
  if (m <= f.coord) throw Error(ErrorCode::Precondition, "window coordinate must exceed the inducing one");
  if (eta.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "eta must be positive");
  const Rational grid = Rational(1) / from_u64(p.small_product(f.coord + 1, m));
  const Rational gap = (h_window(grid) - grid).abs();
  if (gap < eta * 2) {
    throw Error(ErrorCode::Precondition,
                "|h(1/d) - 1/d| = " + gap.str() + " is below 2 eta = " + (eta * 2).str());
  }
  const PLHomeo psi = lift(f, m, p).map;
  LowerBoundCertificate c;
  c.point = extend_point(grid, m, p);
  c.image_f = extend_point(psi(grid), m, p);
  c.image_g = extend_point(h_window(grid), m, p);
  c.lower = knaster_dist(c.image_f, c.image_g, p).lower;
  c.bound = eta / Rational(p.product(1, m));
  c.coordinate = m;
  c.term = p.weight(m) * (c.image_f.coords[m] - c.image_g.coords[m]).abs();
  c.certified = c.lower >= c.bound;
  return c;
}

LowerBoundCertificate comod_lower_bound_check(const PLHomeo& p_prime, std::size_t n,
                                              const PLHomeo& g_phi, std::size_t j,
                                              const Rational& delta, const PrimeSequence& p) {
  if (j < 2) throw Error(ErrorCode::Precondition, "j must be at least 2");
  if (n < j) throw Error(ErrorCode::Precondition, "n must be at least j");
  if (delta.sign() <= 0 || !(delta < Rational(1, 4)) || !(delta < Rational(1) / from_u64(p[j]))) {
    throw Error(ErrorCode::Precondition, "delta must lie below min(1/4, 1/p_j)");
  }
  const std::uint64_t d = p.small_product(j + 1, n);
  const PLHomeo psi = lift(DiagonalHomeo{j, g_phi}, n, p).map;
  const SupDistance s = sup_dist(p_prime, psi);
  if (s.value < delta / from_u64(d)) {
    throw Error(ErrorCode::Precondition,
                "sup_dist(p', lifted g_phi) = " + s.value.str() + " is below delta/(p_{j+1}...p_n) = " +
                    (delta / from_u64(d)).str());
  }
  LowerBoundCertificate c;
  Rational x = s.at;
  c.coordinate = j;
  if (n > j) {
    c.tent = tent_witness(p_prime, psi, d, delta);
    x = c.tent->x;
    c.coordinate = c.tent->kind == 1 ? j : j - 1;
  }
  c.point = extend_point(x, n, p);
  c.image_f = extend_point(p_prime(x), n, p);
  c.image_g = extend_point(psi(x), n, p);
  c.lower = knaster_dist(c.image_f, c.image_g, p).lower;
  c.bound = delta / Rational(p.product(1, j));
  c.term = p.weight(c.coordinate) *
           (c.image_f.coords[c.coordinate] - c.image_g.coords[c.coordinate]).abs();
  c.certified = c.term >= c.bound && c.lower >= c.bound;
  return c;
}

PLHomeo grid_drag(std::uint64_t d, std::uint64_t k_index, const Rational& delta) {
  if (k_index == 0 || k_index >= d) throw Error(ErrorCode::InvalidArgument, "grid index must be interior");
  if (delta.sign() <= 0 || !(delta < Rational(1, 4))) {
    throw Error(ErrorCode::InvalidArgument, "delta must lie in (0, 1/4)");
  }
  const Rational dd = from_u64(d);
  const Rational c = from_u64(k_index) / dd;
  const Rational s = delta / dd;
  return PLHomeo(std::vector<Point>{{0, 0}, {c - s, c - s}, {c + s / 2, c - s / 2}, {c + s, c + s}, {1, 1}});
}

PLHomeo near_grid_perturbation(const PLHomeo& g_phi, std::size_t n, std::size_t j,
                               std::uint64_t k_index, const Rational& delta, const PrimeSequence& p) {
  if (n <= j) throw Error(ErrorCode::InvalidArgument, "needs n > j");
  const std::uint64_t d = p.small_product(j + 1, n);
  return compose(grid_drag(d, k_index, delta), lift(DiagonalHomeo{j, g_phi}, n, p).map);
}

}  // namespace knaster
