#include "knaster/tent.hpp"

#include <algorithm>
#include <string>

#include "knaster/error.hpp"

namespace knaster {

OpenPLMap tent(std::uint64_t d) {
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "tent map degree must be positive");
  std::vector<Point> pts;
  pts.reserve(d + 1);
  const Integer den(static_cast<unsigned long>(d));
  for (std::uint64_t m = 0; m <= d; ++m) {
    pts.push_back({Rational(Integer(static_cast<unsigned long>(m)), den), Rational(m % 2 == 0 ? 0 : 1)});
  }
  return OpenPLMap(std::move(pts));
}

Rational tent_value(std::uint64_t d, const Rational& x) {
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "tent map degree must be positive");
  if (x < 0 || x > 1) throw Error(ErrorCode::Domain, "tent map argument outside [0,1]: " + x.str());
  const Rational dx = Rational(Integer(static_cast<unsigned long>(d))) * x;
  Integer m = dx.floor();
  if (m == static_cast<unsigned long>(d)) m -= 1;
  const Rational mm(m);
  return mpz_even_p(m.get_mpz_t()) ? dx - mm : Rational(1) + mm - dx;
}

PLHomeo block_sum(std::span<const PLHomeo> parts) {
  if (parts.empty()) throw Error(ErrorCode::InvalidArgument, "block sum of an empty list");
  const Rational n(static_cast<long>(parts.size()));
  std::vector<Point> pts;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const Rational shift(static_cast<long>(i));
    const auto& bp = parts[i].breakpoints();
    // shared grid point already emitted by the previous block
    for (std::size_t k = (i == 0 ? 0 : 1); k < bp.size(); ++k) {
      pts.push_back({(bp[k].x + shift) / n, (bp[k].y + shift) / n});
    }
  }
  return PLHomeo(std::move(pts));
}

PLHomeo oplus_power(const PLHomeo& g, std::uint64_t d) {
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "oplus power must be positive");
  if (d == 1) return g;
  const PLHomeo g_reflected = reflect(g);
  std::vector<PLHomeo> parts;
  parts.reserve(d);
  for (std::uint64_t i = 0; i < d; ++i) parts.push_back(i % 2 == 0 ? g : g_reflected);
  return block_sum(parts);
}

PLHomeo block_part(const PLHomeo& h, std::uint64_t i, std::uint64_t n) {
  if (n == 0 || i >= n) throw Error(ErrorCode::InvalidArgument, "block index out of range");
  const Rational nn(static_cast<long>(n));
  const Rational lo = Rational(static_cast<long>(i)) / nn;
  const Rational hi = Rational(static_cast<long>(i + 1)) / nn;
  if (h(lo) != lo || h(hi) != hi) {
    throw Error(ErrorCode::Precondition,
                "map does not fix the grid points " + lo.str() + " and " + hi.str());
  }
  const Polyline piece = restrict(h.map().line(), lo, hi);
  std::vector<Point> pts;
  for (const auto& p : piece.points()) pts.push_back({p.x * nn - lo * nn, p.y * nn - lo * nn});
  return PLHomeo(std::move(pts));
}

SemiconjugacyRecord verify_semiconjugacy(const PLHomeo& g, std::uint64_t d) {
  const OpenPLMap t = tent(d);
  SemiconjugacyRecord rec{compose(g.map(), t.map()), compose(t.map(), oplus_power(g, d).map()),
                          false, std::nullopt};
  rec.equal = rec.lhs == rec.rhs;
  if (!rec.equal) {
    const Polyline* lines[] = {&rec.lhs.line(), &rec.rhs.line()};
    for (const auto& x : merged_breakpoints(lines)) {
      if (rec.lhs(x) != rec.rhs(x)) {
        rec.counterexample = x;
        break;
      }
    }
  }
  return rec;
}

namespace {

// x in lap [lo, hi] of g with g(x) = y; g is monotone on the lap.
Rational lap_inverse(const PLMap& g, const Lap& lap, const Rational& y) {
  for (const auto& x : preimages(g.line(), y)) {
    if (lap.lo <= x && x <= lap.hi) return x;
  }
  throw Error(ErrorCode::VerificationFailed, "value " + y.str() + " not attained on lap");
}

}  // namespace

PLHomeo straighten(const OpenPLMap& f, const OpenPLMap& g) {
  if (f(Rational(0)) != Rational(0) || g(Rational(0)) != Rational(0)) {
    throw Error(ErrorCode::Precondition, "straightening requires f(0) = g(0) = 0");
  }
  const auto& flaps = f.laps();
  const auto& glaps = g.laps();
  if (flaps.size() != glaps.size()) {
    throw Error(ErrorCode::DegreeMismatch, "degrees differ: " + std::to_string(flaps.size()) +
                                               " vs " + std::to_string(glaps.size()));
  }
  std::vector<Point> pts;
  for (std::size_t j = 0; j < flaps.size(); ++j) {
    const Lap& I = flaps[j];
    const Lap& K = glaps[j];
    if (I.increasing != K.increasing) {
      throw Error(ErrorCode::VerificationFailed, "lap orientations disagree");
    }
    // breakpoints of h on I: those of f, plus preimages of g's breakpoint values
    std::vector<Rational> xs;
    for (const auto& p : f.breakpoints()) {
      if (I.lo <= p.x && p.x <= I.hi) xs.push_back(p.x);
    }
    for (const auto& q : g.breakpoints()) {
      if (K.lo < q.x && q.x < K.hi) {
        for (const auto& x : preimages(f.map().line(), q.y)) {
          if (I.lo < x && x < I.hi) xs.push_back(x);
        }
      }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (std::size_t k = 0; k < xs.size(); ++k) {
      Rational hx = lap_inverse(g.map(), K, f(xs[k]));
      if (j > 0 && k == 0) {
        // consecutive laps share exactly this endpoint
        if (hx != pts.back().y) {
          throw Error(ErrorCode::VerificationFailed, "lap pieces disagree at a shared endpoint");
        }
        continue;
      }
      pts.push_back({xs[k], std::move(hx)});
    }
  }
  PLHomeo h(std::move(pts));
  if (compose(g.map(), h.map()) != f.map()) {
    throw Error(ErrorCode::VerificationFailed, "straightening postcondition g o h = f failed");
  }
  return h;
}

}  // namespace knaster
