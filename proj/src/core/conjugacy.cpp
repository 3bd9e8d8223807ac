#include "knaster/conjugacy.hpp"

#include <algorithm>
#include <optional>

#include "knaster/error.hpp"
#include "knaster/random.hpp"
#include "knaster/tent.hpp"

namespace knaster {

std::string FixedSignature::str() const {
  std::string out;
  out.reserve(signs.size());
  for (int s : signs) out.push_back(s > 0 ? '+' : '-');
  return out;
}

FixedSignature FixedSignature::parse(std::string_view text) {
  FixedSignature out;
  for (char c : text) {
    if (c == '+') {
      out.signs.push_back(1);
    } else if (c == '-') {
      out.signs.push_back(-1);
    } else {
      throw Error(ErrorCode::Parse, "signature characters must be '+' or '-'");
    }
  }
  return out;
}

std::vector<NonFixedInterval> non_fixed_intervals(const PLHomeo& f) {
  const auto& pts = f.breakpoints();
  std::vector<NonFixedInterval> out;
  std::optional<NonFixedInterval> open;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Point& a = pts[i];
    const Point& b = pts[i + 1];
    const Rational va = a.y - a.x;
    const Rational vb = b.y - b.x;
    const int sa = va.sign();
    const int sb = vb.sign();
    if (sa == 0 && sb == 0) continue;
    if (sa != 0 && sb != 0 && sa != sb) {
      const Rational root = a.x - va * (b.x - a.x) / (vb - va);
      open->hi = root;
      out.push_back(*open);
      open = NonFixedInterval{root, root, sb};
    } else if (!open) {
      open = NonFixedInterval{a.x, a.x, sa != 0 ? sa : sb};
    }
    if (sb == 0) {
      open->hi = b.x;
      out.push_back(*open);
      open.reset();
    }
  }
  return out;
}

FixedSignature signature(const PLHomeo& f) {
  FixedSignature s;
  for (const auto& c : non_fixed_intervals(f)) s.signs.push_back(c.sign);
  return s;
}

FixedSignature signature_reflect(const FixedSignature& s) {
  FixedSignature out;
  out.signs.assign(s.signs.rbegin(), s.signs.rend());
  for (int& v : out.signs) v = -v;
  return out;
}

FixedSignature signature_oplus(const FixedSignature& s, std::uint64_t d) {
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "oplus power must be positive");
  const FixedSignature r = signature_reflect(s);
  FixedSignature out;
  for (std::uint64_t i = 0; i < d; ++i) {
    const auto& block = (i % 2 == 0 ? s : r).signs;
    out.signs.insert(out.signs.end(), block.begin(), block.end());
  }
  return out;
}

bool decide_conjugate(const PLHomeo& f, const PLHomeo& g) { return signature(f) == signature(g); }

PLHomeo conjugate(const PLHomeo& f, const PLHomeo& h) { return compose(invert(h), compose(f, h)); }

namespace {

// gap i lies between component i-1 and component i
Rational gap_lo(const std::vector<NonFixedInterval>& c, std::size_t i) {
  return i == 0 ? Rational(0) : c[i - 1].hi;
}
Rational gap_hi(const std::vector<NonFixedInterval>& c, std::size_t i) {
  return i == c.size() ? Rational(1) : c[i].lo;
}

Rational min_slope(const PLHomeo& g) {
  const auto& pts = g.breakpoints();
  Rational best = (pts[1].y - pts[0].y) / (pts[1].x - pts[0].x);
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    best = min(best, (pts[i + 1].y - pts[i].y) / (pts[i + 1].x - pts[i].x));
  }
  return best;
}

// Trapezoid: 0 at lo, 1 on [top_lo, top_hi], 0 at hi.
struct Bump {
  Rational lo, top_lo, top_hi, hi;
  int sign;
  Rational at(const Rational& x) const {
    if (x <= lo || x >= hi) return Rational(0);
    if (x < top_lo) return (x - lo) / (top_lo - lo);
    if (x > top_hi) return (hi - x) / (hi - top_hi);
    return Rational(1);
  }
};

// Replaces each flagged fixed interval of g by a single fixed point, pushing
// the neighbouring non-fixed intervals of the same sign across it. The
// signature is unchanged and the perturbation stays below `budget`. Next to
// the new fixed point the displacement has slope 1/2, so orbits approach it
// geometrically instead of crawling.
PLHomeo collapse_fixed_intervals(const PLHomeo& g, const std::vector<NonFixedInterval>& comps,
                                 const std::vector<bool>& flags, const Rational& budget) {
  const std::size_t k = comps.size();
  const Rational smin = min_slope(g);
  Rational rho = budget;
  for (std::size_t i = 0; i <= k; ++i) {
    if (!flags[i]) continue;
    const Rational a = gap_lo(comps, i);
    const Rational b = gap_hi(comps, i);
    rho = min(rho, (b - a) / 8);
    if (i > 0) rho = min(rho, smin * (a - comps[i - 1].lo) / 4);
    if (i < k) rho = min(rho, smin * (comps[i].hi - b) / 4);
  }
  const Rational ramp = rho * 2;
  std::vector<Bump> bumps;
  for (std::size_t i = 0; i <= k; ++i) {
    if (!flags[i]) continue;
    const Rational a = gap_lo(comps, i);
    const Rational b = gap_hi(comps, i);
    const Rational q = i == 0 ? Rational(0) : i == k ? Rational(1) : (a + b) / 2;
    if (i > 0) {
      const Rational w = (a - comps[i - 1].lo) / 2;
      bumps.push_back({a - w, a, q - ramp, q, comps[i - 1].sign});
    }
    if (i < k) {
      const Rational w = (comps[i].hi - b) / 2;
      bumps.push_back({q, q + ramp, b, b + w, comps[i].sign});
    }
  }
  std::vector<Rational> xs;
  for (const auto& p : g.breakpoints()) xs.push_back(p.x);
  for (const auto& bump : bumps) {
    xs.push_back(bump.lo);
    xs.push_back(bump.top_lo);
    xs.push_back(bump.top_hi);
    xs.push_back(bump.hi);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Point> pts;
  for (const auto& x : xs) {
    Rational y = g(x);
    for (const auto& bump : bumps) y += Rational(bump.sign) * rho * bump.at(x);
    pts.push_back({x, std::move(y)});
  }
  return PLHomeo(std::move(pts));
}

// Rounds breakpoints with oversized denominators to the grid 2^-bits,
// dropping any that would break strict monotonicity.
PLHomeo coarsen(const PLHomeo& h, unsigned bits) {
  const Integer scale = Integer(1) << bits;
  auto round = [&](const Rational& v) {
    if (mpz_sizeinbase(v.denominator().get_mpz_t(), 2) <= bits) return v;
    return Rational((v * Rational(scale) + Rational(1, 2)).floor(), scale);
  };
  std::vector<Point> pts;
  const auto& src = h.breakpoints();
  for (std::size_t i = 0; i < src.size(); ++i) {
    Point p = i == 0 || i + 1 == src.size() ? src[i] : Point{round(src[i].x), round(src[i].y)};
    if (!pts.empty() && (p.x <= pts.back().x || p.y <= pts.back().y)) {
      if (i + 1 != src.size()) continue;
      while (!pts.empty() && (p.x <= pts.back().x || p.y <= pts.back().y)) pts.pop_back();
    }
    pts.push_back(std::move(p));
  }
  return PLHomeo(std::move(pts));
}

struct Core {
  std::vector<Polyline> pieces;
  Rational g_lo, g_hi;  // core extent on the g side
  Rational f_lo, f_hi;  // its image on the f side
};

class CoreBuilder {
 public:
  CoreBuilder(const PLHomeo& f, const PLHomeo& g, std::uint64_t& steps, std::uint64_t cap)
      : f_(f.map().line()),
        g_(g.map().line()),
        finv_(inverse(f_)),
        ginv_(inverse(g_)),
        steps_(steps),
        cap_(cap) {}

  // Exact conjugacy h o g = f o h on a run of fundamental domains around the
  // midpoints of the matched intervals, extended until both orbits are within
  // tol of the interval ends in each direction.
  Core build(const NonFixedInterval& gc, const NonFixedInterval& fc, const Rational& tol) {
    const Rational b0 = (gc.lo + gc.hi) / 2;
    const Rational a0 = (fc.lo + fc.hi) / 2;
    const bool up = gc.sign > 0;
    const Rational& g_fwd_end = up ? gc.hi : gc.lo;
    const Rational& f_fwd_end = up ? fc.hi : fc.lo;
    const Rational& g_bwd_end = up ? gc.lo : gc.hi;
    const Rational& f_bwd_end = up ? fc.lo : fc.hi;

    Core core;
    Rational gb = g_(b0);
    Rational fa = f_(a0);
    core.pieces.push_back(up ? Polyline({{b0, a0}, {gb, fa}}) : Polyline({{gb, fa}, {b0, a0}}));

    const Polyline* cur = &core.pieces.back();
    std::size_t cur_index = 0;
    while ((g_fwd_end - gb).abs() >= tol || (f_fwd_end - fa).abs() >= tol) {
      tick();
      const Rational next_gb = g_(gb);
      const Rational lo = min(gb, next_gb);
      const Rational hi = max(gb, next_gb);
      Polyline piece = compose(f_, compose(*cur, restrict(ginv_, lo, hi)));
      core.pieces.push_back(std::move(piece));
      cur_index = core.pieces.size() - 1;
      cur = &core.pieces[cur_index];
      gb = next_gb;
      fa = f_(fa);
    }
    Rational bb = b0;
    Rational ba = a0;
    std::size_t back_index = 0;
    while ((g_bwd_end - bb).abs() >= tol || (f_bwd_end - ba).abs() >= tol) {
      tick();
      const Rational prev_bb = ginv_(bb);
      const Rational lo = min(bb, prev_bb);
      const Rational hi = max(bb, prev_bb);
      Polyline piece = compose(finv_, compose(core.pieces[back_index], restrict(g_, lo, hi)));
      core.pieces.push_back(std::move(piece));
      back_index = core.pieces.size() - 1;
      bb = prev_bb;
      ba = finv_(ba);
    }
    std::sort(core.pieces.begin(), core.pieces.end(),
              [](const Polyline& p, const Polyline& q) { return p.lo() < q.lo(); });
    core.g_lo = up ? bb : gb;
    core.g_hi = up ? gb : bb;
    core.f_lo = up ? ba : fa;
    core.f_hi = up ? fa : ba;
    return core;
  }

 private:
  void tick() {
    if (++steps_ > cap_) {
      throw Error(ErrorCode::IterationCap,
                  "orbit iteration cap reached; eta is too small for the configured cap");
    }
  }

  Polyline f_, g_, finv_, ginv_;
  std::uint64_t& steps_;
  std::uint64_t cap_;
};

PLHomeo assemble_conjugator(const PLHomeo& f, const PLHomeo& g,
                            const std::vector<NonFixedInterval>& fc,
                            const std::vector<NonFixedInterval>& gc, const Rational& tol,
                            std::uint64_t& steps, std::uint64_t cap) {
  CoreBuilder builder(f, g, steps, cap);
  std::vector<Core> cores;
  cores.reserve(gc.size());
  for (std::size_t i = 0; i < gc.size(); ++i) cores.push_back(builder.build(gc[i], fc[i], tol));

  std::vector<Point> pts;
  auto push = [&pts](const Rational& x, const Rational& y) {
    if (pts.empty() || x > pts.back().x) pts.push_back({x, y});
  };
  const std::size_t k = gc.size();
  for (std::size_t i = 0; i <= k; ++i) {
    const Rational gx0 = i == 0 ? Rational(0) : cores[i - 1].g_hi;
    const Rational fy0 = i == 0 ? Rational(0) : cores[i - 1].f_hi;
    const Rational gx1 = i == k ? Rational(1) : cores[i].g_lo;
    const Rational fy1 = i == k ? Rational(1) : cores[i].f_lo;
    push(gx0, fy0);
    const bool g_point = gap_lo(gc, i) == gap_hi(gc, i);
    const bool f_point = gap_lo(fc, i) == gap_hi(fc, i);
    if (g_point == f_point) {
      // fixed gap mapped onto fixed gap
      push(gap_lo(gc, i), gap_lo(fc, i));
      push(gap_hi(gc, i), gap_hi(fc, i));
    }
    push(gx1, fy1);
    if (i < k) {
      for (const auto& piece : cores[i].pieces) {
        for (const auto& p : piece.points()) push(p.x, p.y);
      }
    }
  }
  return PLHomeo(std::move(pts));
}

}  // namespace

ConjugatorCertificate approx_conjugator(const PLHomeo& f, const PLHomeo& g, const Rational& eta,
                                        const ConjugatorOptions& options) {
  if (eta.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "eta must be positive");
  const auto fc = non_fixed_intervals(f);
  auto gc = non_fixed_intervals(g);
  {
    FixedSignature sf, sg;
    for (const auto& c : fc) sf.signs.push_back(c.sign);
    for (const auto& c : gc) sg.signs.push_back(c.sign);
    if (sf != sg) {
      throw Error(ErrorCode::SignatureMismatch,
                  "signatures differ: '" + sf.str() + "' vs '" + sg.str() + "'");
    }
  }
  if (f == g) return {f, g, PLHomeo::identity(), Rational(0), eta};

  // A fixed interval of g facing a single fixed point of f cannot be matched
  // by a homeomorphism; shrink it to a point first.
  std::vector<bool> flags(gc.size() + 1, false);
  bool any_flag = false;
  for (std::size_t i = 0; i <= gc.size(); ++i) {
    flags[i] = gap_lo(gc, i) < gap_hi(gc, i) && gap_lo(fc, i) == gap_hi(fc, i);
    any_flag = any_flag || flags[i];
  }
  PLHomeo target = g;
  if (any_flag) {
    target = collapse_fixed_intervals(g, gc, flags, eta / 4);
    gc = non_fixed_intervals(target);
  }

  std::uint64_t steps = 0;
  Rational tol = eta / 2;
  for (;;) {
    PLHomeo h = assemble_conjugator(f, target, fc, gc, tol, steps, options.iteration_cap);
    // orbit compositions inflate denominators; a 2^-64 rounding is far below
    // any eta in use and keeps the exact check cheap
    PLHomeo rounded = coarsen(h, 64);
    Rational achieved = sup_dist(conjugate(f, rounded), g).value;
    if (achieved < eta) return {f, g, std::move(rounded), std::move(achieved), eta};
    if (rounded != h) {
      achieved = sup_dist(conjugate(f, h), g).value;
      if (achieved < eta) return {f, g, std::move(h), std::move(achieved), eta};
    }
    tol /= 2;
    if (++steps > options.iteration_cap) {
      throw Error(ErrorCode::IterationCap, "conjugator certificate did not close within the cap");
    }
  }
}

BlockConjugateResult grid_block_conjugate(const PLHomeo& f, std::uint64_t d, const PLHomeo& h,
                                          const Rational& eta, const ConjugatorOptions& options) {
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "block count must be positive");
  const FixedSignature sf = signature(f);
  const FixedSignature sr = signature_reflect(sf);
  std::vector<PLHomeo> parts;
  parts.reserve(d);
  for (std::uint64_t i = 0; i < d; ++i) {
    const PLHomeo hi = block_part(h, i, d);
    const FixedSignature expected = i % 2 == 0 ? sf : sr;
    if (signature(hi) != expected) {
      throw Error(ErrorCode::SignatureMismatch,
                  "block " + std::to_string(i) + " has signature '" + signature(hi).str() +
                      "', expected '" + expected.str() + "'");
    }
    if (i % 2 == 0) {
      parts.push_back(approx_conjugator(f, hi, eta, options).conjugator);
    } else {
      // conjugate f to the reflected block, then reflect the conjugator back
      parts.push_back(reflect(approx_conjugator(f, reflect(hi), eta, options).conjugator));
    }
  }
  PLHomeo g = block_sum(parts);
  Rational achieved = sup_dist(conjugate(oplus_power(f, d), g), h).value;
  if (!(achieved < eta)) {
    throw Error(ErrorCode::VerificationFailed,
                "blockwise conjugator misses eta: " + achieved.str() + " >= " + eta.str());
  }
  const PLHomeo id = PLHomeo::identity();
  Rational norm = sup_dist(g, id).value;
  Rational max_block(0);
  for (const auto& p : parts) max_block = max(max_block, sup_dist(p, id).value);
  if (norm * Rational(static_cast<long>(d)) != max_block) {
    throw Error(ErrorCode::VerificationFailed, "block norm scaling identity failed");
  }
  return {std::move(g), std::move(parts), std::move(achieved), eta, std::move(norm),
          std::move(max_block)};
}

namespace {

// Pointwise min (or max) of two polylines over the same domain.
Polyline pointwise_extreme(const Polyline& p, const Polyline& q, bool take_min) {
  const Polyline* lines[] = {&p, &q};
  const auto xs = merged_breakpoints(lines);
  std::vector<Point> out;
  auto pick = [&](const Rational& a, const Rational& b) -> Rational {
    return take_min ? min(a, b) : max(a, b);
  };
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Rational pv = p(xs[i]);
    const Rational qv = q(xs[i]);
    out.push_back({xs[i], pick(pv, qv)});
    if (i + 1 < xs.size()) {
      const Rational pn = p(xs[i + 1]);
      const Rational qn = q(xs[i + 1]);
      const int s0 = (pv - qv).sign();
      const int s1 = (pn - qn).sign();
      if (s0 != 0 && s1 != 0 && s0 != s1) {
        const Rational d0 = pv - qv;
        const Rational d1 = pn - qn;
        const Rational x = xs[i] - d0 * (xs[i + 1] - xs[i]) / (d1 - d0);
        out.push_back({x, p(x)});
      }
    }
  }
  return Polyline(std::move(out));
}

}  // namespace

PLHomeo snap_to_grid(const PLHomeo& h, std::uint64_t d, const PLHomeo& reference,
                     const Rational& delta) {
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "grid size must be positive");
  const Rational radius = delta / Rational(static_cast<long>(d));
  const Rational start = sup_dist(h, reference).value;
  if (!(start < radius)) {
    throw Error(ErrorCode::Precondition,
                "h is not within delta/d of the reference: " + start.str() + " >= " + radius.str());
  }
  const Rational dd(static_cast<long>(d));
  for (std::uint64_t i = 1; i < d; ++i) {
    const Rational t = Rational(static_cast<long>(i)) / dd;
    if (reference(t) != t) throw Error(ErrorCode::Precondition, "reference does not fix " + t.str());
  }
  struct Window {
    NonFixedInterval comp;
    std::vector<Rational> grid;
  };
  std::vector<Window> windows;
  for (const auto& c : non_fixed_intervals(h)) {
    Window w{c, {}};
    for (std::uint64_t i = 1; i < d; ++i) {
      Rational t = Rational(static_cast<long>(i)) / dd;
      if (c.lo < t && t < c.hi) w.grid.push_back(std::move(t));
    }
    if (!w.grid.empty()) windows.push_back(std::move(w));
  }
  if (windows.empty()) return h;

  // Inside a positive window h' = min(h, max(ref, x + dist(x, grid)/2)), mirrored
  // in negative ones. It lies between the identity and h, is fixed exactly at
  // the grid points, and is never farther from the reference than h.
  const Rational mu(1, 2);
  const Polyline& ref_line = reference.map().line();
  std::vector<Point> pts;
  std::size_t next = 0;
  const auto& hp = h.breakpoints();
  for (const auto& w : windows) {
    while (next < hp.size() && hp[next].x < w.comp.lo) pts.push_back(hp[next++]);
    const int s = w.comp.sign;
    std::vector<Point> kp;
    auto add = [&](const Rational& x, const Rational& dist) {
      kp.push_back({x, x + Rational(s) * mu * dist});
    };
    add(w.comp.lo, w.grid.front() - w.comp.lo);
    for (std::size_t j = 0; j < w.grid.size(); ++j) {
      add(w.grid[j], Rational(0));
      if (j + 1 < w.grid.size()) {
        const Rational mid = (w.grid[j] + w.grid[j + 1]) / 2;
        add(mid, mid - w.grid[j]);
      }
    }
    add(w.comp.hi, w.comp.hi - w.grid.back());
    const Polyline floor_line = pointwise_extreme(restrict(ref_line, w.comp.lo, w.comp.hi),
                                                  Polyline(std::move(kp)), s < 0);
    const Polyline squeezed =
        pointwise_extreme(restrict(h.map().line(), w.comp.lo, w.comp.hi), floor_line, s > 0);
    for (const auto& p : squeezed.points()) {
      if (pts.empty() || p.x > pts.back().x) pts.push_back(p);
    }
    while (next < hp.size() && hp[next].x <= w.comp.hi) ++next;
  }
  while (next < hp.size()) pts.push_back(hp[next++]);
  PLHomeo snapped(std::move(pts));
  for (std::uint64_t i = 0; i <= d; ++i) {
    const Rational t = Rational(static_cast<long>(i)) / dd;
    if (snapped(t) != t) throw Error(ErrorCode::VerificationFailed, "grid point " + t.str() + " not fixed");
  }
  if (!(sup_dist(snapped, reference).value < radius)) {
    throw Error(ErrorCode::VerificationFailed, "snapped map left the delta/d ball");
  }
  return snapped;
}

PLHomeo pseudo_generic(const PseudoGenericSpec& spec) {
  if (spec.k == 0) throw Error(ErrorCode::InvalidArgument, "pseudo-generic maps need k >= 1");
  std::vector<int> signs = spec.signs;
  if (signs.empty()) {
    for (std::size_t i = 0; i < spec.k; ++i) signs.push_back(i % 2 == 0 ? 1 : -1);
  }
  if (signs.size() != spec.k) {
    throw Error(ErrorCode::InvalidArgument, "sign pattern length differs from k");
  }
  for (int s : signs) {
    if (s != 1 && s != -1) throw Error(ErrorCode::InvalidArgument, "signs must be +1 or -1");
  }
  Rng rng(spec.seed);
  // boundaries: gap i is [cuts[2i], cuts[2i+1]], component i is (cuts[2i+1], cuts[2i+2])
  std::vector<Rational> cuts;
  if (spec.fixed_intervals) {
    auto inner = rng.sorted_points(2 * spec.k, Rational(0), Rational(1));
    cuts.push_back(Rational(0));
    for (auto& v : inner) cuts.push_back(std::move(v));
    cuts.push_back(Rational(1));
    for (std::size_t i = 0; i <= spec.k; ++i) {
      if (rng.coin()) {
        // collapse this gap to a point (at an end, onto 0 or 1)
        if (i == 0) {
          cuts[1] = Rational(0);
        } else if (i == spec.k) {
          cuts[2 * i] = Rational(1);
        } else {
          const Rational mid = (cuts[2 * i] + cuts[2 * i + 1]) / 2;
          cuts[2 * i] = mid;
          cuts[2 * i + 1] = mid;
        }
      }
    }
  } else {
    const auto inner = rng.sorted_points(spec.k - 1, Rational(0), Rational(1));
    cuts.push_back(Rational(0));
    cuts.push_back(Rational(0));
    for (const auto& v : inner) {
      cuts.push_back(v);
      cuts.push_back(v);
    }
    cuts.push_back(Rational(1));
    cuts.push_back(Rational(1));
  }
  std::vector<Point> pts{{0, 0}};
  auto push = [&pts](const Rational& x, const Rational& y) {
    if (x > pts.back().x) pts.push_back({x, y});
  };
  for (std::size_t i = 0; i < spec.k; ++i) {
    const Rational& a = cuts[2 * i + 1];
    const Rational& b = cuts[2 * i + 2];
    const Rational peak = a + (b - a) * rng.fraction(1, 3, 4);
    const int s = signs[i];
    const Rational room = s > 0 ? b - peak : peak - a;
    const Rational height = room * rng.fraction(1, 3, 4);
    push(a, a);
    push(peak, peak + Rational(s) * height);
    push(b, b);
  }
  push(Rational(1), Rational(1));
  return PLHomeo(std::move(pts));
}

}  // namespace knaster
