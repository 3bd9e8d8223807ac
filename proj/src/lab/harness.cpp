#include "harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "knaster/error.hpp"
#include "knaster/random.hpp"
#include "knaster/tent.hpp"

namespace knaster::lab {

namespace {

struct Context {
  const json& params;
  const PrimeSequence& primes;
};

using SuiteFn = std::function<void(const Context&, Rng&, TrialRecord&, json&)>;

std::uint64_t u64_param(const json& p, const char* key, std::uint64_t fallback) {
  if (!p.contains(key)) return fallback;
  const json& v = p.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
  if (v.is_string()) {
    try {
      return std::stoull(v.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorCode::Parse, std::string("parameter '") + key + "' must be a non-negative integer");
}

std::vector<std::uint64_t> u64_list(const json& p, const char* key, std::vector<std::uint64_t> fallback) {
  if (!p.contains(key)) return fallback;
  const json& v = p.at(key);
  if (!v.is_array()) return {u64_param(p, key, 0)};
  std::vector<std::uint64_t> out;
  for (const auto& e : v) {
    json wrap{{"v", e}};
    out.push_back(u64_param(wrap, "v", 0));
  }
  if (out.empty()) throw Error(ErrorCode::Parse, std::string("parameter '") + key + "' is empty");
  return out;
}

Rational rational_param(const json& p, const char* key, const char* fallback) {
  return p.contains(key) ? io::rational_from_json(p.at(key)) : Rational::parse(fallback);
}

std::vector<Rational> rational_list(const json& p, const char* key, std::vector<const char*> fallback) {
  std::vector<Rational> out;
  if (!p.contains(key)) {
    for (const char* s : fallback) out.push_back(Rational::parse(s));
    return out;
  }
  const json& v = p.at(key);
  if (!v.is_array()) return {io::rational_from_json(v)};
  for (const auto& e : v) out.push_back(io::rational_from_json(e));
  if (out.empty()) throw Error(ErrorCode::Parse, std::string("parameter '") + key + "' is empty");
  return out;
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[rng.uniform(0, v.size() - 1)];
}

Rational from_u64(std::uint64_t v) { return Rational(Integer(static_cast<unsigned long>(v))); }

void fail(TrialRecord& rec, std::string verdict) {
  rec.passed = false;
  rec.verdict = std::move(verdict);
}

std::vector<int> random_signs(Rng& rng, std::size_t k) {
  std::vector<int> s;
  for (std::size_t i = 0; i < k; ++i) s.push_back(rng.coin() ? 1 : -1);
  return s;
}

PLHomeo generic_like(Rng& rng, const std::vector<int>& signs) {
  if (signs.empty()) return PLHomeo::identity();
  const bool fixed_intervals = rng.coin();
  return pseudo_generic({signs.size(), signs, rng.next(), fixed_intervals});
}

// Signature read off pointwise, independent of the interval decomposition.
std::string brute_signature(const PLHomeo& f) {
  std::vector<Rational> xs;
  const auto& pts = f.breakpoints();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    xs.push_back(pts[i].x);
    if (i + 1 < pts.size()) {
      const Rational a = pts[i].y - pts[i].x;
      const Rational b = pts[i + 1].y - pts[i + 1].x;
      if (a.sign() * b.sign() < 0) xs.push_back(pts[i].x - a * (pts[i + 1].x - pts[i].x) / (b - a));
    }
  }
  std::sort(xs.begin(), xs.end());
  std::string out;
  bool open = false;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const Rational mid = (xs[i] + xs[i + 1]) / 2;
    const int s = (f(mid) - mid).sign();
    const bool ends_here = f(xs[i + 1]) == xs[i + 1];
    if (s != 0 && !open) {
      out.push_back(s > 0 ? '+' : '-');
      open = true;
    }
    if (s == 0 || ends_here) open = false;
  }
  return out;
}

// --- suites ----------------------------------------------------------------

void suite_semiconj(const Context& ctx, Rng& rng, TrialRecord& rec, json& inputs) {
  const std::uint64_t d_max = u64_param(ctx.params, "d_max", 7);
  const PLHomeo g = random_homeo(rng, u64_param(ctx.params, "max_breakpoints", 12));
  inputs["g"] = io::to_json(g);
  for (std::uint64_t d = 1; d <= d_max; ++d) {
    const auto r = verify_semiconjugacy(g, d);
    if (!r.equal) {
      rec.detail = {{"d", d}, {"counterexample", r.counterexample->str()}};
      return fail(rec, "identity-broken");
    }
  }
  rec.detail = {{"breakpoints", g.breakpoints().size()}, {"d_max", d_max}};
  rec.passed = true;
  rec.verdict = "equal";
}

void suite_reflection(const Context& ctx, Rng& rng, TrialRecord& rec, json& inputs) {
  const std::size_t bp = u64_param(ctx.params, "max_breakpoints", 10);
  const PLHomeo f = random_homeo(rng, bp);
  const PLHomeo g = random_homeo(rng, bp);
  inputs = {{"f", io::to_json(f)}, {"g", io::to_json(g)}};
  const Rational d = sup_dist(f, g).value;
  const Rational dr = sup_dist(reflect(f), reflect(g)).value;
  const bool iso = d == dr;
  const bool hom = reflect(compose(f, g)) == compose(reflect(f), reflect(g));
  rec.detail = {{"distance", d.str()}, {"isometry", iso}, {"homomorphism", hom}};
  rec.passed = iso && hom;
  rec.verdict = rec.passed ? "exact" : "law-broken";
}

void suite_oplus_scaling(const Context& ctx, Rng& rng, TrialRecord& rec, json& inputs) {
  const std::uint64_t d_max = u64_param(ctx.params, "d_max", 7);
  const std::size_t bp = u64_param(ctx.params, "max_breakpoints", 10);
  const PLHomeo g1 = random_homeo(rng, bp);
  const PLHomeo g2 = random_homeo(rng, bp);
  inputs = {{"g1", io::to_json(g1)}, {"g2", io::to_json(g2)}};
  const Rational base = sup_dist(g1, g2).value;
  for (std::uint64_t d = 1; d <= d_max; ++d) {
    const PLHomeo a = oplus_power(g1, d);
    const PLHomeo b = oplus_power(g2, d);
    const Rational scaled = sup_dist(a, b).value;
    if (scaled * from_u64(d) != base) {
      rec.detail = {{"d", d}, {"base", base.str()}, {"scaled", scaled.str()}};
      return fail(rec, "scaling-broken");
    }
    for (std::uint64_t i = 0; i <= d; ++i) {
      const Rational t = from_u64(i) / from_u64(d);
      if (a(t) != t || b(t) != t) {
        rec.detail = {{"d", d}, {"grid_point", t.str()}};
        return fail(rec, "grid-point-moved");
      }
    }
  }
  rec.detail = {{"distance", base.str()}, {"d_max", d_max}};
  rec.passed = true;
  rec.verdict = "exact";
}

void suite_grid_fix(const Context& ctx, Rng& rng, TrialRecord& rec, json& inputs) {
  const std::uint64_t d = rng.uniform(2, u64_param(ctx.params, "d_max", 4));
  const Rational delta = rational_param(ctx.params, "delta", "1/5");
  const PLHomeo f = generic_like(rng, random_signs(rng, rng.uniform(1, 3)));
  const PLHomeo ref = oplus_power(f, d);
  const PLHomeo h = random_nearby_homeo(rng, ref, delta / from_u64(d), 8);
  inputs = {{"f", io::to_json(f)}, {"h", io::to_json(h)}, {"d", d}, {"delta", delta.str()}};
  const PLHomeo snapped = snap_to_grid(h, d, ref, delta);
  bool ok = sup_dist(snapped, ref).value < delta / from_u64(d);
  for (std::uint64_t i = 0; i <= d; ++i) {
    const Rational t = from_u64(i) / from_u64(d);
    ok = ok && snapped(t) == t;
  }
  // between the identity and h wherever it differs from h
  std::vector<Rational> xs;
  for (const auto& p : h.breakpoints()) xs.push_back(p.x);
  for (const auto& p : snapped.breakpoints()) xs.push_back(p.x);
  bool squeezed = true;
  for (const auto& x : xs) {
    const Rational hv = h(x);
    const Rational sv = snapped(x);
    if (hv >= x) squeezed = squeezed && x <= sv && sv <= hv;
    if (hv <= x) squeezed = squeezed && hv <= sv && sv <= x;
  }
  rec.detail = {{"d", d},
                {"moved_grid_points", [&] {
                   std::uint64_t n = 0;
                   for (std::uint64_t i = 1; i < d; ++i) {
                     const Rational t = from_u64(i) / from_u64(d);
                     n += h(t) != t;
                   }
                   return n;
                 }()},
                {"distance", sup_dist(snapped, ref).value.str()},
                {"squeezed", squeezed}};
  rec.passed = ok && squeezed;
  rec.verdict = rec.passed ? "snapped" : "snap-broken";
}

void suite_mod_bound(const Context& ctx, Rng& rng, TrialRecord& rec, json& inputs) {
  const std::size_t n = rng.uniform(u64_param(ctx.params, "n_min", 0), u64_param(ctx.params, "n_max", 3));
  const Rational eps = pick(rng, rational_list(ctx.params, "eps", {"1/10", "1/50"}));
  const PLHomeo g = random_homeo(rng, 8);
  const Rational radius = eps / Rational(ctx.primes.product(1, n));
  const PLHomeo h = random_nearby_homeo(rng, g, radius, 8);
  inputs = {{"g", io::to_json(g)}, {"h", io::to_json(h)}, {"n", n}, {"eps", eps.str()}};
  const auto c = certify_mod_bound(g, h, n, eps, ctx.primes, u64_param(ctx.params, "max_depth", 40));
  rec.detail = io::to_json(c);
  rec.detail["distance"].erase("witness");
  rec.detail["n"] = n;
  rec.passed = c.certified && c.distance.upper < eps;
  rec.verdict = rec.passed ? "certified" : "not-certified";
}

void suite_tent_witness(const Context& ctx, Rng& rng, TrialRecord& rec, json& inputs) {
  const Rational delta = pick(rng, rational_list(ctx.params, "delta", {"1/5", "1/8", "1/6"}));
  const std::uint64_t d = pick(rng, u64_list(ctx.params, "d", {2, 3, 4, 6, 8}));
  const std::string mode = ctx.params.value("mode", std::string("exhaustive"));
  const PLHomeo f = random_homeo(rng, 8);
  const Rational radius = delta / from_u64(d);
  PLHomeo g = f;
  std::string kind = "distant";
  if (d >= 2 && rng.coin()) {
    // push f's values across a grid point, the second-case configuration
    g = compose(grid_drag(d, rng.uniform(1, d - 1), delta), f);
    kind = "near-grid";
  } else {
    g = random_distant_homeo(rng, f, radius, 8);
  }
  inputs = {{"f", io::to_json(f)}, {"g", io::to_json(g)}, {"d", d}, {"delta", delta.str()}};
  std::vector<WitnessMode> modes;
  if (mode == "exhaustive" || mode == "both") modes.push_back(WitnessMode::Exhaustive);
  if (mode == "proof" || mode == "both") modes.push_back(WitnessMode::ProofTrace);
  if (modes.empty()) throw Error(ErrorCode::InvalidArgument, "mode must be exhaustive, proof or both");
  rec.passed = true;
  json found = json::array();
  for (auto m : modes) {
    const TentWitness w = tent_witness(f, g, d, delta, m);
    const Rational tf = tent_value(d, f(w.x));
    const Rational tg = tent_value(d, g(w.x));
    const Rational gap = (tf - tg).abs();
    const bool ok = w.kind == 1 ? gap >= delta
                                : gap >= delta / 2 && (tf == 0 || tf == 1 || tg == 0 || tg == 1);
    rec.passed = rec.passed && ok;
    found.push_back(io::to_json(w));
  }
  rec.detail = {{"d", d}, {"delta", delta.str()}, {"pair", kind}, {"witnesses", found}};
  rec.verdict = rec.passed ? "case-" + std::to_string(found[0]["case"].get<int>()) : "bad-witness";
}

void suite_separation(const Context& ctx, Rng& rng, TrialRecord& rec, json& inputs) {
  const std::size_t n = rng.uniform(0, u64_param(ctx.params, "n_max", 1));
  const std::size_t m = n + rng.uniform(1, u64_param(ctx.params, "gap_max", 2));
  const Rational eta = rational_param(ctx.params, "eta", "1/20");
  const Rational grid = Rational(1) / from_u64(ctx.primes.small_product(n + 1, m));
  const DiagonalHomeo f{n, random_homeo(rng, 6)};
  // window value at 1/d pushed at least 2 eta away
  const Rational u = rng.fraction(0, 50, 100);
  Rational y;
  const bool below = grid - eta * 2 > 0 && rng.coin();
  if (below) {
    y = grid - eta * 2 - (grid - eta * 2) * u;
  } else {
    y = grid + eta * 2 + (Rational(1) - grid - eta * 2) * u;
  }
  const PLHomeo h(std::vector<Point>{{0, 0}, {grid, y}, {1, 1}});
  inputs = {{"F", io::to_json(f)}, {"m", m}, {"h", io::to_json(h)}, {"eta", eta.str()}};
  const auto c = separation_lower_bound(f, m, h, eta, ctx.primes);
  rec.detail = io::to_json(c);
  rec.detail["n"] = n;
  rec.detail["m"] = m;
  rec.passed = c.certified;
  rec.verdict = rec.passed ? "certified" : "gap-missed";
}

void suite_comod(const Context& ctx, Rng& rng, TrialRecord& rec, json& inputs) {
  const std::size_t j = pick(rng, u64_list(ctx.params, "j", {2, 3}));
  const std::size_t n = j + rng.uniform(0, u64_param(ctx.params, "extra_max", 1));
  const Rational delta = rational_param(ctx.params, "delta", "1/5");
  const PLHomeo g_phi = random_homeo(rng, 6);
  const std::uint64_t d = ctx.primes.small_product(j + 1, n);
  const PLHomeo psi = lift(DiagonalHomeo{j, g_phi}, n, ctx.primes).map;
  PLHomeo p_prime = psi;
  std::string kind = "distant";
  if (n > j && rng.coin()) {
    p_prime = near_grid_perturbation(g_phi, n, j, rng.uniform(1, d - 1), delta, ctx.primes);
    kind = "near-grid";
  } else {
    p_prime = random_distant_homeo(rng, psi, delta / from_u64(d), 6);
  }
  inputs = {{"p_prime", io::to_json(p_prime)}, {"n", n}, {"g_phi", io::to_json(g_phi)}, {"j", j},
            {"delta", delta.str()}};
  const auto c = comod_lower_bound_check(p_prime, n, g_phi, j, delta, ctx.primes);
  rec.detail = io::to_json(c);
  rec.detail["n"] = n;
  rec.detail["j"] = j;
  rec.detail["pair"] = kind;
  rec.detail["alpha"] = (delta / from_u64(d)).str();
  rec.passed = c.certified;
  rec.verdict = rec.passed ? (n == j ? "n=j" : "n=j+1/case-" + std::to_string(c.tent->kind)) : "bound-missed";
}

void suite_signature_laws(const Context& ctx, Rng& rng, TrialRecord& rec, json& inputs) {
  const std::uint64_t d = rng.uniform(1, u64_param(ctx.params, "d_max", 6));
  const PLHomeo f = rng.coin() ? generic_like(rng, random_signs(rng, rng.uniform(1, 4))) : random_homeo(rng, 8);
  const PLHomeo u = random_homeo(rng, 8);
  inputs = {{"f", io::to_json(f)}, {"u", io::to_json(u)}, {"d", d}};
  const FixedSignature s = signature(f);
  const bool reflect_law = signature(reflect(f)) == signature_reflect(s);
  const bool oplus_law = signature(oplus_power(f, d)) == signature_oplus(s, d);
  const bool invariance = signature(conjugate(f, u)) == s;
  const bool pointwise = brute_signature(f) == s.str();
  rec.detail = {{"signature", s.str()}, {"d", d}, {"reflect", reflect_law}, {"oplus", oplus_law},
                {"conjugation", invariance}, {"pointwise", pointwise}};
  rec.passed = reflect_law && oplus_law && invariance && pointwise;
  rec.verdict = rec.passed ? "laws-hold" : "law-broken";
}

void suite_straighten(const Context& ctx, Rng& rng, TrialRecord& rec, json& inputs) {
  const std::size_t deg = rng.uniform(1, u64_param(ctx.params, "degree_max", 8));
  const std::size_t extra = u64_param(ctx.params, "extra", 3);
  const OpenPLMap f = random_open_map(rng, deg, extra);
  const OpenPLMap g = random_open_map(rng, deg, extra);
  inputs = {{"f", io::to_json(f)}, {"g", io::to_json(g)}};
  const PLHomeo h = straighten(f, g);
  rec.passed = compose(g, OpenPLMap(h)) == f;
  rec.detail = {{"degree", deg}, {"h_breakpoints", h.breakpoints().size()}};
  rec.verdict = rec.passed ? "straightened" : "g o h != f";
}

void suite_synthesis(const Context& ctx, Rng& rng, TrialRecord& rec, json& inputs) {
  const Rational eta = rational_param(ctx.params, "eta", "1/100");
  const std::size_t k = rng.uniform(1, u64_param(ctx.params, "k_max", 4));
  const std::vector<int> signs = random_signs(rng, k);
  const PLHomeo f = generic_like(rng, signs);
  const PLHomeo g = generic_like(rng, signs);
  const std::uint64_t d = rng.uniform(2, u64_param(ctx.params, "d_max", 4));
  const FixedSignature s{signs};
  const FixedSignature r = signature_reflect(s);
  std::vector<PLHomeo> blocks;
  for (std::uint64_t i = 0; i < d; ++i) blocks.push_back(generic_like(rng, (i % 2 == 0 ? s : r).signs));
  const PLHomeo h = block_sum(blocks);
  inputs = {{"f", io::to_json(f)}, {"g", io::to_json(g)}, {"h", io::to_json(h)}, {"d", d},
            {"eta", eta.str()}};

  const auto c = approx_conjugator(f, g, eta);
  const Rational achieved = sup_dist(conjugate(f, c.conjugator), g).value;
  const auto b = grid_block_conjugate(f, d, h, eta);
  const Rational block_achieved = sup_dist(conjugate(oplus_power(f, d), b.conjugator), h).value;
  Rational max_block(0);
  for (const auto& p : b.parts) max_block = max(max_block, sup_dist(p, PLHomeo::identity()).value);
  const bool norm_ok = sup_dist(b.conjugator, PLHomeo::identity()).value * from_u64(d) == max_block;
  rec.detail = {{"signature", s.str()},
                {"achieved", achieved.str()},
                {"d", d},
                {"block_achieved", block_achieved.str()},
                {"norm", b.norm.str()},
                {"max_block_norm", max_block.str()},
                {"conjugator_breakpoints", c.conjugator.breakpoints().size()}};
  rec.passed = achieved < eta && block_achieved < eta && norm_ok;
  rec.verdict = rec.passed ? "certified" : "missed-eta";
}

std::vector<std::string> sign_corpus() {
  std::vector<std::string> out{""};
  for (std::size_t len = 1; len <= 3; ++len) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << len); ++mask) {
      std::string s;
      for (std::size_t i = 0; i < len; ++i) s.push_back((mask >> (len - 1 - i)) & 1 ? '-' : '+');
      out.push_back(s);
    }
  }
  return out;
}

void suite_oracle(const Context& ctx, Rng& rng, TrialRecord& rec, json& inputs) {
  static const std::vector<std::string> corpus = sign_corpus();
  const Rational eta = rational_param(ctx.params, "eta", "1/50");
  const std::size_t pair = rec.index % (corpus.size() * corpus.size());
  const std::string& a = corpus[pair / corpus.size()];
  const std::string& b = corpus[pair % corpus.size()];
  const PLHomeo f = generic_like(rng, FixedSignature::parse(a).signs);
  const PLHomeo g = generic_like(rng, FixedSignature::parse(b).signs);
  inputs = {{"f", io::to_json(f)}, {"g", io::to_json(g)}, {"eta", eta.str()}};
  const bool verdict = decide_conjugate(f, g);
  bool oracle = false;
  std::string evidence;
  try {
    const auto c = approx_conjugator(f, g, eta);
    oracle = sup_dist(conjugate(f, c.conjugator), g).value < eta;
    evidence = "certified conjugator, achieved " + c.achieved.str();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SignatureMismatch) throw;
    // a conjugation invariant separates them
    oracle = !(brute_signature(f) != brute_signature(g));
    evidence = "invariant differs: '" + brute_signature(f) + "' vs '" + brute_signature(g) + "'";
  }
  rec.detail = {{"f_pattern", a}, {"g_pattern", b}, {"decide", verdict}, {"oracle", oracle},
                {"evidence", evidence}};
  rec.passed = verdict == oracle && verdict == (a == b);
  rec.verdict = std::string(verdict ? "conjugate" : "not-conjugate") + (rec.passed ? "" : "/mismatch");
}

Rational coordinate_sum(const PrimeSequence& p, std::size_t m) {
  Rational s(0);
  for (std::size_t i = 1; i <= m; ++i) s += Rational(p.product(i, m)) / Rational(p.product(1, i));
  return s;
}

// Lipschitz bound of the truncated metric sum in the sup distance at coordinate m.
Rational lipschitz_sum(const PrimeSequence& p, std::size_t m) {
  Rational s = Rational(p.product(1, m)) / 2;
  for (std::size_t i = 1; i <= m; ++i) s += Rational(p.product(i + 1, m)) / Rational(p.product(1, i));
  return s;
}

void suite_density(const Context& ctx, Rng& rng, TrialRecord& rec, json& inputs) {
  const std::size_t m = pick(rng, u64_list(ctx.params, "m", {1}));
  const Rational eta = rational_param(ctx.params, "eta", "1/4");
  const std::size_t k = rng.uniform(u64_param(ctx.params, "k_min", 0), u64_param(ctx.params, "k_max", 3));
  std::size_t top = m;
  while (!(ctx.primes.tail(top) < eta / 2)) ++top;

  const PLHomeo phi = generic_like(rng, random_signs(rng, k));
  const FixedSignature sy = signature_oplus(signature(phi), ctx.primes.small_product(1, m));
  const PLHomeo y = generic_like(rng, sy.signs);
  inputs = {{"phi", io::to_json(phi)}, {"y", io::to_json(DiagonalHomeo{m, y})}, {"eta", eta.str()}};

  const PLHomeo f_top = lift(DiagonalHomeo{0, phi}, top, ctx.primes).map;
  const PLHomeo y_top = lift(DiagonalHomeo{m, y}, top, ctx.primes).map;
  const Rational coord = coordinate_sum(ctx.primes, top);
  const Rational lip = lipschitz_sum(ctx.primes, top);
  const Rational eps = eta / (max(coord, lip) * 4);
  const auto c = approx_conjugator(f_top, y_top, eps);
  const PLHomeo moved = conjugate(f_top, c.conjugator);
  const auto dist = diag_dist(DiagonalHomeo{top, moved}, DiagonalHomeo{top, y_top}, top, ctx.primes);
  rec.detail = {{"m", m},
                {"coordinate", top},
                {"components", sy.signs.size()},
                {"tail", ctx.primes.tail(top).str()},
                {"eps", eps.str()},
                {"achieved", c.achieved.str()},
                {"lower", dist.lower.str()},
                {"upper", dist.upper.str()},
                {"identity_conjugator", c.conjugator == PLHomeo::identity()}};
  rec.passed = dist.upper < eta;
  rec.verdict = rec.passed ? "certified" : "above-eta";
}

const std::map<std::string, SuiteFn>& registry() {
  static const std::map<std::string, SuiteFn> r{
      {"semiconj", suite_semiconj},
      {"reflection", suite_reflection},
      {"oplus-scaling", suite_oplus_scaling},
      {"grid-fix", suite_grid_fix},
      {"straighten", suite_straighten},
      {"signature-laws", suite_signature_laws},
      {"synthesis", suite_synthesis},
      {"oracle", suite_oracle},
      {"mod-bound", suite_mod_bound},
      {"tent-witness", suite_tent_witness},
      {"separation", suite_separation},
      {"comod", suite_comod},
      {"density", suite_density},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

ExperimentConfig ExperimentConfig::from_json(const json& j, bool apply_env) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "experiment config must be a JSON object");
  ExperimentConfig c;
  try {
    c.suite = j.at("suite").get<std::string>();
    if (j.contains("primes")) {
      const json& p = j.at("primes");
      if (p.is_array()) {
        c.primes.clear();
        for (const auto& v : p) {
          if (!c.primes.empty()) c.primes += ',';
          c.primes += std::to_string(v.get<std::uint64_t>());
        }
      } else {
        c.primes = p.get<std::string>();
      }
    }
    json wrap = j;
    c.trials = u64_param(wrap, "trials", c.trials);
    c.seed = u64_param(wrap, "seed", c.seed);
    if (j.contains("params")) c.params = j.at("params");
    if (!c.params.is_object()) throw Error(ErrorCode::Parse, "'params' must be an object");
    c.output = j.value("output", std::string());
    if (j.contains("replay_trial_seed")) c.replay_trial_seed = u64_param(wrap, "replay_trial_seed", 0);
    c.replay_index = u64_param(wrap, "replay_index", 0);
    c.jobs = static_cast<unsigned>(u64_param(wrap, "jobs", 1));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad experiment config: ") + e.what());
  }
  if (apply_env) {
    if (const char* env = std::getenv("KNASTER_LAB_SEED"); env != nullptr && *env != '\0') {
      try {
        c.seed = std::stoull(env);
      } catch (const std::exception&) {
        throw Error(ErrorCode::Parse, "KNASTER_LAB_SEED must be an unsigned integer");
      }
    }
  }
  PrimeSequence::parse(c.primes);
  return c;
}

json ExperimentConfig::to_json() const {
  json j{{"suite", suite}, {"primes", primes}, {"trials", trials}, {"seed", seed}, {"params", params}};
  if (!output.empty()) j["output"] = output;
  if (replay_trial_seed) {
    j["replay_trial_seed"] = *replay_trial_seed;
    j["replay_index"] = replay_index;
  }
  return j;
}

json CampaignReport::to_json(bool timing) const {
  json rows = json::array();
  for (const auto& t : trials) {
    json row{{"index", t.index}, {"seed", t.seed}, {"passed", t.passed}, {"verdict", t.verdict},
             {"detail", t.detail}};
    if (timing) row["millis"] = t.millis;
    rows.push_back(std::move(row));
  }
  json summary{{"trials", trials.size()}, {"passed", passed}, {"failed", failed}};
  if (timing) summary["seconds"] = seconds;
  json out{{"suite", config.suite}, {"config", config.to_json()}, {"trials", rows}, {"summary", summary}};
  json rep = json::array();
  for (const auto& [index, cfg] : replays()) rep.push_back({{"index", index}, {"config", cfg}});
  if (!rep.empty()) out["replays"] = rep;
  return out;
}

std::vector<std::pair<std::uint64_t, json>> CampaignReport::replays() const {
  std::vector<std::pair<std::uint64_t, json>> out;
  for (const auto& t : trials) {
    if (t.passed) continue;
    ExperimentConfig c = config;
    c.trials = 1;
    c.output.clear();
    c.replay_trial_seed = t.seed;
    c.replay_index = t.index;
    out.emplace_back(t.index, c.to_json());
  }
  return out;
}

std::string CampaignReport::table() const {
  std::ostringstream out;
  out << "suite " << config.suite << "  primes " << config.primes << "  seed " << config.seed
      << "  trials " << trials.size() << "\n";
  std::map<std::string, std::uint64_t> verdicts;
  for (const auto& t : trials) ++verdicts[t.verdict];
  out << "  verdict                    count\n";
  for (const auto& [v, n] : verdicts) {
    std::string label = v;
    label.resize(std::max<std::size_t>(label.size(), 26), ' ');
    out << "  " << label << " " << n << "\n";
  }
  for (const auto& t : trials) {
    if (t.passed) continue;
    out << "  FAIL trial " << t.index << " seed " << t.seed << ": " << t.verdict;
    if (t.detail.contains("error")) out << " (" << t.detail["error"].get<std::string>() << ")";
    out << "\n";
  }
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f", seconds);
  out << "passed " << passed << "/" << trials.size() << " in " << secs << " s\n";
  return out.str();
}

CampaignReport run_campaign(const ExperimentConfig& config) {
  const auto it = registry().find(config.suite);
  if (it == registry().end()) {
    std::string names;
    for (const auto& n : suite_names()) names += (names.empty() ? "" : ", ") + n;
    throw Error(ErrorCode::InvalidArgument, "unknown suite '" + config.suite + "' (known: " + names + ")");
  }
  const PrimeSequence primes = PrimeSequence::parse(config.primes);
  const Context ctx{config.params, primes};
  const std::uint64_t count = config.replay_trial_seed ? 1 : config.trials;
  CampaignReport report;
  report.config = config;
  report.trials.resize(count);

  auto run_one = [&](std::uint64_t i) {
    TrialRecord& rec = report.trials[i];
    rec.index = config.replay_trial_seed ? config.replay_index : i;
    rec.seed = config.replay_trial_seed ? *config.replay_trial_seed : derive_seed(config.seed, i);
    Rng rng(rec.seed);
    json inputs = json::object();
    const auto start = std::chrono::steady_clock::now();
    try {
      it->second(ctx, rng, rec, inputs);
    } catch (const Error& e) {
      rec.passed = false;
      rec.verdict = error_code_name(e.code());
      rec.detail["error"] = e.what();
    } catch (const std::exception& e) {
      rec.passed = false;
      rec.verdict = "exception";
      rec.detail["error"] = e.what();
    }
    rec.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (!rec.passed) rec.detail["inputs"] = std::move(inputs);
  };

  const auto start = std::chrono::steady_clock::now();
  const unsigned jobs = std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(count)));
  if (jobs <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) run_one(i);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t i = next++; i < count; i = next++) run_one(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& t : report.trials) (t.passed ? report.passed : report.failed)++;
  return report;
}

}  // namespace knaster::lab
