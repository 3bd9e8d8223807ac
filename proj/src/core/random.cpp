#include "knaster/random.hpp"

#include <algorithm>
#include <set>

#include "knaster/error.hpp"

namespace knaster {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t campaign_seed, std::uint64_t index) {
  std::uint64_t s = campaign_seed ^ (0xd1b54a32d192ed03ULL * (index + 1));
  splitmix64(s);
  return splitmix64(s);
}

std::uint64_t Rng::uniform(std::uint64_t lo, std::uint64_t hi) {
  if (hi < lo) throw Error(ErrorCode::InvalidArgument, "empty integer range");
  const std::uint64_t span = hi - lo + 1;
  if (span == 0) return next();
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
  std::uint64_t v;
  do v = next();
  while (v >= limit);
  return lo + v % span;
}

std::vector<Rational> Rng::sorted_points(std::size_t k, const Rational& lo, const Rational& hi) {
  static constexpr std::uint64_t kDenominators[] = {12, 16, 30, 36, 60, 64, 97, 100, 128};
  std::uint64_t den = kDenominators[uniform(0, std::size(kDenominators) - 1)];
  den = std::max<std::uint64_t>(den, 2 * k + 2);
  std::set<std::uint64_t> picks;
  while (picks.size() < k) picks.insert(uniform(1, den - 1));
  std::vector<Rational> out;
  out.reserve(k);
  const Rational width = hi - lo;
  for (auto p : picks) {
    out.push_back(lo + width * Rational(Integer(static_cast<unsigned long>(p)),
                                        Integer(static_cast<unsigned long>(den))));
  }
  return out;
}

Rational Rng::fraction(std::uint64_t num_lo, std::uint64_t num_hi, std::uint64_t den) {
  return Rational(Integer(static_cast<unsigned long>(uniform(num_lo, num_hi))),
                  Integer(static_cast<unsigned long>(den)));
}

PLHomeo random_homeo(Rng& rng, std::size_t max_breakpoints) {
  const std::size_t interior = max_breakpoints <= 2 ? 0 : rng.uniform(0, max_breakpoints - 2);
  const auto xs = rng.sorted_points(interior, Rational(0), Rational(1));
  const auto ys = rng.sorted_points(interior, Rational(0), Rational(1));
  std::vector<Point> pts{{0, 0}};
  for (std::size_t i = 0; i < interior; ++i) pts.push_back({xs[i], ys[i]});
  pts.push_back({1, 1});
  return PLHomeo(std::move(pts));
}

OpenPLMap random_open_map(Rng& rng, std::size_t degree, std::size_t extra_per_lap) {
  if (degree == 0) throw Error(ErrorCode::InvalidArgument, "degree must be positive");
  auto cuts = rng.sorted_points(degree - 1, Rational(0), Rational(1));
  cuts.insert(cuts.begin(), Rational(0));
  cuts.push_back(Rational(1));
  std::vector<Point> pts{{0, 0}};
  for (std::size_t j = 0; j < degree; ++j) {
    const bool up = j % 2 == 0;
    const std::size_t extra = extra_per_lap == 0 ? 0 : rng.uniform(0, extra_per_lap);
    const auto xs = rng.sorted_points(extra, cuts[j], cuts[j + 1]);
    auto ys = rng.sorted_points(extra, Rational(0), Rational(1));
    if (!up) std::reverse(ys.begin(), ys.end());
    for (std::size_t i = 0; i < extra; ++i) pts.push_back({xs[i], ys[i]});
    pts.push_back({cuts[j + 1], Rational(up ? 1 : 0)});
  }
  return OpenPLMap(std::move(pts));
}

PLHomeo random_nearby_homeo(Rng& rng, const PLHomeo& g, const Rational& radius,
                            std::size_t max_breakpoints) {
  const PLHomeo r = random_homeo(rng, max_breakpoints);
  const Rational far = sup_dist(r, g).value;
  if (far.is_zero()) return g;
  // weight t gives sup_dist = t * far; aim strictly inside the ball
  Rational t = radius / far * rng.fraction(1, 9, 10);
  if (t > Rational(1)) t = Rational(1);
  return convex_combination(g, r, t);
}

PLHomeo random_distant_homeo(Rng& rng, const PLHomeo& g, const Rational& radius,
                             std::size_t max_breakpoints) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const PLHomeo r = random_homeo(rng, max_breakpoints);
    const Rational far = sup_dist(r, g).value;
    if (far < radius) continue;
    Rational t = radius / far * rng.fraction(10, 20, 10);
    if (t > Rational(1)) t = Rational(1);
    return convex_combination(g, r, t);
  }
  throw Error(ErrorCode::InvalidArgument,
              "could not sample a homeo at distance >= " + radius.str());
}

}  // namespace knaster
