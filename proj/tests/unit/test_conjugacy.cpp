#include "doctest.h"
#include "helpers.hpp"
#include "knaster/conjugacy.hpp"
#include "knaster/error.hpp"
#include "knaster/random.hpp"
#include "knaster/tent.hpp"

using namespace knaster;
using kt::pts;
using kt::q;

TEST_CASE("signature") {
  CHECK(signature(PLHomeo::identity()).str().empty());
  CHECK(signature(kt::bump()).str() == "+");
  const PLHomeo f(pts({{"0", "0"}, {"1/4", "1/2"}, {"3/4", "5/8"}, {"1", "1"}}));
  CHECK(signature(f).str() == "+-");
  const auto comps = non_fixed_intervals(f);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].hi == q("7/12"));
  CHECK(comps[1].lo == q("7/12"));
  const PLHomeo with_gap(pts({{"0", "0"}, {"1/8", "3/16"}, {"1/4", "1/4"}, {"1/2", "1/2"}, {"3/4", "5/8"}, {"1", "1"}}));
  CHECK(signature(with_gap).str() == "+-");
}

TEST_CASE("signature arithmetic") {
  CHECK(signature_reflect(FixedSignature{}).str().empty());
  CHECK(signature_reflect(FixedSignature::parse("+-")).str() == "+-");
  CHECK(signature_reflect(FixedSignature::parse("++")).str() == "--");
  CHECK(signature_oplus(FixedSignature{}, 4).str().empty());
  CHECK(signature_oplus(FixedSignature::parse("+"), 2).str() == "+-");
  CHECK(signature_oplus(FixedSignature::parse("+-"), 3).str() == "+-+-+-");
  CHECK_THROWS_AS(FixedSignature::parse("+x"), Error);
}

TEST_CASE("decide_conjugate") {
  const PLHomeo f = kt::bump();
  CHECK(decide_conjugate(f, f));
  CHECK_FALSE(decide_conjugate(f, reflect(f)));
  const PLHomeo a = pseudo_generic({3, {1, -1, 1}, 1, false});
  const PLHomeo b = pseudo_generic({3, {1, -1, 1}, 2, true});
  CHECK(a != b);
  CHECK(decide_conjugate(a, b));
}

TEST_CASE("pseudo_generic") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(signature(pseudo_generic({1, {1}, seed, false})).str() == "+");
    CHECK(signature(pseudo_generic({4, {}, seed, seed % 2 == 0})).str() == "+-+-");
    CHECK(pseudo_generic({3, {-1, -1, 1}, seed, true}) == pseudo_generic({3, {-1, -1, 1}, seed, true}));
  }
}

TEST_CASE("approx_conjugator") {
  const PLHomeo f = kt::bump();
  auto same = approx_conjugator(f, f, q("1/100"));
  CHECK(same.conjugator == PLHomeo::identity());
  const PLHomeo g(pts({{"0", "0"}, {"1/5", "3/5"}, {"1", "1"}}));
  auto c = approx_conjugator(f, g, q("1/100"));
  CHECK(c.achieved < q("1/100"));
  CHECK(sup_dist(conjugate(f, c.conjugator), g).value == c.achieved);
  CHECK_THROWS_AS(approx_conjugator(f, reflect(f), q("1/100")), Error);
}

TEST_CASE("approx_conjugator on random conjugate pairs") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const std::size_t k = rng.uniform(1, 4);
    std::vector<int> signs;
    for (std::size_t i = 0; i < k; ++i) signs.push_back(rng.coin() ? 1 : -1);
    const PLHomeo f = pseudo_generic({k, signs, rng.next(), rng.coin()});
    const PLHomeo g = pseudo_generic({k, signs, rng.next(), rng.coin()});
    const auto c = approx_conjugator(f, g, q("1/50"));
    CHECK(c.achieved < q("1/50"));
  }
}

TEST_CASE("grid_block_conjugate") {
  const PLHomeo f = kt::bump();
  const auto same = grid_block_conjugate(f, 3, oplus_power(f, 3), q("1/100"));
  CHECK(same.conjugator == PLHomeo::identity());
  const PLHomeo h1(pts({{"0", "0"}, {"1/3", "2/3"}, {"1", "1"}}));
  const PLHomeo h2(pts({{"0", "0"}, {"3/4", "1/2"}, {"1", "1"}}));
  std::vector<PLHomeo> blocks{h1, h2};
  const auto r = grid_block_conjugate(f, 2, block_sum(blocks), q("1/100"));
  CHECK(r.achieved < q("1/100"));
  CHECK(r.norm * 2 == r.max_block_norm);
  std::vector<PLHomeo> wrong{h1, h1};
  CHECK_THROWS_AS(grid_block_conjugate(f, 2, block_sum(wrong), q("1/100")), Error);
  CHECK_THROWS_AS(grid_block_conjugate(f, 2, f, q("1/100")), Error);
}

TEST_CASE("block norm scaling") {
  // five parts each at distance 1/10 from the identity
  const PLHomeo p(pts({{"0", "0"}, {"1/2", "3/5"}, {"1", "1"}}));
  std::vector<PLHomeo> parts(5, p);
  CHECK(sup_dist(block_sum(parts), PLHomeo::identity()).value == q("1/50"));
}

TEST_CASE("snap_to_grid") {
  const PLHomeo f = kt::bump();
  const PLHomeo ref = oplus_power(f, 2);
  CHECK(snap_to_grid(ref, 2, ref, q("1/5")) == ref);
  CHECK(snap_to_grid(PLHomeo::identity(), 3, PLHomeo::identity(), q("1/5")) == PLHomeo::identity());
  // push the grid point off: h(1/2) = 1/2 + 1/100
  const PLHomeo h(pts({{"0", "0"}, {"1/4", "3/8"}, {"1/2", "51/100"}, {"3/4", "5/8"}, {"1", "1"}}));
  CHECK(sup_dist(h, ref).value < q("1/5") / 2);
  const PLHomeo snapped = snap_to_grid(h, 2, ref, q("1/5"));
  CHECK(snapped(q("1/2")) == q("1/2"));
  CHECK(sup_dist(snapped, ref).value < q("1/10"));
  const PLHomeo far(pts({{"0", "0"}, {"1/2", "3/4"}, {"1", "1"}}));
  CHECK_THROWS_AS(snap_to_grid(far, 2, PLHomeo::identity(), q("1/5")), Error);
}
