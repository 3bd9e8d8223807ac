#include "doctest.h"
#include "helpers.hpp"
#include "knaster/error.hpp"
#include "knaster/random.hpp"
#include "knaster/tent.hpp"

using namespace knaster;
using kt::pts;
using kt::q;

TEST_CASE("tent") {
  CHECK(tent(1).map() == PLMap::identity());
  CHECK(tent(2).breakpoints() == pts({{"0", "0"}, {"1/2", "1"}, {"1", "0"}}));
  CHECK(tent(5)(q("3/10")) == q("1/2"));
  CHECK(tent(6).breakpoints().size() == 7);
  CHECK_THROWS_AS(tent(0), Error);
}

TEST_CASE("tents compose multiplicatively") {
  for (std::uint64_t a = 1; a <= 5; ++a) {
    for (std::uint64_t b = 1; b <= 5; ++b) CHECK(compose(tent(a), tent(b)) == tent(a * b));
  }
}

TEST_CASE("block_sum") {
  const PLHomeo id = PLHomeo::identity();
  const PLHomeo g = kt::bump();
  std::vector<PLHomeo> two{id, id};
  CHECK(block_sum(two) == id);
  std::vector<PLHomeo> mixed{g, reflect(g)};
  CHECK(block_sum(mixed)(q("1/4")) == q("3/8"));
  Rng rng(1);
  std::vector<PLHomeo> three{random_homeo(rng, 5), random_homeo(rng, 5), random_homeo(rng, 5)};
  const PLHomeo s = block_sum(three);
  CHECK(s(q("1/3")) == q("1/3"));
  CHECK(s(q("2/3")) == q("2/3"));
  CHECK_THROWS_AS(block_sum(std::vector<PLHomeo>{}), Error);
  for (std::uint64_t i = 0; i < 3; ++i) CHECK(block_part(s, i, 3) == three[i]);
}

TEST_CASE("oplus_power") {
  const PLHomeo g = kt::bump();
  CHECK(oplus_power(g, 1) == g);
  CHECK(oplus_power(PLHomeo::identity(), 6) == PLHomeo::identity());
  CHECK(oplus_power(g, 2)(q("3/4")) == q("5/8"));
}

TEST_CASE("oplus_power is a homomorphism") {
  Rng rng(9);
  for (int i = 0; i < 30; ++i) {
    const PLHomeo a = random_homeo(rng, 6);
    const PLHomeo b = random_homeo(rng, 6);
    const std::uint64_t d = rng.uniform(1, 6);
    CHECK(oplus_power(compose(a, b), d) == compose(oplus_power(a, d), oplus_power(b, d)));
    CHECK(oplus_power(invert(a), d) == invert(oplus_power(a, d)));
    CHECK(oplus_power(oplus_power(a, d), 3) == oplus_power(a, d * 3));
  }
}

TEST_CASE("semiconjugacy") {
  CHECK(verify_semiconjugacy(PLHomeo::identity(), 3).equal);
  CHECK(verify_semiconjugacy(kt::bump(), 2).equal);
  Rng rng(4);
  const auto rec = verify_semiconjugacy(random_homeo(rng, 8), 5);
  CHECK(rec.equal);
  CHECK_FALSE(rec.counterexample.has_value());
}

TEST_CASE("straighten") {
  const OpenPLMap t2 = tent(2);
  CHECK(straighten(t2, t2) == PLHomeo::identity());
  CHECK(straighten(tent(4), compose(t2, t2)) == PLHomeo::identity());
  const OpenPLMap moved(pts({{"0", "0"}, {"1/3", "1"}, {"1", "0"}}));
  const PLHomeo h = straighten(t2, moved);
  CHECK(h.breakpoints() == pts({{"0", "0"}, {"1/2", "1/3"}, {"1", "1"}}));
  CHECK(compose(moved, OpenPLMap(h)) == t2);
  CHECK_THROWS_AS(straighten(tent(3), t2), Error);
  const OpenPLMap from_one(pts({{"0", "1"}, {"1", "0"}}));
  CHECK_THROWS_AS(straighten(from_one, from_one), Error);
}

TEST_CASE("straighten random") {
  Rng rng(12);
  for (int i = 0; i < 40; ++i) {
    const std::size_t d = rng.uniform(1, 8);
    const OpenPLMap f = random_open_map(rng, d, 3);
    const OpenPLMap g = random_open_map(rng, d, 3);
    const PLHomeo h = straighten(f, g);
    CHECK(compose(g, OpenPLMap(h)) == f);
  }
}
