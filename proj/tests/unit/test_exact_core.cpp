#include "doctest.h"
#include "helpers.hpp"
#include "knaster/error.hpp"
#include "knaster/random.hpp"
#include "knaster/tent.hpp"

using namespace knaster;
using kt::pts;
using kt::q;

TEST_CASE("rational normal form and parsing") {
  CHECK(Rational(6, -4).str() == "-3/2");
  CHECK(Rational::parse("10/4") == Rational(5, 2));
  CHECK(Rational::parse("7").str() == "7/1");
  CHECK_THROWS_AS(Rational::parse("1/0"), Error);
  CHECK_THROWS_AS(Rational::parse("x"), Error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), Error);
  CHECK(Rational(-7, 2).floor() == -4);
}

TEST_CASE("eval") {
  CHECK(eval(PLMap::identity(), q("1/3")) == q("1/3"));
  CHECK(eval(tent(2).map(), q("3/4")) == q("1/2"));
  CHECK(eval(kt::bump().map(), q("1/4")) == q("3/8"));
  CHECK_THROWS_AS(eval(PLMap::identity(), q("3/2")), Error);
}

TEST_CASE("canonical form drops collinear points") {
  PLMap f(pts({{"0", "0"}, {"1/3", "1/3"}, {"1", "1"}}));
  CHECK(f == PLMap::identity());
  CHECK(f.breakpoints().size() == 2);
}

TEST_CASE("compose") {
  CHECK(compose(tent(2).map(), tent(2).map()) == tent(4).map());
  const PLHomeo g = kt::bump();
  CHECK(compose(PLHomeo::identity(), g) == g);
  CHECK(compose(tent(2).map(), PLMap::identity()) == tent(2).map());
}

TEST_CASE("invert") {
  CHECK(invert(PLHomeo::identity()) == PLHomeo::identity());
  CHECK(invert(kt::bump()).breakpoints() == pts({{"0", "0"}, {"3/4", "1/2"}, {"1", "1"}}));
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const PLHomeo h = random_homeo(rng, 10);
    CHECK(invert(invert(h)) == h);
    CHECK(compose(h, invert(h)) == PLHomeo::identity());
    CHECK(compose(invert(h), h) == PLHomeo::identity());
  }
}

TEST_CASE("sup_dist") {
  const PLHomeo g = kt::bump();
  CHECK(sup_dist(g, g).value == 0);
  const auto d = sup_dist(PLHomeo::identity(), g);
  CHECK(d.value == q("1/4"));
  CHECK(d.at == q("1/2"));
  // T2(1/2) = 1 while T4(1/2) = 0
  const auto t = sup_dist(tent(2).map(), tent(4).map());
  CHECK(t.value == 1);
  CHECK(t.at == q("1/2"));
}

TEST_CASE("sup_dist agrees with dense sampling") {
  Rng rng(5);
  for (int i = 0; i < 30; ++i) {
    const PLHomeo f = random_homeo(rng, 6);
    const PLHomeo g = random_homeo(rng, 6);
    const Rational exact = sup_dist(f, g).value;
    Rational sampled(0);
    for (long k = 0; k <= 500; ++k) {
      const Rational x(k, 500);
      sampled = max(sampled, (f(x) - g(x)).abs());
    }
    CHECK(sampled <= exact);
    CHECK(exact == (f(sup_dist(f, g).at) - g(sup_dist(f, g).at)).abs());
  }
}

TEST_CASE("degree") {
  CHECK(degree(OpenPLMap(PLMap::identity())) == 1);
  for (std::uint64_t d = 1; d <= 7; ++d) CHECK(degree(tent(d)) == d);
  CHECK(degree(compose(tent(2), tent(2))) == 4);
  CHECK_THROWS_AS(OpenPLMap(pts({{"0", "0"}, {"1/2", "1/2"}, {"1", "0"}})), Error);
  CHECK_FALSE(is_open(PLMap(pts({{"0", "0"}, {"1/2", "1/2"}, {"1", "0"}}))));
}

TEST_CASE("degree is invariant under precomposition with a homeomorphism") {
  Rng rng(21);
  for (int i = 0; i < 30; ++i) {
    const OpenPLMap g = random_open_map(rng, 1 + rng.uniform(0, 5), 2);
    const PLHomeo h = random_homeo(rng, 8);
    CHECK(degree(compose(g, OpenPLMap(h))) == degree(g));
  }
}

TEST_CASE("reflect") {
  CHECK(reflect(PLHomeo::identity()) == PLHomeo::identity());
  CHECK(reflect(kt::bump()).breakpoints() == pts({{"0", "0"}, {"1/2", "1/4"}, {"1", "1"}}));
  Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    const PLHomeo f = random_homeo(rng, 8);
    CHECK(reflect(reflect(f)) == f);
  }
}

TEST_CASE("compose is associative") {
  Rng rng(8);
  for (int i = 0; i < 30; ++i) {
    const PLHomeo a = random_homeo(rng, 6);
    const PLHomeo b = random_homeo(rng, 6);
    const PLHomeo c = random_homeo(rng, 6);
    CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
  }
}

TEST_CASE("homeomorphism validation") {
  CHECK_THROWS_AS(PLHomeo(pts({{"0", "0"}, {"1/2", "1/2"}, {"1", "1/2"}})), Error);
  CHECK_THROWS_AS(PLMap(pts({{"0", "0"}, {"1", "3/2"}})), Error);
  CHECK_THROWS_AS(PLMap(pts({{"0", "0"}, {"1/2", "1"}, {"1/2", "1/2"}, {"1", "1"}})), Error);
}
