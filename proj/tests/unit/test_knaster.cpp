#include "doctest.h"
#include "helpers.hpp"
#include "knaster/error.hpp"
#include "knaster/knaster.hpp"
#include "knaster/random.hpp"
#include "knaster/tent.hpp"

using namespace knaster;
using kt::pts;
using kt::q;

namespace {
std::vector<Rational> coords(std::initializer_list<const char*> list) {
  std::vector<Rational> out;
  for (const char* s : list) out.push_back(q(s));
  return out;
}
}  // namespace

TEST_CASE("prime sequences") {
  const auto diag = PrimeSequence::diagonal();
  const std::uint64_t expected[] = {2, 2, 3, 2, 3, 5, 2, 3, 5, 7, 2};
  for (std::size_t i = 0; i < 11; ++i) CHECK(diag[i + 1] == expected[i]);
  const auto cyc = PrimeSequence::parse("3,5");
  CHECK(cyc[1] == 3);
  CHECK(cyc[2] == 5);
  CHECK(cyc[3] == 3);
  CHECK(cyc.description() == "3,5");
  CHECK_THROWS_AS(PrimeSequence::parse("2,4"), Error);
  CHECK_THROWS_AS(PrimeSequence::parse("two"), Error);
  const auto two = PrimeSequence::all2();
  CHECK(two.weight(0) == q("1/2"));
  CHECK(two.weight(3) == q("1/8"));
  CHECK(two.tail(1) == q("1/2"));
  CHECK(diag.tail(3) == q("1/12"));
  for (std::size_t i = 1; i < 12; ++i) CHECK(diag.weight(i) <= Rational(1) / Rational(Integer(1) << i));
}

TEST_CASE("extend_point") {
  const auto two = PrimeSequence::all2();
  CHECK(extend_point(q("0"), 4, two).coords == std::vector<Rational>(5, Rational(0)));
  CHECK(extend_point(q("1/2"), 1, two).coords == coords({"1", "1/2"}));
  CHECK(extend_point(q("1/4"), 2, two).coords == coords({"1", "1/2", "1/4"}));
  CHECK(extend_point(q("3/7"), 6, PrimeSequence::diagonal()).coherent(PrimeSequence::diagonal()));
}

TEST_CASE("knaster_dist") {
  const auto two = PrimeSequence::all2();
  const TruncatedKnasterPoint x{coords({"0", "0"})};
  const TruncatedKnasterPoint y{coords({"1", "1/2"})};
  CHECK(knaster_dist(x, x, two).lower == 0);
  const auto d = knaster_dist(x, y, two);
  CHECK(d.lower == q("3/4"));
  CHECK(d.upper - d.lower == q("1/2"));
  CHECK_THROWS_AS(knaster_dist(x, TruncatedKnasterPoint{coords({"0"})}, two), Error);
  CHECK_THROWS_AS(knaster_dist(x, TruncatedKnasterPoint{coords({"1/2", "0"})}, two), Error);
}

TEST_CASE("lift") {
  const auto two = PrimeSequence::all2();
  const auto diag = PrimeSequence::diagonal();
  const PLHomeo g = kt::bump();
  const DiagonalHomeo f{0, g};
  CHECK(lift(f, 0, two).map == g);
  CHECK(lift(f, 1, two).map == oplus_power(g, 2));
  CHECK(lift(lift(f, 2, diag), 4, diag).map == lift(f, 4, diag).map);
  CHECK(same_diagonal(f, lift(f, 3, diag), diag));
  CHECK_THROWS_AS(lift(DiagonalHomeo{2, g}, 1, two), Error);
}

TEST_CASE("eval_diagonal") {
  const auto diag = PrimeSequence::diagonal();
  const PLHomeo g = kt::bump();
  const TruncatedKnasterPoint x = extend_point(q("2/7"), 4, diag);
  CHECK(eval_diagonal(DiagonalHomeo{}, x, diag) == x);
  CHECK(eval_diagonal(DiagonalHomeo{0, g}, TruncatedKnasterPoint{coords({"1/2"})}, diag).coords ==
        coords({"3/4"}));
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const DiagonalHomeo f{rng.uniform(0, 2), random_homeo(rng, 6)};
    const TruncatedKnasterPoint y = eval_diagonal(f, x, diag);
    CHECK(y.coherent(diag));
    CHECK(eval_diagonal(lift(f, 3, diag), x, diag) == y);
  }
}

TEST_CASE("diag_dist") {
  const auto two = PrimeSequence::all2();
  const PLHomeo g = kt::bump();
  const DiagonalHomeo f{0, g};
  CHECK(diag_dist(f, f, 2, two).lower == 0);
  const auto d = diag_dist(f, DiagonalHomeo{}, 1, two);
  CHECK(d.lower == q("3/16"));
  CHECK(d.upper == q("11/16"));
  REQUIRE(d.witness.has_value());
  CHECK(d.witness->coords.back() == q("1/4"));
  Rational prev(0);
  for (std::size_t n = 0; n < 6; ++n) {
    const auto dn = diag_dist(f, DiagonalHomeo{}, n, two);
    CHECK(dn.lower >= prev);
    CHECK(dn.upper - dn.lower == two.tail(n));
    prev = dn.lower;
  }
}

TEST_CASE("diag_dist bounds survive pre-lifting") {
  const auto diag = PrimeSequence::diagonal();
  Rng rng(6);
  for (int i = 0; i < 10; ++i) {
    const DiagonalHomeo f{0, random_homeo(rng, 5)};
    const DiagonalHomeo g{1, random_homeo(rng, 5)};
    const auto a = diag_dist(f, g, 3, diag);
    const auto b = diag_dist(lift(f, 2, diag), lift(g, 2, diag), 3, diag);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
    const auto deeper = diag_dist(f, g, 4, diag);
    CHECK(deeper.lower >= a.lower);
    CHECK(deeper.upper <= a.upper);
  }
}

TEST_CASE("degree_diagonal") {
  const auto two = PrimeSequence::all2();
  CHECK(degree_diagonal(as_general(DiagonalHomeo{2, kt::bump()}), two) == 1);
  CHECK(degree_diagonal(GeneralDiagonalMap{0, 1, tent(4)}, two) == 2);
  CHECK(degree_diagonal(GeneralDiagonalMap{0, 1, tent(2)}, two) == 1);
  const auto diag = PrimeSequence::diagonal();
  const GeneralDiagonalMap a{0, 2, tent(8)};
  const GeneralDiagonalMap b{2, 3, tent(9)};
  CHECK(degree_diagonal(compose(a, b), diag) == degree_diagonal(a, diag) * degree_diagonal(b, diag));
  CHECK_THROWS_AS(compose(b, a), Error);
}

TEST_CASE("certify_mod_bound") {
  const auto two = PrimeSequence::all2();
  const PLHomeo g = kt::bump();
  CHECK(certify_mod_bound(g, g, 2, q("1/10"), two).certified);
  // n = 1, epsilon = 1/10, h within 1/20 of g
  const PLHomeo h(pts({{"0", "0"}, {"1/2", "3/4"}, {"3/4", "147/160"}, {"1", "1"}}));
  REQUIRE(sup_dist(g, h).value < q("1/20"));
  const auto c = certify_mod_bound(g, h, 1, q("1/10"), two);
  CHECK(c.certified);
  CHECK(c.distance.upper < q("1/10"));
  CHECK_THROWS_AS(certify_mod_bound(g, PLHomeo::identity(), 1, q("1/10"), two), Error);
}

TEST_CASE("tent_witness") {
  const PLHomeo id = PLHomeo::identity();
  const PLHomeo up(pts({{"0", "0"}, {"1/2", "7/10"}, {"1", "1"}}));
  const auto w1 = tent_witness(id, up, 1, q("1/5"));
  CHECK(w1.kind == 1);
  CHECK(w1.gap >= q("1/5"));
  // d = 2, sup_dist 1/10 concentrated in (0, 1/2)
  const PLHomeo near(pts({{"0", "0"}, {"1/4", "7/20"}, {"1/2", "1/2"}, {"1", "1"}}));
  REQUIRE(sup_dist(id, near).value == q("1/10"));
  for (auto mode : {WitnessMode::Exhaustive, WitnessMode::ProofTrace}) {
    const auto w = tent_witness(id, near, 2, q("1/5"), mode);
    CHECK(w.gap == (tent_value(2, w.x) - tent_value(2, near(w.x))).abs());
    CHECK(w.gap >= (w.kind == 1 ? q("1/5") : q("1/10")));
  }
  CHECK_THROWS_AS(tent_witness(id, near, 2, q("1/4")), Error);
  CHECK_THROWS_AS(tent_witness(id, id, 2, q("1/5")), Error);
}

TEST_CASE("tent_witness modes agree on existence") {
  Rng rng(44);
  const Rational deltas[] = {q("1/5"), q("1/8"), q("1/6")};
  const std::uint64_t ds[] = {2, 3, 4, 6, 8};
  for (int i = 0; i < 60; ++i) {
    const Rational& delta = deltas[i % 3];
    const std::uint64_t d = ds[i % 5];
    const PLHomeo f = random_homeo(rng, 6);
    const PLHomeo g = random_distant_homeo(rng, f, delta / Rational(static_cast<long>(d)), 6);
    const auto a = tent_witness(f, g, d, delta, WitnessMode::Exhaustive);
    const auto b = tent_witness(f, g, d, delta, WitnessMode::ProofTrace);
    CHECK(a.gap >= delta / 2);
    CHECK(b.gap >= delta / 2);
  }
}

TEST_CASE("separation_lower_bound") {
  const auto two = PrimeSequence::all2();
  // F identity at coordinate 0, window at coordinate 2, d = 4
  const PLHomeo h(pts({{"0", "0"}, {"1/4", "3/8"}, {"1", "1"}}));
  const auto c = separation_lower_bound(DiagonalHomeo{}, 2, h, q("1/20"), two);
  CHECK(c.certified);
  CHECK(c.bound == q("1/80"));
  const auto edge = separation_lower_bound(DiagonalHomeo{}, 2, h, q("1/16"), two);
  CHECK(edge.certified);
  CHECK_THROWS_AS(separation_lower_bound(DiagonalHomeo{}, 2, h, q("1/10"), two), Error);
}

TEST_CASE("comod_lower_bound_check") {
  const auto two = PrimeSequence::all2();
  const PLHomeo g = kt::bump();
  const Rational delta = q("1/5");
  // n = j with sup_dist exactly delta
  const PLHomeo shifted(pts({{"0", "0"}, {"1/2", "11/20"}, {"1", "1"}}));
  REQUIRE(sup_dist(g, shifted).value == delta);
  const auto a = comod_lower_bound_check(shifted, 2, g, 2, delta, two);
  CHECK(a.certified);
  CHECK(a.coordinate == 2);
  // n = j + 1, forced into the second case
  const PLHomeo pp = near_grid_perturbation(g, 3, 2, 1, delta, two);
  const auto b = comod_lower_bound_check(pp, 3, g, 2, delta, two);
  CHECK(b.certified);
  REQUIRE(b.tent.has_value());
  CHECK(b.tent->kind == 2);
  CHECK(b.coordinate == 1);
  // n = j + 1, first case
  const PLHomeo lifted = lift(DiagonalHomeo{2, g}, 3, two).map;
  const PLHomeo far = compose(PLHomeo(pts({{"0", "0"}, {"1/4", "1/8"}, {"1", "1"}})), lifted);
  const auto c = comod_lower_bound_check(far, 3, g, 2, delta, two);
  CHECK(c.certified);
  CHECK(c.tent->kind == 1);
  CHECK(c.coordinate == 2);
  CHECK_THROWS_AS(comod_lower_bound_check(shifted, 2, g, 1, delta, two), Error);
}
