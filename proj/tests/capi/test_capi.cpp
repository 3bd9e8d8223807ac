#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <string>
#include <thread>

#include "knaster_lab.h"

using nlohmann::json;

namespace {

const char* kId = R"({"breakpoints": [["0", "0"], ["1", "1"]]})";
const char* kBump = R"({"breakpoints": [["0", "0"], ["1/2", "3/4"], ["1", "1"]]})";

struct Owned {
  kl_map* m = nullptr;
  ~Owned() { kl_map_free(m); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  kl_string_free(s);
  return out;
}

kl_map* load(const char* text) {
  kl_map* m = nullptr;
  REQUIRE(kl_map_from_json(text, &m) == KL_OK);
  return m;
}

std::string map_json(const kl_map* m) {
  char* s = nullptr;
  REQUIRE(kl_map_to_json(m, &s) == KL_OK);
  return take(s);
}

json strip_timing(json report) {
  report["summary"].erase("seconds");
  for (auto& t : report["trials"]) t.erase("millis");
  return report;
}

}  // namespace

TEST_CASE("maps round trip through JSON in canonical form") {
  Owned f{load(R"({"breakpoints": [["0","0"], ["1/4","1/4"], ["2/4","3/4"], ["1","1"]]})")};
  CHECK(json::parse(map_json(f.m)) ==
        json::parse(R"({"breakpoints": [["0/1","0/1"], ["1/4","1/4"], ["1/2","3/4"], ["1/1","1/1"]]})"));
  Owned again{load(map_json(f.m).c_str())};
  int eq = 0;
  REQUIRE(kl_map_equal(f.m, again.m, &eq) == KL_OK);
  CHECK(eq == 1);
}

TEST_CASE("sup distance of the bump and the identity") {
  Owned id{load(kId)}, bump{load(kBump)};
  char* v = nullptr;
  char* at = nullptr;
  REQUIRE(kl_map_sup_dist(id.m, bump.m, &v, &at) == KL_OK);
  CHECK(take(v) == "1/4");
  CHECK(take(at) == "1/2");
  char* x = nullptr;
  REQUIRE(kl_map_eval(bump.m, "1/4", &x) == KL_OK);
  CHECK(take(x) == "3/8");
}

TEST_CASE("errors map to status codes") {
  kl_map* m = nullptr;
  CHECK(kl_map_from_json("{not json", &m) == KL_ERR_PARSE);
  CHECK(std::string(kl_last_error()).size() > 0);
  CHECK(kl_map_from_json(R"({"breakpoints": [["0","0"], ["1/2","2"], ["1","1"]]})", &m) != KL_OK);
  CHECK(kl_map_from_json(nullptr, &m) == KL_ERR_INVALID_ARGUMENT);
  CHECK(m == nullptr);

  Owned t;
  REQUIRE(kl_tent(2, &t.m) == KL_OK);
  kl_map* inv = nullptr;
  CHECK(kl_map_invert(t.m, &inv) == KL_ERR_NOT_HOMEOMORPHISM);
  CHECK(inv == nullptr);
  CHECK(kl_tent(0, &inv) == KL_ERR_INVALID_ARGUMENT);

  Owned bump{load(kBump)};
  std::uint64_t deg = 0;
  CHECK(kl_map_degree(bump.m, &deg) == KL_OK);
  CHECK(deg == 1);
  Owned half{load(R"({"breakpoints": [["0","0"], ["1","1/2"]]})")};
  CHECK(kl_map_degree(half.m, &deg) == KL_ERR_NOT_OPEN);

  char* s = nullptr;
  CHECK(kl_map_eval(bump.m, "3/2", &s) == KL_ERR_DOMAIN);
  CHECK(kl_status_name(KL_ERR_SIGNATURE_MISMATCH) == std::string("signature_mismatch"));
  REQUIRE(kl_map_eval(bump.m, "0", &s) == KL_OK);
  kl_string_free(s);
  CHECK(std::string(kl_last_error()).empty());
}

TEST_CASE("last error is per thread") {
  kl_map* m = nullptr;
  CHECK(kl_map_from_json("[", &m) == KL_ERR_PARSE);
  std::string other;
  std::thread([&] { other = kl_last_error(); }).join();
  CHECK(other.empty());
  CHECK(!std::string(kl_last_error()).empty());
}

TEST_CASE("tent algebra through the C API") {
  Owned t3, bump{load(kBump)}, sum, op;
  REQUIRE(kl_tent(3, &t3.m) == KL_OK);
  std::uint64_t deg = 0;
  REQUIRE(kl_map_degree(t3.m, &deg) == KL_OK);
  CHECK(deg == 3);

  char* rec = nullptr;
  int equal = 0;
  REQUIRE(kl_semiconjugacy(bump.m, 3, &rec, &equal) == KL_OK);
  CHECK(equal == 1);
  CHECK(json::parse(take(rec))["counterexample"].is_null());

  REQUIRE(kl_oplus_power(bump.m, 2, &op.m) == KL_OK);
  kl_map* refl = nullptr;
  REQUIRE(kl_map_reflect(bump.m, &refl) == KL_OK);
  const kl_map* parts[] = {bump.m, refl};
  REQUIRE(kl_block_sum(parts, 2, &sum.m) == KL_OK);
  kl_map_free(refl);
  int eq = 0;
  REQUIRE(kl_map_equal(op.m, sum.m, &eq) == KL_OK);
  CHECK(eq == 1);

  Owned t2, peak{load(R"({"breakpoints": [["0","0"], ["1/3","1"], ["1","0"]]})")}, h;
  REQUIRE(kl_tent(2, &t2.m) == KL_OK);
  REQUIRE(kl_straighten(t2.m, peak.m, &h.m) == KL_OK);
  CHECK(json::parse(map_json(h.m)) ==
        json::parse(R"({"breakpoints": [["0/1","0/1"], ["1/2","1/3"], ["1/1","1/1"]]})"));
  kl_map* bad = nullptr;
  CHECK(kl_straighten(t3.m, t2.m, &bad) == KL_ERR_DEGREE_MISMATCH);
}

TEST_CASE("signatures and conjugators") {
  Owned f{load(R"({"breakpoints": [["0","0"], ["1/4","1/2"], ["3/4","5/8"], ["1","1"]]})")};
  char* s = nullptr;
  REQUIRE(kl_signature(f.m, &s) == KL_OK);
  CHECK(take(s) == "+-");
  REQUIRE(kl_signature_reflect("+-", &s) == KL_OK);
  CHECK(take(s) == "+-");
  REQUIRE(kl_signature_oplus("+", 3, &s) == KL_OK);
  CHECK(take(s) == "+-+");
  CHECK(kl_signature_oplus("+x", 2, &s) == KL_ERR_PARSE);

  Owned a, b;
  REQUIRE(kl_pseudo_generic(2, "+-", 11, 0, &a.m) == KL_OK);
  REQUIRE(kl_pseudo_generic(2, "+-", 12, 1, &b.m) == KL_OK);
  int yes = 0;
  REQUIRE(kl_decide_conjugate(a.m, b.m, &yes) == KL_OK);
  CHECK(yes == 1);
  char* cert = nullptr;
  REQUIRE(kl_approx_conjugator(a.m, b.m, "1/100", &cert) == KL_OK);
  const json c = json::parse(take(cert));
  CHECK(c["eta"] == "1/100");
  CHECK(c.contains("conjugator"));

  Owned bump{load(kBump)};
  REQUIRE(kl_decide_conjugate(a.m, bump.m, &yes) == KL_OK);
  CHECK(yes == 0);
  CHECK(kl_approx_conjugator(a.m, bump.m, "1/100", &cert) == KL_ERR_SIGNATURE_MISMATCH);
}

TEST_CASE("blockwise conjugation and grid snapping") {
  Owned f, h, ref;
  REQUIRE(kl_pseudo_generic(1, "+", 3, 0, &f.m) == KL_OK);
  Owned g2;
  REQUIRE(kl_pseudo_generic(1, "-", 4, 0, &g2.m) == KL_OK);
  Owned g1;
  REQUIRE(kl_pseudo_generic(1, "+", 5, 0, &g1.m) == KL_OK);
  const kl_map* parts[] = {g1.m, g2.m};
  REQUIRE(kl_block_sum(parts, 2, &h.m) == KL_OK);
  char* res = nullptr;
  REQUIRE(kl_grid_block_conjugate(f.m, 2, h.m, "1/100", &res) == KL_OK);
  const json r = json::parse(take(res));
  CHECK(r.contains("norm"));

  REQUIRE(kl_oplus_power(f.m, 2, &ref.m) == KL_OK);
  Owned snapped;
  REQUIRE(kl_snap_to_grid(ref.m, 2, ref.m, "1/5", &snapped.m) == KL_OK);
  int eq = 0;
  REQUIRE(kl_map_equal(snapped.m, ref.m, &eq) == KL_OK);
  CHECK(eq == 1);
  Owned bump{load(kBump)};
  kl_map* out = nullptr;
  CHECK(kl_snap_to_grid(bump.m, 2, bump.m, "1/5", &out) == KL_ERR_PRECONDITION);
}

TEST_CASE("Knaster points and distances") {
  kl_primes* two = nullptr;
  REQUIRE(kl_primes_create("all2", &two) == KL_OK);
  kl_primes* diag = nullptr;
  REQUIRE(kl_primes_create("diagonal", &diag) == KL_OK);
  std::uint64_t p = 0;
  REQUIRE(kl_primes_get(diag, 3, &p) == KL_OK);
  CHECK(p == 3);
  kl_primes* bad = nullptr;
  CHECK(kl_primes_create("2,4", &bad) == KL_ERR_INVALID_ARGUMENT);

  char* s = nullptr;
  REQUIRE(kl_extend_point("1/3", 2, two, &s) == KL_OK);
  const json pt = json::parse(take(s));
  CHECK(pt.size() == 3);
  CHECK(pt[2] == "1/3");

  REQUIRE(kl_knaster_dist(R"(["0","0"])", R"(["1","1/2"])", two, &s) == KL_OK);
  const json d = json::parse(take(s));
  CHECK(d["lower"] == "3/4");
  CHECK(d["upper"] == "5/4");

  const std::string f = std::string(R"({"coord": 0, "map": )") + kBump + "}";
  const std::string id = std::string(R"({"coord": 0, "map": )") + kId + "}";
  REQUIRE(kl_diag_dist(f.c_str(), id.c_str(), 1, two, &s) == KL_OK);
  const json dd = json::parse(take(s));
  CHECK(dd["lower"] == "3/16");
  CHECK(dd["upper"] == "11/16");
  CHECK(dd["witness"].back() == "1/4");

  REQUIRE(kl_diagonal_lift(f.c_str(), 1, two, &s) == KL_OK);
  CHECK(json::parse(take(s))["coord"] == 1);
  REQUIRE(kl_diagonal_eval(f.c_str(), R"(["1/2","1/4"])", two, &s) == KL_OK);
  CHECK(json::parse(take(s)).size() == 2);
  REQUIRE(kl_degree_diagonal(R"({"target": 1, "source": 2, "window": {"breakpoints": [["0","0"],["1","1"]]}})",
                             two, &s) == KL_OK);
  CHECK(take(s) == "1/2");

  kl_primes_free(two);
  kl_primes_free(diag);
}

TEST_CASE("distance certificates through the C API") {
  kl_primes* two = nullptr;
  REQUIRE(kl_primes_create("all2", &two) == KL_OK);
  Owned id{load(kId)}, bump{load(kBump)};
  Owned near{load(R"({"breakpoints": [["0","0"], ["1/2","51/100"], ["1","1"]]})")};
  char* s = nullptr;
  int certified = 0;
  REQUIRE(kl_certify_mod_bound(id.m, near.m, 0, "1/10", two, &s, &certified) == KL_OK);
  CHECK(certified == 1);
  kl_string_free(s);
  CHECK(kl_certify_mod_bound(id.m, bump.m, 0, "1/10", two, &s, &certified) == KL_ERR_PRECONDITION);

  REQUIRE(kl_tent_witness(id.m, bump.m, 2, "1/5", 0, &s) == KL_OK);
  const json w = json::parse(take(s));
  CHECK((w["case"] == 1 || w["case"] == 2));
  REQUIRE(kl_tent_witness(id.m, bump.m, 2, "1/5", 1, &s) == KL_OK);
  kl_string_free(s);
  CHECK(kl_tent_witness(id.m, bump.m, 2, "1/2", 0, &s) == KL_ERR_PRECONDITION);

  const std::string f = std::string(R"({"coord": 0, "map": )") + kId + "}";
  Owned h{load(R"({"breakpoints": [["0","0"], ["1/2","9/10"], ["1","1"]]})")};
  REQUIRE(kl_separation_lower_bound(f.c_str(), 1, h.m, "1/20", two, &s, &certified) == KL_OK);
  CHECK(certified == 1);
  kl_string_free(s);
  kl_primes_free(two);
}

TEST_CASE("campaigns are reproducible and honour the seed override") {
  const json cfg = {{"suite", "semiconj"}, {"trials", 5}, {"seed", 9}, {"params", {{"d_max", 3}}}};
  char* r1 = nullptr;
  char* r2 = nullptr;
  char* table = nullptr;
  int ok = 0;
  REQUIRE(kl_run_suite(cfg.dump().c_str(), &r1, &table, &ok) == KL_OK);
  CHECK(ok == 1);
  CHECK(take(table).find("passed 5/5") != std::string::npos);
  json threaded = cfg;
  threaded["jobs"] = 3;
  REQUIRE(kl_run_suite(threaded.dump().c_str(), &r2, nullptr, &ok) == KL_OK);
  json a = strip_timing(json::parse(take(r1)));
  json b = strip_timing(json::parse(take(r2)));
  a["config"].erase("jobs");
  b["config"].erase("jobs");
  CHECK(a == b);

  ::setenv("KNASTER_LAB_SEED", "1234", 1);
  REQUIRE(kl_run_suite(cfg.dump().c_str(), &r1, nullptr, &ok) == KL_OK);
  ::unsetenv("KNASTER_LAB_SEED");
  CHECK(json::parse(take(r1))["config"]["seed"] == 1234);

  char* names = nullptr;
  REQUIRE(kl_suite_names(&names) == KL_OK);
  CHECK(json::parse(take(names)).size() == 13);
  CHECK(kl_run_suite(R"({"suite": "nope"})", &r1, nullptr, &ok) == KL_ERR_INVALID_ARGUMENT);
  CHECK(kl_run_suite(R"({"trials": 3})", &r1, nullptr, &ok) == KL_ERR_PARSE);
}

TEST_CASE("failed trials come with replay configs that reproduce them") {
  const json cfg = {{"suite", "tent-witness"}, {"trials", 3}, {"seed", 2}, {"params", {{"delta", "1/2"}}}};
  char* r = nullptr;
  int ok = 1;
  REQUIRE(kl_run_suite(cfg.dump().c_str(), &r, nullptr, &ok) == KL_OK);
  CHECK(ok == 0);
  const json report = json::parse(take(r));
  REQUIRE(report["replays"].size() == 3);
  const json& first = report["trials"][0];
  CHECK(first["detail"].contains("inputs"));
  REQUIRE(kl_run_suite(report["replays"][0]["config"].dump().c_str(), &r, nullptr, &ok) == KL_OK);
  const json again = json::parse(take(r));
  CHECK(ok == 0);
  CHECK(again["trials"][0]["seed"] == first["seed"]);
  CHECK(again["trials"][0]["verdict"] == first["verdict"]);
}
