#include "knaster_lab.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "harness.hpp"
#include "json_io.hpp"
#include "knaster/conjugacy.hpp"
#include "knaster/error.hpp"
#include "knaster/knaster.hpp"
#include "knaster/tent.hpp"

struct kl_map {
  knaster::PLMap map;
};

struct kl_primes {
  knaster::PrimeSequence seq;
};

namespace {

using namespace knaster;
using nlohmann::json;

thread_local std::string last_error;

kl_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return KL_ERR_INVALID_ARGUMENT;
    case ErrorCode::Domain: return KL_ERR_DOMAIN;
    case ErrorCode::NotHomeomorphism: return KL_ERR_NOT_HOMEOMORPHISM;
    case ErrorCode::NotOpen: return KL_ERR_NOT_OPEN;
    case ErrorCode::DegreeMismatch: return KL_ERR_DEGREE_MISMATCH;
    case ErrorCode::SignatureMismatch: return KL_ERR_SIGNATURE_MISMATCH;
    case ErrorCode::Precondition: return KL_ERR_PRECONDITION;
    case ErrorCode::NoWitness: return KL_ERR_NO_WITNESS;
    case ErrorCode::IterationCap: return KL_ERR_ITERATION_CAP;
    case ErrorCode::Parse: return KL_ERR_PARSE;
    case ErrorCode::VerificationFailed: return KL_ERR_VERIFICATION_FAILED;
  }
  return KL_ERR_INTERNAL;
}

template <class F>
kl_status guard(F&& body) {
  try {
    body();
    last_error.clear();
    return KL_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const json::exception& e) {
    last_error = std::string("json: ") + e.what();
    return KL_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return KL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return KL_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return KL_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::InvalidArgument, std::string(what) + " is null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

kl_map* wrap(PLMap m) { return new kl_map{std::move(m)}; }
kl_map* wrap(const PLHomeo& h) { return wrap(h.map()); }
kl_map* wrap(const OpenPLMap& f) { return wrap(f.map()); }

const PLMap& map_of(const kl_map* f, const char* what = "map") {
  need(f, what);
  return f->map;
}
PLHomeo homeo_of(const kl_map* f, const char* what = "map") { return PLHomeo(map_of(f, what)); }
OpenPLMap open_of(const kl_map* f, const char* what = "map") { return OpenPLMap(map_of(f, what)); }

const PrimeSequence& primes_of(const kl_primes* p) {
  need(p, "primes");
  return p->seq;
}

Rational rat(const char* s, const char* what) {
  need(s, what);
  return Rational::parse(s);
}

json parse(const char* text, const char* what) {
  need(text, what);
  return io::parse(text);
}

}  // namespace

extern "C" {

const char* kl_version(void) { return "0.1.0"; }

const char* kl_last_error(void) { return last_error.c_str(); }

const char* kl_status_name(kl_status status) {
  switch (status) {
    case KL_OK: return "ok";
    case KL_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case KL_ERR_DOMAIN: return "domain";
    case KL_ERR_NOT_HOMEOMORPHISM: return "not_homeomorphism";
    case KL_ERR_NOT_OPEN: return "not_open";
    case KL_ERR_DEGREE_MISMATCH: return "degree_mismatch";
    case KL_ERR_SIGNATURE_MISMATCH: return "signature_mismatch";
    case KL_ERR_PRECONDITION: return "precondition";
    case KL_ERR_NO_WITNESS: return "no_witness";
    case KL_ERR_ITERATION_CAP: return "iteration_cap";
    case KL_ERR_PARSE: return "parse";
    case KL_ERR_VERIFICATION_FAILED: return "verification_failed";
    case KL_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void kl_string_free(char* s) { std::free(s); }

kl_status kl_map_from_json(const char* text, kl_map** out) {
  return guard([&] {
    need(out, "out");
    *out = wrap(io::map_from_json(parse(text, "json")));
  });
}

kl_status kl_map_to_json(const kl_map* f, char** out) {
  return guard([&] {
    need(out, "out");
    *out = dup(io::to_json(map_of(f)).dump());
  });
}

void kl_map_free(kl_map* f) { delete f; }

kl_status kl_map_identity(kl_map** out) {
  return guard([&] {
    need(out, "out");
    *out = wrap(PLMap::identity());
  });
}

kl_status kl_map_eval(const kl_map* f, const char* x, char** out) {
  return guard([&] {
    need(out, "out");
    *out = dup(eval(map_of(f), rat(x, "x")).str());
  });
}

kl_status kl_map_compose(const kl_map* f, const kl_map* g, kl_map** out) {
  return guard([&] {
    need(out, "out");
    *out = wrap(compose(map_of(f, "f"), map_of(g, "g")));
  });
}

kl_status kl_map_invert(const kl_map* h, kl_map** out) {
  return guard([&] {
    need(out, "out");
    *out = wrap(invert(homeo_of(h)));
  });
}

kl_status kl_map_sup_dist(const kl_map* f, const kl_map* g, char** value, char** at) {
  return guard([&] {
    need(value, "value");
    auto d = sup_dist(map_of(f, "f"), map_of(g, "g"));
    std::string v = d.value.str(), a = d.at.str();
    *value = dup(v);
    if (at) {
      try {
        *at = dup(a);
      } catch (...) {
        std::free(*value);
        throw;
      }
    }
  });
}

kl_status kl_map_degree(const kl_map* f, uint64_t* out) {
  return guard([&] {
    need(out, "out");
    *out = degree(open_of(f));
  });
}

kl_status kl_map_reflect(const kl_map* f, kl_map** out) {
  return guard([&] {
    need(out, "out");
    *out = wrap(reflect(homeo_of(f)));
  });
}

kl_status kl_map_equal(const kl_map* f, const kl_map* g, int* out) {
  return guard([&] {
    need(out, "out");
    *out = map_of(f, "f") == map_of(g, "g") ? 1 : 0;
  });
}

kl_status kl_tent(uint64_t d, kl_map** out) {
  return guard([&] {
    need(out, "out");
    *out = wrap(tent(d));
  });
}

kl_status kl_oplus_power(const kl_map* g, uint64_t d, kl_map** out) {
  return guard([&] {
    need(out, "out");
    *out = wrap(oplus_power(homeo_of(g), d));
  });
}

kl_status kl_block_sum(const kl_map* const* parts, size_t count, kl_map** out) {
  return guard([&] {
    need(out, "out");
    if (count == 0) throw Error(ErrorCode::InvalidArgument, "block sum of no parts");
    need(parts, "parts");
    std::vector<PLHomeo> hs;
    hs.reserve(count);
    for (size_t i = 0; i < count; ++i) hs.push_back(homeo_of(parts[i], "part"));
    *out = wrap(block_sum(hs));
  });
}

kl_status kl_semiconjugacy(const kl_map* g, uint64_t d, char** record, int* equal) {
  return guard([&] {
    auto r = verify_semiconjugacy(homeo_of(g), d);
    json j = {{"lhs", io::to_json(r.lhs)},
              {"rhs", io::to_json(r.rhs)},
              {"equal", r.equal},
              {"counterexample", r.counterexample ? json(r.counterexample->str()) : json(nullptr)}};
    if (record) *record = dup(j.dump());
    if (equal) *equal = r.equal ? 1 : 0;
  });
}

kl_status kl_straighten(const kl_map* f, const kl_map* g, kl_map** out) {
  return guard([&] {
    need(out, "out");
    *out = wrap(straighten(open_of(f, "f"), open_of(g, "g")));
  });
}

kl_status kl_signature(const kl_map* f, char** out) {
  return guard([&] {
    need(out, "out");
    *out = dup(signature(homeo_of(f)).str());
  });
}

kl_status kl_signature_reflect(const char* s, char** out) {
  return guard([&] {
    need(s, "signature");
    need(out, "out");
    *out = dup(signature_reflect(FixedSignature::parse(s)).str());
  });
}

kl_status kl_signature_oplus(const char* s, uint64_t d, char** out) {
  return guard([&] {
    need(s, "signature");
    need(out, "out");
    *out = dup(signature_oplus(FixedSignature::parse(s), d).str());
  });
}

kl_status kl_decide_conjugate(const kl_map* f, const kl_map* g, int* out) {
  return guard([&] {
    need(out, "out");
    *out = decide_conjugate(homeo_of(f, "f"), homeo_of(g, "g")) ? 1 : 0;
  });
}

kl_status kl_approx_conjugator(const kl_map* f, const kl_map* g, const char* eta, char** certificate) {
  return guard([&] {
    need(certificate, "certificate");
    auto c = approx_conjugator(homeo_of(f, "f"), homeo_of(g, "g"), rat(eta, "eta"));
    *certificate = dup(io::to_json(c).dump());
  });
}

kl_status kl_grid_block_conjugate(const kl_map* f, uint64_t d, const kl_map* h, const char* eta,
                                  char** result) {
  return guard([&] {
    need(result, "result");
    auto r = grid_block_conjugate(homeo_of(f, "f"), d, homeo_of(h, "h"), rat(eta, "eta"));
    *result = dup(io::to_json(r).dump());
  });
}

kl_status kl_snap_to_grid(const kl_map* h, uint64_t d, const kl_map* reference, const char* delta,
                          kl_map** out) {
  return guard([&] {
    need(out, "out");
    *out = wrap(snap_to_grid(homeo_of(h, "h"), d, homeo_of(reference, "reference"), rat(delta, "delta")));
  });
}

kl_status kl_pseudo_generic(size_t k, const char* signs, uint64_t seed, int fixed_intervals, kl_map** out) {
  return guard([&] {
    need(out, "out");
    PseudoGenericSpec spec;
    spec.k = k;
    if (signs && *signs) spec.signs = FixedSignature::parse(signs).signs;
    spec.seed = seed;
    spec.fixed_intervals = fixed_intervals != 0;
    *out = wrap(pseudo_generic(spec));
  });
}

kl_status kl_primes_create(const char* spec, kl_primes** out) {
  return guard([&] {
    need(spec, "spec");
    need(out, "out");
    *out = new kl_primes{PrimeSequence::parse(spec)};
  });
}

void kl_primes_free(kl_primes* p) { delete p; }

kl_status kl_primes_get(const kl_primes* p, size_t index, uint64_t* out) {
  return guard([&] {
    need(out, "out");
    *out = primes_of(p)[index];
  });
}

kl_status kl_extend_point(const char* x, size_t n, const kl_primes* p, char** point) {
  return guard([&] {
    need(point, "point");
    *point = dup(io::to_json(extend_point(rat(x, "x"), n, primes_of(p))).dump());
  });
}

kl_status kl_knaster_dist(const char* x, const char* y, const kl_primes* p, char** distance) {
  return guard([&] {
    need(distance, "distance");
    auto px = io::point_from_json(parse(x, "x"));
    auto py = io::point_from_json(parse(y, "y"));
    *distance = dup(io::to_json(knaster_dist(px, py, primes_of(p))).dump());
  });
}

kl_status kl_diagonal_lift(const char* diagonal, size_t m, const kl_primes* p, char** out) {
  return guard([&] {
    need(out, "out");
    auto f = io::diagonal_from_json(parse(diagonal, "diagonal"));
    *out = dup(io::to_json(lift(f, m, primes_of(p))).dump());
  });
}

kl_status kl_diagonal_eval(const char* diagonal, const char* point, const kl_primes* p, char** out) {
  return guard([&] {
    need(out, "out");
    auto f = io::diagonal_from_json(parse(diagonal, "diagonal"));
    auto x = io::point_from_json(parse(point, "point"));
    *out = dup(io::to_json(eval_diagonal(f, x, primes_of(p))).dump());
  });
}

kl_status kl_diag_dist(const char* f, const char* g, size_t n, const kl_primes* p, char** distance) {
  return guard([&] {
    need(distance, "distance");
    auto df = io::diagonal_from_json(parse(f, "f"));
    auto dg = io::diagonal_from_json(parse(g, "g"));
    *distance = dup(io::to_json(diag_dist(df, dg, n, primes_of(p))).dump());
  });
}

kl_status kl_degree_diagonal(const char* general, const kl_primes* p, char** out) {
  return guard([&] {
    need(out, "out");
    auto f = io::general_from_json(parse(general, "general"));
    *out = dup(degree_diagonal(f, primes_of(p)).str());
  });
}

kl_status kl_certify_mod_bound(const kl_map* g, const kl_map* h, size_t n, const char* epsilon,
                               const kl_primes* p, char** certificate, int* certified) {
  return guard([&] {
    auto c = certify_mod_bound(homeo_of(g, "g"), homeo_of(h, "h"), n, rat(epsilon, "epsilon"), primes_of(p));
    if (certificate) *certificate = dup(io::to_json(c).dump());
    if (certified) *certified = c.certified ? 1 : 0;
  });
}

kl_status kl_tent_witness(const kl_map* f, const kl_map* g, uint64_t d, const char* delta, int proof_trace,
                          char** witness) {
  return guard([&] {
    need(witness, "witness");
    auto w = tent_witness(homeo_of(f, "f"), homeo_of(g, "g"), d, rat(delta, "delta"),
                          proof_trace ? WitnessMode::ProofTrace : WitnessMode::Exhaustive);
    *witness = dup(io::to_json(w).dump());
  });
}

kl_status kl_separation_lower_bound(const char* diagonal, size_t m, const kl_map* h_window, const char* eta,
                                    const kl_primes* p, char** certificate, int* certified) {
  return guard([&] {
    auto f = io::diagonal_from_json(parse(diagonal, "diagonal"));
    auto c = separation_lower_bound(f, m, homeo_of(h_window, "h_window"), rat(eta, "eta"), primes_of(p));
    if (certificate) *certificate = dup(io::to_json(c).dump());
    if (certified) *certified = c.certified ? 1 : 0;
  });
}

kl_status kl_comod_lower_bound_check(const kl_map* p_prime, size_t n, const kl_map* g_phi, size_t j,
                                     const char* delta, const kl_primes* p, char** certificate,
                                     int* certified) {
  return guard([&] {
    auto c = comod_lower_bound_check(homeo_of(p_prime, "p_prime"), n, homeo_of(g_phi, "g_phi"), j,
                                     rat(delta, "delta"), primes_of(p));
    if (certificate) *certificate = dup(io::to_json(c).dump());
    if (certified) *certified = c.certified ? 1 : 0;
  });
}

kl_status kl_suite_names(char** json_array) {
  return guard([&] {
    need(json_array, "out");
    *json_array = dup(json(lab::suite_names()).dump());
  });
}

kl_status kl_run_suite(const char* config, char** report, char** table, int* all_passed) {
  return guard([&] {
    auto cfg = lab::ExperimentConfig::from_json(parse(config, "config"));
    auto r = lab::run_campaign(cfg);
    std::string rj = report ? r.to_json().dump(2) : std::string();
    std::string tb = table ? r.table() : std::string();
    char* rep = report ? dup(rj) : nullptr;
    try {
      if (table) *table = dup(tb);
    } catch (...) {
      std::free(rep);
      throw;
    }
    if (report) *report = rep;
    if (all_passed) *all_passed = r.all_passed() ? 1 : 0;
  });
}

}  // extern "C"
