/*
 * knaster_lab: C interface to the exact PL-map and Knaster continuum library.
 *
 * Conventions
 *   - Every function returns a kl_status; KL_OK is 0. On failure the message
 *     is available from kl_last_error() on the calling thread.
 *   - Rationals cross the boundary as "p/q" strings (an integer "p" is also
 *     accepted on input).
 *   - Strings returned through char** are heap allocated; release them with
 *     kl_string_free. Handles are released with their _free function.
 *   - Output parameters are written only on success.
 *
 * JSON forms
 *   map          {"breakpoints": [["0/1","0/1"], ..., ["1/1","1/1"]]}
 *   signature    "+-+"   (empty string for the identity)
 *   point        ["x0", "x1", ..., "xN"]
 *   diagonal     {"coord": n, "map": <map>}
 *   general      {"target": n, "source": j, "window": <map>}
 *   distance     {"lower": "p/q", "upper": "p/q", "N": n, "witness": <point>}
 */
#ifndef KNASTER_LAB_H
#define KNASTER_LAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define KL_API __attribute__((visibility("default")))
#else
#define KL_API
#endif

typedef enum kl_status {
  KL_OK = 0,
  KL_ERR_INVALID_ARGUMENT = 1,
  KL_ERR_DOMAIN = 2,
  KL_ERR_NOT_HOMEOMORPHISM = 3,
  KL_ERR_NOT_OPEN = 4,
  KL_ERR_DEGREE_MISMATCH = 5,
  KL_ERR_SIGNATURE_MISMATCH = 6,
  KL_ERR_PRECONDITION = 7,
  KL_ERR_NO_WITNESS = 8,
  KL_ERR_ITERATION_CAP = 9,
  KL_ERR_PARSE = 10,
  KL_ERR_VERIFICATION_FAILED = 11,
  KL_ERR_INTERNAL = 12
} kl_status;

/* Continuous PL self-map of [0,1]. Operations that need a homeomorphism or
   an open map check the invariant and fail with the matching status. */
typedef struct kl_map kl_map;
typedef struct kl_primes kl_primes;

KL_API const char* kl_version(void);
KL_API const char* kl_last_error(void);
KL_API const char* kl_status_name(kl_status status);
KL_API void kl_string_free(char* s);

/* exact core */
KL_API kl_status kl_map_from_json(const char* json, kl_map** out);
KL_API kl_status kl_map_to_json(const kl_map* f, char** out);
KL_API void kl_map_free(kl_map* f);
KL_API kl_status kl_map_identity(kl_map** out);
KL_API kl_status kl_map_eval(const kl_map* f, const char* x, char** out);
KL_API kl_status kl_map_compose(const kl_map* f, const kl_map* g, kl_map** out);
KL_API kl_status kl_map_invert(const kl_map* h, kl_map** out);
KL_API kl_status kl_map_sup_dist(const kl_map* f, const kl_map* g, char** value, char** at);
KL_API kl_status kl_map_degree(const kl_map* f, uint64_t* out);
KL_API kl_status kl_map_reflect(const kl_map* f, kl_map** out);
KL_API kl_status kl_map_equal(const kl_map* f, const kl_map* g, int* out);

/* tent algebra */
KL_API kl_status kl_tent(uint64_t d, kl_map** out);
KL_API kl_status kl_oplus_power(const kl_map* g, uint64_t d, kl_map** out);
KL_API kl_status kl_block_sum(const kl_map* const* parts, size_t count, kl_map** out);
/* record: {"lhs": map, "rhs": map, "equal": bool, "counterexample": "p/q"|null} */
KL_API kl_status kl_semiconjugacy(const kl_map* g, uint64_t d, char** record, int* equal);
KL_API kl_status kl_straighten(const kl_map* f, const kl_map* g, kl_map** out);

/* conjugacy */
KL_API kl_status kl_signature(const kl_map* f, char** out);
KL_API kl_status kl_signature_reflect(const char* signature, char** out);
KL_API kl_status kl_signature_oplus(const char* signature, uint64_t d, char** out);
KL_API kl_status kl_decide_conjugate(const kl_map* f, const kl_map* g, int* out);
/* certificate: {"f","g","conjugator","achieved","eta"} */
KL_API kl_status kl_approx_conjugator(const kl_map* f, const kl_map* g, const char* eta, char** certificate);
KL_API kl_status kl_grid_block_conjugate(const kl_map* f, uint64_t d, const kl_map* h, const char* eta,
                                         char** result);
KL_API kl_status kl_snap_to_grid(const kl_map* h, uint64_t d, const kl_map* reference, const char* delta,
                                 kl_map** out);
/* signs: "+-..." of length k, or NULL/"" for alternating from '+' */
KL_API kl_status kl_pseudo_generic(size_t k, const char* signs, uint64_t seed, int fixed_intervals,
                                   kl_map** out);

/* Knaster continuum */
/* spec: "all2", "diagonal" or a comma separated prime list repeated periodically */
KL_API kl_status kl_primes_create(const char* spec, kl_primes** out);
KL_API void kl_primes_free(kl_primes* p);
KL_API kl_status kl_primes_get(const kl_primes* p, size_t index, uint64_t* out);
KL_API kl_status kl_extend_point(const char* x, size_t n, const kl_primes* p, char** point);
KL_API kl_status kl_knaster_dist(const char* x, const char* y, const kl_primes* p, char** distance);
KL_API kl_status kl_diagonal_lift(const char* diagonal, size_t m, const kl_primes* p, char** out);
KL_API kl_status kl_diagonal_eval(const char* diagonal, const char* point, const kl_primes* p, char** out);
KL_API kl_status kl_diag_dist(const char* f, const char* g, size_t n, const kl_primes* p, char** distance);
KL_API kl_status kl_degree_diagonal(const char* general, const kl_primes* p, char** out);
KL_API kl_status kl_certify_mod_bound(const kl_map* g, const kl_map* h, size_t n, const char* epsilon,
                                      const kl_primes* p, char** certificate, int* certified);
/* witness: {"x","case","gap","tf","tg"} */
KL_API kl_status kl_tent_witness(const kl_map* f, const kl_map* g, uint64_t d, const char* delta,
                                 int proof_trace, char** witness);
KL_API kl_status kl_separation_lower_bound(const char* diagonal, size_t m, const kl_map* h_window,
                                           const char* eta, const kl_primes* p, char** certificate,
                                           int* certified);
KL_API kl_status kl_comod_lower_bound_check(const kl_map* p_prime, size_t n, const kl_map* g_phi, size_t j,
                                            const char* delta, const kl_primes* p, char** certificate,
                                            int* certified);

/* seeded verification campaigns */
KL_API kl_status kl_suite_names(char** json_array);
/* config: {"suite", "primes", "trials", "seed", "params", "output", "jobs",
   "replay_trial_seed"}; KNASTER_LAB_SEED overrides the seed. report is JSON
   (failed trials carry replay configs), table is a text summary; either may
   be NULL. */
KL_API kl_status kl_run_suite(const char* config, char** report, char** table, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif /* KNASTER_LAB_H */
