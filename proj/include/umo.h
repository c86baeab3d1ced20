#ifndef UMO_H
#define UMO_H

/* C interface to the ultrametric orthogonality library.
 *
 * Every function returns an error code from the UMO_ERR_* list (0 on
 * success) unless documented otherwise; umo_last_error() then holds a
 * message for the calling thread. Strings handed out through char** are
 * heap-allocated and released with umo_string_free(). Handles are opaque
 * and released with their matching _free function. Handles are safe to
 * share across threads for reads; the functions themselves hold no global
 * state beyond the interned field tables.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
    UMO_OK = 0,
    UMO_ERR_INVALID_ARGUMENT = 1,
    UMO_ERR_PARSE = 2,
    UMO_ERR_PRECISION = 3,
    UMO_ERR_DOMAIN = 4,
    UMO_ERR_BUDGET = 5,
    UMO_ERR_CAP_EXCEEDED = 6,
    UMO_ERR_FIELD_MISMATCH = 7,
    UMO_ERR_IO = 8,
    UMO_ERR_INTERNAL = 100
};

/* Stable name of an error code ("invalid-argument", ...). */
const char* umo_errc_name(int code);

/* Message of the last failing call on this thread; empty when none. */
const char* umo_last_error(void);

void umo_string_free(char* s);

const char* umo_version(void);

/* ------------------------------------------------------------------ */
/* fields                                                              */
/* ------------------------------------------------------------------ */

typedef struct umo_field umo_field;

enum { UMO_BACKEND_LAURENT = 0, UMO_BACKEND_PADIC = 1 };

/* Laurent series over F_{p^m} in descending powers of x, |x| = q. */
int umo_field_make_laurent(long long p, int m, int precision, umo_field** out);
/* p-adic numbers with residue field F_p. */
int umo_field_make_padic(long long p, int precision, umo_field** out);
void umo_field_free(umo_field* f);

int umo_field_backend(const umo_field* f); /* UMO_BACKEND_* */
long long umo_field_q(const umo_field* f);
int umo_field_precision(const umo_field* f);
/* Multi-line summary: backend, q, residue modulus, uniformizer, precision. */
int umo_field_describe(const umo_field* f, char** out);

/* One scalar operation on canonical element literals. Binary ops
 * (add, sub, mul, div) read a and b; unary ops (neg, inv, nu, abs,
 * gamma) read a alone; pow and res read a and an integer b. nu prints
 * "inf" on zero, abs prints a q-power, gamma and res print residue
 * field elements, everything else prints a canonical element literal. */
int umo_scalar_eval(const umo_field* f, const char* op, const char* a, const char* b, char** out);

/* ------------------------------------------------------------------ */
/* orthogonality of vector tuples                                      */
/* ------------------------------------------------------------------ */

/* Vector literals are comma-separated element literals in parentheses,
 * e.g. "(1,1+x^-1)". All vectors of a call must share one length. */

int umo_ortho_pair(const umo_field* f, const char* u, const char* v, int* out_orthogonal);

/* Exact wedge norm as a q-power string, plus the orthogonality verdict. */
int umo_ortho_wedge(const umo_field* f, const char* const* vecs, int count, char** out_norm,
                    int* out_orthogonal);

int umo_ortho_set(const umo_field* f, const char* const* vecs, int count, int* out_orthogonal);

/* Searches coefficient tuples with digit depth `depth` for a violation of
 * the orthogonality equality. Sets *out_found and, when found, a printed
 * coefficient tuple. Absence of a find is not a proof. */
int umo_ortho_falsify(const umo_field* f, const char* const* vecs, int count, int depth,
                      int* out_found, char** out_tuple);

/* ------------------------------------------------------------------ */
/* extremal quantities                                                 */
/* ------------------------------------------------------------------ */

/* Solves one query. quantity is one of delta, omega, ind, ind-pro,
 * theta, gamma; s is read only for omega. threads <= 1 keeps the solve
 * single-threaded. cache_path may be NULL; otherwise the call reads the
 * append-only cache and appends on a miss. Outputs may be NULL when the
 * caller does not want them; *out_witness is the serialized witness when
 * want_witness is nonzero, "none" otherwise. */
int umo_extremal_solve(const char* quantity, long long q, int n, int s, int k, int l, int threads,
                       int want_witness, const char* cache_path, long long* out_value,
                       char** out_method, char** out_witness, char** out_hash,
                       int* out_from_cache);

int umo_gaussian_binomial(int n, int s, long long q, long long* out);

/* ------------------------------------------------------------------ */
/* verification harness                                                */
/* ------------------------------------------------------------------ */

/* Newline-joined registry ids in their fixed order. */
int umo_verify_ids(char** out);
/* One-line statement of a check. */
int umo_verify_summary(const char* id, char** out);

/* Runs every check under the named profile. profiles_path NULL uses the
 * built-in profiles (tiny, default, extended); otherwise the key=value
 * file is consulted first. threads > 0 overrides the profile's thread
 * count. out_lines receives one machine-readable line per check
 * ("check\t<id>\t<status>\t<ms>\t<cases>\t<detail>"), out_table the
 * aligned human report; *out_exit is 0 all-pass, 1 any-fail, 2 skips
 * only. */
int umo_verify_run(const char* profile, const char* profiles_path, int threads, char** out_lines,
                   char** out_table, int* out_exit);

/* Runs a single check by id, same line format. */
int umo_verify_run_one(const char* id, const char* profile, const char* profiles_path,
                       char** out_line);

#ifdef __cplusplus
}
#endif

#endif /* UMO_H */
