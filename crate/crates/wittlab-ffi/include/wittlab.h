#ifndef WITTLAB_H
#define WITTLAB_H

/* Generated by cbindgen from the wittlab-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Opaque handle to a one-power-series over the integers.
typedef struct WittlabSeries WittlabSeries;

// Opaque handle to an integer Witt vector on the nest {1..N}.
typedef struct WittlabWittVec WittlabWittVec;

// Message of the most recent error on this thread, or NULL. The pointer is
// valid until the next failing call on the same thread.
const char *wittlab_last_error(void);

// Free a string returned by this library.
//
// # Safety
// `s` must be a pointer previously returned by a wittlab function and not
// yet freed; NULL is allowed.
void wittlab_string_free(char *s);

// Text of the big Witt polynomial w_n.
char *wittlab_witt_poly_big(uint64_t n);

// Text of the p-adic Witt polynomial w_n.
char *wittlab_witt_poly_padic(uint64_t p, uint32_t n);

// JSON of a universal structure-polynomial family. `kind` is one of
// add, mul, neg, unit, zero, frobeniusN, nmultN, ppowerN; `flavor` is
// "big" (nest {1..bound}) or "padic" (length `bound`, prime `p`).
//
// # Safety
// `kind` and `flavor` must be NUL-terminated strings.
char *wittlab_struct_poly_json(const char *kind, const char *flavor, uint64_t p, uint64_t bound);

// Dold realizability test on the first `len` entries: 1 = realizable over
// Z, 0 = not, negative = error.
//
// # Safety
// `values` must point to `len` readable i64 entries.
int wittlab_dold_test(const int64_t *values, size_t len);

// Necklace number M(alpha; n) as a decimal string.
char *wittlab_necklace_number(int64_t alpha, uint64_t n);

// Teichmueller lift of a mod p in Z/p^k, as a decimal string.
char *wittlab_teichmuller_lift(int64_t a, uint64_t p, uint32_t k);

// Parse a series over Z from its coefficient list a_1..a_D.
//
// # Safety
// `coeffs` must point to `len` readable i64 entries.
WittlabSeries *wittlab_series_new(const int64_t *coeffs, size_t len);

// # Safety
// `s` must come from a series-returning wittlab call; NULL is allowed.
void wittlab_series_free(WittlabSeries *s);

// Formatted text "1 + a1*t + ..." of the series.
//
// # Safety
// `s` must be a live series handle.
char *wittlab_series_format(const WittlabSeries *s);

// JSON {"ring": ..., "order": D, "coeffs": [...]} of the series.
//
// # Safety
// `s` must be a live series handle.
char *wittlab_series_to_json(const WittlabSeries *s);

// Group law (series product): a +_Lambda b at the joint order.
//
// # Safety
// `a` and `b` must be live series handles.
WittlabSeries *wittlab_series_add(const WittlabSeries *a, const WittlabSeries *b);

// Witt multiplication a *_W b at the joint order.
//
// # Safety
// `a` and `b` must be live series handles.
WittlabSeries *wittlab_series_witt_product(const WittlabSeries *a, const WittlabSeries *b);

// Frobenius f_n of the series (output order floor(D/n)).
//
// # Safety
// `s` must be a live series handle.
WittlabSeries *wittlab_series_frobenius(const WittlabSeries *s, uint64_t n);

// Witt coordinates of the series as JSON.
//
// # Safety
// `s` must be a live series handle.
char *wittlab_series_to_witt_json(const WittlabSeries *s);

// Necklace coordinates as JSON {"coords": [...], "integral": bool}.
//
// # Safety
// `s` must be a live series handle.
char *wittlab_series_to_necklace_json(const WittlabSeries *s);

// Build an integer Witt vector on {1..len} from its coordinates.
//
// # Safety
// `coords` must point to `len` readable i64 entries.
WittlabWittVec *wittlab_wittvec_new(const int64_t *coords, size_t len);

// # Safety
// `w` must come from a wittvec-returning wittlab call; NULL is allowed.
void wittlab_wittvec_free(WittlabWittVec *w);

// Witt-ring operation on integer vectors: op is one of "add", "mul", "sub".
//
// # Safety
// `a` and `b` must be live Witt vector handles.
WittlabWittVec *wittlab_wittvec_arith(const char *op,
                                      const WittlabWittVec *a,
                                      const WittlabWittVec *b);

// Ghost components as a JSON list of decimal strings.
//
// # Safety
// `w` must be a live Witt vector handle.
char *wittlab_wittvec_ghost_json(const WittlabWittVec *w);

// JSON of the vector: {"ring": ..., "nest": [...], "coords": {...}}.
//
// # Safety
// `w` must be a live Witt vector handle.
char *wittlab_wittvec_to_json(const WittlabWittVec *w);

// Run a named verification suite. Returns 0 when every check passes,
// 1 on a failed check, 2 on an unknown suite name.
//
// # Safety
// `name` must be a NUL-terminated string.
int wittlab_verify_suite(const char *name);

// One "PASS/FAIL: label" line per check of a named suite.
//
// # Safety
// `name` must be a NUL-terminated string.
char *wittlab_verify_suite_report(const char *name);

#endif  /* WITTLAB_H */
