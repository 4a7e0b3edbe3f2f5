#ifndef TOROIDAL_H
#define TOROIDAL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define TOROIDAL_OK 0

#define TOROIDAL_NULL_POINTER -1

#define TOROIDAL_INVALID_UTF8 -2

#define TOROIDAL_PANIC -3

#define TOROIDAL_E_NON_POINTED_CONE 10

#define TOROIDAL_E_NOT_A_FACE 11

#define TOROIDAL_E_ELEMENT_NOT_IN_MONOID 12

#define TOROIDAL_E_DENOMINATOR_MISMATCH 13

#define TOROIDAL_E_NON_MONOMIAL_KUMMER_IDEAL 14

#define TOROIDAL_E_INVALID_POINT 15

#define TOROIDAL_E_NO_UNIFORM_TOROIDAL_SUBGROUP 16

#define TOROIDAL_E_NOT_PERMISSIBLE 17

#define TOROIDAL_E_NOT_STABILIZED 18

#define TOROIDAL_E_UNSUPPORTED_ACTION 19

#define TOROIDAL_E_INVALID_INPUT 20

#define TOROIDAL_E_TOO_LARGE 21

#define TOROIDAL_E_INVARIANT_VIOLATED 22

#define TOROIDAL_E_SCHEMA 30

#define TOROIDAL_E_DIMENSION_MISMATCH 31

#define TOROIDAL_E_MONOMIAL_NOT_IN_MONOID 32

/**
 * A parsed and validated chart.
 */
typedef struct ToroidalChartHandle ToroidalChartHandle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a chart document. On success `*out` receives a new handle.
 *
 * # Safety
 * `text` must be a valid C string and `out` a valid pointer.
 */
int32_t toroidal_chart_parse(const char *text, struct ToroidalChartHandle **out);

/**
 * Releases a chart handle. Null is ignored.
 *
 * # Safety
 * `chart` must come from [`toroidal_chart_parse`] and not be used afterwards.
 */
void toroidal_chart_free(struct ToroidalChartHandle *chart);

/**
 * Writes the chart document, normalized to minimal generators.
 *
 * # Safety
 * `chart` must be a live handle and `out` a valid pointer.
 */
int32_t toroidal_chart_print(const struct ToroidalChartHandle *chart, char **out);

/**
 * Rank of the chart monoid.
 *
 * # Safety
 * `chart` must be a live handle and `out` a valid pointer.
 */
int32_t toroidal_chart_rank(const struct ToroidalChartHandle *chart, size_t *out);

/**
 * Whether every stabilizer of the chart acts toroidally.
 *
 * # Safety
 * `chart` must be a live handle and `out` a valid pointer.
 */
int32_t toroidal_chart_is_destackified(const struct ToroidalChartHandle *chart, bool *out);

/**
 * Root ideal `I^[1/d]` of a monomial ideal in inline syntax; writes its
 * generators as a JSON array of exponent vectors.
 *
 * # Safety
 * Pointers must be valid; `ideal` a C string.
 */
int32_t toroidal_root_ideal(const struct ToroidalChartHandle *chart,
                            const char *ideal,
                            uint64_t d,
                            char **out);

/**
 * Runs the command line with `argc` arguments (without the program name).
 * `*out` receives standard output, `*exit_code` the exit status; standard
 * error goes to [`toroidal_last_error`].
 *
 * # Safety
 * `argv` must point to `argc` valid C strings; output pointers must be valid.
 */
int32_t toroidal_run(const char *const *argv, size_t argc, char **out, int32_t *exit_code);

/**
 * Message describing the last failure on this thread, or null. The pointer
 * stays valid until the next call on this thread; do not free it.
 */
const char *toroidal_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void toroidal_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TOROIDAL_H */
