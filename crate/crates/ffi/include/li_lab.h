#ifndef LI_LAB_H
#define LI_LAB_H

/* Generated by cbindgen. Do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Status codes.
 */
typedef enum LlStatus {
  LL_STATUS_OK = 0,
  LL_STATUS_NULL_POINTER = 1,
  LL_STATUS_INVALID_UTF8 = 2,
  LL_STATUS_INVALID_ARGUMENT = 3,
  LL_STATUS_DOMAIN = 4,
  LL_STATUS_PARSE = 5,
  LL_STATUS_COVERAGE = 6,
  LL_STATUS_IO = 7,
  LL_STATUS_NETWORK = 8,
  LL_STATUS_PANIC = 9,
} LlStatus;

/**
 * Opaque L-function descriptor.
 */
typedef struct LlDescriptor LlDescriptor;

/**
 * Opaque Laurent data.
 */
typedef struct LlLaurent LlLaurent;

/**
 * Opaque zero table.
 */
typedef struct LlZeroTable LlZeroTable;

/**
 * Result of one coefficient evaluation.
 */
typedef struct LlEvaluation {
  uint32_t n;
  double value;
  double tail_bound;
  /**
   * NaN when the route has no truncation height.
   */
  double truncation_height;
} LlEvaluation;

/**
 * Result of the oscillator integral `I₃(n)`.
 */
typedef struct LlIntegral {
  double value;
  double step_part;
  double smooth_part;
  double tail_bound;
  double quadrature_error;
  double truncation_height;
} LlIntegral;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *ll_last_error_message(void);

/**
 * The Riemann zeta descriptor.
 */
struct LlDescriptor *ll_descriptor_zeta(void);

/**
 * Parse a descriptor from a JSON document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum LlStatus ll_descriptor_from_json(const char *json, struct LlDescriptor **out);

/**
 * # Safety
 * `d` must come from this library or be null.
 */
void ll_descriptor_free(struct LlDescriptor *d);

/**
 * Parse a zero table from text (one ordinate per line, optional multiplicity).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum LlStatus ll_zero_table_parse(const char *text, struct LlZeroTable **out);

/**
 * Load a zero table from a file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum LlStatus ll_zero_table_load(const char *path, struct LlZeroTable **out);

/**
 * Number of ordinates, 0 for null.
 *
 * # Safety
 * `t` must come from this library or be null.
 */
uintptr_t ll_zero_table_len(const struct LlZeroTable *t);

/**
 * Coverage height, NaN for null.
 *
 * # Safety
 * `t` must come from this library or be null.
 */
double ll_zero_table_coverage(const struct LlZeroTable *t);

/**
 * # Safety
 * `t` must come from this library or be null.
 */
void ll_zero_table_free(struct LlZeroTable *t);

/**
 * Bundled Laurent data of zeta at s = 1.
 */
struct LlLaurent *ll_laurent_zeta(void);

/**
 * Laurent data from `len` interleaved (re, im) pairs in `coefficients`.
 *
 * # Safety
 * `coefficients` must point to `2 * len` doubles; `out` must be writable.
 */
enum LlStatus ll_laurent_new(uint32_t pole_order,
                             const double *coefficients,
                             uintptr_t len,
                             struct LlLaurent **out);

/**
 * # Safety
 * `l` must come from this library or be null.
 */
void ll_laurent_free(struct LlLaurent *l);

/**
 * `λ_F(n)` as a sum over the zeros in the table.
 *
 * # Safety
 * Handles must come from this library; `out` must be writable.
 */
enum LlStatus ll_li_zero_sum(const struct LlDescriptor *d,
                             const struct LlZeroTable *t,
                             uint32_t n,
                             struct LlEvaluation *out);

/**
 * `λ_F(n)` from the Laurent coefficients and the gamma factors.
 *
 * # Safety
 * Handles must come from this library; `out` must be writable.
 */
enum LlStatus ll_li_arithmetic(const struct LlDescriptor *d,
                               const struct LlLaurent *l,
                               uint32_t n,
                               struct LlEvaluation *out);

/**
 * `λ_F(n)` through the integral decomposition.
 *
 * # Safety
 * Handles must come from this library; `out` must be writable.
 */
enum LlStatus ll_li_decomposition(const struct LlDescriptor *d,
                                  const struct LlZeroTable *t,
                                  uint32_t n,
                                  struct LlEvaluation *out);

/**
 * `I₂(n)`.
 *
 * # Safety
 * `d` must come from this library; `out` must be writable.
 */
enum LlStatus ll_i2(const struct LlDescriptor *d, uint32_t n, double *out);

/**
 * `I₃(n)` with `|S_F| <= s_cap` above the table; `s_cap <= 0` selects the default.
 *
 * # Safety
 * Handles must come from this library; `out` must be writable.
 */
enum LlStatus ll_i3(const struct LlDescriptor *d,
                    const struct LlZeroTable *t,
                    uint32_t n,
                    double s_cap,
                    struct LlIntegral *out);

/**
 * `G_n(x) = 2 sin²(n arctan(1/(2x)))`.
 */
double ll_g_oscillator(uint32_t n, double x);

/**
 * `T_n(x)`.
 */
double ll_cheb_t(uint32_t n, double x);

/**
 * `U_n(x)`.
 */
double ll_cheb_u(uint32_t n, double x);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LI_LAB_H */
