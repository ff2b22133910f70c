#ifndef PIERCED_H
#define PIERCED_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PcStatus {
  PC_STATUS_OK = 0,
  PC_STATUS_NULL_POINTER = 1,
  PC_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed input, out-of-range labels, or a code violating conventions.
   */
  PC_STATUS_INVALID_INPUT = 3,
  PC_STATUS_NOT_PIERCED = 4,
  PC_STATUS_DIMENSION_TOO_SMALL = 5,
  /**
   * Geometric construction failed.
   */
  PC_STATUS_GEOMETRY = 6,
  PC_STATUS_OUT_OF_RANGE = 7,
  PC_STATUS_INTERNAL = 8,
} PcStatus;

typedef enum PcVerdict {
  PC_VERDICT_PIERCED = 0,
  PC_VERDICT_NOT_DEGREE_TWO = 1,
  PC_VERDICT_NOT_CHORDAL = 2,
} PcVerdict;

/**
 * Opaque code handle.
 */
typedef struct PcCode PcCode;

/**
 * Opaque realization handle, with its witness registry.
 */
typedef struct PcRealization PcRealization;

/**
 * Summary of recognizing a code.
 */
typedef struct PcAnalysis {
  enum PcVerdict verdict;
  /**
   * Minimal k; meaningful only when pierced.
   */
  uint32_t k;
  bool splittable;
  /**
   * Minimal dimension of a well-formed ball realization; 0 when not pierced.
   */
  uint32_t min_dim;
} PcAnalysis;

/**
 * Outcome of the four verification checks.
 */
typedef struct PcVerifyReport {
  bool ok;
  bool well_formed;
  bool witnesses;
  bool monte_carlo;
  bool pairwise;
  size_t violations;
  double coverage;
} PcVerifyReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Valid until the next
 * call into the library from the same thread. Never null.
 */
const char *pc_last_error_message(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void pc_string_free(char *s);

/**
 * Parses a code in the text (`n=...` header) or JSON format and applies the
 * standing conventions (unused and duplicate neurons are removed).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum PcStatus pc_code_parse(const char *text, struct PcCode **out);

/**
 * A random inductively pierced code on `n` neurons with steps of rank at
 * most `k`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PcStatus pc_code_random_pierced(size_t n, size_t k, uint64_t seed, struct PcCode **out);

/**
 * # Safety
 * `code` must come from this library and not have been freed. Null is ignored.
 */
void pc_code_free(struct PcCode *code);

/**
 * Number of neurons, or 0 for null.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t pc_code_neurons(const struct PcCode *code);

/**
 * Number of codewords, or 0 for null.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t pc_code_len(const struct PcCode *code);

/**
 * The code in the text format. Free with `pc_string_free`.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
char *pc_code_to_text(const struct PcCode *code);

/**
 * Recognition verdict, minimal k, splittability and minimal dimension.
 *
 * # Safety
 * `code` must be a live handle; `out` must be writable.
 */
enum PcStatus pc_code_analyze(const struct PcCode *code, struct PcAnalysis *out);

/**
 * Piercing order as JSON: a list of `{neuron, sigma, tau, rank}` with the
 * first removed neuron first and 1-based labels. Free with `pc_string_free`.
 *
 * # Safety
 * `code` must be a live handle; `out` must be writable.
 */
enum PcStatus pc_code_piercing_order_json(const struct PcCode *code, char **out);

/**
 * Builds a well-formed realization by open balls. `dim = 0` selects the
 * minimal dimension.
 *
 * # Safety
 * `code` must be a live handle; `out` must be writable.
 */
enum PcStatus pc_realize(const struct PcCode *code,
                         size_t dim,
                         uint64_t seed,
                         struct PcRealization **out);

/**
 * # Safety
 * `r` must come from this library and not have been freed. Null is ignored.
 */
void pc_realization_free(struct PcRealization *r);

/**
 * Ambient dimension, or 0 for null.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
size_t pc_realization_dim(const struct PcRealization *r);

/**
 * Number of balls, or 0 for null.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
size_t pc_realization_len(const struct PcRealization *r);

/**
 * Copies ball `index` (0-based neuron) into `center` (room for `dim`
 * values) and `radius`.
 *
 * # Safety
 * `r` must be a live handle; `center` must hold `dim` doubles; `radius`
 * must be writable.
 */
enum PcStatus pc_realization_ball(const struct PcRealization *r,
                                  size_t index,
                                  double *center,
                                  double *radius);

/**
 * The realization document with witnesses. Free with `pc_string_free`.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
char *pc_realization_to_json(const struct PcRealization *r);

/**
 * Runs the well-formedness, witness, pairwise-relation and Monte Carlo
 * checks of `r` against `code`.
 *
 * # Safety
 * `r` and `code` must be live handles; `out` must be writable.
 */
enum PcStatus pc_verify(const struct PcRealization *r,
                        const struct PcCode *code,
                        size_t samples,
                        uint64_t seed,
                        struct PcVerifyReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PIERCED_H */
