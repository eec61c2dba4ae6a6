#ifndef PEXIDER_H
#define PEXIDER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Function of a solution tuple.
 */
typedef enum PkComponent {
  PK_COMPONENT_BIG_F = 0,
  PK_COMPONENT_F1 = 1,
  PK_COMPONENT_F2 = 2,
  PK_COMPONENT_G1 = 3,
  PK_COMPONENT_G2 = 4,
  PK_COMPONENT_BIG_G = 5,
} PkComponent;

/*
 Result of every fallible call.
 */
typedef enum PkStatus {
  PK_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  PK_STATUS_NULL_ARGUMENT = 1,
  /*
   A string argument was not valid UTF-8.
   */
  PK_STATUS_INVALID_UTF8 = 2,
  /*
   Malformed JSON, unknown fields or an invalid specification.
   */
  PK_STATUS_INVALID_INPUT = 3,
  /*
   Parameters violate the constraint identities of their family.
   */
  PK_STATUS_CONSTRAINT = 4,
  /*
   Argument outside the evaluation window or image.
   */
  PK_STATUS_DOMAIN = 5,
  /*
   Numerical failure, including nonmonotone or degenerate input.
   */
  PK_STATUS_NUMERICAL = 6,
  /*
   The library panicked; the handle arguments are left unchanged.
   */
  PK_STATUS_PANIC = 7,
} PkStatus;

typedef enum PkVerdict {
  PK_VERDICT_GLOBALLY_AFFINE = 0,
  PK_VERDICT_PARTIALLY_AFFINE = 1,
  PK_VERDICT_NOWHERE_AFFINE = 2,
} PkVerdict;

/*
 Opaque solution tuple `(F, f1, f2, g1, g2, G)`.
 */
typedef struct PkSolution PkSolution;

/*
 Absolute residual of the main equation over an `n × n` grid.
 */
typedef struct PkResidual {
  double max_abs;
  double mean_abs;
  double worst_x;
  double worst_y;
  size_t samples;
} PkResidual;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *pk_version(void);

/*
 Message of the last failed call on this thread, or null after a
 successful call. Valid until the next call on this thread.
 */
const char *pk_last_error_message(void);

/*
 The C¹ partially affine example on `]0, 4[`.

 # Safety
 `out` must be null or valid for writes.
 */
enum PkStatus pk_solution_paper_example(struct PkSolution **out);

/*
 Builds a solution from a run configuration in JSON, the same document
 accepted by `pexider-kit --config`; `family` must be set.

 # Safety
 `config_json` must be null or a NUL-terminated string; `out` must be
 null or valid for writes.
 */
enum PkStatus pk_solution_build(const char *config_json, struct PkSolution **out);

/*
 Loads a solution from JSON: either a bare tuple as written by
 `pk_solution_to_json` or a `pexider-kit build` artifact.

 # Safety
 As for [`pk_solution_build`].
 */
enum PkStatus pk_solution_from_json(const char *json, struct PkSolution **out);

/*
 Serializes the tuple to JSON; release the string with `pk_string_free`.

 # Safety
 `solution` must be null or a live handle; `out` must be null or valid
 for writes.
 */
enum PkStatus pk_solution_to_json(const struct PkSolution *solution, char **out);

/*
 Releases a handle; null is ignored.

 # Safety
 `solution` must be null or a handle not yet freed.
 */
void pk_solution_free(struct PkSolution *solution);

/*
 Releases a string returned by this library; null is ignored.

 # Safety
 `s` must be null or a string from this library not yet freed.
 */
void pk_string_free(char *s);

/*
 Open domain `]lo, hi[` of one component (`I` for all but `G`).

 # Safety
 `solution` must be null or a live handle; `lo` and `hi` must be null or
 valid for writes.
 */
enum PkStatus pk_solution_domain(const struct PkSolution *solution,
                                 enum PkComponent which,
                                 double *lo,
                                 double *hi);

/*
 Value of one component at `x`.

 # Safety
 As for [`pk_solution_domain`], with `out` valid for writes.
 */
enum PkStatus pk_solution_eval(const struct PkSolution *solution,
                               enum PkComponent which,
                               double x,
                               double *out);

/*
 Derivative of one component at `x`.

 # Safety
 As for [`pk_solution_eval`].
 */
enum PkStatus pk_solution_deriv(const struct PkSolution *solution,
                                enum PkComponent which,
                                double x,
                                double *out);

/*
 Residual of `F((x+y)/2) + f1(x) + f2(y) - G(g1(x) + g2(y))` over the
 `n × n` grid of `I` shrunk by `margin`.

 # Safety
 As for [`pk_solution_eval`].
 */
enum PkStatus pk_solution_residual(const struct PkSolution *solution,
                                   size_t n,
                                   double margin,
                                   struct PkResidual *out);

/*
 Classifies `F` as globally, partially or nowhere affine from `n` samples
 of `F'` with relative tolerance `tol`. The affine windows are written to
 `windows` as `[lo, hi]` pairs, at most `capacity` of them; `count`
 receives the total number found. `windows` may be null when `capacity`
 is 0.

 # Safety
 `solution` must be null or a live handle; `verdict` and `count` must be
 null or valid for writes; `windows` must be valid for `2 * capacity`
 writes when `capacity > 0`.
 */
enum PkStatus pk_solution_classify(const struct PkSolution *solution,
                                   double tol,
                                   size_t n,
                                   enum PkVerdict *verdict,
                                   double *windows,
                                   size_t capacity,
                                   size_t *count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PEXIDER_H */
