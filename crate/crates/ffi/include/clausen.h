#ifndef CLAUSEN_H
#define CLAUSEN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define CLAUSEN_OK 0

/**
 * a required pointer argument was null
 */
#define CLAUSEN_ERR_NULL -1

#define CLAUSEN_ERR_ARGUMENT -2

#define CLAUSEN_ERR_DOMAIN -3

/**
 * quadrature, series or ODE did not converge
 */
#define CLAUSEN_ERR_NUMERIC -4

#define CLAUSEN_ERR_VERIFICATION -5

#define CLAUSEN_ERR_PANIC -6

/**
 * Opaque verification report.
 */
typedef struct ClausenReport ClausenReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *clausen_version(void);

/**
 * Message of the last error on this thread; empty after a success. The
 * pointer stays valid until the next call on the same thread.
 */
const char *clausen_last_error(void);

/**
 * `2F1(a, b; c; z)`.
 *
 * # Safety
 * `out_re` and `out_im` must be valid for writes.
 */
int32_t clausen_hyp2f1(double a,
                       double b,
                       double c,
                       double z_re,
                       double z_im,
                       double *out_re,
                       double *out_im);

/**
 * Appell `F2(α; β1, β2; γ1, γ2; z1, z2)`.
 *
 * # Safety
 * `out_re` and `out_im` must be valid for writes.
 */
int32_t clausen_appell_f2(double alpha,
                          double beta1,
                          double beta2,
                          double gamma1,
                          double gamma2,
                          double z1_re,
                          double z1_im,
                          double z2_re,
                          double z2_im,
                          double *out_re,
                          double *out_im);

/**
 * Closed-form period over cycle `A` (`cycle = 0`) or `B` (`cycle = 1`).
 *
 * # Safety
 * `out_re` and `out_im` must be valid for writes.
 */
int32_t clausen_period(uint32_t r,
                       uint32_t p,
                       uint32_t q,
                       int32_t cycle,
                       uint32_t k,
                       double lambda_re,
                       double lambda_im,
                       double *out_re,
                       double *out_im);

/**
 * One check of the multivariate Clausen identity at real moduli.
 *
 * # Safety
 * `out` must be valid for writes; on success it receives a handle to be
 * released with `clausen_report_free`.
 */
int32_t clausen_verify_identity(double beta1,
                                double beta2,
                                double lambda1,
                                double lambda2,
                                struct ClausenReport **out);

/**
 * Runs a named suite on its default grid.
 *
 * # Safety
 * `suite` must be a NUL-terminated string and `out` valid for writes.
 */
int32_t clausen_verify_suite(const char *suite,
                             uint64_t seed,
                             uint32_t parallelism,
                             struct ClausenReport **out);

/**
 * Total and passed case counts of a report.
 *
 * # Safety
 * `report` must come from this library; `total` and `passed` valid for
 * writes.
 */
int32_t clausen_report_counts(const struct ClausenReport *report,
                              uint64_t *total,
                              uint64_t *passed);

/**
 * The report as JSON. The string is owned by the report.
 *
 * # Safety
 * `report` must come from this library.
 */
const char *clausen_report_json(const struct ClausenReport *report);

/**
 * Releases a report. Null is ignored.
 *
 * # Safety
 * `report` must come from this library and not be used afterwards.
 */
void clausen_report_free(struct ClausenReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLAUSEN_H */
