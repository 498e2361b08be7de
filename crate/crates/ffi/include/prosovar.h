#ifndef PROSOVAR_H
#define PROSOVAR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible function.
 */
typedef enum PvStatus {
  PvStatus_Ok = 0,
  PvStatus_NullArgument = 1,
  PvStatus_InvalidUtf8 = 2,
  PvStatus_InvalidInput = 3,
  PvStatus_EmptyDataset = 4,
  PvStatus_MisalignedCounts = 5,
  PvStatus_DegenerateSample = 6,
  PvStatus_Overflow = 7,
  PvStatus_IndexOutOfRange = 8,
} PvStatus;

/**
 * Coding variant for [`pv_code_line`].
 */
typedef enum PvVariant {
  PvVariant_A = 0,
  PvVariant_B = 1,
} PvVariant;

/**
 * Weighted objective form: the published count-scaled squares, or the
 * conventional frequency-weighted squares.
 */
typedef enum PvWeighting {
  PvWeighting_DcSquared = 0,
  PvWeighting_Conventional = 1,
} PvWeighting;

/**
 * Tail rule for the permutation tests.
 */
typedef enum PvTail {
  PvTail_TwoTailedReciprocal = 0,
  PvTail_OneSidedGreater = 1,
} PvTail;

typedef struct PvDistanceMatrix PvDistanceMatrix;

typedef struct PvFrechetSummary PvFrechetSummary;

typedef struct PvPermTest PvPermTest;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message for this thread, or an empty string. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *pv_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *pv_version(void);

/**
 * Levenshtein distance between two UTF-8 strings.
 *
 * # Safety
 * `a` and `b` must be NUL-terminated strings; `out_distance` must be a
 * valid pointer.
 */
enum PvStatus pv_edit_distance(const char *a, const char *b, uint32_t *out_distance);

/**
 * Codes one poetic line as a position string ("0"/"1" characters) using
 * the built-in lexicons. The result must be freed with [`pv_string_free`].
 *
 * # Safety
 * `line` must be a NUL-terminated string; `out_code` must be valid.
 */
enum PvStatus pv_code_line(const char *line, enum PvVariant variant, char **out_code);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must have been returned by a `pv_` function and not freed before;
 * NULL is allowed and ignored.
 */
void pv_string_free(char *s);

/**
 * Computes the pairwise edit distance matrix of `n_items` strings.
 * The handle must be freed with [`pv_distance_matrix_free`].
 *
 * # Safety
 * `items` must point to `n_items` NUL-terminated strings; `out_matrix`
 * must be valid.
 */
enum PvStatus pv_distance_matrix_compute(const char *const *items,
                                         uintptr_t n_items,
                                         struct PvDistanceMatrix **out_matrix);

/**
 * Number of rows (= columns) of the matrix.
 *
 * # Safety
 * `matrix` must be a live handle; `out_n` must be valid.
 */
enum PvStatus pv_distance_matrix_size(const struct PvDistanceMatrix *matrix, uintptr_t *out_n);

/**
 * Reads entry (i, j) of the matrix.
 *
 * # Safety
 * `matrix` must be a live handle; `out_distance` must be valid.
 */
enum PvStatus pv_distance_matrix_entry(const struct PvDistanceMatrix *matrix,
                                       uintptr_t i,
                                       uintptr_t j,
                                       uint32_t *out_distance);

/**
 * # Safety
 * `matrix` must have come from this library and not been freed before;
 * NULL is allowed and ignored.
 */
void pv_distance_matrix_free(struct PvDistanceMatrix *matrix);

/**
 * Generalized mean/variance over the matrix rows; power 1 is the
 * generalized median. Free the handle with [`pv_frechet_free`].
 *
 * # Safety
 * `matrix` must be a live handle; `out_summary` must be valid.
 */
enum PvStatus pv_frechet_summary(const struct PvDistanceMatrix *matrix,
                                 uint32_t power,
                                 struct PvFrechetSummary **out_summary);

/**
 * Count-weighted generalized mean/variance: `counts` align with the
 * matrix rows and `n_lines` (the total line count) is the variance
 * denominator. Free the handle with [`pv_frechet_free`].
 *
 * # Safety
 * `matrix` must be a live handle; `counts` must point to `n_counts`
 * values; `out_summary` must be valid.
 */
enum PvStatus pv_weighted_frechet(const struct PvDistanceMatrix *matrix,
                                  const uint64_t *counts,
                                  uintptr_t n_counts,
                                  uint64_t n_lines,
                                  enum PvWeighting weighting,
                                  struct PvFrechetSummary **out_summary);

/**
 * Number of rows attaining the minimal objective (means are not unique).
 *
 * # Safety
 * `summary` must be a live handle; `out_count` must be valid.
 */
enum PvStatus pv_frechet_mean_count(const struct PvFrechetSummary *summary, uintptr_t *out_count);

/**
 * The `k`-th mean row index, in ascending order.
 *
 * # Safety
 * `summary` must be a live handle; `out_index` must be valid.
 */
enum PvStatus pv_frechet_mean_index(const struct PvFrechetSummary *summary,
                                    uintptr_t k,
                                    uintptr_t *out_index);

/**
 * Exact variance numerator (the minimal objective). Fails with
 * `Overflow` if it does not fit in 64 bits.
 *
 * # Safety
 * `summary` must be a live handle; `out_numerator` must be valid.
 */
enum PvStatus pv_frechet_variance_numerator(const struct PvFrechetSummary *summary,
                                            uint64_t *out_numerator);

/**
 * Exact variance denominator (the sample line count).
 *
 * # Safety
 * `summary` must be a live handle; `out_denominator` must be valid.
 */
enum PvStatus pv_frechet_variance_denominator(const struct PvFrechetSummary *summary,
                                              uint64_t *out_denominator);

/**
 * Variance as a double (numerator / denominator).
 *
 * # Safety
 * `summary` must be a live handle; `out_value` must be valid.
 */
enum PvStatus pv_frechet_variance_value(const struct PvFrechetSummary *summary, double *out_value);

/**
 * # Safety
 * `summary` must have come from this library and not been freed before;
 * NULL is allowed and ignored.
 */
void pv_frechet_free(struct PvFrechetSummary *summary);

/**
 * Ratio of two generalized variances (numerator over denominator),
 * computed from the exact fractions.
 *
 * # Safety
 * Both summaries must be live handles; `out_ratio` must be valid.
 */
enum PvStatus pv_variance_ratio(const struct PvFrechetSummary *numerator,
                                const struct PvFrechetSummary *denominator,
                                double *out_ratio);

/**
 * Permutation test over two arrays of coded lines; the observed statistic
 * is variance(b)/variance(a). Free the handle with [`pv_permtest_free`].
 *
 * # Safety
 * `lines_a`/`lines_b` must point to `n_a`/`n_b` NUL-terminated strings;
 * `out_test` must be valid.
 */
enum PvStatus pv_line_permutation_test(const char *const *lines_a,
                                       uintptr_t n_a,
                                       const char *const *lines_b,
                                       uintptr_t n_b,
                                       uintptr_t n_resamples,
                                       uint64_t seed,
                                       uint32_t power,
                                       enum PvTail tail,
                                       struct PvPermTest **out_test);

/**
 * Count-weighted permutation test. `patterns` is the combined meter list;
 * `counts_a`/`counts_b` align with it. The observed statistic is
 * variance(b)/variance(a). Free the handle with [`pv_permtest_free`].
 *
 * # Safety
 * `patterns` must point to `n_patterns` NUL-terminated strings; the count
 * arrays must each hold `n_patterns` values; `out_test` must be valid.
 */
enum PvStatus pv_counts_permutation_test(const char *const *patterns,
                                         uintptr_t n_patterns,
                                         const uint64_t *counts_a,
                                         const uint64_t *counts_b,
                                         uintptr_t n_resamples,
                                         uint64_t seed,
                                         enum PvWeighting weighting,
                                         enum PvTail tail,
                                         struct PvPermTest **out_test);

/**
 * Observed variance ratio (positive infinity if the denominator variance
 * was zero).
 *
 * # Safety
 * `test` must be a live handle; `out_observed` must be valid.
 */
enum PvStatus pv_permtest_observed(const struct PvPermTest *test, double *out_observed);

/**
 * Raw empirical p-value (qualifying count / resamples).
 *
 * # Safety
 * `test` must be a live handle; `out_p` must be valid.
 */
enum PvStatus pv_permtest_p_value(const struct PvPermTest *test, double *out_p);

/**
 * Number of qualifying resamples (the p-value numerator).
 *
 * # Safety
 * `test` must be a live handle; `out_count` must be valid.
 */
enum PvStatus pv_permtest_n_qualifying(const struct PvPermTest *test, uintptr_t *out_count);

/**
 * Number of resamples drawn.
 *
 * # Safety
 * `test` must be a live handle; `out_count` must be valid.
 */
enum PvStatus pv_permtest_n_resamples(const struct PvPermTest *test, uintptr_t *out_count);

/**
 * The `index`-th resample ratio (positive infinity for a degenerate
 * resample with zero denominator variance).
 *
 * # Safety
 * `test` must be a live handle; `out_ratio` must be valid.
 */
enum PvStatus pv_permtest_ratio(const struct PvPermTest *test, uintptr_t index, double *out_ratio);

/**
 * # Safety
 * `test` must have come from this library and not been freed before;
 * NULL is allowed and ignored.
 */
void pv_permtest_free(struct PvPermTest *test);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PROSOVAR_H */
