#ifndef LAMPWALK_H
#define LAMPWALK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum LwStatus {
  LW_STATUS_OK = 0,
  LW_STATUS_NULL_POINTER = 1,
  LW_STATUS_INVALID_UTF8 = 2,
  LW_STATUS_PARSE_ERROR = 3,
  LW_STATUS_KIND_MISMATCH = 4,
  LW_STATUS_BUDGET_EXCEEDED = 5,
  LW_STATUS_UNSUPPORTED = 6,
  LW_STATUS_RUNTIME_ERROR = 7,
  LW_STATUS_PANIC = 8,
} LwStatus;

/**
 * Opaque element handle.
 */
typedef struct LwElement LwElement;

/**
 * Opaque group handle.
 */
typedef struct LwGroup LwGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *lw_version(void);

/**
 * The last error message on this thread, or null; free with lw_string_free.
 */
char *lw_last_error_message(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must have been returned by a lampwalk function and not freed before.
 */
void lw_string_free(char *s);

/**
 * Create a group from its registry name (z, z2, cn:<n>, f2, c2wrz, zwrz,
 * c2wrcn:<n>, zwrz2, iterated:<k>, lcnwrz:<m>, lcnwrcn:<m>:<n>).
 *
 * # Safety
 * `name` must be a valid NUL-terminated string; `out` must be writable.
 */
enum LwStatus lw_group_new(const char *name, struct LwGroup **out);

/**
 * # Safety
 * `g` must come from lw_group_new and not be freed twice.
 */
void lw_group_free(struct LwGroup *g);

/**
 * Registry-style name of the group; free with lw_string_free.
 *
 * # Safety
 * `g` must be a live group handle.
 */
char *lw_group_name(const struct LwGroup *g);

/**
 * Parse an element in the textual syntax of the group.
 *
 * # Safety
 * `g` must be live, `text` NUL-terminated, `out` writable.
 */
enum LwStatus lw_element_parse(const struct LwGroup *g, const char *text, struct LwElement **out);

/**
 * # Safety
 * `g` must be live and `out` writable.
 */
enum LwStatus lw_element_identity(const struct LwGroup *g, struct LwElement **out);

/**
 * Canonical textual form; free with lw_string_free.
 *
 * # Safety
 * `e` must be a live element handle.
 */
char *lw_element_print(const struct LwElement *e);

/**
 * # Safety
 * `e` must come from this library and not be freed twice.
 */
void lw_element_free(struct LwElement *e);

/**
 * 1 if the canonical forms are equal, 0 otherwise.
 *
 * # Safety
 * Both handles must be live.
 */
int32_t lw_element_equal(const struct LwElement *a, const struct LwElement *b);

/**
 * Group product a*b in canonical form.
 *
 * # Safety
 * All handles live, `out` writable.
 */
enum LwStatus lw_multiply(const struct LwGroup *g,
                          const struct LwElement *a,
                          const struct LwElement *b,
                          struct LwElement **out);

/**
 * # Safety
 * All handles live, `out` writable.
 */
enum LwStatus lw_inverse(const struct LwGroup *g,
                         const struct LwElement *a,
                         struct LwElement **out);

/**
 * Word distance by breadth-first search, visiting at most `budget` states.
 *
 * # Safety
 * All handles live, `out` writable.
 */
enum LwStatus lw_distance(const struct LwGroup *g,
                          const struct LwElement *a,
                          const struct LwElement *b,
                          uint64_t budget,
                          uint64_t *out);

/**
 * Exact wreath distance for shapes Z and C_n.
 *
 * # Safety
 * All handles live, `out` writable.
 */
enum LwStatus lw_wreath_distance_exact(const struct LwGroup *g,
                                       const struct LwElement *a,
                                       const struct LwElement *b,
                                       uint64_t *out);

/**
 * Wreath compression-exponent composition min{a,b} / min{b, abp/(ap+bp-1)}.
 *
 * # Safety
 * `out` must be writable.
 */
enum LwStatus lw_compose_alpha(double a, double b, double p, double *out);

/**
 * Fitted speed exponent of the simple random walk (log-log fit over the
 * default power-of-two checkpoints at least 16).
 *
 * # Safety
 * `g` live, `out` writable.
 */
enum LwStatus lw_walk_speed(const struct LwGroup *g,
                            uint64_t t_max,
                            uint64_t trials,
                            uint64_t seed,
                            double *out);

/**
 * l_p distance between the images of two C_2 wr C_n elements under a cycle
 * embedding: `which` is 1 (first l_1), 2 (second l_1) or 3 (l_2 family
 * with parameter s).
 *
 * # Safety
 * All handles live, `out` writable.
 */
enum LwStatus lw_cycle_embedding_distance(const struct LwGroup *g,
                                          uint32_t which,
                                          double s,
                                          const struct LwElement *a,
                                          const struct LwElement *b,
                                          double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LAMPWALK_H */
