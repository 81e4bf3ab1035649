#ifndef SSG_H
#define SSG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Verdict values written by `ssg_graph_semisymmetry`.
 */
#define SSG_NO 0

#define SSG_YES 1

#define SSG_UNDECIDED -1

typedef enum SsgMode {
  SSG_MODE_FULL = 0,
  SSG_MODE_CERTIFICATE = 1,
} SsgMode;

typedef enum SsgStatus {
  SSG_STATUS_OK = 0,
  SSG_STATUS_NULL_ARGUMENT = 1,
  SSG_STATUS_INVALID_UTF8 = 2,
  SSG_STATUS_PARSE = 3,
  SSG_STATUS_UNKNOWN_FAMILY = 4,
  SSG_STATUS_BAD_PARAMETER = 5,
  SSG_STATUS_BOUND_EXCEEDED = 6,
  SSG_STATUS_FAILED = 7,
  SSG_STATUS_PANIC = 8,
} SsgStatus;

/**
 * A bipartite graph, plus the group it was built from when it came from a family.
 */
typedef struct SsgGraph SsgGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or an empty string. Valid until the
 * next call on the same thread; do not free.
 */
const char *ssg_last_error(void);

/**
 * Builds a family graph from a token such as `gamma9` or `sigma1:5`.
 *
 * # Safety
 * `token` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SsgStatus ssg_family_build(const char *token, struct SsgGraph **out);

/**
 * Parses a graph in the text format written by `ssg_graph_to_text`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SsgStatus ssg_graph_from_text(const char *text, struct SsgGraph **out);

/**
 * # Safety
 * `graph` must come from this library and not be used afterwards. Null is ignored.
 */
void ssg_graph_free(struct SsgGraph *graph);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. Null is ignored.
 */
void ssg_string_free(char *s);

/**
 * Part sizes and edge count.
 *
 * # Safety
 * `graph` must be a live handle and the out-pointers valid.
 */
enum SsgStatus ssg_graph_shape(const struct SsgGraph *graph,
                               uintptr_t *n_w,
                               uintptr_t *n_u,
                               uintptr_t *edges);

/**
 * # Safety
 * `graph` must be a live handle and `out` valid. Free the result with `ssg_string_free`.
 */
enum SsgStatus ssg_graph_to_text(const struct SsgGraph *graph, char **out);

/**
 * Automorphism group order as a decimal string.
 *
 * # Safety
 * `graph` must be a live handle and `out` valid. Free the result with `ssg_string_free`.
 */
enum SsgStatus ssg_graph_aut_order(const struct SsgGraph *graph, char **out);

/**
 * Writes `SSG_YES`, `SSG_NO` or `SSG_UNDECIDED`. Certificate mode uses the family group
 * when the handle came from `ssg_family_build`.
 *
 * # Safety
 * `graph` must be a live handle and `verdict` valid.
 */
enum SsgStatus ssg_graph_semisymmetry(const struct SsgGraph *graph,
                                      enum SsgMode mode,
                                      int32_t *verdict);

/**
 * Writes 1 when the graphs are isomorphic, else 0.
 *
 * # Safety
 * Both handles must be live and `out` valid.
 */
enum SsgStatus ssg_graph_is_isomorphic(const struct SsgGraph *a,
                                       const struct SsgGraph *b,
                                       int32_t *out);

/**
 * Expands every U-vertex into `p` twins. The result has no attached group.
 *
 * # Safety
 * `graph` must be a live handle and `out` valid.
 */
enum SsgStatus ssg_graph_expand(const struct SsgGraph *graph, uintptr_t p, struct SsgGraph **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SSG_H */
