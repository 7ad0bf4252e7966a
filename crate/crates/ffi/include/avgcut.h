/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef AVGCUT_H
#define AVGCUT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define AVGCUT_MAXIMIZE 0

#define AVGCUT_MINIMIZE 1

typedef enum AvgcutStatus {
  AVGCUT_STATUS_OK = 0,
  AVGCUT_STATUS_NULL_POINTER = 1,
  AVGCUT_STATUS_INVALID_UTF8 = 2,
  AVGCUT_STATUS_PARSE_ERROR = 3,
  AVGCUT_STATUS_INVALID_ARGUMENT = 4,
  AVGCUT_STATUS_TOO_MANY_CUTS = 5,
  AVGCUT_STATUS_OVERFLOW = 6,
  AVGCUT_STATUS_BUFFER_TOO_SMALL = 7,
  AVGCUT_STATUS_PANIC = 8,
} AvgcutStatus;

/**
 * An optimal cut together with its exact value.
 */
typedef struct AvgcutCut AvgcutCut;

/**
 * A validated rooted tree.
 */
typedef struct AvgcutTree AvgcutTree;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a `parent child weight` edge list.
 *
 * # Safety
 * `input` must be a NUL-terminated string and `out` a valid pointer.
 */
enum AvgcutStatus avgcut_tree_from_edgelist(const char *input, struct AvgcutTree **out);

/**
 * Parses a Newick string. Every non-root node needs a branch length.
 *
 * # Safety
 * `input` must be a NUL-terminated string and `out` a valid pointer.
 */
enum AvgcutStatus avgcut_tree_from_newick(const char *input, struct AvgcutTree **out);

/**
 * # Safety
 * `tree` must come from this library and not be used afterwards. Null is a no-op.
 */
void avgcut_tree_free(struct AvgcutTree *tree);

/**
 * # Safety
 * `tree` must be a live handle and `out` a valid pointer.
 */
enum AvgcutStatus avgcut_tree_node_count(const struct AvgcutTree *tree, size_t *out);

/**
 * # Safety
 * `tree` must be a live handle and `out` a valid pointer.
 */
enum AvgcutStatus avgcut_tree_leaf_count(const struct AvgcutTree *tree, size_t *out);

/**
 * Label of `node`, to be released with [`avgcut_string_free`].
 *
 * # Safety
 * `tree` must be a live handle and `out` a valid pointer.
 */
enum AvgcutStatus avgcut_tree_label(const struct AvgcutTree *tree, size_t node, char **out);

/**
 * Parent of `node`, that is the tail of the edge into it. Fails for the root.
 *
 * # Safety
 * `tree` must be a live handle and `out` a valid pointer.
 */
enum AvgcutStatus avgcut_tree_parent(const struct AvgcutTree *tree, size_t node, size_t *out);

/**
 * Number of cuts. Fails with `Overflow` when it does not fit in 64 bits.
 *
 * # Safety
 * `tree` must be a live handle and `out` a valid pointer.
 */
enum AvgcutStatus avgcut_count_cuts(const struct AvgcutTree *tree, uint64_t *out);

/**
 * Optimal cut by contraction.
 *
 * # Safety
 * `tree` must be a live handle and `out` a valid pointer.
 */
enum AvgcutStatus avgcut_optimal_cut(const struct AvgcutTree *tree,
                                     int objective_code,
                                     struct AvgcutCut **out);

/**
 * Optimal cut by enumerating every cut, refused above `limit` cuts.
 *
 * # Safety
 * `tree` must be a live handle and `out` a valid pointer.
 */
enum AvgcutStatus avgcut_brute_force(const struct AvgcutTree *tree,
                                     int objective_code,
                                     uint64_t limit,
                                     struct AvgcutCut **out);

/**
 * # Safety
 * `cut` must come from this library and not be used afterwards. Null is a no-op.
 */
void avgcut_cut_free(struct AvgcutCut *cut);

/**
 * # Safety
 * `cut` must be a live handle and `out` a valid pointer.
 */
enum AvgcutStatus avgcut_cut_size(const struct AvgcutCut *cut, size_t *out);

/**
 * Copies the cut edges (child node indices, ascending) into `buf`.
 * `written` receives the cut size; if `capacity` is too small nothing is
 * copied and `BufferTooSmall` is returned.
 *
 * # Safety
 * `cut` must be a live handle, `buf` valid for `capacity` writes (or null
 * when `capacity` is 0) and `written` a valid pointer.
 */
enum AvgcutStatus avgcut_cut_edges(const struct AvgcutCut *cut,
                                   size_t *buf,
                                   size_t capacity,
                                   size_t *written);

/**
 * Exact average as `p` or `p/q`, released with [`avgcut_string_free`].
 *
 * # Safety
 * `cut` must be a live handle and `out` a valid pointer.
 */
enum AvgcutStatus avgcut_cut_average(const struct AvgcutCut *cut, char **out);

/**
 * Exact total weight as `p` or `p/q`, released with [`avgcut_string_free`].
 *
 * # Safety
 * `cut` must be a live handle and `out` a valid pointer.
 */
enum AvgcutStatus avgcut_cut_total(const struct AvgcutCut *cut, char **out);

/**
 * Average rounded to the nearest double.
 *
 * # Safety
 * `cut` must be a live handle and `out` a valid pointer.
 */
enum AvgcutStatus avgcut_cut_average_f64(const struct AvgcutCut *cut, double *out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. Null is a no-op.
 */
void avgcut_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *avgcut_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AVGCUT_H */
