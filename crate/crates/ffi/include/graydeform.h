#ifndef GRAYDEFORM_H
#define GRAYDEFORM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. The first four agree with the command-line exit codes.
typedef enum GdStatus {
  GD_STATUS_OK = 0,
  // Validation failure, failed precondition or failed internal check.
  GD_STATUS_INVALID = 1,
  // Malformed JSON, unknown names or an invalid field.
  GD_STATUS_PARSE = 2,
  // A degree or enumeration cap was exceeded.
  GD_STATUS_RESOURCE_CAP = 3,
  // A required pointer argument was null.
  GD_STATUS_NULL_POINTER = 4,
  // A string argument was not valid UTF-8.
  GD_STATUS_UTF8 = 5,
  // A Rust panic was caught at the boundary.
  GD_STATUS_PANIC = 6,
} GdStatus;

// Opaque handle to a loaded 2-category or Gray semigroup.
typedef struct GdStructure GdStructure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static nul-terminated string.
const char *gd_version(void);

// Message of the last failure on this thread, or null. Valid until the
// next failing call on the same thread.
const char *gd_last_error(void);

// Parses a structure document. `field` is null (use the document's field),
// `"q"` or `"p=<prime>"`.
//
// # Safety
// `json` and (if non-null) `field` must be nul-terminated strings; `out`
// must point to writable storage for a handle pointer.
enum GdStatus gd_structure_load(const char *json, const char *field, struct GdStructure **out);

// Releases a handle; null is ignored.
//
// # Safety
// `h` must be null or a handle from [`gd_structure_load`] not yet freed.
void gd_structure_free(struct GdStructure *h);

// Whether the handle is a Gray semigroup (as opposed to a bare 2-category).
//
// # Safety
// `h` must be a live handle; `is_gray` must be writable.
enum GdStatus gd_structure_is_gray(const struct GdStructure *h, bool *is_gray);

// Checks all axioms; `valid` receives the verdict and `violations` the
// number of failed instances. Returns `Ok` whenever the check ran.
//
// # Safety
// `h` must be a live handle; `valid` and `violations` must be writable.
enum GdStatus gd_validate(const struct GdStructure *h, bool *valid, size_t *violations);

// Dimension of the degree-`degree` cohomology of the complex named
// `complex` (`unit`, `tens_ass`, `ass`, `tens`, `pent_restricted`,
// `pent_general`).
//
// # Safety
// `h` must be a live handle, `complex` a nul-terminated string and
// `betti` writable.
enum GdStatus gd_cohomology_dim(const struct GdStructure *h,
                                const char *complex,
                                uint32_t degree,
                                size_t *betti);

// Class representatives for `mode` (`unit`, `tens_ass`, `ass`, `tens`,
// `pent`) as a JSON array whose first element is `null` (the trivial class).
//
// # Safety
// `h` must be a live handle, `mode` a nul-terminated string and `json`
// writable; free the result with [`gd_string_free`].
enum GdStatus gd_classify_json(const struct GdStructure *h, const char *mode, char **json);

// Runs the exhaustive oracle for `mode` over the structure's prime field:
// `la_betti` receives the Betti number of the classifying complex,
// `brute_classes` the enumerated class count and `agree` whether
// `p^la_betti == brute_classes`.
//
// # Safety
// `h` must be a live handle, `mode` a nul-terminated string and the
// out-pointers writable.
enum GdStatus gd_oracle(const struct GdStructure *h,
                        const char *mode,
                        uint64_t enum_bound,
                        size_t *la_betti,
                        size_t *brute_classes,
                        bool *agree);

// Releases a string returned by this library; null is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void gd_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRAYDEFORM_H */
