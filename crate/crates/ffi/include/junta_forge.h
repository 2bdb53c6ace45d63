#ifndef JUNTA_FORGE_H
#define JUNTA_FORGE_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum JfStatus {
  JF_STATUS_OK = 0,
  JF_STATUS_INVALID_ARGUMENT = 1,
  JF_STATUS_PARSE = 2,
  JF_STATUS_RESOURCE_LIMIT = 3,
  JF_STATUS_HYPOTHESIS = 4,
  JF_STATUS_BUDGET_EXCEEDED = 5,
  JF_STATUS_IO = 6,
  JF_STATUS_NULL_POINTER = 7,
  JF_STATUS_UTF8 = 8,
  JF_STATUS_PANIC = 9,
} JfStatus;

// Opaque set family.
typedef struct JfFamily JfFamily;

// Opaque junta (center plus defining family).
typedef struct JfJunta JfJunta;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. Valid until the
// next failing call on the same thread; do not free.
const char *jf_last_error_message(void);

// Static version string; do not free.
const char *jf_version(void);

// # Safety
// `s` must be NULL or a string returned by this library, freed once.
void jf_string_free(char *s);

// Parses `.fam` text or family JSON.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum JfStatus jf_family_parse(const char *text, struct JfFamily **out);

// # Safety
// `f` must be NULL or a handle from this library, freed once.
void jf_family_free(struct JfFamily *f);

// Member count; 0 for NULL.
//
// # Safety
// `f` must be NULL or a live handle.
size_t jf_family_len(const struct JfFamily *f);

// Universe size `n`; 0 for NULL.
//
// # Safety
// `f` must be NULL or a live handle.
size_t jf_family_universe(const struct JfFamily *f);

// Canonical `.fam` text; free with [`jf_string_free`].
//
// # Safety
// `f` must be a live handle; `out` must be writable.
enum JfStatus jf_family_serialize(const struct JfFamily *f, char **out);

// Family JSON; free with [`jf_string_free`].
//
// # Safety
// `f` must be a live handle; `out` must be writable.
enum JfStatus jf_family_to_json(const struct JfFamily *f, char **out);

// # Safety
// `f` must be a live handle; `out` must be writable.
enum JfStatus jf_is_shifted(const struct JfFamily *f, bool *out);

// New handle holding the shifted family.
//
// # Safety
// `f` must be a live handle; `out` must be writable.
enum JfStatus jf_make_shifted(const struct JfFamily *f, struct JfFamily **out);

// New handle holding `S_(u<-v)(f)`, 1-based elements.
//
// # Safety
// `f` must be a live handle; `out` must be writable.
enum JfStatus jf_shift(const struct JfFamily *f, size_t u, size_t v, struct JfFamily **out);

// # Safety
// `a`, `b` must be live handles; `holds` must be writable.
enum JfStatus jf_cross_t(const struct JfFamily *a, const struct JfFamily *b, size_t t, bool *holds);

// `budget_seconds < 0` means unlimited.
//
// # Safety
// `list` must point to `count` live handles; `holds` must be writable.
enum JfStatus jf_cross_dependent(const struct JfFamily *const *list,
                                 size_t count,
                                 double budget_seconds,
                                 bool *holds);

// Weights and `q` are rational strings such as `"3/2"`. `levels` may be
// NULL (all of `[n]`); otherwise it holds `level_count` entries.
//
// # Safety
// `list` and `weights` must each hold `count` valid entries; `holds` must be writable.
enum JfStatus jf_check_hitting(const struct JfFamily *const *list,
                               const char *const *weights,
                               size_t count,
                               const char *q,
                               const size_t *levels,
                               size_t level_count,
                               double budget_seconds,
                               bool *holds);

// Pair extraction with hypothesis checks. Writes two junta handles and the
// residual sizes. `passed` receives whether every post-hoc check passed.
//
// # Safety
// `a`, `b` must be live handles; every out pointer must be writable.
enum JfStatus jf_extract_pair(const struct JfFamily *a,
                              const struct JfFamily *b,
                              size_t t,
                              size_t r,
                              struct JfJunta **junta_a,
                              struct JfJunta **junta_b,
                              size_t *residual_a,
                              size_t *residual_b,
                              bool *passed);

// JuntaSpec JSON; free with [`jf_string_free`].
//
// # Safety
// `j` must be a live handle; `out` must be writable.
enum JfStatus jf_junta_to_json(const struct JfJunta *j, char **out);

// # Safety
// `j` must be NULL or a handle from this library, freed once.
void jf_junta_free(struct JfJunta *j);

// Exact `C(n, k)` as a decimal string (0 outside `0 <= k <= n`); free with [`jf_string_free`].
//
// # Safety
// `out` must be writable.
enum JfStatus jf_binom(int64_t n, int64_t k, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JUNTA_FORGE_H */
