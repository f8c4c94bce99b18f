#ifndef SYMPL_H
#define SYMPL_H

#include <stdbool.h>
#include <stddef.h>

typedef enum SymplStatus {
  SYMPL_STATUS_OK = 0,
  SYMPL_STATUS_NULL_POINTER = 1,
  SYMPL_STATUS_INVALID_UTF8 = 2,
  /*
   Malformed input text.
   */
  SYMPL_STATUS_PARSE = 3,
  /*
   The library rejected the input; see the error name.
   */
  SYMPL_STATUS_DOMAIN = 4,
  /*
   Command-line style usage error from `sympl_cli_json`.
   */
  SYMPL_STATUS_USAGE = 5,
  SYMPL_STATUS_PANIC = 6,
} SymplStatus;

/*
 Opaque weight handle.
 */
typedef struct SymplWeight SymplWeight;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses a weight such as `"5,3;5,4"` (places separated by `;`).

 # Safety
 `text` must be a valid C string and `out` a valid pointer.
 */
enum SymplStatus sympl_weight_parse(const char *text, struct SymplWeight **out);

/*
 Releases a weight handle; null is ignored.

 # Safety
 `w` must come from `sympl_weight_parse` and not be used afterwards.
 */
void sympl_weight_free(struct SymplWeight *w);

/*
 Rank `n` of the weight.

 # Safety
 Pointers must be valid.
 */
enum SymplStatus sympl_weight_rank(const struct SymplWeight *w, size_t *out);

/*
 Number of places `d`.

 # Safety
 Pointers must be valid.
 */
enum SymplStatus sympl_weight_places(const struct SymplWeight *w, size_t *out);

/*
 Canonical text form of the weight.

 # Safety
 Pointers must be valid.
 */
enum SymplStatus sympl_weight_to_string(const struct SymplWeight *w, char **out);

/*
 # Safety
 Pointers must be valid.
 */
enum SymplStatus sympl_weight_is_k_dominant(const struct SymplWeight *w, bool *out);

/*
 Whether two weights share an infinitesimal character.

 # Safety
 Pointers must be valid.
 */
enum SymplStatus sympl_infchar_equal(const struct SymplWeight *a,
                                     const struct SymplWeight *b,
                                     bool *out);

/*
 First reduction point of a single-place normalized weight, as `"p"` or
 `"p/2"`.

 # Safety
 Pointers must be valid.
 */
enum SymplStatus sympl_reduction_point(const struct SymplWeight *w, char **out);

/*
 Level classification as JSON; `inner` is comma separated.

 # Safety
 Pointers must be valid.
 */
enum SymplStatus sympl_classify_levels_json(const char *inner, size_t n, size_t i, char **out);

/*
 Decomposition report for parabolic index `i` as JSON.

 # Safety
 Pointers must be valid.
 */
enum SymplStatus sympl_report_json(const struct SymplWeight *w, size_t i, char **out);

/*
 Gindikin–Karpelevich value with symbolic Satake parameters `b1..bm`, as
 JSON factor lists.

 # Safety
 `out` must be valid.
 */
enum SymplStatus sympl_gk_json(size_t i, size_t j, size_t m, char **out);

/*
 Runs any command-line command with `--json` and returns its output.
 `args` excludes the program name.

 # Safety
 `args` must point to `argc` valid C strings.
 */
enum SymplStatus sympl_cli_json(const char *const *args, size_t argc, char **out);

/*
 Releases a string returned by this library; null is ignored.

 # Safety
 `s` must come from this library and not be used afterwards.
 */
void sympl_string_free(char *s);

/*
 Message of the last failure on this thread, or null. Valid until the
 next call into the library on this thread.
 */
const char *sympl_last_error_message(void);

/*
 Library error name of the last failure (e.g. `"NotDominant"`), or null.
 */
const char *sympl_last_error_name(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYMPL_H */
