#ifndef LICENTIA_H
#define LICENTIA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>

/**
 * Result code of every fallible call.
 */
typedef enum LicentiaStatus {
  LICENTIA_STATUS_OK = 0,
  LICENTIA_STATUS_NULL_ARGUMENT = 1,
  LICENTIA_STATUS_INVALID_UTF8 = 2,
  LICENTIA_STATUS_IO = 3,
  LICENTIA_STATUS_CORPUS = 4,
  LICENTIA_STATUS_SCAN = 5,
  LICENTIA_STATUS_JSON = 6,
  LICENTIA_STATUS_INTERNAL = 7,
} LicentiaStatus;

/**
 * Opaque result of analyzing one project.
 */
typedef struct LicentiaAnalysis LicentiaAnalysis;

/**
 * Opaque license corpus.
 */
typedef struct LicentiaCorpus LicentiaCorpus;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string. Do not free it.
 */
const char *licentia_version(void);

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *licentia_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void licentia_string_free(char *s);

/**
 * Loads the corpus bundled with the library.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum LicentiaStatus licentia_corpus_bundled(struct LicentiaCorpus **out);

/**
 * Loads a corpus from a `corpus.json` file; texts are read relative to it.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` valid for writes.
 */
enum LicentiaStatus licentia_corpus_load(const char *path, struct LicentiaCorpus **out);

/**
 * Number of licenses in a corpus, or 0 for null.
 *
 * # Safety
 * `corpus` must be null or a live corpus handle.
 */
size_t licentia_corpus_len(const struct LicentiaCorpus *corpus);

/**
 * # Safety
 * `corpus` must be null or a handle not yet freed.
 */
void licentia_corpus_free(struct LicentiaCorpus *corpus);

/**
 * Scans and analyzes the project at `root`. With `prefer_custom` set,
 * generated licenses are suggested before official ones.
 *
 * # Safety
 * `corpus` must be a live handle, `root` a NUL-terminated string and
 * `out` valid for writes.
 */
enum LicentiaStatus licentia_analyze(const struct LicentiaCorpus *corpus,
                                     const char *root,
                                     bool prefer_custom,
                                     struct LicentiaAnalysis **out);

/**
 * Number of incompatibility issues found, or 0 for null.
 *
 * # Safety
 * `analysis` must be null or a live handle.
 */
size_t licentia_analysis_issue_count(const struct LicentiaAnalysis *analysis);

/**
 * The JSON report of an analysis.
 *
 * # Safety
 * `analysis` must be a live handle and `out` valid for writes.
 */
enum LicentiaStatus licentia_analysis_report_json(const struct LicentiaAnalysis *analysis,
                                                  char **out);

/**
 * The human-readable summary printed by the command-line tool.
 *
 * # Safety
 * `analysis` must be a live handle and `out` valid for writes.
 */
enum LicentiaStatus licentia_analysis_render_text(const struct LicentiaAnalysis *analysis,
                                                  char **out);

/**
 * # Safety
 * `analysis` must be null or a handle not yet freed.
 */
void licentia_analysis_free(struct LicentiaAnalysis *analysis);

/**
 * Interprets free license text into a term matrix, returned as JSON.
 *
 * # Safety
 * `text` and `license_id` must be NUL-terminated strings and `out`
 * valid for writes.
 */
enum LicentiaStatus licentia_interpret_json(const char *text, const char *license_id, char **out);

/**
 * Compares two term matrices given as JSON and returns the conflicts
 * as a JSON array. An empty array means the child may sit under the parent.
 *
 * # Safety
 * Both matrices must be NUL-terminated strings and `out` valid for writes.
 */
enum LicentiaStatus licentia_check_pair_json(const char *parent_json,
                                             const char *child_json,
                                             char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LICENTIA_H */
