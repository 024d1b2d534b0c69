#ifndef TABLESCORE_H
#define TABLESCORE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum TsStatus {
  TS_STATUS_OK = 0,
  TS_STATUS_NULL_ARGUMENT = 1,
  TS_STATUS_INVALID_UTF8 = 2,
  TS_STATUS_INVALID_ARGUMENT = 3,
  TS_STATUS_MALFORMED_RESPONSE = 4,
  TS_STATUS_CORPUS_ERROR = 5,
  TS_STATUS_NOT_FOUND = 6,
  TS_STATUS_PANIC = 7,
} TsStatus;

// Opaque score report.
typedef struct TsScoreReport TsScoreReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or NULL. The pointer
// stays valid until the next failing call on the same thread.
const char *ts_last_error_message(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and must not be freed twice.
void ts_string_free(char *s);

// Scores `pred` against `gold`. `format` is one of `raw_text`, `latex`, `html`.
//
// # Safety
// String arguments must be NUL-terminated; `out` must be writable.
enum TsStatus ts_score_pair(const char *pred,
                            const char *gold,
                            const char *format,
                            struct TsScoreReport **out_report);

// Content score in [0, 1]; NaN for a NULL handle.
//
// # Safety
// `report` must be NULL or a live handle.
double ts_score_report_content(const struct TsScoreReport *report);

// Structure score in [0, 1]; NaN for a NULL handle.
//
// # Safety
// `report` must be NULL or a live handle.
double ts_score_report_structure(const struct TsScoreReport *report);

// Looks up a named structure component such as `row_count`.
//
// # Safety
// `report` must be a live handle; `name` NUL-terminated; `out` writable.
enum TsStatus ts_score_report_component(const struct TsScoreReport *report,
                                        const char *name,
                                        double *out_value);

// The full report as JSON, including diagnostics.
//
// # Safety
// `report` must be a live handle; `out_json` writable.
enum TsStatus ts_score_report_to_json(const struct TsScoreReport *report, char **out_json);

// Releases a report handle. NULL is ignored.
//
// # Safety
// `report` must come from [`ts_score_pair`] and must not be freed twice.
void ts_score_report_free(struct TsScoreReport *report);

// Mean of normalized Levenshtein and Ratcliff/Obershelp similarity.
//
// # Safety
// String arguments must be NUL-terminated; `out_value` writable.
enum TsStatus ts_string_similarity(const char *a, const char *b, double *out_value);

// Edit distance in Unicode scalar values.
//
// # Safety
// String arguments must be NUL-terminated; `out_value` writable.
enum TsStatus ts_levenshtein_distance(const char *a, const char *b, size_t *out_value);

// # Safety
// String arguments must be NUL-terminated; `out_prompt` writable.
enum TsStatus ts_build_gptscore_prompt(const char *table1, const char *table2, char **out_prompt);

// # Safety
// String arguments must be NUL-terminated; `out_prompt` writable.
enum TsStatus ts_build_description_prompt(const char *format,
                                          const char *payload,
                                          char **out_prompt);

// Extracts the two similarity values from a model reply.
//
// # Safety
// `response` must be NUL-terminated; both out-pointers writable.
enum TsStatus ts_parse_gptscore_response(const char *response,
                                         double *out_content,
                                         double *out_structure);

// Evaluates a prediction file against a corpus file and returns the
// aggregate report in `report_format` (`json`, `csv` or `md`). Model-based
// scoring is not available through this entry point.
//
// # Safety
// String arguments must be NUL-terminated; `out_report` writable.
enum TsStatus ts_evaluate_files(const char *corpus_path,
                                const char *predictions_path,
                                const char *report_format,
                                size_t jobs,
                                char **out_report);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TABLESCORE_H */
