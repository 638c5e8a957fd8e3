#ifndef MWE_PARTITION_H
#define MWE_PARTITION_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Status codes returned by every fallible call.
typedef enum MwpStatus {
  MWP_STATUS_OK = 0,
  MWP_STATUS_NULL_POINTER = 1,
  MWP_STATUS_INVALID_UTF8 = 2,
  MWP_STATUS_INVALID_ARGUMENT = 3,
  MWP_STATUS_IO = 4,
  MWP_STATUS_PARSE = 5,
  MWP_STATUS_MISMATCH = 6,
  MWP_STATUS_OUT_OF_RANGE = 7,
  MWP_STATUS_PANIC = 8,
} MwpStatus;

// A trained segmenter.
typedef struct MwpModel MwpModel;

// Predicted MWEs for one sentence.
typedef struct MwpSpans MwpSpans;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. The pointer is
// valid until the next call on the same thread.
const char *mwp_last_error(void);

// Library version as a static NUL-terminated string.
const char *mwp_version(void);

// Loads a model bundle directory.
//
// # Safety
// `dir` must be a NUL-terminated string and `out` a valid pointer.
enum MwpStatus mwp_model_load(const char *dir, struct MwpModel **out);

// Trains a model from a corpus file. `format` is `"dimsum"` or `"parseme"`.
//
// # Safety
// String arguments must be NUL-terminated and `out` a valid pointer.
enum MwpStatus mwp_model_train_file(const char *corpus_path,
                                    const char *format,
                                    bool use_pos,
                                    struct MwpModel **out);

// Writes the model as a bundle directory.
//
// # Safety
// `model` must come from this library and `dir` be NUL-terminated.
enum MwpStatus mwp_model_save(const struct MwpModel *model, const char *dir);

// Sets the binding thresholds. Pass a negative `q_pos` for models without
// a POS channel.
//
// # Safety
// `model` must come from this library.
enum MwpStatus mwp_model_set_thresholds(struct MwpModel *model, double q_tok, double q_pos);

// True when the model has a POS channel and needs tags to segment.
//
// # Safety
// `model` must come from this library or be null.
bool mwp_model_uses_pos(const struct MwpModel *model);

// # Safety
// `model` must come from this library and not be used afterwards.
void mwp_model_free(struct MwpModel *model);

// Segments one tokenized sentence. Spacing between tokens is inferred from
// punctuation. `pos` may be null unless the model uses POS.
//
// # Safety
// `tokens` (and `pos` when non-null) must point to `n_tokens` NUL-terminated
// strings; `out` must be a valid pointer.
enum MwpStatus mwp_segment(const struct MwpModel *model,
                           const char *const *tokens,
                           const char *const *pos,
                           size_t n_tokens,
                           bool use_lfd,
                           struct MwpSpans **out);

// Number of spans, or 0 for null.
//
// # Safety
// `spans` must come from this library or be null.
size_t mwp_spans_count(const struct MwpSpans *spans);

// Borrows the 0-based token indices of span `i`. The array stays valid
// until the span list is freed.
//
// # Safety
// `spans` must come from this library; `indices` and `len` must be valid.
enum MwpStatus mwp_span_indices(const struct MwpSpans *spans,
                                size_t i,
                                const size_t **indices,
                                size_t *len);

// # Safety
// `spans` must come from this library and not be used afterwards.
void mwp_spans_free(struct MwpSpans *spans);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MWE_PARTITION_H */
