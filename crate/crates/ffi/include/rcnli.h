#ifndef RCNLI_H
#define RCNLI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RcnliRule {
  RCNLI_RULE_CLOZE = 0,
  RCNLI_RULE_WHICH_TRUE = 1,
  RCNLI_RULE_WH = 2,
  RCNLI_RULE_FALLBACK = 3,
} RcnliRule;

typedef enum RcnliStatus {
  RCNLI_STATUS_OK = 0,
  RCNLI_STATUS_NULL_ARGUMENT = 1,
  RCNLI_STATUS_INVALID_UTF8 = 2,
  RCNLI_STATUS_PARSE_ERROR = 3,
  RCNLI_STATUS_NOT_FOUND = 4,
  RCNLI_STATUS_PANIC = 5,
} RcnliStatus;

/**
 * One converted hypothesis with its rule and trace.
 */
typedef struct RcnliConversion RcnliConversion;

/**
 * Parsed CoNLL-U sentences keyed by `sent_id`.
 */
typedef struct RcnliParseSet RcnliParseSet;

/**
 * Keyword question types; several may be set at once.
 */
typedef struct RcnliFlags {
  bool main_idea;
  bool negation;
  bool dialogue;
  bool math;
  bool deductive;
} RcnliFlags;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next `rcnli_*` call on the same thread.
 */
const char *rcnli_last_error(void);

/**
 * Library version; static storage.
 */
const char *rcnli_version(void);

/**
 * Frees a string returned through an `out` parameter. Null is a no-op.
 *
 * # Safety
 * `s` is null or came from this library and has not been freed.
 */
void rcnli_string_free(char *s);

/**
 * Parses CoNLL-U text into a new parse set.
 *
 * # Safety
 * `conllu` is a NUL-terminated string; `out` is a valid pointer.
 */
enum RcnliStatus rcnli_parses_from_conllu(const char *conllu, struct RcnliParseSet **out);

/**
 * Number of sentences in the set; 0 for null.
 *
 * # Safety
 * `set` is null or a live handle.
 */
size_t rcnli_parses_len(const struct RcnliParseSet *set);

/**
 * # Safety
 * `set` is null or a live handle; it is invalid afterwards.
 */
void rcnli_parses_free(struct RcnliParseSet *set);

/**
 * Validates CoNLL-U text. On success `*out_errors` is null; with
 * structural problems it holds one message per line and the status is
 * `RCNLI_STATUS_PARSE_ERROR`. `out_sentences` may be null.
 *
 * # Safety
 * `conllu` is a NUL-terminated string; `out_errors` is a valid pointer;
 * `out_sentences` is null or valid.
 */
enum RcnliStatus rcnli_conllu_check(const char *conllu, size_t *out_sentences, char **out_errors);

/**
 * Converts a question and answer option into a hypothesis.
 *
 * `parses`, `question_id` and `answer_id` may be null. When `parses` is
 * given, the ids name sentences in it; a named id that is absent fails
 * with `RCNLI_STATUS_NOT_FOUND`.
 *
 * # Safety
 * String arguments are null or NUL-terminated; `parses` is null or a live
 * handle; `out` is a valid pointer.
 */
enum RcnliStatus rcnli_convert(const char *question,
                               const char *answer,
                               const struct RcnliParseSet *parses,
                               const char *question_id,
                               const char *answer_id,
                               struct RcnliConversion **out);

/**
 * Borrowed hypothesis text; null for a null handle.
 *
 * # Safety
 * `conv` is null or a live handle.
 */
const char *rcnli_conversion_hypothesis(const struct RcnliConversion *conv);

/**
 * # Safety
 * `conv` is null or a live handle.
 */
enum RcnliRule rcnli_conversion_rule(const struct RcnliConversion *conv);

/**
 * # Safety
 * `conv` is null or a live handle.
 */
size_t rcnli_conversion_trace_len(const struct RcnliConversion *conv);

/**
 * Borrowed trace entry `i`; null when out of range.
 *
 * # Safety
 * `conv` is null or a live handle.
 */
const char *rcnli_conversion_trace_at(const struct RcnliConversion *conv, size_t i);

/**
 * # Safety
 * `conv` is null or a live handle; it is invalid afterwards.
 */
void rcnli_conversion_free(struct RcnliConversion *conv);

/**
 * Keyword question types for `question`, using `passage` for the
 * dialogue test. `passage` may be null.
 *
 * # Safety
 * `question` is NUL-terminated; `passage` is null or NUL-terminated;
 * `out` is a valid pointer.
 */
enum RcnliStatus rcnli_categorize(const char *question,
                                  const char *passage,
                                  struct RcnliFlags *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RCNLI_H */
