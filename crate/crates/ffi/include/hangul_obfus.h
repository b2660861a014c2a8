#ifndef HANGUL_OBFUS_H
#define HANGUL_OBFUS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Difficulty: the number of rules applied to each side.
 */
typedef enum HoLevel {
  HO_LEVEL_EASY = 2,
  HO_LEVEL_NORMAL = 3,
  HO_LEVEL_HARD = 4,
} HoLevel;

typedef enum HoStatus {
  HO_STATUS_OK = 0,
  HO_STATUS_NULL_POINTER = 1,
  HO_STATUS_INVALID_UTF8 = 2,
  HO_STATUS_INVALID_ARGUMENT = 3,
  HO_STATUS_NO_ELIGIBLE_TARGET = 4,
  HO_STATUS_UNKNOWN_RULE = 5,
  HO_STATUS_INCOMPLETE = 6,
  HO_STATUS_NOT_HANGUL_SYLLABLE = 7,
  HO_STATUS_EMPTY_REFERENCE = 8,
  HO_STATUS_CONFIG = 9,
  HO_STATUS_IO = 10,
  HO_STATUS_BACKEND_UNAVAILABLE = 11,
  HO_STATUS_PANIC = 98,
  HO_STATUS_OTHER = 99,
} HoStatus;

/**
 * Opaque engine: the rule tables, rates and seed.
 */
typedef struct HoEngine HoEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *ho_last_error_message(void);

/**
 * Creates an engine with the built-in tables and default rates.
 *
 * # Safety
 * `out` must be a valid pointer to write the handle to.
 */
enum HoStatus ho_engine_new(uint64_t seed, struct HoEngine **out);

/**
 * Creates an engine from TOML configuration text (same keys as the CLI's
 * `--config` file). The seed comes from the configuration.
 *
 * # Safety
 * `toml` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HoStatus ho_engine_new_from_config(const char *toml, struct HoEngine **out);

/**
 * # Safety
 * `engine` must come from `ho_engine_new*` and not be used afterwards. Null is ignored.
 */
void ho_engine_free(struct HoEngine *engine);

/**
 * Applies rule `rule` (1-17) at its configured rate. `stream` selects an
 * independent random stream under the engine seed, so equal inputs give
 * equal outputs.
 *
 * # Safety
 * Pointers must be valid; `input` NUL-terminated.
 */
enum HoStatus ho_apply_rule(const struct HoEngine *engine,
                            const char *input,
                            uint8_t rule,
                            uint64_t stream,
                            char **out);

/**
 * Obfuscates a neutral/toxic pair at `level`. `pair_index` picks the random
 * stream the same way the dataset generator does. When `out_rules` is not
 * null it receives up to 4 applied rule ids, in order, and `out_rule_count`
 * their number.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated; `out_rules`, if given,
 * must hold 4 bytes.
 */
enum HoStatus ho_obfuscate_pair(const struct HoEngine *engine,
                                const char *neutral,
                                const char *toxic,
                                enum HoLevel level,
                                uint64_t pair_index,
                                char **out_neutral,
                                char **out_toxic,
                                uint8_t *out_rules,
                                size_t *out_rule_count);

/**
 * Sentence chrF (0-100) with whitespace ignored.
 *
 * # Safety
 * Strings must be NUL-terminated and `out` valid.
 */
enum HoStatus ho_chrf(const char *hypothesis,
                      const char *reference,
                      size_t max_n,
                      double beta,
                      double *out);

/**
 * Splits a precomposed syllable into initial, medial and final indices.
 *
 * # Safety
 * Output pointers must be valid.
 */
enum HoStatus ho_decompose(uint32_t syllable, uint8_t *initial, uint8_t *medial, uint8_t *coda);

/**
 * Builds a syllable code point from jamo indices.
 *
 * # Safety
 * `out` must be valid.
 */
enum HoStatus ho_compose(uint8_t initial, uint8_t medial, uint8_t coda, uint32_t *out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. Null is ignored.
 */
void ho_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HANGUL_OBFUS_H */
