#ifndef TORIC_RIGID_H
#define TORIC_RIGID_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ToricStatus {
  TORIC_STATUS_OK = 0,
  TORIC_STATUS_DOMAIN = 1,
  TORIC_STATUS_INCONCLUSIVE = 2,
  TORIC_STATUS_PARSE = 3,
  TORIC_STATUS_NULL_POINTER = 4,
  TORIC_STATUS_PANIC = 5,
} ToricStatus;

/**
 * A chart atlas built from a fan.
 */
typedef struct ToricAtlas ToricAtlas;

/**
 * An element of a toric affinoid algebra.
 */
typedef struct ToricElement ToricElement;

/**
 * A validated fan.
 */
typedef struct ToricFan ToricFan;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread (empty after a success).
 * The pointer stays valid until the next call into this library.
 */
const char *toric_last_error(void);

/**
 * Library version as a static string.
 */
const char *toric_version(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void toric_string_free(char *s);

/**
 * Parses and validates a fan file. Axiom violations give `DOMAIN`, with
 * the violation list as JSON in the last error.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum ToricStatus toric_fan_from_json(const char *json, struct ToricFan **out);

/**
 * The fan of projective `n`-space.
 *
 * # Safety
 * `out` must be writable.
 */
enum ToricStatus toric_fan_projective(size_t n, struct ToricFan **out);

/**
 * The Hirzebruch fan with parameter `a ≥ 0`.
 *
 * # Safety
 * `out` must be writable.
 */
enum ToricStatus toric_fan_hirzebruch(int64_t a, struct ToricFan **out);

/**
 * Number of cones, faces included. Zero for a null handle.
 *
 * # Safety
 * `fan` must be null or a live handle.
 */
size_t toric_fan_cone_count(const struct ToricFan *fan);

/**
 * Whether the support of the fan is all of `N_R`.
 *
 * # Safety
 * `fan` must be a live handle; `out` must be writable.
 */
enum ToricStatus toric_fan_is_complete(const struct ToricFan *fan, bool *out);

/**
 * The face-complete fan file.
 *
 * # Safety
 * `fan` must be a live handle; `out` must be writable.
 */
enum ToricStatus toric_fan_to_json(const struct ToricFan *fan, char **out);

/**
 * # Safety
 * `fan` must be null or a live handle, not used afterwards.
 */
void toric_fan_free(struct ToricFan *fan);

/**
 * Builds the atlas of a fan. `bound` is the multiplicity bound for
 * localization searches (0 selects the default) and `radius` the box
 * radius for overlap certificates (0 derives it from the input).
 *
 * # Safety
 * `fan` must be a live handle; `out` must be writable.
 */
enum ToricStatus toric_atlas_build(const struct ToricFan *fan,
                                   uint32_t bound,
                                   int64_t radius,
                                   bool parallel,
                                   struct ToricAtlas **out);

/**
 * # Safety
 * `atlas` must be null or a live handle.
 */
size_t toric_atlas_chart_count(const struct ToricAtlas *atlas);

/**
 * Charts, overlaps, transitions and certificates as JSON.
 *
 * # Safety
 * `atlas` must be a live handle; `out` must be writable.
 */
enum ToricStatus toric_atlas_to_json(const struct ToricAtlas *atlas, char **out);

/**
 * The reduction mod `prime` with its comparison against the toric scheme.
 *
 * # Safety
 * `atlas` must be a live handle; `out` must be writable.
 */
enum ToricStatus toric_atlas_reduction_json(const struct ToricAtlas *atlas,
                                            uint64_t prime,
                                            char **out);

/**
 * # Safety
 * `atlas` must be null or a live handle, not used afterwards.
 */
void toric_atlas_free(struct ToricAtlas *atlas);

/**
 * Parses an element file.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum ToricStatus toric_element_from_json(const char *json, struct ToricElement **out);

/**
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum ToricStatus toric_element_multiply(const struct ToricElement *a,
                                        const struct ToricElement *b,
                                        struct ToricElement **out);

/**
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum ToricStatus toric_element_add(const struct ToricElement *a,
                                   const struct ToricElement *b,
                                   struct ToricElement **out);

/**
 * Gauss norm as an exact rational string such as `"1/25"`.
 *
 * # Safety
 * `element` must be a live handle; `out` must be writable.
 */
enum ToricStatus toric_element_gauss_norm(const struct ToricElement *element, char **out);

/**
 * # Safety
 * `element` must be a live handle; `out` must be writable.
 */
enum ToricStatus toric_element_to_json(const struct ToricElement *element, char **out);

/**
 * # Safety
 * `element` must be null or a live handle, not used afterwards.
 */
void toric_element_free(struct ToricElement *element);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORIC_RIGID_H */
