#ifndef PREEMPT_INBOX_H
#define PREEMPT_INBOX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PiInbox {
  PI_INBOX_DEFAULT = 0,
  PI_INBOX_PRIORITY = 1,
} PiInbox;

typedef enum PiLevel {
  PI_LEVEL_DEFAULT = 0,
  PI_LEVEL_HIGH = 1,
} PiLevel;

typedef enum PiStatus {
  PI_STATUS_OK = 0,
  PI_STATUS_NULL_POINTER = 1,
  PI_STATUS_INVALID_UTF8 = 2,
  PI_STATUS_INVALID_ADDRESS = 3,
  PI_STATUS_INVALID_ARGUMENT = 4,
  PI_STATUS_PARSE_FAILURE = 5,
  PI_STATUS_RUNTIME_FAILURE = 6,
  PI_STATUS_IO_FAILURE = 7,
  PI_STATUS_INDEX_OUT_OF_RANGE = 8,
  PI_STATUS_INVARIANT_VIOLATION = 9,
  PI_STATUS_PANIC = 10,
} PiStatus;

/**
 * Contact priority table.
 */
typedef struct PiRegistry PiRegistry;

/**
 * Finished simulation: report plus final registry and inboxes.
 */
typedef struct PiSimulation PiSimulation;

/**
 * Default and Priority inboxes.
 */
typedef struct PiStore PiStore;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL if it
 * succeeded. Free with [`pi_string_free`].
 */
char *pi_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void pi_string_free(char *s);

struct PiRegistry *pi_registry_new(void);

/**
 * # Safety
 * `reg` must be NULL or a handle from this library, not yet freed.
 */
void pi_registry_free(struct PiRegistry *reg);

/**
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum PiStatus pi_registry_load(const char *path, struct PiRegistry **out);

/**
 * # Safety
 * `reg` must be a live handle; `path` a NUL-terminated string.
 */
enum PiStatus pi_registry_save(const struct PiRegistry *reg, const char *path);

/**
 * # Safety
 * `reg` must be a live handle; `addr` a NUL-terminated string.
 */
enum PiStatus pi_registry_set(struct PiRegistry *reg, const char *addr, enum PiLevel level);

/**
 * # Safety
 * `reg` must be a live handle; `addr` a NUL-terminated string; `out` writable.
 */
enum PiStatus pi_registry_get(const struct PiRegistry *reg, const char *addr, enum PiLevel *out);

/**
 * High contacts, sorted, one per line (each followed by `\n`).
 *
 * # Safety
 * `reg` must be a live handle; `out` writable.
 */
enum PiStatus pi_registry_list_high(const struct PiRegistry *reg, char **out);

struct PiStore *pi_store_new(void);

/**
 * # Safety
 * `store` must be NULL or a handle from this library, not yet freed.
 */
void pi_store_free(struct PiStore *store);

/**
 * # Safety
 * `path` must be a NUL-terminated string; `out` writable.
 */
enum PiStatus pi_store_load(const char *path, struct PiStore **out);

/**
 * # Safety
 * `store` must be a live handle; `path` a NUL-terminated string.
 */
enum PiStatus pi_store_save(const struct PiStore *store, const char *path);

/**
 * # Safety
 * `store` must be a live handle; `out` writable.
 */
enum PiStatus pi_store_len(const struct PiStore *store, enum PiInbox inbox, size_t *out);

/**
 * Display text of the message at `index`.
 *
 * # Safety
 * `store` must be a live handle; `out` writable.
 */
enum PiStatus pi_store_read(const struct PiStore *store,
                            enum PiInbox inbox,
                            size_t index,
                            char **out);

/**
 * Messages whose origin contains `filter`, in the report's listing form:
 * `VIEW <box> <count>` then `  <id> <origin> "<display_text>"` per match.
 * A NULL `filter` matches everything.
 *
 * # Safety
 * `store` must be a live handle; `filter` NULL or NUL-terminated; `out` writable.
 */
enum PiStatus pi_store_view(const struct PiStore *store,
                            enum PiInbox inbox,
                            const char *filter,
                            char **out);

/**
 * Parse and run a trace given as text.
 *
 * # Safety
 * `trace` must be a NUL-terminated string; `out` writable.
 */
enum PiStatus pi_simulate(const char *trace, struct PiSimulation **out);

/**
 * # Safety
 * `sim` must be NULL or a handle from this library, not yet freed.
 */
void pi_simulation_free(struct PiSimulation *sim);

/**
 * Full report text, header included.
 *
 * # Safety
 * `sim` must be a live handle; `out` writable.
 */
enum PiStatus pi_simulation_report(const struct PiSimulation *sim, char **out);

/**
 * Copy of the final inboxes, as a new handle.
 *
 * # Safety
 * `sim` must be a live handle; `out` writable.
 */
enum PiStatus pi_simulation_store(const struct PiSimulation *sim, struct PiStore **out);

/**
 * Copy of the final contact priorities, as a new handle.
 *
 * # Safety
 * `sim` must be a live handle; `out` writable.
 */
enum PiStatus pi_simulation_registry(const struct PiSimulation *sim, struct PiRegistry **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PREEMPT_INBOX_H */
