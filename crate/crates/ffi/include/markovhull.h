#ifndef MARKOVHULL_H
#define MARKOVHULL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Hull iteration ordering for [`mh_hull`].
typedef enum MhOrdering {
  // Interior pins in ascending order, repeated.
  MH_ORDERING_SWEEP = 0,
  // Seeded random interleaving of full sweeps.
  MH_ORDERING_RANDOM = 1,
} MhOrdering;

// Result of every fallible call. `mh_last_error_message` describes the
// most recent non-`Ok` return on the calling thread.
typedef enum MhStatus {
  MH_STATUS_OK = 0,
  // A required pointer argument was null.
  MH_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not UTF-8.
  MH_STATUS_INVALID_UTF8 = 2,
  // Input could not be parsed or referred to unknown names.
  MH_STATUS_PARSE = 3,
  // Inputs were readable but violated a documented precondition.
  MH_STATUS_CONTRACT = 4,
  // The hull iteration hit its step limit; outputs are still valid.
  MH_STATUS_NON_CONVERGED = 5,
  // An internal invariant failed; the library state is still sound.
  MH_STATUS_PANIC = 6,
} MhStatus;

// Opaque measure handle; carries its arithmetic mode.
typedef struct MhMeasure MhMeasure;

// Opaque path space handle.
typedef struct MhSpace MhSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent non-`Ok` status on this thread. The pointer
// stays valid until the next failing call on the same thread. Never null.
const char *mh_last_error_message(void);

// Parse a path-space JSON document.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid for writes.
enum MhStatus mh_space_parse_json(const char *json, struct MhSpace **out);

// # Safety
// `space` must come from this library and not be freed twice.
void mh_space_free(struct MhSpace *space);

// Number of grid points.
//
// # Safety
// `space` must be a live handle; `out` must be valid for writes.
enum MhStatus mh_space_grid_len(const struct MhSpace *space, size_t *out);

// Number of states.
//
// # Safety
// `space` must be a live handle; `out` must be valid for writes.
enum MhStatus mh_space_state_count(const struct MhSpace *space, size_t *out);

// Parse a measure JSON document. The space must be inlined in the
// document; file references are not resolved across the C boundary.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid for writes.
enum MhStatus mh_measure_parse_json(const char *json, struct MhMeasure **out);

// # Safety
// `measure` must come from this library and not be freed twice.
void mh_measure_free(struct MhMeasure *measure);

// Canonical JSON for a measure; free the string with `mh_string_free`.
//
// # Safety
// `measure` must be a live handle; `out` must be valid for writes.
enum MhStatus mh_measure_to_json(const struct MhMeasure *measure, char **out);

// # Safety
// `s` must have been returned by this library and not freed twice.
void mh_string_free(char *s);

// Arithmetic mode: 0 exact, 1 float.
//
// # Safety
// `measure` must be a live handle; `out` must be valid for writes.
enum MhStatus mh_measure_mode(const struct MhMeasure *measure, int32_t *out);

// Number of support atoms.
//
// # Safety
// `measure` must be a live handle; `out` must be valid for writes.
enum MhStatus mh_measure_atom_count(const struct MhMeasure *measure, size_t *out);

// Total mass as a double (a rounded view in exact mode).
//
// # Safety
// `measure` must be a live handle; `out` must be valid for writes.
enum MhStatus mh_measure_total_mass(const struct MhMeasure *measure, double *out);

// Total-variation distance from the measure to its own pin image at
// `pin`, as a double.
//
// # Safety
// `measure` must be a live handle; `out` must be valid for writes.
enum MhStatus mh_measure_markov_defect(const struct MhMeasure *measure, size_t pin, double *out);

// Whether every interior pin fixes the measure within `tol`. Exact-mode
// measures require `tol == 0`.
//
// # Safety
// `measure` must be a live handle; `out` must be valid for writes.
enum MhStatus mh_measure_is_markov(const struct MhMeasure *measure, double tol, bool *out);

// Apply the pin operators for `pins[0..len]` in order, producing a new
// measure handle.
//
// # Safety
// `measure` must be a live handle; `pins` must point to `len` readable
// indices (null allowed when `len == 0`); `out` must be valid for writes.
enum MhStatus mh_markovianise(const struct MhMeasure *measure,
                              const size_t *pins,
                              size_t len,
                              struct MhMeasure **out);

// Iterate pins until a fixed point, up to `max_steps` applications.
// `seed` only matters for `MhOrdering::Random`. Exact-mode measures
// require `tol == 0`.
//
// On `Ok` and on `NonConverged`, `out` receives the final measure and
// `out_converged` the convergence flag; other statuses write nothing.
//
// # Safety
// `measure` must be a live handle; `out` and `out_converged` must be
// valid for writes.
enum MhStatus mh_hull(const struct MhMeasure *measure,
                      enum MhOrdering ordering,
                      uint64_t seed,
                      size_t max_steps,
                      double tol,
                      struct MhMeasure **out,
                      bool *out_converged);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MARKOVHULL_H */
