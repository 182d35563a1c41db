/* C interface to the qlga quantum lattice-gas simulator. */

#ifndef QLGA_H
#define QLGA_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Continuum matrix representations for the reference evolution.
 */
typedef enum QlgaDiracForm {
  QLGA_DIRAC_FORM_STANDARD = 0,
  QLGA_DIRAC_FORM_ALTERNATE = 1,
} QlgaDiracForm;

/**
 * Step orderings.
 */
typedef enum QlgaOrdering {
  QLGA_ORDERING_RELATIVISTIC = 0,
  QLGA_ORDERING_DIFFUSIVE = 1,
} QlgaOrdering;

/**
 * Result codes for every fallible call.
 */
typedef enum QlgaStatus {
  QLGA_STATUS_OK = 0,
  QLGA_STATUS_NULL_POINTER = 1,
  QLGA_STATUS_INVALID_ARGUMENT = 2,
  QLGA_STATUS_DIMS_MISMATCH = 3,
  QLGA_STATUS_UNSUPPORTED = 4,
  QLGA_STATUS_IO_ERROR = 5,
  QLGA_STATUS_NUMERICAL_ERROR = 6,
} QlgaStatus;

/**
 * Update rules.
 */
typedef enum QlgaVariant {
  QLGA_VARIANT_BASIC = 0,
  QLGA_VARIANT_INTERLEAVED = 1,
  QLGA_VARIANT_SYMMETRIZED = 2,
} QlgaVariant;

/**
 * Discretized 4-spinor field (opaque).
 */
typedef struct QlgaField QlgaField;

/**
 * Lattice discretization parameters (opaque).
 */
typedef struct QlgaParams QlgaParams;

/**
 * Reusable stepper for one update rule on one lattice (opaque).
 */
typedef struct QlgaStepper QlgaStepper;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Human-readable name of a status code (static storage).
 */
const char *qlga_status_name(enum QlgaStatus status);

/**
 * Creates lattice parameters (natural units, eps = mass * delta_r).
 *
 * # Safety
 * `out` must be a valid pointer to receive the handle.
 */
enum QlgaStatus qlga_params_new(size_t lx,
                                size_t ly,
                                size_t lz,
                                double delta_r,
                                double mass,
                                enum QlgaOrdering ordering,
                                struct QlgaParams **out);

/**
 * Frees parameters created by [`qlga_params_new`]. Null is a no-op.
 *
 * # Safety
 * `params` must have been returned by this library and not freed before.
 */
void qlga_params_free(struct QlgaParams *params);

/**
 * Creates a zero field on the given lattice.
 *
 * # Safety
 * `out` must be valid.
 */
enum QlgaStatus qlga_field_new_zero(size_t lx, size_t ly, size_t lz, struct QlgaField **out);

/**
 * Creates a unit amplitude at (site, component).
 *
 * # Safety
 * `out` must be valid.
 */
enum QlgaStatus qlga_field_new_unit(size_t lx,
                                    size_t ly,
                                    size_t lz,
                                    size_t site,
                                    size_t component,
                                    struct QlgaField **out);

/**
 * Creates a normalized Gaussian packet. `center` and `k` are 3-element
 * arrays (cells and radians per cell); `pol_re`/`pol_im` carry the
 * 4-component polarization.
 *
 * # Safety
 * Array pointers must reference the documented element counts; `out` must
 * be valid.
 */
enum QlgaStatus qlga_field_new_gaussian(size_t lx,
                                        size_t ly,
                                        size_t lz,
                                        const double *center,
                                        double width,
                                        const double *k,
                                        const double *pol_re,
                                        const double *pol_im,
                                        struct QlgaField **out);

/**
 * Deep copy.
 *
 * # Safety
 * `field` must be a live handle; `out` must be valid.
 */
enum QlgaStatus qlga_field_clone(const struct QlgaField *field, struct QlgaField **out);

/**
 * Frees a field. Null is a no-op.
 *
 * # Safety
 * `field` must have been returned by this library and not freed before.
 */
void qlga_field_free(struct QlgaField *field);

/**
 * Number of lattice sites.
 *
 * # Safety
 * `field` and `out` must be valid.
 */
enum QlgaStatus qlga_field_site_count(const struct QlgaField *field, size_t *out);

/**
 * Total norm (sum of squared amplitude moduli).
 *
 * # Safety
 * `field` and `out` must be valid.
 */
enum QlgaStatus qlga_field_total_norm(const struct QlgaField *field, double *out);

/**
 * Per-site probability density.
 *
 * # Safety
 * `field` and `out` must be valid.
 */
enum QlgaStatus qlga_field_probability_density(const struct QlgaField *field,
                                               size_t site,
                                               double *out);

/**
 * Root-mean-square per-site density difference of two fields.
 *
 * # Safety
 * All pointers must be valid.
 */
enum QlgaStatus qlga_field_l2_density_error(const struct QlgaField *field,
                                            const struct QlgaField *reference,
                                            double *out);

/**
 * Copies amplitudes into `buffer` as interleaved (re, im) pairs in site
 * order with the component index fastest. `len` is the buffer length in
 * doubles and must be exactly 8 * site_count.
 *
 * # Safety
 * `buffer` must reference `len` writable doubles.
 */
enum QlgaStatus qlga_field_copy_amplitudes(const struct QlgaField *field,
                                           double *buffer,
                                           size_t len);

/**
 * Creates a stepper for one update rule over the given parameters.
 *
 * # Safety
 * `params` must be live; `out` must be valid.
 */
enum QlgaStatus qlga_stepper_new(enum QlgaVariant variant,
                                 const struct QlgaParams *params,
                                 struct QlgaStepper **out);

/**
 * Frees a stepper. Null is a no-op.
 *
 * # Safety
 * `stepper` must have been returned by this library and not freed before.
 */
void qlga_stepper_free(struct QlgaStepper *stepper);

/**
 * Advances the field by `n` steps in place.
 *
 * # Safety
 * Both handles must be live and belong to matching lattices.
 */
enum QlgaStatus qlga_stepper_run(struct QlgaStepper *stepper, struct QlgaField *field, uint64_t n);

/**
 * Physical time advanced per step.
 *
 * # Safety
 * `stepper` and `out` must be valid.
 */
enum QlgaStatus qlga_stepper_step_time(const struct QlgaStepper *stepper, double *out);

/**
 * Reads the running collision/stream-lane counters.
 *
 * # Safety
 * All pointers must be valid.
 */
enum QlgaStatus qlga_stepper_counters(const struct QlgaStepper *stepper,
                                      uint64_t *collisions,
                                      uint64_t *stream_lanes);

/**
 * Evolves a field for physical time `t` with the exact spectral reference
 * and writes a new handle to `out`.
 *
 * # Safety
 * `field` must be live; `out` must be valid.
 */
enum QlgaStatus qlga_exact_evolve(const struct QlgaField *field,
                                  double t,
                                  double mass,
                                  double delta_r,
                                  enum QlgaDiracForm form,
                                  struct QlgaField **out);

/**
 * Writes the field snapshot to `path` (bit-exact round trip with
 * [`qlga_field_read_snapshot`]).
 *
 * # Safety
 * `path` must be a NUL-terminated string; `field` must be live.
 */
enum QlgaStatus qlga_field_write_snapshot(const struct QlgaField *field, const char *path);

/**
 * Reads a snapshot written by [`qlga_field_write_snapshot`].
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid.
 */
enum QlgaStatus qlga_field_read_snapshot(const char *path, struct QlgaField **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QLGA_H */
