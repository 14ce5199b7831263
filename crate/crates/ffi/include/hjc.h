#ifndef HJC_H
#define HJC_H

#include <stddef.h>
#include <stdint.h>

typedef enum HjcStatus {
  HJC_STATUS_OK = 0,
  HJC_STATUS_NULL_POINTER = 1,
  HJC_STATUS_INVALID_ARGUMENT = 2,
  // A quantum chart hit a level where its normalizer vanishes.
  HJC_STATUS_SINGULAR_SECTOR = 3,
  // A classical chart was evaluated on its Dirac string or at the origin.
  HJC_STATUS_DIRAC_STRING = 4,
  HJC_STATUS_NUMERICAL = 5,
  HJC_STATUS_BUFFER_TOO_SMALL = 6,
  HJC_STATUS_PANIC = 7,
} HjcStatus;

typedef enum HjcChart {
  HJC_CHART_ONE = 1,
  HJC_CHART_TWO = 2,
} HjcChart;

// Opaque 2x2 block operator on the truncated Fock space.
typedef struct HjcBlockOperator HjcBlockOperator;

// Opaque Jaynes-Cummings parameter set.
typedef struct HjcParams HjcParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or NULL. The pointer is
// valid until the next failing call on the same thread.
const char *hjc_last_error_message(void);

// Parameters with coupling `g = 1` and detuning ratio `theta`.
//
// # Safety
// `out` must be a valid pointer.
enum HjcStatus hjc_params_new(double theta, size_t dim, struct HjcParams **out);

// Full model; `theta = (delta - omega) / (2 g)`.
//
// # Safety
// `out` must be a valid pointer.
enum HjcStatus hjc_params_new_physical(double omega,
                                       double delta,
                                       double g,
                                       size_t dim,
                                       struct HjcParams **out);

// # Safety
// `params` must come from `hjc_params_new*`.
enum HjcStatus hjc_params_set_g(struct HjcParams *params, double g);

// # Safety
// `params` must be NULL or come from `hjc_params_new*`, and not be used afterwards.
void hjc_params_free(struct HjcParams *params);

// Levels at which `chart` (an `HjcChart` value) is singular. Writes at most
// `capacity` levels and the total count to `count`; returns `BufferTooSmall`
// when `capacity < count`.
//
// # Safety
// `levels` must hold `capacity` entries (may be NULL when `capacity` is 0).
enum HjcStatus hjc_singular_levels(const struct HjcParams *params,
                                   uint32_t chart,
                                   size_t *levels,
                                   size_t capacity,
                                   size_t *count);

// Hamiltonian `H_JC = [[theta, a], [a^dagger, -theta]]`.
//
// # Safety
// `params` must be valid and `out` a valid pointer.
enum HjcStatus hjc_build_h_jc(const struct HjcParams *params, struct HjcBlockOperator **out);

// Full Hamiltonian; needs parameters from `hjc_params_new_physical`.
//
// # Safety
// `params` must be valid and `out` a valid pointer.
enum HjcStatus hjc_build_full_hamiltonian(const struct HjcParams *params,
                                          struct HjcBlockOperator **out);

// Projector onto the positive-energy eigenspace of `H_JC`.
//
// # Safety
// `params` must be valid and `out` a valid pointer.
enum HjcStatus hjc_projector(const struct HjcParams *params, struct HjcBlockOperator **out);

// Closed-form `exp(-i g t H_JC)`.
//
// # Safety
// `params` must be valid and `out` a valid pointer.
enum HjcStatus hjc_propagator(const struct HjcParams *params,
                              double t,
                              struct HjcBlockOperator **out);

// Closed-form `exp(-i t H)` for the full model.
//
// # Safety
// `params` must be valid and `out` a valid pointer.
enum HjcStatus hjc_propagator_full(const struct HjcParams *params,
                                   double t,
                                   struct HjcBlockOperator **out);

// Chart unitary `V` for `chart` (an `HjcChart` value); fails with
// `SingularSector` on the inadmissible chart.
//
// # Safety
// `params` must be valid and `out` a valid pointer.
enum HjcStatus hjc_chart_unitary(const struct HjcParams *params,
                                 uint32_t chart,
                                 struct HjcBlockOperator **out);

// Fock truncation `d`; the flattened operator is `2d x 2d`.
//
// # Safety
// `op` must be valid and `dim` a valid pointer.
enum HjcStatus hjc_operator_dim(const struct HjcBlockOperator *op, size_t *dim);

// Copies the flattened operator, row-major with the atom index major, into
// `re` and `im`, each holding `len >= (2d)^2` doubles.
//
// # Safety
// `re` and `im` must hold `len` doubles.
enum HjcStatus hjc_operator_copy_entries(const struct HjcBlockOperator *op,
                                         double *re,
                                         double *im,
                                         size_t len);

// Max-abs distance of two operators on the leading `d - margin` levels.
//
// # Safety
// `a` and `b` must be valid and `out` a valid pointer.
enum HjcStatus hjc_operator_distance(const struct HjcBlockOperator *a,
                                     const struct HjcBlockOperator *b,
                                     size_t margin,
                                     double *out);

// Product `a b` as a new handle.
//
// # Safety
// `a` and `b` must be valid and `out` a valid pointer.
enum HjcStatus hjc_operator_mul(const struct HjcBlockOperator *a,
                                const struct HjcBlockOperator *b,
                                struct HjcBlockOperator **out);

// # Safety
// `op` must be NULL or a live handle, and not be used afterwards.
void hjc_operator_free(struct HjcBlockOperator *op);

// Product in the algebra of dimension `dim` (1, 2, 4 or 8): `out = a b`.
//
// # Safety
// `a`, `b` and `out` must each hold `dim` doubles.
enum HjcStatus hjc_algebra_mul(size_t dim, const double *a, const double *b, double *out);

// Classical projector `P = (1 + H/r)/2` at `(x, y, z)` over C, as row-major
// 2x2 real and imaginary parts.
//
// # Safety
// `re` and `im` must hold 4 doubles each.
enum HjcStatus hjc_berry_projector(double x, double y, double z, double *re, double *im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HJC_H */
