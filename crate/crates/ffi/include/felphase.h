#ifndef FELPHASE_H
#define FELPHASE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FpStatus {
  FP_STATUS_OK = 0,
  FP_STATUS_NULL_POINTER = 1,
  FP_STATUS_DOMAIN = 2,
  FP_STATUS_TRUNCATION = 3,
  FP_STATUS_NUMERICAL = 4,
  FP_STATUS_GRID_MISMATCH = 5,
  FP_STATUS_BUFFER_TOO_SMALL = 6,
  FP_STATUS_PANIC = 7,
} FpStatus;

// Opaque quantum evolver with its band tables precomputed.
typedef struct FpEvolver FpEvolver;

// Opaque sampled phase-space density.
typedef struct FpField FpField;

// Phase-space grid: `n_theta` nodes on [0, 2π), `n_wp` nodes on [wp_min, wp_max].
typedef struct FpGrid {
  size_t n_theta;
  size_t n_wp;
  double wp_min;
  double wp_max;
} FpGrid;

// Laboratory inputs in SI units.
typedef struct FpLab {
  double electron_density;
  double wave_number;
  double initial_field;
  double wiggler_field;
  double wiggler_wavelength;
  double wiggler_parameter;
  double gamma;
} FpLab;

typedef struct FpTimescales {
  double space_charge;
  double spontaneous_emission;
  double chi;
} FpTimescales;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len`). Returns the full message length, 0 if there is none.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t fp_last_error(char *buf, size_t len);

// Default grid covering a Gaussian beam at the given ε and α.
//
// # Safety
// `grid` must be valid for writes.
enum FpStatus fp_grid_covering(double wp_bar,
                               double dwp,
                               double epsilon,
                               double alpha,
                               size_t n_theta,
                               size_t n_wp,
                               struct FpGrid *grid);

// Builds a quantum evolver valid for 0 ≤ τ ≤ `tau_max`.
//
// # Safety
// `grid` must be readable and `evolver` writable.
enum FpStatus fp_evolver_new(double alpha,
                             double epsilon,
                             double wp_bar,
                             double dwp,
                             const struct FpGrid *grid,
                             double tau_max,
                             struct FpEvolver **evolver);

// # Safety
// `evolver` must be null or come from `fp_evolver_new`, and is invalid afterwards.
void fp_evolver_free(struct FpEvolver *evolver);

// Wigner function at τ.
//
// # Safety
// `evolver` must be live and `field` writable.
enum FpStatus fp_evolver_wigner(const struct FpEvolver *evolver,
                                double tau,
                                struct FpField **field);

// Classical distribution at τ for the evolver's beam, grid and ε.
//
// # Safety
// `evolver` must be live and `field` writable.
enum FpStatus fp_evolver_classical(const struct FpEvolver *evolver,
                                   double tau,
                                   struct FpField **field);

// # Safety
// `field` must be null or come from this library, and is invalid afterwards.
void fp_field_free(struct FpField *field);

// # Safety
// `field` must be live and `grid` writable.
enum FpStatus fp_field_grid(const struct FpField *field, struct FpGrid *grid);

// Copies the samples, θ-major (`values[i * n_wp + j]` at θ_i, ℘_j).
//
// # Safety
// `field` must be live and `values` valid for `len` doubles.
enum FpStatus fp_field_values(const struct FpField *field, double *values, size_t len);

// Total probability ∬ field.
//
// # Safety
// `field` must be live and `mass` writable.
enum FpStatus fp_field_mass(const struct FpField *field, double *mass);

// Classical distance between a Wigner function and a classical distribution on one grid.
//
// # Safety
// Both fields must be live and `d` writable.
enum FpStatus fp_distance(const struct FpField *wigner, const struct FpField *classical, double *d);

// Gain −χ(⟨℘⟩_τ − ⟨℘⟩_0) from two fields on one grid.
//
// # Safety
// Both fields must be live and `gain` writable.
enum FpStatus fp_gain_numeric(const struct FpField *field_tau,
                              const struct FpField *field_0,
                              double chi,
                              double *gain);

// Small-signal gain of a Gaussian beam with `terms` recoil orders (0 is classical).
//
// # Safety
// `gain` must be writable.
enum FpStatus fp_gain_small_signal(double wp_bar,
                                   double dwp,
                                   double tau,
                                   double alpha,
                                   double chi,
                                   size_t terms,
                                   double *gain);

// Exact pendulum trajectory: maps (θ, ℘) at 0 to its value at τ in place.
//
// # Safety
// `theta` and `wp` must be readable and writable.
enum FpStatus fp_pendulum_flow(double *theta, double *wp, double tau, double epsilon);

// Mathieu energies for labels −R..=R, written in label order to `energies`.
//
// # Safety
// `energies` must be valid for `len` doubles.
enum FpStatus fp_band_energies(double nu,
                               double alpha,
                               double epsilon,
                               size_t half_width,
                               double *energies,
                               size_t len);

// Space-charge and spontaneous-emission times and the coupling χ.
//
// # Safety
// `lab` must be readable and `timescales` writable.
enum FpStatus fp_estimate(const struct FpLab *lab, struct FpTimescales *timescales);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FELPHASE_H */
