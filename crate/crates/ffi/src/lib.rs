//! C ABI over `felphase`.
//!
//! Fields and evolvers are opaque heap handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! an [`FpStatus`]; on failure `fp_last_error` holds a message for the
//! calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use felphase::classical::{evolve_classical, pendulum_flow, PendulumState};
use felphase::cli::estimate::estimate_timescales;
use felphase::mathieu::solve_bands;
use felphase::observables::{distance_dcl, gain_from_momentum, gain_small_signal};
use felphase::quantum::WignerEvolver;
use felphase::scaling::{GaussianMomentum, LabParameters, ModelConfig, PhaseSpaceField, PhaseSpaceGrid};
use felphase::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Truncation = 3,
    Numerical = 4,
    GridMismatch = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Phase-space grid: `n_theta` nodes on [0, 2π), `n_wp` nodes on [wp_min, wp_max].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FpGrid {
    pub n_theta: usize,
    pub n_wp: usize,
    pub wp_min: f64,
    pub wp_max: f64,
}

/// Laboratory inputs in SI units.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FpLab {
    pub electron_density: f64,
    pub wave_number: f64,
    pub initial_field: f64,
    pub wiggler_field: f64,
    pub wiggler_wavelength: f64,
    pub wiggler_parameter: f64,
    pub gamma: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FpTimescales {
    pub space_charge: f64,
    pub spontaneous_emission: f64,
    pub chi: f64,
}

/// Opaque sampled phase-space density.
pub struct FpField(PhaseSpaceField);

/// Opaque quantum evolver with its band tables precomputed.
pub struct FpEvolver {
    inner: WignerEvolver,
    beam: GaussianMomentum,
    grid: PhaseSpaceGrid,
    epsilon: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> FpStatus {
    match err {
        Error::Domain(_) => FpStatus::Domain,
        Error::Truncation(_) => FpStatus::Truncation,
        Error::GridMismatch(_) => FpStatus::GridMismatch,
        _ => FpStatus::Numerical,
    }
}

struct Fail(FpStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(FpStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> FpStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FpStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            FpStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

fn grid_from(g: &FpGrid) -> Result<PhaseSpaceGrid, Fail> {
    Ok(PhaseSpaceGrid::new(g.n_theta, g.n_wp, g.wp_min, g.wp_max)?)
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length, 0 if there is none.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn fp_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes();
            if !buf.is_null() && len > 0 {
                let n = bytes.len().min(len - 1);
                ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
                *buf.add(n) = 0;
            }
            bytes.len()
        }
    })
}

/// Default grid covering a Gaussian beam at the given ε and α.
///
/// # Safety
/// `grid` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fp_grid_covering(
    wp_bar: f64,
    dwp: f64,
    epsilon: f64,
    alpha: f64,
    n_theta: usize,
    n_wp: usize,
    grid: *mut FpGrid,
) -> FpStatus {
    guard(|| {
        let grid = out(grid, "grid")?;
        let beam = GaussianMomentum::new(wp_bar, dwp)?;
        let g = PhaseSpaceGrid::covering(&beam, epsilon, alpha, n_theta, n_wp)?;
        *grid = FpGrid { n_theta: g.n_theta, n_wp: g.n_wp, wp_min: g.wp_min, wp_max: g.wp_max };
        Ok(())
    })
}

/// Builds a quantum evolver valid for 0 ≤ τ ≤ `tau_max`.
///
/// # Safety
/// `grid` must be readable and `evolver` writable.
#[no_mangle]
pub unsafe extern "C" fn fp_evolver_new(
    alpha: f64,
    epsilon: f64,
    wp_bar: f64,
    dwp: f64,
    grid: *const FpGrid,
    tau_max: f64,
    evolver: *mut *mut FpEvolver,
) -> FpStatus {
    guard(|| {
        let slot = out(evolver, "evolver")?;
        let grid = grid_from(handle(grid, "grid")?)?;
        let beam = GaussianMomentum::new(wp_bar, dwp)?;
        let inner = WignerEvolver::new(&ModelConfig::new(alpha, epsilon), &beam, &grid, tau_max)?;
        *slot = Box::into_raw(Box::new(FpEvolver { inner, beam, grid, epsilon }));
        Ok(())
    })
}

/// # Safety
/// `evolver` must be null or come from `fp_evolver_new`, and is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn fp_evolver_free(evolver: *mut FpEvolver) {
    if !evolver.is_null() {
        drop(Box::from_raw(evolver));
    }
}

/// Wigner function at τ.
///
/// # Safety
/// `evolver` must be live and `field` writable.
#[no_mangle]
pub unsafe extern "C" fn fp_evolver_wigner(evolver: *const FpEvolver, tau: f64, field: *mut *mut FpField) -> FpStatus {
    guard(|| {
        let slot = out(field, "field")?;
        let ev = handle(evolver, "evolver")?;
        *slot = Box::into_raw(Box::new(FpField(ev.inner.field_at(tau)?)));
        Ok(())
    })
}

/// Classical distribution at τ for the evolver's beam, grid and ε.
///
/// # Safety
/// `evolver` must be live and `field` writable.
#[no_mangle]
pub unsafe extern "C" fn fp_evolver_classical(evolver: *const FpEvolver, tau: f64, field: *mut *mut FpField) -> FpStatus {
    guard(|| {
        let slot = out(field, "field")?;
        let ev = handle(evolver, "evolver")?;
        *slot = Box::into_raw(Box::new(FpField(evolve_classical(&ev.beam, &ev.grid, tau, ev.epsilon)?)));
        Ok(())
    })
}

/// # Safety
/// `field` must be null or come from this library, and is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn fp_field_free(field: *mut FpField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// # Safety
/// `field` must be live and `grid` writable.
#[no_mangle]
pub unsafe extern "C" fn fp_field_grid(field: *const FpField, grid: *mut FpGrid) -> FpStatus {
    guard(|| {
        let g = handle(field, "field")?.0.grid;
        *out(grid, "grid")? = FpGrid { n_theta: g.n_theta, n_wp: g.n_wp, wp_min: g.wp_min, wp_max: g.wp_max };
        Ok(())
    })
}

/// Copies the samples, θ-major (`values[i * n_wp + j]` at θ_i, ℘_j).
///
/// # Safety
/// `field` must be live and `values` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn fp_field_values(field: *const FpField, values: *mut f64, len: usize) -> FpStatus {
    guard(|| {
        let f = &handle(field, "field")?.0;
        let n = f.values.len();
        if len < n {
            return Err(Fail(FpStatus::BufferTooSmall, format!("need {n} doubles, got {len}")));
        }
        if values.is_null() {
            return Err(null("values"));
        }
        for (k, v) in f.values.iter().enumerate() {
            *values.add(k) = *v;
        }
        Ok(())
    })
}

/// Total probability ∬ field.
///
/// # Safety
/// `field` must be live and `mass` writable.
#[no_mangle]
pub unsafe extern "C" fn fp_field_mass(field: *const FpField, mass: *mut f64) -> FpStatus {
    guard(|| {
        *out(mass, "mass")? = handle(field, "field")?.0.mass();
        Ok(())
    })
}

/// Classical distance between a Wigner function and a classical distribution on one grid.
///
/// # Safety
/// Both fields must be live and `d` writable.
#[no_mangle]
pub unsafe extern "C" fn fp_distance(wigner: *const FpField, classical: *const FpField, d: *mut f64) -> FpStatus {
    guard(|| {
        let d = out(d, "d")?;
        *d = distance_dcl(&handle(wigner, "wigner")?.0, &handle(classical, "classical")?.0)?;
        Ok(())
    })
}

/// Gain −χ(⟨℘⟩_τ − ⟨℘⟩_0) from two fields on one grid.
///
/// # Safety
/// Both fields must be live and `gain` writable.
#[no_mangle]
pub unsafe extern "C" fn fp_gain_numeric(field_tau: *const FpField, field_0: *const FpField, chi: f64, gain: *mut f64) -> FpStatus {
    guard(|| {
        let g = out(gain, "gain")?;
        *g = gain_from_momentum(&handle(field_tau, "field_tau")?.0, &handle(field_0, "field_0")?.0, chi)?;
        Ok(())
    })
}

/// Small-signal gain of a Gaussian beam with `terms` recoil orders (0 is classical).
///
/// # Safety
/// `gain` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fp_gain_small_signal(
    wp_bar: f64,
    dwp: f64,
    tau: f64,
    alpha: f64,
    chi: f64,
    terms: usize,
    gain: *mut f64,
) -> FpStatus {
    guard(|| {
        let g = out(gain, "gain")?;
        *g = gain_small_signal(&GaussianMomentum::new(wp_bar, dwp)?, tau, alpha, chi, terms)?;
        Ok(())
    })
}

/// Exact pendulum trajectory: maps (θ, ℘) at 0 to its value at τ in place.
///
/// # Safety
/// `theta` and `wp` must be readable and writable.
#[no_mangle]
pub unsafe extern "C" fn fp_pendulum_flow(theta: *mut f64, wp: *mut f64, tau: f64, epsilon: f64) -> FpStatus {
    guard(|| {
        let (t, p) = (out(theta, "theta")?, out(wp, "wp")?);
        let s = pendulum_flow(PendulumState { theta: *t, wp: *p }, tau, epsilon)?;
        *t = s.theta;
        *p = s.wp;
        Ok(())
    })
}

/// Mathieu energies for labels −R..=R, written in label order to `energies`.
///
/// # Safety
/// `energies` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn fp_band_energies(
    nu: f64,
    alpha: f64,
    epsilon: f64,
    half_width: usize,
    energies: *mut f64,
    len: usize,
) -> FpStatus {
    guard(|| {
        let n = 2 * half_width + 1;
        if len < n {
            return Err(Fail(FpStatus::BufferTooSmall, format!("need {n} doubles, got {len}")));
        }
        if energies.is_null() {
            return Err(null("energies"));
        }
        let bands = solve_bands(nu, alpha, epsilon, half_width)?;
        let r = half_width as i64;
        for (k, label) in (-r..=r).enumerate() {
            *energies.add(k) = bands.energy(label);
        }
        Ok(())
    })
}

/// Space-charge and spontaneous-emission times and the coupling χ.
///
/// # Safety
/// `lab` must be readable and `timescales` writable.
#[no_mangle]
pub unsafe extern "C" fn fp_estimate(lab: *const FpLab, timescales: *mut FpTimescales) -> FpStatus {
    guard(|| {
        let l = handle(lab, "lab")?;
        let slot = out(timescales, "timescales")?;
        let t = estimate_timescales(&LabParameters {
            electron_density: l.electron_density,
            wave_number: l.wave_number,
            initial_field: l.initial_field,
            wiggler_field: l.wiggler_field,
            wiggler_wavelength: l.wiggler_wavelength,
            wiggler_parameter: l.wiggler_parameter,
            gamma: l.gamma,
        })?;
        *slot = FpTimescales { space_charge: t.space_charge, spontaneous_emission: t.spontaneous_emission, chi: t.chi };
        Ok(())
    })
}
