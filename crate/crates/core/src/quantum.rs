//! Wigner function of an initially θ-uniform beam evolved through the
//! Mathieu bands.
//!
//! A momentum eigenstate `ν` (momentum `℘ = ν/√α`) scatters into `ν + s`
//! with amplitude `S_s^ν(τ)`. The Wigner function of `|ν+s₁⟩⟨ν+s₂|` sits at
//! the mean exponent `ν + (s₁+s₂)/2` with phase `e^{i(s₁-s₂)θ}`, so with
//! `s = s₁ + s₂`:
//!
//! `W(θ, ℘; τ) = (1/2π) Σ_s ρ(℘ - s/(2√α)) w_s(θ, ℘; τ)`,
//! `w_s = Σ_{s'} S_{s'}^ν conj(S_{s-s'}^ν) e^{i(2s'-s)θ}`, `ν = √α℘ - s/2`.
//!
//! For one momentum node the exponents `√α℘ - s/2` take two fractional
//! parts, so two diagonalizations serve the whole sum.

use std::f64::consts::TAU;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mathieu::Spectrum;
use crate::scaling::{FieldKind, GaussianMomentum, ModelConfig, PhaseSpaceField, PhaseSpaceGrid, Truncations};

/// Allowed probability leaking past the recoil truncation.
pub const UNITARITY_TOL: f64 = 1e-9;
/// Allowed imaginary residue relative to the largest field value.
pub const REALITY_TOL: f64 = 1e-10;
/// Shifted densities below this fraction of the peak are skipped.
pub const DENSITY_CUTOFF: f64 = 1e-18;

/// `w_s(θ, ℘; τ)` from a fresh diagonalization at `ν = √α℘ - s/2`.
pub fn wigner_weight(s: i64, theta: f64, wp: f64, tau: f64, cfg: &ModelConfig) -> Result<Complex64> {
    cfg.validate()?;
    let trunc = cfg.truncations(tau);
    let nu = cfg.alpha.sqrt() * wp - 0.5 * s as f64;
    let spec = Spectrum::solve(nu, cfg.alpha, cfg.epsilon, trunc.half_width)?;
    let amps = spec.propagator(tau, &[0], trunc.s_max)?.remove(0);
    check_unitarity(&amps, nu, tau)?;
    let k = trunc.s_max as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for sp in -k..=k {
        let partner = s - sp;
        if partner.abs() > k {
            continue;
        }
        let term = amps[(sp + k) as usize] * amps[(partner + k) as usize].conj();
        acc += term * Complex64::from_polar(1.0, (2 * sp - s) as f64 * theta);
    }
    Ok(acc)
}

fn check_unitarity(amps: &[Complex64], nu: f64, tau: f64) -> Result<()> {
    let deficit = 1.0 - amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
    if deficit.abs() > UNITARITY_TOL {
        return Err(Error::Truncation(format!(
            "probability {deficit:.3e} beyond recoil_truncation at nu={nu}, tau={tau}; increase recoil_truncation"
        )));
    }
    Ok(())
}

/// Checks that the grid holds the beam (±5Δ℘) and the separatrix.
pub fn check_grid_extent(beam: &GaussianMomentum, grid: &PhaseSpaceGrid, epsilon: f64) -> Result<()> {
    let lo = (beam.mean - 5.0 * beam.spread).min(-2.0 * epsilon.sqrt());
    let hi = (beam.mean + 5.0 * beam.spread).max(2.0 * epsilon.sqrt());
    if grid.wp_min > lo || grid.wp_max < hi {
        return Err(Error::Domain(format!(
            "momentum grid [{}, {}] must contain [{lo}, {hi}] (beam ±5 spreads and separatrix)",
            grid.wp_min, grid.wp_max
        )));
    }
    Ok(())
}

/// Band data for one momentum node: spectra at `√α℘` and `√α℘ - 1/2`.
struct NodeSpectra {
    wp: f64,
    even: Spectrum,
    odd: Spectrum,
}

/// Wigner evolution with the band spectra cached per momentum node, so that
/// several times reuse one set of diagonalizations.
pub struct WignerEvolver {
    cfg: ModelConfig,
    beam: GaussianMomentum,
    grid: PhaseSpaceGrid,
    trunc: Truncations,
    tau_max: f64,
    nodes: Vec<NodeSpectra>,
}

impl WignerEvolver {
    /// Diagonalizes at every momentum node; truncations are sized for `tau_max`.
    pub fn new(cfg: &ModelConfig, beam: &GaussianMomentum, grid: &PhaseSpaceGrid, tau_max: f64) -> Result<Self> {
        cfg.validate()?;
        check_grid_extent(beam, grid, cfg.epsilon)?;
        if !(tau_max >= 0.0) || !tau_max.is_finite() {
            return Err(Error::Domain(format!("evolution time must be non-negative, got {tau_max}")));
        }
        let trunc = cfg.truncations(tau_max);
        let shift_reach = 2 * trunc.s_max;
        if (shift_reach / 2 + trunc.s_max) as i64 > trunc.half_width as i64 - 2 {
            return Err(Error::Truncation(format!(
                "mathieu_truncation {} cannot hold recoil shifts up to {shift_reach}; need at least {}",
                trunc.half_width,
                shift_reach / 2 + trunc.s_max + 2
            )));
        }
        let sqrt_alpha = cfg.alpha.sqrt();
        let nodes = grid
            .wps()
            .into_par_iter()
            .map(|wp| {
                let nu = sqrt_alpha * wp;
                Ok(NodeSpectra {
                    wp,
                    even: Spectrum::solve(nu, cfg.alpha, cfg.epsilon, trunc.half_width)?,
                    odd: Spectrum::solve(nu - 0.5, cfg.alpha, cfg.epsilon, trunc.half_width)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WignerEvolver { cfg: cfg.clone(), beam: *beam, grid: *grid, trunc, tau_max, nodes })
    }

    pub fn truncations(&self) -> Truncations {
        self.trunc
    }

    /// Fourier coefficients `C_h`, `h = -2K..=2K`·2, of `2π W(θ, ℘)` in θ at one node.
    fn harmonics(&self, node: &NodeSpectra, tau: f64) -> Result<Vec<Complex64>> {
        let k = self.trunc.s_max as i64;
        let shifts = 2 * k;
        let sqrt_alpha = self.cfg.alpha.sqrt();
        let peak = self.beam.density(self.beam.mean);

        let mut even_offsets = Vec::new();
        let mut odd_offsets = Vec::new();
        let mut weights = Vec::new();
        for s in -shifts..=shifts {
            let rho = self.beam.density(node.wp - s as f64 / (2.0 * sqrt_alpha));
            if rho < DENSITY_CUTOFF * peak {
                continue;
            }
            if s.rem_euclid(2) == 0 {
                even_offsets.push(-s / 2);
            } else {
                odd_offsets.push(-(s - 1) / 2);
            }
            weights.push((s, rho));
        }
        let even = self.columns(&node.even, tau, &even_offsets)?;
        let odd = self.columns(&node.odd, tau, &odd_offsets)?;

        let h_max = 2 * shifts;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (2 * h_max + 1) as usize];
        let (mut ie, mut io) = (0, 0);
        for (s, rho) in weights {
            let amps = if s.rem_euclid(2) == 0 {
                ie += 1;
                &even[ie - 1]
            } else {
                io += 1;
                &odd[io - 1]
            };
            for sp in (s - k).max(-k)..=(s + k).min(k) {
                let term = amps[(sp + k) as usize] * amps[(s - sp + k) as usize].conj();
                coeffs[(2 * sp - s + h_max) as usize] += term * rho;
            }
        }
        Ok(coeffs)
    }

    fn columns(&self, spec: &Spectrum, tau: f64, offsets: &[i64]) -> Result<Vec<Vec<Complex64>>> {
        let cols = spec.propagator(tau, offsets, self.trunc.s_max)?;
        for (col, &n) in cols.iter().zip(offsets) {
            check_unitarity(col, spec.nu + n as f64, tau)?;
        }
        Ok(cols)
    }

    /// Wigner field at time `tau` (≤ the `tau_max` given at construction).
    pub fn field_at(&self, tau: f64) -> Result<PhaseSpaceField> {
        if !(tau >= 0.0) || tau > self.tau_max * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "time {tau} outside [0, {}] covered by the cached truncation",
                self.tau_max
            )));
        }
        let thetas = self.grid.thetas();
        let columns = self
            .nodes
            .par_iter()
            .map(|node| {
                let coeffs = self.harmonics(node, tau)?;
                let h_max = (coeffs.len() / 2) as i64;
                let mut re = Vec::with_capacity(thetas.len());
                let mut residue = 0.0_f64;
                for &theta in &thetas {
                    let step = Complex64::from_polar(1.0, theta);
                    let mut phase = Complex64::from_polar(1.0, -(h_max as f64) * theta);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for c in &coeffs {
                        acc += c * phase;
                        phase *= step;
                    }
                    residue = residue.max(acc.im.abs());
                    re.push(acc.re / TAU);
                }
                Ok((re, residue / TAU))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut values = Array2::zeros((self.grid.n_theta, self.grid.n_wp));
        let mut max_abs = 0.0_f64;
        let mut max_residue = 0.0_f64;
        for (j, (col, residue)) in columns.iter().enumerate() {
            max_residue = max_residue.max(*residue);
            for (i, v) in col.iter().enumerate() {
                values[[i, j]] = *v;
                max_abs = max_abs.max(v.abs());
            }
        }
        if max_residue > REALITY_TOL * max_abs.max(f64::MIN_POSITIVE) {
            return Err(Error::Truncation(format!(
                "Wigner sum has imaginary residue {max_residue:.3e} against peak {max_abs:.3e}"
            )));
        }
        Ok(PhaseSpaceField { grid: self.grid, values, kind: FieldKind::Quantum, time: tau })
    }
}

/// One-shot Wigner evolution to time `tau`.
pub fn evolve_wigner(
    beam: &GaussianMomentum,
    grid: &PhaseSpaceGrid,
    tau: f64,
    cfg: &ModelConfig,
) -> Result<PhaseSpaceField> {
    WignerEvolver::new(cfg, beam, grid, tau)?.field_at(tau)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Marginals {
    pub theta: Vec<f64>,
    pub p_theta: Vec<f64>,
    pub wp: Vec<f64>,
    pub p_wp: Vec<f64>,
}

/// Position and momentum marginals by trapezoidal quadrature.
pub fn marginals(field: &PhaseSpaceField) -> Marginals {
    let grid = &field.grid;
    let dtheta = grid.d_theta();
    let w = grid.wp_weights();
    let p_theta = field
        .values
        .outer_iter()
        .map(|row| row.iter().zip(&w).map(|(v, wj)| v * wj).sum())
        .collect();
    let p_wp = field.values.columns().into_iter().map(|col| col.sum() * dtheta).collect();
    Marginals { theta: grid.thetas(), p_theta, wp: grid.wps(), p_wp }
}
