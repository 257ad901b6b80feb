//! Dimensionless model parameters, the Gaussian beam, the phase-space grid
//! and the conversions between laboratory and dimensionless quantities.
//!
//! Dimensionless variables: position `θ` (period 2π), momentum `℘` in units
//! of `sqrt(U₀ m)` and time `τ`. The quantum parameter `α` is the ratio of
//! the pendulum potential height to the recoil energy, so one photon recoil
//! `2ħk` equals `1/√α` in `℘` and the recoil ratio is
//! `ħk/Δp = 1/(2√α Δ℘)`.

use std::f64::consts::PI;

use ndarray::Array2;
use serde::Serialize;

use crate::constants::{SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};
use crate::error::{Error, Result};

/// Default number of Hermite terms in the quantum-correction series.
pub const DEFAULT_SERIES_TERMS: usize = 8;

/// Run parameters shared by the quantum and classical evolutions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelConfig {
    /// Quantum parameter α (> 0).
    pub alpha: f64,
    /// Normalized laser amplitude ε, frozen during a run.
    pub epsilon: f64,
    /// Field-electron coupling χ (≥ 0).
    pub chi: f64,
    /// Evaluation times τ (≥ 0).
    pub times: Vec<f64>,
    /// Mathieu basis half-width R; `None` picks the heuristic.
    pub mathieu_truncation: Option<usize>,
    /// Largest recoil index kept in a scattering table; `None` picks the heuristic.
    pub recoil_truncation: Option<usize>,
    /// Number of terms M in the Hermite / gain series.
    pub series_terms: usize,
}

/// Truncations resolved for one evaluation time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Truncations {
    pub half_width: usize,
    pub s_max: usize,
}

impl ModelConfig {
    pub fn new(alpha: f64, epsilon: f64) -> Self {
        ModelConfig {
            alpha,
            epsilon,
            chi: 1.0,
            times: Vec::new(),
            mathieu_truncation: None,
            recoil_truncation: None,
            series_terms: DEFAULT_SERIES_TERMS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::Domain(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.epsilon >= 0.0) || !self.epsilon.is_finite() {
            return Err(Error::Domain(format!("epsilon must be non-negative, got {}", self.epsilon)));
        }
        if !(self.chi >= 0.0) || !self.chi.is_finite() {
            return Err(Error::Domain(format!("chi must be non-negative, got {}", self.chi)));
        }
        if let Some(t) = self.times.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
            return Err(Error::Domain(format!("times must be non-negative, got {t}")));
        }
        if self.mathieu_truncation == Some(0) {
            return Err(Error::Domain("mathieu_truncation must be >= 1".into()));
        }
        if self.recoil_truncation == Some(0) {
            return Err(Error::Domain("recoil_truncation must be >= 1".into()));
        }
        if self.series_terms == 0 {
            return Err(Error::Domain("series_terms must be >= 1".into()));
        }
        Ok(())
    }

    /// Truncations for an evolution up to time `tau`.
    ///
    /// The momentum transferred to an electron is bounded by the separatrix
    /// width `4√ε` and by the impulse `ετ`; in recoil units this is
    /// `√α·min(4√ε, ετ)`, padded by 8 for the quantum tails. The Wigner sum
    /// needs amplitudes at exponents shifted by up to `s_max`, hence the
    /// basis must reach `2 s_max` plus an edge margin.
    pub fn truncations(&self, tau: f64) -> Truncations {
        let sqrt_alpha = self.alpha.sqrt();
        let kick = (4.0 * self.epsilon.sqrt()).min(self.epsilon * tau.abs());
        let s_max = self
            .recoil_truncation
            .unwrap_or_else(|| (sqrt_alpha * kick).ceil() as usize + 8);
        let half_width = self
            .mathieu_truncation
            .unwrap_or_else(|| (2 * s_max + (2.0 * sqrt_alpha).ceil() as usize + 8).max(12));
        Truncations { half_width, s_max }
    }
}

/// Gaussian initial momentum distribution `ρ(℘)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianMomentum {
    /// Mean momentum ⍵̄.
    pub mean: f64,
    /// Standard deviation Δ℘ (> 0).
    pub spread: f64,
}

impl GaussianMomentum {
    pub fn new(mean: f64, spread: f64) -> Result<Self> {
        if !(spread > 0.0) || !spread.is_finite() || !mean.is_finite() {
            return Err(Error::Domain(format!(
                "Gaussian beam needs finite mean and positive spread, got ({mean}, {spread})"
            )));
        }
        Ok(GaussianMomentum { mean, spread })
    }

    pub fn density(&self, wp: f64) -> f64 {
        let z = (wp - self.mean) / self.spread;
        (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * self.spread)
    }

    /// Relative momentum `ξ = (℘ - ⍵̄)/(√2 Δ℘)`.
    pub fn relative(&self, wp: f64) -> f64 {
        (wp - self.mean) / (std::f64::consts::SQRT_2 * self.spread)
    }
}

/// Uniform grid: `θ` periodic on `[0, 2π)`, `℘` closed on `[wp_min, wp_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseSpaceGrid {
    pub n_theta: usize,
    pub n_wp: usize,
    pub wp_min: f64,
    pub wp_max: f64,
}

impl PhaseSpaceGrid {
    pub fn new(n_theta: usize, n_wp: usize, wp_min: f64, wp_max: f64) -> Result<Self> {
        if n_theta < 8 || n_wp < 8 {
            return Err(Error::Domain(format!(
                "grid needs at least 8 nodes per axis, got {n_theta}x{n_wp}"
            )));
        }
        if !(wp_min < wp_max) || !wp_min.is_finite() || !wp_max.is_finite() {
            return Err(Error::Domain(format!("invalid momentum span [{wp_min}, {wp_max}]")));
        }
        Ok(PhaseSpaceGrid { n_theta, n_wp, wp_min, wp_max })
    }

    /// Grid spanning the beam (±6Δ℘) plus the larger of the separatrix
    /// half-width `2√ε` and three photon recoils `3/√α`, with a 0.5 margin.
    pub fn covering(
        beam: &GaussianMomentum,
        epsilon: f64,
        alpha: f64,
        n_theta: usize,
        n_wp: usize,
    ) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
        }
        let transfer = (2.0 * epsilon.sqrt()).max(3.0 / alpha.sqrt());
        let reach = 6.0 * beam.spread + transfer + 0.5;
        PhaseSpaceGrid::new(
            n_theta,
            n_wp,
            beam.mean.min(0.0) - reach,
            beam.mean.max(0.0) + reach,
        )
    }

    pub fn d_theta(&self) -> f64 {
        2.0 * PI / self.n_theta as f64
    }

    pub fn d_wp(&self) -> f64 {
        (self.wp_max - self.wp_min) / (self.n_wp - 1) as f64
    }

    /// θ node `i`; indices wrap modulo `n_theta`.
    pub fn theta(&self, i: usize) -> f64 {
        (i % self.n_theta) as f64 * self.d_theta()
    }

    pub fn wp(&self, j: usize) -> f64 {
        self.wp_min + j as f64 * self.d_wp()
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.n_theta).map(|i| self.theta(i)).collect()
    }

    pub fn wps(&self) -> Vec<f64> {
        (0..self.n_wp).map(|j| self.wp(j)).collect()
    }

    /// Trapezoidal weights along `℘` (half weight at both ends).
    pub fn wp_weights(&self) -> Vec<f64> {
        let h = self.d_wp();
        (0..self.n_wp)
            .map(|j| if j == 0 || j + 1 == self.n_wp { 0.5 * h } else { h })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Quantum,
    Classical,
}

/// A distribution sampled on a [`PhaseSpaceGrid`]; `values[[i, j]]` is the
/// value at `(θ_i, ℘_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceField {
    pub grid: PhaseSpaceGrid,
    pub values: Array2<f64>,
    pub kind: FieldKind,
    pub time: f64,
}

impl PhaseSpaceField {
    /// Trapezoidal integral of `weight(θ, ℘)·value` over the grid.
    pub fn integrate_with(&self, weight: impl Fn(f64, f64) -> f64) -> f64 {
        let dtheta = self.grid.d_theta();
        let wp_w = self.grid.wp_weights();
        let wps = self.grid.wps();
        let mut total = 0.0;
        for (i, row) in self.values.outer_iter().enumerate() {
            let theta = self.grid.theta(i);
            for (j, v) in row.iter().enumerate() {
                total += wp_w[j] * weight(theta, wps[j]) * v;
            }
        }
        total * dtheta
    }

    pub fn mass(&self) -> f64 {
        self.integrate_with(|_, _| 1.0)
    }

    /// First momentum moment `∬ ℘ W`.
    pub fn mean_momentum(&self) -> f64 {
        self.integrate_with(|_, wp| wp)
    }

    pub fn check_normalization(&self, tol: f64) -> Result<()> {
        let mass = self.mass();
        if (mass - 1.0).abs() > tol {
            return Err(Error::Domain(format!("field mass {mass} outside 1 ± {tol}")));
        }
        Ok(())
    }

    pub fn same_grid(&self, other: &PhaseSpaceField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        Ok(())
    }
}

/// Laboratory-frame inputs for χ and the decoherence time scales (SI units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LabParameters {
    /// Electron density n_el [1/m³].
    pub electron_density: f64,
    /// Laser wave number k [1/m].
    pub wave_number: f64,
    /// Initial laser field E₀ [V/m].
    pub initial_field: f64,
    /// Wiggler field B₀ [T].
    pub wiggler_field: f64,
    /// Wiggler wavelength λ_W [m].
    pub wiggler_wavelength: f64,
    /// Wiggler parameter a₀.
    pub wiggler_parameter: f64,
    /// Relativistic factor γ.
    pub gamma: f64,
}

impl LabParameters {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("electron_density", self.electron_density),
            ("wave_number", self.wave_number),
            ("initial_field", self.initial_field),
            ("wiggler_field", self.wiggler_field),
            ("wiggler_wavelength", self.wiggler_wavelength),
            ("wiggler_parameter", self.wiggler_parameter),
            ("gamma", self.gamma),
        ];
        for (name, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedRatios {
    /// Recoil over momentum spread, `ħk/Δp`.
    pub hk_over_dp: f64,
    /// Recoil parameter `ω_r t`.
    pub recoil_parameter: f64,
}

/// `ħk/Δp = 1/(2√α Δ℘)` and `ω_r t = τ/(2√α)`.
pub fn derived_ratios(alpha: f64, beam: &GaussianMomentum, tau: f64) -> Result<DerivedRatios> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    if !(beam.spread > 0.0) {
        return Err(Error::Domain(format!("momentum spread must be positive, got {}", beam.spread)));
    }
    let two_sqrt_alpha = 2.0 * alpha.sqrt();
    Ok(DerivedRatios {
        hk_over_dp: 1.0 / (two_sqrt_alpha * beam.spread),
        recoil_parameter: tau / two_sqrt_alpha,
    })
}

/// Coupling `χ = n_el √(c B₀) / (4 k ε₀ E₀^{3/2})`.
pub fn compute_chi(lab: &LabParameters) -> Result<f64> {
    lab.validate()?;
    Ok(lab.electron_density * (SPEED_OF_LIGHT * lab.wiggler_field).sqrt()
        / (4.0 * lab.wave_number * VACUUM_PERMITTIVITY * lab.initial_field.powf(1.5)))
}
