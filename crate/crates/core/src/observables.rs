//! Observables that couple the electrons to the laser field, and the
//! quantum-classical distance.
//!
//! Sign convention: the gain is the relative field change, equal to
//! `-χ` times the change of the mean momentum. Electrons above resonance
//! (`⍵̄ > 0`) lose momentum and amplify the field.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scaling::{GaussianMomentum, PhaseSpaceField};
use crate::special::{hermite, sinc, sinc2_half_derivative};

/// `dε/dτ = -χ ∬ W sin θ`.
pub fn field_rate(field: &PhaseSpaceField, chi: f64) -> f64 {
    -chi * field.integrate_with(|theta, _| theta.sin())
}

/// `G = -χ (⟨℘⟩_τ - ⟨℘⟩_0)`.
pub fn gain_from_momentum(field_tau: &PhaseSpaceField, field_0: &PhaseSpaceField, chi: f64) -> Result<f64> {
    field_tau.same_grid(field_0)?;
    Ok(-chi * (field_tau.mean_momentum() - field_0.mean_momentum()))
}

/// `d_cl = sqrt(∬(W - f)² / ∬(W² + f²))`.
pub fn distance_dcl(w: &PhaseSpaceField, f: &PhaseSpaceField) -> Result<f64> {
    w.same_grid(f)?;
    let dtheta = w.grid.d_theta();
    let weights = w.grid.wp_weights();
    let mut num = 0.0;
    let mut den = 0.0;
    for (rw, rf) in w.values.outer_iter().zip(f.values.outer_iter()) {
        for ((a, b), wj) in rw.iter().zip(rf.iter()).zip(&weights) {
            num += wj * (a - b) * (a - b);
            den += wj * (a * a + b * b);
        }
    }
    if den == 0.0 {
        return Err(Error::Domain("distance undefined: both fields vanish".into()));
    }
    Ok((num * dtheta / (den * dtheta)).sqrt())
}

/// `∂ⁿρ/∂℘ⁿ = (-1/(√2Δ℘))ⁿ H_n(ξ) ρ`.
fn gaussian_derivative(beam: &GaussianMomentum, n: usize, wp: f64) -> f64 {
    let scale = -1.0 / (SQRT_2 * beam.spread);
    scale.powi(n as i32) * hermite(n, beam.relative(wp)) * beam.density(wp)
}

/// Small-signal gain for a Gaussian beam,
/// `G = (χτ²/4) Σ_{m=0..M} (4α)^{-m}/(2m+1)! ∫ sinc²(℘τ/2) ∂^{2m+1}ρ d℘`.
///
/// The integral runs over `⍵̄ ± 12Δ℘` with double-exponential quadrature on
/// panels that resolve both the beam and the sinc² lobes.
pub fn gain_small_signal(beam: &GaussianMomentum, tau: f64, alpha: f64, chi: f64, terms: usize) -> Result<f64> {
    if !(tau > 0.0) || !(alpha > 0.0) {
        return Err(Error::Domain(format!("gain needs tau > 0 and alpha > 0 (tau={tau}, alpha={alpha})")));
    }
    let mut coeffs = Vec::with_capacity(terms + 1);
    let mut c = 1.0;
    for m in 0..=terms {
        if m > 0 {
            c /= 4.0 * alpha * (2 * m) as f64 * (2 * m + 1) as f64;
        }
        coeffs.push(c);
    }
    let integrand = |wp: f64| {
        let s = sinc(0.5 * wp * tau);
        let series: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| c * gaussian_derivative(beam, 2 * m + 1, wp))
            .sum();
        s * s * series
    };
    let lo = beam.mean - 12.0 * beam.spread;
    let hi = beam.mean + 12.0 * beam.spread;
    // Panels no wider than half a sinc² lobe or half a spread, each
    // integrated adaptively.
    let width = (PI / tau).min(beam.spread) * 0.5;
    let panels = ((hi - lo) / width).ceil().max(1.0) as usize;
    let h = (hi - lo) / panels as f64;
    // ∫|ρ'| ~ 1/Δ℘ sets the scale of the integral.
    let target = 1e-13 / beam.spread / panels as f64;
    let mut integral = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    for k in 0..panels {
        let a = lo + k as f64 * h;
        let out = quadrature::integrate(integrand, a, a + h, target);
        integral += out.integral;
        error += out.error_estimate;
        evaluations += out.num_function_evaluations;
    }
    if !integral.is_finite() || error > 1e3 * target * panels as f64 {
        return Err(Error::Quadrature(format!(
            "gain integral over [{lo}, {hi}] reached error {error:.3e} after {evaluations} evaluations"
        )));
    }
    Ok(0.25 * chi * tau * tau * integral)
}

/// Cold-beam gain
/// `G = -(χτ³/4) Σ_{m=0..M} (ω_r t)^{2m}/(2m+1)! · d^{2m+1}/dx^{2m+1} sinc²(x/2)` at `x = ⍵̄τ`,
/// with `ω_r t = τ/(2√α)`.
pub fn gain_cold(wp_bar: f64, tau: f64, alpha: f64, chi: f64, terms: usize) -> f64 {
    let recoil = tau / (2.0 * alpha.sqrt());
    gain_cold_with_recoil(wp_bar * tau, tau, recoil, chi, terms)
}

/// Cold-beam gain parametrized directly by `x = ⍵̄τ` and `ω_r t`.
pub fn gain_cold_with_recoil(x: f64, tau: f64, recoil: f64, chi: f64, terms: usize) -> f64 {
    let r2 = recoil * recoil;
    let mut weight = 1.0;
    let mut sum = 0.0;
    for m in 0..=terms {
        if m > 0 {
            weight *= r2 / ((2 * m) as f64 * (2 * m + 1) as f64);
        }
        sum += weight * sinc2_half_derivative(2 * m + 1, x);
    }
    -0.25 * chi * tau.powi(3) * sum
}

/// Warm-beam gain
/// `G = (πχτρ(0)/(2√2Δ℘)) Σ_{m=0..M} t^{2m}/(2m+1)! H_{2m+1}(⍵̄/(√2Δ℘))`
/// with `t = ħk/(√2Δp)`.
pub fn gain_warm(beam: &GaussianMomentum, tau: f64, chi: f64, hk_over_dp: f64, terms: usize) -> f64 {
    let u = beam.mean / (SQRT_2 * beam.spread);
    let t = hk_over_dp / SQRT_2;
    let t2 = t * t;
    let mut weight = 1.0;
    let mut sum = 0.0;
    for m in 0..=terms {
        if m > 0 {
            weight *= t2 / ((2 * m) as f64 * (2 * m + 1) as f64);
        }
        sum += weight * hermite(2 * m + 1, u);
    }
    PI * chi * tau * beam.density(0.0) / (2.0 * SQRT_2 * beam.spread) * sum
}

/// Which formula produced a [`GainCurve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GainVariant {
    Classical,
    QuantumCorrected { terms: usize },
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GainCurve {
    pub abscissa: String,
    pub variant: GainVariant,
    pub samples: Vec<(f64, f64)>,
}
