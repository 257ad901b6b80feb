//! First-order short-time solutions for a Gaussian beam.
//!
//! To first order in the potential, both the Wigner function and the
//! classical distribution pick up the kick profile
//! `g(θ, ℘; τ) = ε[cos(θ - ℘τ) - cos θ]/℘` times a momentum derivative of
//! `ρ`. Classically this is `-∂ρ/∂℘`; quantum mechanically it is the
//! recoil-split difference `[ρ(℘-ħk) - ρ(℘+ħk)]/(2ħk)`. For a Gaussian the
//! ratio of the two is `1 + Q(ξ)`, a Hermite series in the relative
//! momentum `ξ`.

use std::f64::consts::{SQRT_2, TAU};

use ndarray::Array2;
use serde::Serialize;

use crate::scaling::{FieldKind, GaussianMomentum, PhaseSpaceField, PhaseSpaceGrid};
use crate::special::{hermite_odd_over_x, sinc};

/// Relative size of the last retained term that counts as converged.
const SERIES_STOP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    /// Whether the last retained term fell below 1e-12 of the partial sum.
    pub converged: bool,
}

/// `Q(ξ) = Σ_{m=1..M} t^{2m}/(2m+1)! · H_{2m+1}(ξ)/H_1(ξ)` with `t = ħk/(√2 Δp)`.
pub fn q_series(xi: f64, t: f64, terms: usize) -> SeriesValue {
    let reduced = hermite_odd_over_x(terms, xi);
    let h1 = reduced[0];
    let t2 = t * t;
    let mut weight = 1.0;
    let mut sum = 0.0;
    let mut last = 0.0;
    for (m, r) in reduced.iter().enumerate().skip(1) {
        weight *= t2 / ((2 * m) as f64 * (2 * m + 1) as f64);
        last = weight * r / h1;
        sum += last;
    }
    let converged = last.abs() <= SERIES_STOP * (1.0 + sum).abs().max(f64::MIN_POSITIVE);
    SeriesValue { value: sum, converged }
}

/// Resummed `1 + Q(ξ) = e^{-t²} sinh(2ξt)/(2ξt)`.
pub fn one_plus_q_closed(xi: f64, t: f64) -> f64 {
    let x = 2.0 * xi * t;
    let ratio = if x.abs() < 1e-4 { 1.0 + x * x / 6.0 } else { x.sinh() / x };
    (-t * t).exp() * ratio
}

/// Kick profile `ε[cos(θ - ℘τ) - cos θ]/℘`, written without the removable
/// singularity at `℘τ = 0`: `ετ[sin θ·sinc(x) - cos θ·(x/2)·sinc²(x/2)]`.
pub fn kick_profile(theta: f64, wp: f64, tau: f64, epsilon: f64) -> f64 {
    let x = wp * tau;
    let half = sinc(0.5 * x);
    epsilon * tau * (theta.sin() * sinc(x) - theta.cos() * 0.5 * x * half * half)
}

/// Zeroth order: the initial distribution `ρ(℘)/(2π)`.
pub fn w0(beam: &GaussianMomentum, wp: f64) -> f64 {
    beam.density(wp) / TAU
}

/// Classical first order `g · H₁(ξ)/(√2Δ℘) · ρ/(2π)`.
pub fn fcl1(theta: f64, wp: f64, tau: f64, epsilon: f64, beam: &GaussianMomentum) -> f64 {
    let xi = beam.relative(wp);
    kick_profile(theta, wp, tau, epsilon) * 2.0 * xi / (SQRT_2 * beam.spread) * beam.density(wp) / TAU
}

/// Quantum first order
/// `g · 2√α e^{-(ħk/Δp)²/2} sinh[(ħk/Δp)(℘ - ⍵̄)/Δ℘] · ρ/(2π)`.
pub fn w1_closed(theta: f64, wp: f64, tau: f64, epsilon: f64, beam: &GaussianMomentum, alpha: f64) -> f64 {
    let sqrt_alpha = alpha.sqrt();
    let ratio = 1.0 / (2.0 * sqrt_alpha * beam.spread);
    let factor = 2.0 * sqrt_alpha
        * (-0.5 * ratio * ratio).exp()
        * (ratio * (wp - beam.mean) / beam.spread).sinh();
    kick_profile(theta, wp, tau, epsilon) * factor * beam.density(wp) / TAU
}

/// `fcl1 · (1 + Q)` with the truncated Hermite series.
pub fn w1_series(
    theta: f64,
    wp: f64,
    tau: f64,
    epsilon: f64,
    beam: &GaussianMomentum,
    alpha: f64,
    terms: usize,
) -> f64 {
    let t = 1.0 / (2.0 * SQRT_2 * alpha.sqrt() * beam.spread);
    let q = q_series(beam.relative(wp), t, terms).value;
    fcl1(theta, wp, tau, epsilon, beam) * (1.0 + q)
}

/// First-order correction sampled on a grid; `alpha = None` gives the
/// classical term.
pub fn first_order_field(
    beam: &GaussianMomentum,
    grid: &PhaseSpaceGrid,
    tau: f64,
    epsilon: f64,
    alpha: Option<f64>,
) -> PhaseSpaceField {
    let values = Array2::from_shape_fn((grid.n_theta, grid.n_wp), |(i, j)| {
        let (theta, wp) = (grid.theta(i), grid.wp(j));
        match alpha {
            Some(a) => w1_closed(theta, wp, tau, epsilon, beam, a),
            None => fcl1(theta, wp, tau, epsilon, beam),
        }
    });
    let kind = if alpha.is_some() { FieldKind::Quantum } else { FieldKind::Classical };
    PhaseSpaceField { grid: *grid, values, kind, time: tau }
}
