//! Classical Liouville flow of the pendulum `θ̇ = ℘`, `℘̇ = ε sin θ`.
//!
//! Trajectories are evaluated in closed form with Jacobi elliptic functions.
//! With `φ = θ - π` the motion is a standard pendulum about `φ = 0` with
//! energy `E = ℘²/2 + 2ε sin²(φ/2) = H + ε`. Libration (`E < 2ε`) uses the
//! parameter `m = E/(2ε)`, rotation (`E > 2ε`) the reciprocal `2ε/E`, and the
//! separatrix the hyperbolic limit.

use std::f64::consts::{PI, TAU};

use ndarray::Array2;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scaling::{FieldKind, GaussianMomentum, PhaseSpaceField, PhaseSpaceGrid};
use crate::special::{incomplete_f, jacobi_elliptic};

/// Relative width of the band around `H = ε` treated as the separatrix.
pub const SEPARATRIX_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PendulumState {
    pub theta: f64,
    pub wp: f64,
}

impl PendulumState {
    pub fn new(theta: f64, wp: f64) -> Self {
        PendulumState { theta, wp }
    }

    /// `H = ℘²/2 + ε cos θ`.
    pub fn energy(&self, epsilon: f64) -> f64 {
        0.5 * self.wp * self.wp + epsilon * self.theta.cos()
    }
}

/// Wrap an angle to `[0, 2π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Wrap to `(-π, π]`.
fn wrap_centered(x: f64) -> f64 {
    let r = wrap_angle(x + PI) - PI;
    if r == -PI {
        PI
    } else {
        r
    }
}

/// Upper branch of the separatrix, `℘ = 2√ε |sin(θ/2)|`.
pub fn separatrix(theta: f64, epsilon: f64) -> f64 {
    2.0 * epsilon.max(0.0).sqrt() * (0.5 * theta).sin().abs()
}

/// Exact state after time `tau` (any sign). `θ` is returned in `[0, 2π)`.
pub fn pendulum_flow(state: PendulumState, tau: f64, epsilon: f64) -> Result<PendulumState> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::Domain(format!("epsilon must be non-negative, got {epsilon}")));
    }
    if epsilon == 0.0 {
        return Ok(PendulumState::new(wrap_angle(state.theta + state.wp * tau), state.wp));
    }
    let sqrt_eps = epsilon.sqrt();
    let phi0 = wrap_centered(state.theta - PI);
    let half_sin = (0.5 * phi0).sin();
    let p0 = state.wp;
    let energy = 0.5 * p0 * p0 + 2.0 * epsilon * half_sin * half_sin;
    let sigma = if p0 >= 0.0 { 1.0 } else { -1.0 };

    let (phi, p) = if (energy - 2.0 * epsilon).abs() < SEPARATRIX_TOL * epsilon {
        if p0 == 0.0 || half_sin.abs() >= 1.0 {
            // Unstable equilibrium.
            (phi0, p0)
        } else {
            let u = sqrt_eps * tau + (sigma * half_sin).atanh();
            ((sigma * u.tanh()).asin() * 2.0, sigma * 2.0 * sqrt_eps / u.cosh())
        }
    } else if energy < 2.0 * epsilon {
        let m = energy / (2.0 * epsilon);
        let k = m.sqrt();
        if k == 0.0 {
            (phi0, p0)
        } else {
            // sn(u0) = sin(φ0/2)/k, cn(u0) = ℘0/(2k√ε)
            let am0 = half_sin.atan2(p0 / (2.0 * sqrt_eps));
            let u = sqrt_eps * tau + incomplete_f(am0, m)?;
            let j = jacobi_elliptic(u, m)?;
            (2.0 * (k * j.sn).atan2(j.dn), 2.0 * k * sqrt_eps * j.cn)
        }
    } else {
        let m = 2.0 * epsilon / energy;
        let v = (0.5 * energy).sqrt() * tau + incomplete_f(sigma * 0.5 * phi0, m)?;
        let j = jacobi_elliptic(v, m)?;
        (2.0 * sigma * j.am, sigma * (2.0 * energy).sqrt() * j.dn)
    };
    Ok(PendulumState::new(wrap_angle(phi + PI), p))
}

/// Classical distribution at time `tau` by pulling every node back along its
/// trajectory: `f(θ, ℘; τ) = ρ(℘₀)/(2π)` with `(θ₀, ℘₀)` the state at `-τ`.
pub fn evolve_classical(
    beam: &GaussianMomentum,
    grid: &PhaseSpaceGrid,
    tau: f64,
    epsilon: f64,
) -> Result<PhaseSpaceField> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::Domain(format!("evolution time must be non-negative, got {tau}")));
    }
    let wps = grid.wps();
    let rows: Result<Vec<Vec<f64>>> = (0..grid.n_theta)
        .into_par_iter()
        .map(|i| {
            let theta = grid.theta(i);
            wps.iter()
                .map(|&wp| {
                    let back = pendulum_flow(PendulumState::new(theta, wp), -tau, epsilon)?;
                    Ok(beam.density(back.wp) / TAU)
                })
                .collect()
        })
        .collect();
    let flat: Vec<f64> = rows?.into_iter().flatten().collect();
    let values = Array2::from_shape_vec((grid.n_theta, grid.n_wp), flat)
        .expect("row lengths match the grid");
    Ok(PhaseSpaceField { grid: *grid, values, kind: FieldKind::Classical, time: tau })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn angle_gap(a: f64, b: f64) -> f64 {
        wrap_centered(a - b).abs()
    }

    #[test]
    fn fixed_points_stay() {
        let stable = pendulum_flow(PendulumState::new(PI, 0.0), 3.7, 1.0).unwrap();
        assert!(angle_gap(stable.theta, PI) < 1e-15 && stable.wp == 0.0);
        let unstable = pendulum_flow(PendulumState::new(0.0, 0.0), 3.7, 1.0).unwrap();
        assert!(angle_gap(unstable.theta, 0.0) < 1e-15 && unstable.wp == 0.0);
    }

    #[test]
    fn small_oscillation_half_period() {
        let end = pendulum_flow(PendulumState::new(PI + 0.001, 0.0), PI, 1.0).unwrap();
        assert!(angle_gap(end.theta, PI - 0.001) < 1e-5);
        assert!(end.wp.abs() < 1e-5);
    }

    #[test]
    fn free_flight_without_field() {
        let end = pendulum_flow(PendulumState::new(1.0, 0.5), 2.0, 0.0).unwrap();
        assert!((end.theta - 2.0).abs() < 1e-15 && end.wp == 0.5);
    }

    #[test]
    fn energy_and_reversal_on_all_branches() {
        let eps: f64 = 1.3;
        let starts = [
            (PI + 0.4, 0.3),
            (0.2, 0.1),
            (2.0, -2.9),
            (5.0, 3.5),
            (0.0, 2.0 * eps.sqrt()),
            (PI, -2.0 * eps.sqrt()),
        ];
        for &(t, p) in &starts {
            let s = PendulumState::new(t, p);
            for &tau in &[0.3, -1.1, PI, 7.5] {
                let e = pendulum_flow(s, tau, eps).unwrap();
                assert!((e.energy(eps) - s.energy(eps)).abs() < 1e-10, "start {t},{p} tau {tau}");
                let back = pendulum_flow(e, -tau, eps).unwrap();
                assert!(angle_gap(back.theta, t) < 1e-9 && (back.wp - p).abs() < 1e-9, "start {t},{p} tau {tau}");
            }
        }
    }

    #[test]
    fn separatrix_orbit_approaches_unstable_point() {
        let s = PendulumState::new(PI, 2.0);
        let late = pendulum_flow(s, 30.0, 1.0).unwrap();
        assert!(angle_gap(late.theta, TAU) < 1e-9);
        assert!(late.wp.abs() < 1e-9);
    }

    #[test]
    fn separatrix_level_set() {
        for i in 0..16 {
            let t = i as f64 * 0.4;
            let wp = separatrix(t, 2.0);
            assert!((PendulumState::new(t, wp).energy(2.0) - 2.0).abs() < 1e-13);
        }
        assert_eq!(separatrix(0.0, 1.0), 0.0);
        assert!((separatrix(PI, 1.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn classical_field_at_zero_time() {
        let beam = GaussianMomentum::new(0.3, 0.5).unwrap();
        let grid = PhaseSpaceGrid::covering(&beam, 1.0, 10.0, 16, 33).unwrap();
        let f = evolve_classical(&beam, &grid, 0.0, 1.0).unwrap();
        for ((i, j), v) in f.values.indexed_iter() {
            let _ = i;
            assert!((v - beam.density(grid.wp(j)) / TAU).abs() < 1e-15);
        }
    }
}
