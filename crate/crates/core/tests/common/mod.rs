//! Independent reference computations for the integration tests.
//!
//! Nothing here calls into the eigen-solver, the elliptic functions or the
//! closed-form flow of the library.

#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;

/// Characteristic value `a₀(q)` of the π-periodic even Mathieu function from
/// the continued fraction `a = 2q²/(a - 4 - q²/(a - 16 - q²/(a - 36 - …)))`
/// truncated after `depth` levels, solved by bisection on `[-2q - 1, 1]`.
pub fn mathieu_a0(q: f64, depth: usize) -> f64 {
    let residual = |a: f64| {
        let mut tail = 0.0;
        for r in (1..=depth).rev() {
            let level = (2 * r) as f64;
            tail = q * q / (a - level * level - tail);
        }
        a - 2.0 * tail
    };
    let (mut lo, mut hi) = (-2.0 * q - 1.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Dormand-Prince 5(4) with step-size control; returns the state at `t1`.
pub fn dopri45(f: impl Fn(f64, &[f64]) -> Vec<f64>, t0: f64, y0: &[f64], t1: f64, tol: f64) -> Vec<f64> {
    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let dir = (t1 - t0).signum();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut h = dir * (t1 - t0).abs().min(1e-3);
    if h == 0.0 {
        return y;
    }
    let n = y.len();
    while dir * (t1 - t) > 0.0 {
        if dir * (t + h - t1) > 0.0 {
            h = t1 - t;
        }
        let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
        for stage in 0..7 {
            let mut ys = y.clone();
            for (prev, kp) in k.iter().enumerate() {
                let a = A[stage][prev];
                if a != 0.0 {
                    for i in 0..n {
                        ys[i] += h * a * kp[i];
                    }
                }
            }
            k.push(f(t + C[stage] * h, &ys));
        }
        let mut err: f64 = 0.0;
        let mut next = y.clone();
        for i in 0..n {
            let mut hi = 0.0;
            let mut lo = 0.0;
            for stage in 0..7 {
                hi += B5[stage] * k[stage][i];
                lo += B4[stage] * k[stage][i];
            }
            next[i] += h * hi;
            let scale = tol * (1.0 + y[i].abs().max(next[i].abs()));
            err = err.max((h * (hi - lo)).abs() / scale);
        }
        if err <= 1.0 {
            t += h;
            y = next;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
    }
    y
}

/// Pendulum `θ̇ = ℘`, `℘̇ = ε sin θ` integrated numerically.
pub fn pendulum_ode(theta: f64, wp: f64, tau: f64, epsilon: f64) -> (f64, f64) {
    let y = dopri45(|_, y| vec![y[1], epsilon * y[0].sin()], 0.0, &[theta, wp], tau, 1e-13);
    (y[0], y[1])
}

/// Jacobi `(sn, cn, dn)` by inverting `F(φ|m) = u` with Simpson quadrature
/// of the defining integral and Newton iteration on the amplitude.
pub fn jacobi_by_quadrature(u: f64, m: f64) -> (f64, f64, f64) {
    let integral = |phi: f64| {
        let n = 4000;
        let h = phi / n as f64;
        let g = |x: f64| 1.0 / (1.0 - m * x.sin().powi(2)).sqrt();
        let mut s = g(0.0) + g(phi);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * g(i as f64 * h);
        }
        s * h / 3.0
    };
    let mut phi = u;
    for _ in 0..50 {
        let step = (integral(phi) - u) * (1.0 - m * phi.sin().powi(2)).sqrt();
        phi -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    (phi.sin(), phi.cos(), (1.0 - m * phi.sin().powi(2)).sqrt())
}

/// `|S_{-1}|²` for the two plane waves `ν` and `ν - 1` coupled by `α`,
/// evolved with the phase `exp(-iℰτ/(2√α))`.
pub fn two_level_transfer(nu: f64, alpha: f64, tau: f64) -> f64 {
    let detuning = 0.5 * (nu * nu - (nu - 1.0).powi(2));
    let rabi = (detuning * detuning + alpha * alpha).sqrt();
    let angle = rabi * tau / (2.0 * alpha.sqrt());
    (alpha / rabi).powi(2) * angle.sin().powi(2)
}

/// Amplitudes `S_s^ν(τ)`, `|s| ≤ s_max`, by integrating the momentum-space
/// Schrödinger equation `i ċ_j = [(ν+j)² c_j + αε(c_{j-1} + c_{j+1})]/(2√α)`
/// on `|j| ≤ width` from `c_j(0) = δ_{j0}`.
pub fn momentum_ode(nu: f64, alpha: f64, epsilon: f64, tau: f64, width: usize, s_max: usize) -> Vec<Complex64> {
    let dim = 2 * width + 1;
    let scale = 1.0 / (2.0 * alpha.sqrt());
    let w = width as i64;
    let diag: Vec<f64> = (-w..=w).map(|j| (nu + j as f64).powi(2)).collect();
    // Interaction picture: d_j = e^{iD_j τ'} c_j removes the fast diagonal phases.
    let rhs = |t: f64, y: &[f64]| {
        let d: Vec<Complex64> = (0..dim).map(|j| Complex64::new(y[2 * j], y[2 * j + 1])).collect();
        let c: Vec<Complex64> = (0..dim).map(|j| d[j] * Complex64::from_polar(1.0, -diag[j] * t * scale)).collect();
        let mut out = vec![0.0; 2 * dim];
        for j in 0..dim {
            let mut hc = Complex64::new(0.0, 0.0);
            if j > 0 {
                hc += c[j - 1];
            }
            if j + 1 < dim {
                hc += c[j + 1];
            }
            hc *= alpha * epsilon * scale;
            let dd = Complex64::new(0.0, -1.0) * hc * Complex64::from_polar(1.0, diag[j] * t * scale);
            out[2 * j] = dd.re;
            out[2 * j + 1] = dd.im;
        }
        out
    };
    let mut y0 = vec![0.0; 2 * dim];
    y0[2 * width] = 1.0;
    let y = dopri45(rhs, 0.0, &y0, tau, 1e-12);
    (-(s_max as i64)..=s_max as i64)
        .map(|s| {
            let j = (s + w) as usize;
            Complex64::new(y[2 * j], y[2 * j + 1]) * Complex64::from_polar(1.0, -diag[j] * tau * scale)
        })
        .collect()
}

fn gaussian(x: f64, mean: f64, spread: f64) -> f64 {
    (-(x - mean).powi(2) / (2.0 * spread * spread)).exp() / (spread * (2.0 * PI).sqrt())
}

/// Wigner value from the density matrix `∫ρ |ψ_ν₀⟩⟨ψ_ν₀|` with amplitudes
/// from [`momentum_ode`]: every pair `(s₁, s₂)` contributes at the mean
/// exponent `ν₀ + (s₁+s₂)/2` with phase `e^{i(s₁-s₂)θ}`.
pub fn wigner_point(theta: f64, wp: f64, tau: f64, alpha: f64, mean: f64, spread: f64, s_max: usize) -> f64 {
    let sa = alpha.sqrt();
    let k = s_max as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for total in -2 * k..=2 * k {
        let nu0 = sa * wp - 0.5 * total as f64;
        let rho = gaussian(nu0 / sa, mean, spread);
        if rho < 1e-300 {
            continue;
        }
        let amps = momentum_ode(nu0, alpha, 1.0, tau, s_max + 12, s_max);
        for s1 in (total - k).max(-k)..=(total + k).min(k) {
            let s2 = total - s1;
            let term = amps[(s1 + k) as usize] * amps[(s2 + k) as usize].conj();
            acc += term * Complex64::from_polar(rho, (s1 - s2) as f64 * theta);
        }
    }
    acc.re / (2.0 * PI)
}

/// Momentum marginal `P(℘) = Σ_s ρ(℘ - s/√α) |S_s^{√α℘ - s}|²`.
pub fn momentum_marginal(wp: f64, tau: f64, alpha: f64, mean: f64, spread: f64, s_max: usize) -> f64 {
    let sa = alpha.sqrt();
    let k = s_max as i64;
    (-k..=k)
        .map(|s| {
            let amps = momentum_ode(sa * wp - s as f64, alpha, 1.0, tau, s_max + 12, s_max);
            gaussian(wp - s as f64 / sa, mean, spread) * amps[(s + k) as usize].norm_sqr()
        })
        .sum()
}
