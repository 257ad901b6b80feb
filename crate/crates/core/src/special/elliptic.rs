//! Jacobi elliptic functions and elliptic integrals of the first kind.
//!
//! Parameter convention: `m = k²`. The Jacobi functions use descending
//! arithmetic-geometric-mean (AGM) iteration; the incomplete integral uses
//! Carlson's symmetric form `R_F`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

const AGM_MAX_ITER: usize = 40;

/// Values of `sn`, `cn`, `dn` together with the amplitude `am(u|m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiElliptic {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
    /// Jacobi amplitude; unbounded in `u`, `sn = sin(am)`, `cn = cos(am)`.
    pub am: f64,
}

fn check_parameter(m: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&m) || m.is_nan() {
        return Err(Error::Domain(format!("elliptic parameter m={m} outside [0, 1]")));
    }
    Ok(())
}

/// Complete elliptic integral `K(m)`. Returns `+inf` at `m = 1`.
pub fn complete_k(m: f64) -> Result<f64> {
    check_parameter(m)?;
    if m == 1.0 {
        return Ok(f64::INFINITY);
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok(PI / (2.0 * a))
}

/// Jacobi elliptic functions `sn(u|m)`, `cn(u|m)`, `dn(u|m)`.
pub fn jacobi_elliptic(u: f64, m: f64) -> Result<JacobiElliptic> {
    check_parameter(m)?;
    if m == 0.0 {
        return Ok(JacobiElliptic { sn: u.sin(), cn: u.cos(), dn: 1.0, am: u });
    }
    if m == 1.0 {
        let sech = 1.0 / u.cosh();
        return Ok(JacobiElliptic {
            sn: u.tanh(),
            cn: sech,
            dn: sech,
            am: 2.0 * (0.5 * u).tanh().atan(),
        });
    }

    // Descending AGM: keep a_n and c_n for the backward amplitude sweep.
    let mut a = [0.0_f64; AGM_MAX_ITER + 1];
    let mut c = [0.0_f64; AGM_MAX_ITER + 1];
    a[0] = 1.0;
    c[0] = m.sqrt();
    let mut b = (1.0 - m).sqrt();
    let mut n = 0;
    while c[n].abs() > f64::EPSILON * a[n] {
        if n == AGM_MAX_ITER {
            return Err(Error::Domain(format!("AGM descent did not converge for m={m}")));
        }
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }

    let mut phi = (1u64 << n) as f64 * a[n] * u;
    for k in (1..=n).rev() {
        phi = 0.5 * (phi + (c[k] * phi.sin() / a[k]).asin());
    }
    let (sn, cn) = phi.sin_cos();
    // dn > 0 for m < 1; this sum of squares avoids cancellation near sn = ±1.
    let dn = (cn * cn + (1.0 - m) * sn * sn).sqrt();
    Ok(JacobiElliptic { sn, cn, dn, am: phi })
}

/// Carlson's symmetric integral `R_F(x, y, z)` by duplication.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    let mut mean;
    loop {
        mean = (x + y + z) / 3.0;
        let dx = 1.0 - x / mean;
        let dy = 1.0 - y / mean;
        let dz = 1.0 - z / mean;
        if dx.abs().max(dy.abs()).max(dz.abs()) < 1e-4 {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0)
                / mean.sqrt();
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
    }
}

/// Incomplete elliptic integral of the first kind `F(φ|m)` for any real `φ`
/// and `0 <= m < 1`, extended by `F(φ + jπ) = F(φ) + 2jK`.
pub fn incomplete_f(phi: f64, m: f64) -> Result<f64> {
    check_parameter(m)?;
    if m == 1.0 {
        if phi.abs() >= FRAC_PI_2 {
            return Err(Error::Domain("F(phi|1) diverges for |phi| >= pi/2".into()));
        }
        return Ok(phi.tan().asinh());
    }
    let periods = (phi / PI).round();
    let reduced = phi - periods * PI;
    let (s, c) = reduced.sin_cos();
    let partial = s * carlson_rf(c * c, 1.0 - m * s * s, 1.0);
    let full = if periods != 0.0 { 2.0 * periods * complete_k(m)? } else { 0.0 };
    Ok(full + partial)
}
