//! Mathieu band structure for a real characteristic exponent `ν` and the
//! momentum-space scattering amplitudes built from it.
//!
//! In the plane-wave basis `e^{i(ν+j)θ}`, `j = -R..=R`, the Hamiltonian is
//! the symmetric tridiagonal matrix with diagonal `(ν+j)²` and off-diagonal
//! `αε`. Its eigenvalues are the band energies `ℰ` (units of the recoil
//! energy); a band evolves with phase `exp(-i ℰ τ / (2√α))`.
//!
//! The amplitude for a momentum eigenstate `ν` to pick up `s` recoils is
//! `S_s^ν(τ) = Σ_n v_n[0] v_n[s] exp(-i ℰ_n τ/(2√α))`, i.e. one column of the
//! matrix exponential. One diagonalization at `ν` also gives every shifted
//! family `S^{ν+n}` because the basis at `ν+n` is the basis at `ν`
//! translated by `n`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

const QL_MAX_ITER: usize = 60;

/// Eigen-decomposition of a symmetric tridiagonal matrix by implicit QL.
///
/// `diag` has length `n`, `off` length `n - 1` (`off[i]` couples `i` and
/// `i+1`). Returns eigenvalues in ascending order and the eigenvectors as a
/// flat array, vector `k` occupying `vectors[k*n .. (k+1)*n]`.
pub fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    if n == 0 || off.len() + 1 != n {
        return None;
    }
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    // z[row * n + col], columns are eigenvectors.
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }

    let eps = f64::EPSILON;
    let mut f = 0.0_f64;
    let mut tst1 = 0.0_f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > QL_MAX_ITER {
                    return None;
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let zi1 = z[k * n + i + 1];
                        let zi = z[k * n + i];
                        z[k * n + i + 1] = s * zi + c * zi1;
                        z[k * n + i] = c * zi - s * zi1;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let mut vectors = vec![0.0; n * n];
    for (slot, &k) in order.iter().enumerate() {
        for row in 0..n {
            vectors[slot * n + row] = z[row * n + k];
        }
    }
    Some((values, vectors))
}

/// Unlabeled spectrum at one exponent: eigenpairs sorted by energy.
///
/// Basis index `j = -R..=R` is stored at position `j + R`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub nu: f64,
    pub alpha: f64,
    pub epsilon: f64,
    pub half_width: usize,
    pub energies: Vec<f64>,
    vectors: Vec<f64>,
}

impl Spectrum {
    pub fn solve(nu: f64, alpha: f64, epsilon: f64, half_width: usize) -> Result<Spectrum> {
        if !nu.is_finite() || !(alpha > 0.0) || !(epsilon >= 0.0) || half_width == 0 {
            return Err(Error::Domain(format!(
                "band solve needs finite nu, alpha > 0, epsilon >= 0, R >= 1 (nu={nu}, alpha={alpha}, epsilon={epsilon}, R={half_width})"
            )));
        }
        let r = half_width as i64;
        let diag: Vec<f64> = (-r..=r).map(|j| (nu + j as f64).powi(2)).collect();
        let off = vec![alpha * epsilon; diag.len() - 1];
        let (energies, vectors) = tridiagonal_eigen(&diag, &off)
            .ok_or(Error::EigenSolver { nu, alpha, half_width })?;
        Ok(Spectrum { nu, alpha, epsilon, half_width, energies, vectors })
    }

    pub fn dim(&self) -> usize {
        2 * self.half_width + 1
    }

    /// Component of eigenvector `k` (ascending order) on basis index `j`.
    pub fn component(&self, k: usize, j: i64) -> f64 {
        let n = self.dim();
        let pos = j + self.half_width as i64;
        if pos < 0 || pos as usize >= n {
            return 0.0;
        }
        self.vectors[k * n + pos as usize]
    }

    fn vector(&self, k: usize) -> &[f64] {
        let n = self.dim();
        &self.vectors[k * n..(k + 1) * n]
    }

    /// Propagator columns for initial basis states `offsets`, rows `j = n + s`
    /// with `|s| <= s_max`: entry `[c][s + s_max]` is `S_s^{ν+offsets[c]}(τ)`.
    pub fn propagator(&self, tau: f64, offsets: &[i64], s_max: usize) -> Result<Vec<Vec<Complex64>>> {
        let r = self.half_width as i64;
        let sm = s_max as i64;
        if let Some(&n) = offsets.iter().find(|n| n.abs() + sm > r - 2) {
            return Err(Error::Truncation(format!(
                "offset {n} with s_max={s_max} leaves the basis R={}; increase mathieu_truncation",
                self.half_width
            )));
        }
        let scale = 1.0 / (2.0 * self.alpha.sqrt());
        let phases: Vec<Complex64> = self
            .energies
            .iter()
            .map(|e| Complex64::from_polar(1.0, -e * tau * scale))
            .collect();
        let n = self.dim();
        let mut out = Vec::with_capacity(offsets.len());
        for &off in offsets {
            let col = (off + r) as usize;
            // weights_k = v_k[col] e^{-iℰ_k τ'}
            let weights: Vec<Complex64> =
                (0..n).map(|k| phases[k] * self.vectors[k * n + col]).collect();
            let mut row_vals = Vec::with_capacity(2 * s_max + 1);
            for s in -sm..=sm {
                let row = (off + s + r) as usize;
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, w) in weights.iter().enumerate() {
                    acc += w * self.vectors[k * n + row];
                }
                row_vals.push(acc);
            }
            out.push(row_vals);
        }
        Ok(out)
    }
}

/// Labeled band structure at one exponent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MathieuBand {
    pub nu: f64,
    pub alpha: f64,
    pub epsilon: f64,
    pub half_width: usize,
    /// `energies[n + R]` is `ℰ_{ν+n}`.
    pub energies: Vec<f64>,
    /// `coeffs[n + R][j + R]` is the content of band `n` on the plane wave
    /// `e^{i(ν+j)θ}`, i.e. `c_{j-n}^{ν+n}`.
    pub coeffs: Vec<Vec<f64>>,
}

impl MathieuBand {
    pub fn energy(&self, n: i64) -> f64 {
        self.energies[(n + self.half_width as i64) as usize]
    }

    /// `c_r^{ν+n}`, zero outside the truncated basis.
    pub fn coefficient(&self, n: i64, r: i64) -> f64 {
        let hw = self.half_width as i64;
        let j = n + r;
        if n.abs() > hw || j.abs() > hw {
            return 0.0;
        }
        self.coeffs[(n + hw) as usize][(j + hw) as usize]
    }
}

/// Sort keys for the α → 0 labels: band `n` starts at `(ν+n)²`; ties are
/// broken toward the right limit in ν, which puts the smaller `ν+n` lower.
fn diagonal_order(nu: f64, half_width: usize) -> Vec<i64> {
    let r = half_width as i64;
    let mut labels: Vec<i64> = (-r..=r).collect();
    labels.sort_by(|&a, &b| {
        let ka = ((nu + a as f64).powi(2), nu + a as f64);
        let kb = ((nu + b as f64).powi(2), nu + b as f64);
        ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });
    labels
}

fn is_half_integer(nu: f64) -> bool {
    let twice = 2.0 * nu;
    (twice - twice.round()).abs() < 1e-12
}

/// Labeled bands at exponent `nu`.
///
/// Eigenvalues of an irreducible symmetric tridiagonal matrix are simple and
/// cannot cross as `α` grows from zero, so the `k`-th lowest eigenvalue
/// carries the label of the `k`-th lowest diagonal entry. At half-integer
/// `ν` the reflection `j → -2ν - j` is a symmetry; a numerically degenerate
/// pair is rebuilt as even/odd combinations under it. A cluster of three or
/// more is reported as a labeling failure.
pub fn solve_bands(nu: f64, alpha: f64, epsilon: f64, half_width: usize) -> Result<MathieuBand> {
    let r = half_width as i64;
    let dim = 2 * half_width + 1;
    if alpha == 0.0 || epsilon == 0.0 {
        if !nu.is_finite() || half_width == 0 || alpha < 0.0 {
            return Err(Error::Domain(format!("invalid band request nu={nu}, alpha={alpha}, R={half_width}")));
        }
        let energies = (-r..=r).map(|n| (nu + n as f64).powi(2)).collect();
        let coeffs = (0..dim)
            .map(|row| {
                let mut c = vec![0.0; dim];
                c[row] = 1.0;
                c
            })
            .collect();
        return Ok(MathieuBand { nu, alpha, epsilon, half_width, energies, coeffs });
    }

    let spec = Spectrum::solve(nu, alpha, epsilon, half_width)?;
    let mut vecs: Vec<Vec<f64>> = (0..dim).map(|k| spec.vector(k).to_vec()).collect();
    let energies_sorted = spec.energies.clone();

    let scale = energies_sorted.iter().fold(1.0_f64, |m, e| m.max(e.abs()));
    let tol = 64.0 * f64::EPSILON * scale;
    let mut k = 0;
    while k + 1 < dim {
        let mut end = k + 1;
        while end < dim && energies_sorted[end] - energies_sorted[end - 1] < tol {
            end += 1;
        }
        let size = end - k;
        if size > 2 {
            return Err(Error::Labeling {
                nu,
                alpha,
                half_width,
                detail: format!("{size} numerically degenerate eigenvalues near {}", energies_sorted[k]),
            });
        }
        if size == 2 {
            if !is_half_integer(nu) {
                return Err(Error::Labeling {
                    nu,
                    alpha,
                    half_width,
                    detail: format!("degenerate pair at {} away from half-integer nu", energies_sorted[k]),
                });
            }
            let (even, odd) = parity_pair(&vecs[k], &vecs[k + 1], nu, half_width);
            let m = |v: &[f64]| rayleigh(v, nu, alpha * epsilon, half_width);
            if m(&even) <= m(&odd) {
                vecs[k] = even;
                vecs[k + 1] = odd;
            } else {
                vecs[k] = odd;
                vecs[k + 1] = even;
            }
        }
        k = end;
    }

    let labels = diagonal_order(nu, half_width);
    let mut energies = vec![0.0; dim];
    let mut coeffs = vec![vec![0.0; dim]; dim];
    for (k, &n) in labels.iter().enumerate() {
        let v = &mut vecs[k];
        let dominant = v.iter().fold(0.0_f64, |m, x| if x.abs() > m.abs() { *x } else { m });
        if dominant < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        let row = (n + r) as usize;
        energies[row] = energies_sorted[k];
        coeffs[row].copy_from_slice(v);
    }
    Ok(MathieuBand { nu, alpha, epsilon, half_width, energies, coeffs })
}

fn rayleigh(v: &[f64], nu: f64, coupling: f64, half_width: usize) -> f64 {
    let r = half_width as i64;
    let mut acc = 0.0;
    for (i, j) in (-r..=r).enumerate() {
        acc += (nu + j as f64).powi(2) * v[i] * v[i];
        if i + 1 < v.len() {
            acc += 2.0 * coupling * v[i] * v[i + 1];
        }
    }
    acc
}

/// Even and odd combinations of a degenerate pair under `j → -2ν - j`.
fn parity_pair(a: &[f64], b: &[f64], nu: f64, half_width: usize) -> (Vec<f64>, Vec<f64>) {
    let r = half_width as i64;
    let shift = (2.0 * nu).round() as i64;
    let reflect = |v: &[f64]| -> Vec<f64> {
        (-r..=r)
            .map(|j| {
                let m = -shift - j;
                if m.abs() <= r {
                    v[(m + r) as usize]
                } else {
                    0.0
                }
            })
            .collect()
    };
    let normalize = |mut v: Vec<f64>| {
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= n);
        v
    };
    let ra = reflect(a);
    let rb = reflect(b);
    let sa: Vec<f64> = a.iter().zip(&ra).map(|(x, y)| x + y).collect();
    let sb: Vec<f64> = b.iter().zip(&rb).map(|(x, y)| x + y).collect();
    let norm2 = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
    let sym = if norm2(&sa) >= norm2(&sb) { sa } else { sb };
    // Project into span{a, b}: truncation breaks the reflection at the edge,
    // and the pair must stay orthogonal to every other band.
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
    let (x, y) = (dot(&sym, a), dot(&sym, b));
    let norm = x.hypot(y);
    let (x, y) = (x / norm, y / norm);
    let even = normalize(a.iter().zip(b).map(|(p, q)| x * p + y * q).collect());
    let odd = normalize(a.iter().zip(b).map(|(p, q)| -y * p + x * q).collect());
    (even, odd)
}

/// Labels obtained by following eigenvectors along a path of exponents by
/// maximal overlap, starting from the diagonal order at `path[0]`. Returned
/// as `label[k]` for the `k`-th lowest eigenvalue at the end of the path.
pub fn continuation_labels(path: &[f64], alpha: f64, epsilon: f64, half_width: usize) -> Result<Vec<i64>> {
    let first = *path.first().ok_or_else(|| Error::Domain("empty continuation path".into()))?;
    let mut prev = Spectrum::solve(first, alpha, epsilon, half_width)?;
    let mut labels = diagonal_order(first, half_width);
    let dim = prev.dim();
    for &nu in &path[1..] {
        let next = Spectrum::solve(nu, alpha, epsilon, half_width)?;
        let mut new_labels = vec![i64::MIN; dim];
        let mut taken = vec![false; dim];
        for (k, &label) in labels.iter().enumerate() {
            let old = prev.vector(k);
            let (best, _) = (0..dim)
                .filter(|q| !taken[*q])
                .map(|q| {
                    let ov: f64 = old.iter().zip(next.vector(q)).map(|(x, y)| x * y).sum();
                    (q, ov.abs())
                })
                .fold((usize::MAX, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
            taken[best] = true;
            new_labels[best] = label;
        }
        labels = new_labels;
        prev = next;
    }
    Ok(labels)
}

/// `S_s^ν(τ)` for `s = -s_max..=s_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringTable {
    pub nu: f64,
    pub tau: f64,
    pub alpha: f64,
    pub s_max: usize,
    pub amplitudes: Vec<Complex64>,
}

impl ScatteringTable {
    pub fn amplitude(&self, s: i64) -> Complex64 {
        if s.unsigned_abs() as usize > self.s_max {
            return Complex64::new(0.0, 0.0);
        }
        self.amplitudes[(s + self.s_max as i64) as usize]
    }

    /// `1 - Σ_s |S_s|²`: probability that left the tabulated recoil range.
    pub fn unitarity_deficit(&self) -> f64 {
        1.0 - self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>()
    }
}

/// Bands whose overlap with the initial plane wave is below this are skipped.
pub const COEFFICIENT_TAIL_TOL: f64 = 1e-14;

/// Scattering table from labeled bands:
/// `S_s^ν(τ) = Σ_n c_{-n}^{ν+n} c_{s-n}^{ν+n} exp(-i ℰ_{ν+n} τ/(2√α))`.
pub fn scattering_amplitudes(band: &MathieuBand, tau: f64, s_max: usize) -> Result<ScatteringTable> {
    let r = band.half_width as i64;
    if s_max as i64 > r - 2 {
        return Err(Error::Truncation(format!(
            "s_max={s_max} needs mathieu_truncation >= {}",
            s_max + 2
        )));
    }
    let scale = 1.0 / (2.0 * band.alpha.sqrt());
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 2 * s_max + 1];
    for n in -r..=r {
        let c0 = band.coefficient(n, -n);
        if c0.abs() < COEFFICIENT_TAIL_TOL {
            continue;
        }
        let phase = Complex64::from_polar(1.0, -band.energy(n) * tau * scale);
        for (slot, s) in (-(s_max as i64)..=s_max as i64).enumerate() {
            amplitudes[slot] += phase * (c0 * band.coefficient(n, s - n));
        }
    }
    Ok(ScatteringTable { nu: band.nu, tau, alpha: band.alpha, s_max, amplitudes })
}
