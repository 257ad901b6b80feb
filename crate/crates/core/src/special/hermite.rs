//! Physicists' Hermite polynomials by three-term recurrence.

/// `H_n(x)` via `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_{2k+1}(x) / x` for `k = 0..=kmax`.
///
/// Runs the recurrence on the reduced odd polynomials `G_k = H_{2k+1}/x`
/// and the even ones `E_k = H_{2k}`:
/// `G_k = 2 E_k - 4k G_{k-1}`, `E_{k+1} = 2x² G_k - 2(2k+1) E_k`.
/// The division by `x` never happens, so `x = 0` yields the limit
/// `2 (2k+1) H_{2k}(0)` exactly.
pub fn hermite_odd_over_x(kmax: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax + 1);
    let x2 = x * x;
    let mut even = 1.0;
    let mut odd_prev = 0.0;
    for k in 0..=kmax {
        let odd = 2.0 * even - 4.0 * k as f64 * odd_prev;
        out.push(odd);
        even = 2.0 * x2 * odd - 2.0 * (2 * k + 1) as f64 * even;
        odd_prev = odd;
    }
    out
}
