//! Unnormalized `sinc(x) = sin(x)/x` and derivatives of the Madey line shape
//! `sinc²(x/2)`.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

const DEFAULT_NODES: usize = 64;
/// Largest |x| the cached 64-node rule resolves to roundoff.
const DEFAULT_RULE_REACH: f64 = 60.0;

fn default_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(DEFAULT_NODES).unwrap()))
}

pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `d^n/dx^n sinc²(x/2)`.
///
/// Uses the triangle-kernel representation
/// `sinc²(x/2) = ∫₀¹ 2(1-u) cos(ux) du`, whose n-th derivative is
/// `∫₀¹ 2(1-u) uⁿ cos(ux + nπ/2) du`. The integrand is a polynomial times a
/// single oscillation, integrated with Gauss-Legendre nodes. Odd derivatives
/// are evaluated at |x| and reflected so parity is exact.
pub fn sinc2_half_derivative(n: usize, x: f64) -> f64 {
    let odd = n % 2 == 1;
    let ax = x.abs();
    // cos(y + nπ/2) without rounding the shift.
    let rotated = |y: f64| match n % 4 {
        0 => y.cos(),
        1 => -y.sin(),
        2 => -y.cos(),
        _ => y.sin(),
    };
    let integrand = |u: f64| 2.0 * (1.0 - u) * u.powi(n as i32) * rotated(u * ax);
    let value = if ax <= DEFAULT_RULE_REACH && n <= 40 {
        default_rule().integrate(0.0, 1.0, integrand)
    } else {
        let nodes = DEFAULT_NODES + ax.ceil() as usize + n;
        GaussLegendre::new(NonZeroUsize::new(nodes).unwrap()).integrate(0.0, 1.0, integrand)
    };
    if odd && x < 0.0 {
        -value
    } else {
        value
    }
}
