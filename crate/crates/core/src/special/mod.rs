//! Special functions used by the perturbative, gain and classical modules.

pub mod elliptic;
pub mod hermite;
pub mod sinc;

pub use elliptic::{complete_k, incomplete_f, jacobi_elliptic, JacobiElliptic};
pub use hermite::{hermite, hermite_odd_over_x};
pub use self::sinc::{sinc, sinc2_half_derivative};
