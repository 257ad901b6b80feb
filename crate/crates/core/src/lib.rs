//! Phase-space dynamics of a single electron in a low-gain free-electron
//! laser: the Wigner function evolved through Mathieu bands, the classical
//! distribution evolved along exact pendulum trajectories, and the gain and
//! distance observables that compare them.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod cli;
pub mod constants;
pub mod error;
pub mod mathieu;
pub mod observables;
pub mod perturbation;
pub mod quantum;
pub mod scaling;
pub mod special;

pub use error::{Error, Result};
