//! Laboratory time scales that bound the validity of the single-electron
//! picture: space-charge (plasma) and spontaneous emission.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::{ELECTRON_MASS, ELEMENTARY_CHARGE, FINE_STRUCTURE, SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};
use crate::error::Result;
use crate::scaling::{compute_chi, LabParameters};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Timescales {
    /// `1/ω_p` with the relativistic plasma frequency [s].
    pub space_charge: f64,
    /// `3λ_W/(2π α_f c a₀²)` [s].
    pub spontaneous_emission: f64,
    /// Field-electron coupling χ.
    pub chi: f64,
}

pub fn estimate_timescales(lab: &LabParameters) -> Result<Timescales> {
    lab.validate()?;
    let omega_p = (ELEMENTARY_CHARGE * ELEMENTARY_CHARGE * lab.electron_density
        / (VACUUM_PERMITTIVITY * lab.gamma.powi(3) * ELECTRON_MASS))
        .sqrt();
    let spontaneous_emission = 3.0 * lab.wiggler_wavelength
        / (2.0 * PI * FINE_STRUCTURE * SPEED_OF_LIGHT * lab.wiggler_parameter.powi(2));
    Ok(Timescales { space_charge: 1.0 / omega_p, spontaneous_emission, chi: compute_chi(lab)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab() -> LabParameters {
        LabParameters {
            electron_density: 1e20,
            wave_number: 2.0 * PI / 1e-6,
            initial_field: 1e6,
            wiggler_field: 0.5,
            wiggler_wavelength: 0.03,
            wiggler_parameter: 1.0,
            gamma: 50.0,
        }
    }

    #[test]
    fn spontaneous_emission_reference() {
        let t = estimate_timescales(&lab()).unwrap();
        let direct = 3.0 * 0.03 / (2.0 * PI * 7.297_352_569_3e-3 * 299_792_458.0);
        assert_eq!(t.spontaneous_emission, direct);
        assert!((t.spontaneous_emission - 6.547e-9).abs() < 1e-12);
    }

    #[test]
    fn scaling_laws() {
        let base = estimate_timescales(&lab()).unwrap();
        let dense = estimate_timescales(&LabParameters { electron_density: 4e20, ..lab() }).unwrap();
        assert!((dense.space_charge - 0.5 * base.space_charge).abs() < 1e-15 * base.space_charge);
        let strong = estimate_timescales(&LabParameters { wiggler_parameter: 2.0, ..lab() }).unwrap();
        assert!((strong.spontaneous_emission - 0.25 * base.spontaneous_emission).abs() < 1e-24);
    }

    #[test]
    fn rejects_non_positive_input() {
        assert!(estimate_timescales(&LabParameters { gamma: 0.0, ..lab() }).is_err());
    }
}
