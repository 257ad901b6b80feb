//! Physical constants (CODATA 2018, SI units).
//!
//! | symbol | quantity                  | value                  |
//! |--------|---------------------------|------------------------|
//! | c      | speed of light            | 299 792 458 m/s        |
//! | ε₀     | vacuum permittivity       | 8.8541878128e-12 F/m   |
//! | e      | elementary charge         | 1.602176634e-19 C      |
//! | m_e    | electron mass             | 9.1093837015e-31 kg    |
//! | α_f    | fine-structure constant   | 7.2973525693e-3        |

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;
