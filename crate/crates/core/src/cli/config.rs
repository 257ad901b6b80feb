//! Flat `key = value` run configuration.
//!
//! Blank lines and `#` comments are ignored. `times` takes a comma-separated
//! list and understands the suffix `pi` (`0.5pi`, `pi`). Recognised keys:
//!
//! | key | meaning | default |
//! |-----|---------|---------|
//! | `alpha` | quantum parameter α | 10 |
//! | `epsilon` | laser amplitude ε | 1 |
//! | `chi` | coupling χ | 1 |
//! | `times` | evaluation times τ | pi |
//! | `mathieu_truncation` | basis half-width R | heuristic |
//! | `recoil_truncation` | recoil range s_max | heuristic |
//! | `series_terms` | Hermite / gain terms M | 8 |
//! | `wp_bar`, `dwp` | beam mean and spread | 0, 0.1 |
//! | `n_theta`, `n_wp` | grid nodes | 256, 256 |
//! | `wp_min`, `wp_max` | momentum window (both or neither) | covering |
//! | `nu` | exponent for `bands` | 0 |
//! | `electron_density`, `wave_number`, `initial_field`, `wiggler_field`, `wiggler_wavelength`, `wiggler_parameter`, `gamma` | laboratory inputs for `estimate` | none |

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::scaling::{GaussianMomentum, LabParameters, ModelConfig, PhaseSpaceGrid, DEFAULT_SERIES_TERMS};

const KEYS: &[&str] = &[
    "alpha",
    "epsilon",
    "chi",
    "times",
    "mathieu_truncation",
    "recoil_truncation",
    "series_terms",
    "wp_bar",
    "dwp",
    "n_theta",
    "n_wp",
    "wp_min",
    "wp_max",
    "nu",
    "electron_density",
    "wave_number",
    "initial_field",
    "wiggler_field",
    "wiggler_wavelength",
    "wiggler_parameter",
    "gamma",
];

/// Parsed configuration. Only keys present in the file are stored, so that
/// figure presets can tell overrides from defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

/// Grid request: node counts and an optional fixed momentum window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub n_theta: usize,
    pub n_wp: usize,
    pub window: Option<(f64, f64)>,
}

impl GridSpec {
    pub fn build(&self, beam: &GaussianMomentum, epsilon: f64, alpha: f64) -> crate::Result<PhaseSpaceGrid> {
        match self.window {
            Some((lo, hi)) => PhaseSpaceGrid::new(self.n_theta, self.n_wp, lo, hi),
            None => PhaseSpaceGrid::covering(beam, epsilon, alpha, self.n_theta, self.n_wp),
        }
    }
}

fn parse_time(raw: &str) -> Result<f64, String> {
    let t = raw.trim();
    let value = if let Some(head) = t.strip_suffix("pi") {
        let head = head.trim().trim_end_matches('*');
        let factor = if head.is_empty() { 1.0 } else { parse_number(head)? };
        factor * PI
    } else {
        parse_number(t)?
    };
    Ok(value)
}

fn parse_number(raw: &str) -> Result<f64, String> {
    let t = raw.trim();
    if let Some((a, b)) = t.split_once('/') {
        let (a, b) = (parse_number(a)?, parse_number(b)?);
        return Ok(a / b);
    }
    t.parse::<f64>().map_err(|_| format!("'{t}' is not a number"))
}

impl Settings {
    pub fn parse(text: &str) -> Result<Settings, String> {
        let mut values = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(format!("line {}: unknown key '{key}'", lineno + 1));
            }
            if values.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(format!("line {}: duplicate key '{key}'", lineno + 1));
            }
        }
        Ok(Settings { values })
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn number(&self, key: &str, default: f64) -> Result<f64, String> {
        match self.values.get(key) {
            Some(v) => parse_number(v).map_err(|e| format!("{key}: {e}")),
            None => Ok(default),
        }
    }

    fn required(&self, key: &str) -> Result<f64, String> {
        let v = self.values.get(key).ok_or_else(|| format!("missing key '{key}'"))?;
        parse_number(v).map_err(|e| format!("{key}: {e}"))
    }

    pub fn count(&self, key: &str) -> Result<Option<usize>, String> {
        match self.values.get(key) {
            Some(v) => v
                .parse::<usize>()
                .map(Some)
                .map_err(|_| format!("{key}: '{v}' is not a non-negative integer")),
            None => Ok(None),
        }
    }

    pub fn times(&self) -> Result<Vec<f64>, String> {
        match self.values.get("times") {
            Some(v) => v.split(',').map(|t| parse_time(t).map_err(|e| format!("times: {e}"))).collect(),
            None => Ok(vec![PI]),
        }
    }

    pub fn model(&self) -> Result<ModelConfig, String> {
        let cfg = ModelConfig {
            alpha: self.number("alpha", 10.0)?,
            epsilon: self.number("epsilon", 1.0)?,
            chi: self.number("chi", 1.0)?,
            times: self.times()?,
            mathieu_truncation: self.count("mathieu_truncation")?,
            recoil_truncation: self.count("recoil_truncation")?,
            series_terms: self.count("series_terms")?.unwrap_or(DEFAULT_SERIES_TERMS),
        };
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }

    pub fn beam(&self) -> Result<GaussianMomentum, String> {
        GaussianMomentum::new(self.number("wp_bar", 0.0)?, self.number("dwp", 0.1)?).map_err(|e| e.to_string())
    }

    /// Grid request with `n` nodes per axis unless overridden.
    pub fn grid(&self, n: usize) -> Result<GridSpec, String> {
        let window = match (self.values.contains_key("wp_min"), self.values.contains_key("wp_max")) {
            (true, true) => Some((self.required("wp_min")?, self.required("wp_max")?)),
            (false, false) => None,
            _ => return Err("wp_min and wp_max must be given together".into()),
        };
        let spec = GridSpec {
            n_theta: self.count("n_theta")?.unwrap_or(n),
            n_wp: self.count("n_wp")?.unwrap_or(n),
            window,
        };
        if spec.n_theta < 8 || spec.n_wp < 8 {
            return Err("grids need at least 8 nodes per axis".into());
        }
        if let Some((lo, hi)) = window {
            if !(lo < hi) {
                return Err(format!("wp_min={lo} must be below wp_max={hi}"));
            }
        }
        Ok(spec)
    }

    pub fn lab(&self) -> Result<LabParameters, String> {
        let lab = LabParameters {
            electron_density: self.required("electron_density")?,
            wave_number: self.required("wave_number")?,
            initial_field: self.required("initial_field")?,
            wiggler_field: self.required("wiggler_field")?,
            wiggler_wavelength: self.required("wiggler_wavelength")?,
            wiggler_parameter: self.required("wiggler_parameter")?,
            gamma: self.required("gamma")?,
        };
        lab.validate().map_err(|e| e.to_string())?;
        Ok(lab)
    }
}
