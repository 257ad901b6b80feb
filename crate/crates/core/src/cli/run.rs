//! The single-scenario commands: `bands`, `evolve`, `distance`, `gain`,
//! `estimate`.

use serde_json::{json, Value};

use super::config::Settings;
use super::estimate::estimate_timescales;
use super::output::Output;
use super::CliError;
use crate::classical::evolve_classical;
use crate::mathieu::{scattering_amplitudes, solve_bands};
use crate::observables::{distance_dcl, gain_from_momentum, gain_small_signal};
use crate::quantum::{marginals, WignerEvolver};
use crate::scaling::{derived_ratios, GaussianMomentum, ModelConfig, PhaseSpaceField, PhaseSpaceGrid};

/// Default nodes per axis for single-scenario runs.
pub const DEFAULT_NODES: usize = 256;

fn tau_max(cfg: &ModelConfig) -> f64 {
    cfg.times.iter().cloned().fold(0.0, f64::max)
}

pub(crate) fn scenario(settings: &Settings, nodes: usize) -> Result<(ModelConfig, GaussianMomentum, PhaseSpaceGrid), CliError> {
    let cfg = settings.model().map_err(CliError::Config)?;
    let beam = settings.beam().map_err(CliError::Config)?;
    let grid = settings.grid(nodes).map_err(CliError::Config)?.build(&beam, cfg.epsilon, cfg.alpha)?;
    Ok((cfg, beam, grid))
}

fn describe(cfg: &ModelConfig, beam: &GaussianMomentum, grid: &PhaseSpaceGrid) -> Value {
    let times: Vec<Value> = cfg
        .times
        .iter()
        .map(|&t| {
            let trunc = cfg.truncations(t);
            json!({"tau": t, "mathieu_truncation": trunc.half_width, "recoil_truncation": trunc.s_max})
        })
        .collect();
    let ratios = derived_ratios(cfg.alpha, beam, tau_max(cfg)).ok();
    json!({
        "model": cfg,
        "beam": beam,
        "grid": grid,
        "times": times,
        "evolution_truncation": cfg.truncations(tau_max(cfg)),
        "hk_over_dp": ratios.map(|r| r.hk_over_dp),
    })
}

pub fn bands(settings: &Settings, out: &mut Output) -> Result<Value, CliError> {
    let cfg = settings.model().map_err(CliError::Config)?;
    let nu = settings.number("nu", 0.0).map_err(CliError::Config)?;
    let trunc = cfg.truncations(tau_max(&cfg));
    let band = solve_bands(nu, cfg.alpha, cfg.epsilon, trunc.half_width)?;
    let r = band.half_width as i64;
    let labels: Vec<f64> = (-r..=r).map(|n| n as f64).collect();
    let energies: Vec<(f64, f64)> = (-r..=r).map(|n| (n as f64, band.energy(n))).collect();
    out.curve("bands_energies.csv", "band energies E_{nu+n}", ("n", "energy"), &energies)?;
    out.matrix(
        "bands_coefficients.csv",
        "band n (rows) on plane wave j (columns)",
        "n\\j",
        &labels,
        &labels,
        |a, b| band.coeffs[a][b],
    )?;
    for (k, &tau) in cfg.times.iter().enumerate() {
        let table = scattering_amplitudes(&band, tau, trunc.s_max)?;
        let probs: Vec<(f64, f64)> = (-(trunc.s_max as i64)..=trunc.s_max as i64)
            .map(|s| (s as f64, table.amplitude(s).norm_sqr()))
            .collect();
        out.curve(&format!("amplitudes_t{k:02}.csv"), &format!("|S_s|^2 at tau={tau}"), ("s", "probability"), &probs)?;
    }
    Ok(json!({"model": cfg, "nu": nu, "truncation": trunc}))
}

fn write_marginals(out: &mut Output, stem: &str, field: &PhaseSpaceField) -> std::io::Result<()> {
    let m = marginals(field);
    let p_wp: Vec<(f64, f64)> = m.wp.iter().cloned().zip(m.p_wp.iter().cloned()).collect();
    let p_theta: Vec<(f64, f64)> = m.theta.iter().cloned().zip(m.p_theta.iter().cloned()).collect();
    out.curve(&format!("{stem}_p_wp.csv"), "momentum marginal", ("wp", "p"), &p_wp)?;
    out.curve(&format!("{stem}_p_theta.csv"), "position marginal", ("theta", "p"), &p_theta)
}

pub fn evolve(settings: &Settings, out: &mut Output) -> Result<Value, CliError> {
    let (cfg, beam, grid) = scenario(settings, DEFAULT_NODES)?;
    let evolver = WignerEvolver::new(&cfg, &beam, &grid, tau_max(&cfg))?;
    let mut masses = Vec::new();
    for (k, &tau) in cfg.times.iter().enumerate() {
        let w = evolver.field_at(tau)?;
        let f = evolve_classical(&beam, &grid, tau, cfg.epsilon)?;
        out.field(&format!("wigner_t{k:02}.csv"), &format!("Wigner function at tau={tau}"), &w)?;
        out.field(&format!("classical_t{k:02}.csv"), &format!("classical distribution at tau={tau}"), &f)?;
        write_marginals(out, &format!("wigner_t{k:02}"), &w)?;
        write_marginals(out, &format!("classical_t{k:02}"), &f)?;
        masses.push(json!({"tau": tau, "wigner": w.mass(), "classical": f.mass()}));
    }
    let mut meta = describe(&cfg, &beam, &grid);
    meta["masses"] = json!(masses);
    Ok(meta)
}

pub fn distance(settings: &Settings, out: &mut Output) -> Result<Value, CliError> {
    let (cfg, beam, grid) = scenario(settings, DEFAULT_NODES)?;
    let evolver = WignerEvolver::new(&cfg, &beam, &grid, tau_max(&cfg))?;
    let mut curve = Vec::new();
    for &tau in &cfg.times {
        let w = evolver.field_at(tau)?;
        let f = evolve_classical(&beam, &grid, tau, cfg.epsilon)?;
        curve.push((tau, distance_dcl(&w, &f)?));
    }
    out.curve("distance.csv", "d_cl between Wigner and classical fields", ("tau", "d_cl"), &curve)?;
    Ok(describe(&cfg, &beam, &grid))
}

pub fn gain(settings: &Settings, out: &mut Output) -> Result<Value, CliError> {
    let (cfg, beam, grid) = scenario(settings, DEFAULT_NODES)?;
    let evolver = WignerEvolver::new(&cfg, &beam, &grid, tau_max(&cfg))?;
    let q0 = evolver.field_at(0.0)?;
    let c0 = evolve_classical(&beam, &grid, 0.0, cfg.epsilon)?;
    let (mut numeric_q, mut numeric_c, mut small_q, mut small_c) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for &tau in &cfg.times {
        let q = evolver.field_at(tau)?;
        let c = evolve_classical(&beam, &grid, tau, cfg.epsilon)?;
        numeric_q.push((tau, gain_from_momentum(&q, &q0, cfg.chi)?));
        numeric_c.push((tau, gain_from_momentum(&c, &c0, cfg.chi)?));
        if tau > 0.0 {
            small_q.push((tau, gain_small_signal(&beam, tau, cfg.alpha, cfg.chi, cfg.series_terms)?));
            small_c.push((tau, gain_small_signal(&beam, tau, cfg.alpha, cfg.chi, 0)?));
        } else {
            small_q.push((tau, 0.0));
            small_c.push((tau, 0.0));
        }
    }
    out.curve("gain_numeric_quantum.csv", "gain from the Wigner mean momentum", ("tau", "G"), &numeric_q)?;
    out.curve("gain_numeric_classical.csv", "gain from the classical mean momentum", ("tau", "G"), &numeric_c)?;
    out.curve("gain_small_signal_quantum.csv", "small-signal gain with M quantum terms", ("tau", "G"), &small_q)?;
    out.curve("gain_small_signal_classical.csv", "small-signal gain, classical term only", ("tau", "G"), &small_c)?;
    Ok(describe(&cfg, &beam, &grid))
}

pub fn estimate(settings: &Settings, _out: &mut Output) -> Result<Value, CliError> {
    let lab = settings.lab().map_err(CliError::Config)?;
    let t = estimate_timescales(&lab)?;
    println!("space-charge time        T_sc = {:.6e} s", t.space_charge);
    println!("spontaneous-emission time T_se = {:.6e} s", t.spontaneous_emission);
    println!("coupling                 chi  = {:.6e}", t.chi);
    Ok(json!({"lab": lab, "timescales": t}))
}
