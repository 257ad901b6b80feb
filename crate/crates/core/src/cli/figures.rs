//! Presets that regenerate the data behind each figure. Physical parameters
//! are fixed per figure; the config may override `n_theta`, `n_wp` and, for
//! the time-resolved figures, `times`.

use std::f64::consts::PI;

use serde_json::{json, Value};

use super::config::Settings;
use super::output::Output;
use super::CliError;
use crate::classical::evolve_classical;
use crate::observables::{distance_dcl, gain_cold_with_recoil, gain_from_momentum, gain_warm};
use crate::perturbation::{fcl1, w1_closed};
use crate::quantum::{marginals, WignerEvolver};
use crate::scaling::{GaussianMomentum, ModelConfig, PhaseSpaceField, PhaseSpaceGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureId {
    #[value(name = "1")]
    Perturbative,
    #[value(name = "2")]
    PhaseSpace,
    #[value(name = "3")]
    Difference,
    #[value(name = "4a")]
    DistanceTime,
    #[value(name = "4bc")]
    DistanceMaps,
    #[value(name = "5")]
    SmallSignal,
    #[value(name = "6")]
    GainTime,
}

impl FigureId {
    pub fn label(self) -> &'static str {
        match self {
            FigureId::Perturbative => "1",
            FigureId::PhaseSpace => "2",
            FigureId::Difference => "3",
            FigureId::DistanceTime => "4a",
            FigureId::DistanceMaps => "4bc",
            FigureId::SmallSignal => "5",
            FigureId::GainTime => "6",
        }
    }
}

fn alpha_tag(alpha: f64) -> String {
    if (alpha - 1.0 / 3.0).abs() < 1e-12 {
        "1_3".into()
    } else {
        format!("{alpha}")
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn grid_for(settings: &Settings, nodes: usize, beam: &GaussianMomentum, alpha: f64) -> Result<PhaseSpaceGrid, CliError> {
    let spec = settings.grid(nodes).map_err(CliError::Config)?;
    Ok(PhaseSpaceGrid::covering(beam, 1.0, alpha, spec.n_theta, spec.n_wp)?)
}

fn times_or(settings: &Settings, default: Vec<f64>) -> Result<Vec<f64>, CliError> {
    if settings.has("times") {
        settings.times().map_err(CliError::Config)
    } else {
        Ok(default)
    }
}

/// Wigner and classical fields at each time on one grid.
fn pair_fields(
    alpha: f64,
    beam: &GaussianMomentum,
    grid: &PhaseSpaceGrid,
    times: &[f64],
) -> Result<Vec<(PhaseSpaceField, PhaseSpaceField)>, CliError> {
    let tau_max = times.iter().cloned().fold(0.0, f64::max);
    let evolver = WignerEvolver::new(&ModelConfig::new(alpha, 1.0), beam, grid, tau_max)?;
    times
        .iter()
        .map(|&tau| Ok((evolver.field_at(tau)?, evolve_classical(beam, grid, tau, 1.0)?)))
        .collect()
}

fn p_wp(field: &PhaseSpaceField) -> Vec<(f64, f64)> {
    let m = marginals(field);
    m.wp.into_iter().zip(m.p_wp).collect()
}

pub fn figure(id: FigureId, settings: &Settings, out: &mut Output) -> Result<Value, CliError> {
    match id {
        FigureId::Perturbative => perturbative(out),
        FigureId::PhaseSpace => phase_space(settings, out),
        FigureId::Difference => difference(settings, out),
        FigureId::DistanceTime => distance_time(settings, out),
        FigureId::DistanceMaps => distance_maps(settings, out),
        FigureId::SmallSignal => small_signal(out),
        FigureId::GainTime => gain_time(settings, out),
    }
}

fn perturbative(out: &mut Output) -> Result<Value, CliError> {
    let (theta, tau, eps) = (PI, 0.01, 1.0);
    let beam = GaussianMomentum::new(PI, 0.1)?;
    let xis = linspace(-3.0, 3.0, 401);
    let at = |xi: f64| beam.mean + xi * std::f64::consts::SQRT_2 * beam.spread;
    let classical: Vec<(f64, f64)> = xis.iter().map(|&xi| (xi, fcl1(theta, at(xi), tau, eps, &beam))).collect();
    out.curve("fig1_classical.csv", "first-order classical correction at theta=pi", ("xi", "f1"), &classical)?;
    let alphas = [16.0, 100.0, 400.0];
    for alpha in alphas {
        let curve: Vec<(f64, f64)> = xis.iter().map(|&xi| (xi, w1_closed(theta, at(xi), tau, eps, &beam, alpha))).collect();
        out.curve(
            &format!("fig1_quantum_alpha_{alpha}.csv"),
            &format!("first-order Wigner correction at theta=pi, alpha={alpha}"),
            ("xi", "W1"),
            &curve,
        )?;
    }
    Ok(json!({"theta": theta, "tau": tau, "epsilon": eps, "beam": beam, "alphas": alphas}))
}

fn phase_space(settings: &Settings, out: &mut Output) -> Result<Value, CliError> {
    let tau = PI;
    let mut grids = Vec::new();
    for dwp in [0.1, 1.0, 2.0] {
        let beam = GaussianMomentum::new(0.0, dwp)?;
        // The α = 1/3 covering grid is the wider one; both α share it.
        let grid = grid_for(settings, super::run::DEFAULT_NODES, &beam, 1.0 / 3.0)?;
        let initial = evolve_classical(&beam, &grid, 0.0, 1.0)?;
        out.curve(&format!("fig2_initial_dwp_{dwp}_p_wp.csv"), "initial momentum distribution", ("wp", "p"), &p_wp(&initial))?;
        let classical = evolve_classical(&beam, &grid, tau, 1.0)?;
        out.field(&format!("fig2_classical_dwp_{dwp}.csv"), "classical distribution at tau=pi", &classical)?;
        out.curve(&format!("fig2_classical_dwp_{dwp}_p_wp.csv"), "classical momentum marginal", ("wp", "p"), &p_wp(&classical))?;
        for alpha in [1.0 / 3.0, 10.0] {
            let w = WignerEvolver::new(&ModelConfig::new(alpha, 1.0), &beam, &grid, tau)?.field_at(tau)?;
            let stem = format!("fig2_wigner_alpha_{}_dwp_{dwp}", alpha_tag(alpha));
            out.field(&format!("{stem}.csv"), &format!("Wigner function at tau=pi, alpha={alpha}"), &w)?;
            out.curve(&format!("{stem}_p_wp.csv"), "Wigner momentum marginal", ("wp", "p"), &p_wp(&w))?;
        }
        grids.push(json!({"dwp": dwp, "grid": grid}));
    }
    Ok(json!({"tau": tau, "epsilon": 1.0, "alphas": [1.0 / 3.0, 10.0], "grids": grids}))
}

fn difference(settings: &Settings, out: &mut Output) -> Result<Value, CliError> {
    let (alpha, beam) = (10.0, GaussianMomentum::new(0.0, 2.0)?);
    let grid = grid_for(settings, super::run::DEFAULT_NODES, &beam, alpha)?;
    let times = times_or(settings, vec![PI / 12.0, PI / 2.0, PI])?;
    for (k, (w, f)) in pair_fields(alpha, &beam, &grid, &times)?.into_iter().enumerate() {
        let diff = PhaseSpaceField { values: &w.values - &f.values, ..w };
        out.field(&format!("fig3_difference_t{k:02}.csv"), &format!("W - f_cl at tau={}", times[k]), &diff)?;
    }
    Ok(json!({"alpha": alpha, "beam": beam, "grid": grid, "times": times}))
}

fn distance_time(settings: &Settings, out: &mut Output) -> Result<Value, CliError> {
    let times = times_or(settings, linspace(0.0, 2.0 * PI, 49))?;
    let mut runs = Vec::new();
    for (alpha, dwp) in [(1.0 / 3.0, 0.1), (10.0, 0.1), (1.0 / 3.0, 2.0), (10.0, 2.0)] {
        let beam = GaussianMomentum::new(0.0, dwp)?;
        let grid = grid_for(settings, 192, &beam, alpha)?;
        let curve: Vec<(f64, f64)> = pair_fields(alpha, &beam, &grid, &times)?
            .iter()
            .zip(&times)
            .map(|((w, f), &t)| Ok((t, distance_dcl(w, f)?)))
            .collect::<Result<_, CliError>>()?;
        out.curve(
            &format!("fig4a_alpha_{}_dwp_{dwp}.csv", alpha_tag(alpha)),
            &format!("d_cl(tau) for alpha={alpha}, dwp={dwp}"),
            ("tau", "d_cl"),
            &curve,
        )?;
        runs.push(json!({"alpha": alpha, "dwp": dwp, "grid": grid}));
    }
    Ok(json!({"times": times, "runs": runs}))
}

fn distance_maps(settings: &Settings, out: &mut Output) -> Result<Value, CliError> {
    let alphas: Vec<f64> = (0..7).map(|i| (1.0f64 / 3.0) * 30f64.powf(i as f64 / 6.0)).collect();
    let spreads = linspace(0.1, 2.0, 7);
    let times = [PI / 2.0, PI];
    let mut maps = vec![vec![vec![0.0; alphas.len()]; spreads.len()]; times.len()];
    for (r, &dwp) in spreads.iter().enumerate() {
        let beam = GaussianMomentum::new(0.0, dwp)?;
        for (c, &alpha) in alphas.iter().enumerate() {
            let grid = grid_for(settings, 128, &beam, alpha)?;
            for (k, (w, f)) in pair_fields(alpha, &beam, &grid, &times)?.iter().enumerate() {
                maps[k][r][c] = distance_dcl(w, f)?;
            }
        }
    }
    for (k, name) in ["fig4b_distance_tau_pi_2.csv", "fig4c_distance_tau_pi.csv"].iter().enumerate() {
        out.matrix(name, &format!("d_cl at tau={} over dwp (rows) and alpha (columns)", times[k]), "dwp\\alpha", &spreads, &alphas, |r, c| {
            maps[k][r][c]
        })?;
    }
    Ok(json!({"alphas": alphas, "spreads": spreads, "times": times}))
}

fn small_signal(out: &mut Output) -> Result<Value, CliError> {
    let terms = 1;
    let xs = linspace(-12.0, 12.0, 481);
    for recoil in [0.0, 1.0, 2.0] {
        let curve: Vec<(f64, f64)> = xs.iter().map(|&x| (x, gain_cold_with_recoil(x, 1.0, recoil, 1.0, terms))).collect();
        out.curve(
            &format!("fig5_cold_recoil_{recoil}.csv"),
            &format!("cold-beam gain over chi tau^3, w_r t={recoil}"),
            ("wp_bar_tau", "G"),
            &curve,
        )?;
    }
    let (spread, tau) = (1.0, 10.0);
    let ratios = linspace(-4.0, 4.0, 401);
    for recoil in [0.0, 3.0, 7.0] {
        let hk_over_dp = recoil / (spread * tau);
        let curve: Vec<(f64, f64)> = ratios
            .iter()
            .map(|&u| Ok((u, gain_warm(&GaussianMomentum::new(u * spread, spread)?, tau, 1.0, hk_over_dp, terms))))
            .collect::<Result<_, CliError>>()?;
        out.curve(
            &format!("fig5_warm_recoil_{recoil}.csv"),
            &format!("warm-beam gain over chi, dwp tau=10, w_r t={recoil}"),
            ("wp_bar_over_dwp", "G"),
            &curve,
        )?;
    }
    Ok(json!({"series_terms": terms, "cold_recoil": [0.0, 1.0, 2.0], "warm_recoil": [0.0, 3.0, 7.0], "warm_dwp_tau": spread * tau}))
}

fn gain_time(settings: &Settings, out: &mut Output) -> Result<Value, CliError> {
    let times = times_or(settings, linspace(0.0, 8.0, 41))?;
    let mut runs = Vec::new();
    for alpha in [1.0, 10.0] {
        for dwp in [0.1, 2.0] {
            let beam = GaussianMomentum::new(1.6, dwp)?;
            let grid = grid_for(settings, 192, &beam, alpha)?;
            let fields = pair_fields(alpha, &beam, &grid, &times)?;
            let (q0, c0) = &fields[0];
            let mut quantum = Vec::new();
            let mut classical = Vec::new();
            for ((w, f), &t) in fields.iter().zip(&times) {
                quantum.push((t, gain_from_momentum(w, q0, 1.0)?));
                classical.push((t, gain_from_momentum(f, c0, 1.0)?));
            }
            let tag = format!("alpha_{alpha}_dwp_{dwp}");
            out.curve(&format!("fig6_quantum_{tag}.csv"), "gain from the Wigner mean momentum", ("tau", "G"), &quantum)?;
            out.curve(&format!("fig6_classical_{tag}.csv"), "gain from the classical mean momentum", ("tau", "G"), &classical)?;
            runs.push(json!({"alpha": alpha, "dwp": dwp, "wp_bar": 1.6, "grid": grid}));
        }
    }
    Ok(json!({"times": times, "chi": 1.0, "runs": runs}))
}
