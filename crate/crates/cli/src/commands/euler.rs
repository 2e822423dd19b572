//! `run-euler`: 2D periodic Euler with radius measurements per snapshot.

use std::path::Path;

use analyticity::flows::{random_analytic, taylor_green, EulerSolver, EulerState2D};
use analyticity::gevrey::{fit_radius, snapshot, FitWindow};
use analyticity::radius::RadiusTrajectory;
use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use super::{emit_radius, note_gradient_norm, RadiusKnobs};
use crate::output::{write_csv, Manifest};

#[derive(clap::Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Args {
    /// Grid points per axis.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long)]
    snap_every: Option<f64>,
    /// `taylor-green` or `random-analytic:SEED`.
    #[arg(long)]
    init: Option<String>,
    #[arg(long)]
    cfl: Option<f64>,
    /// Write every snapshot's velocity in the field format.
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    save_snapshots: bool,
    /// Integrate the radius ODE and lower bound along the run.
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    track_radius: bool,
    /// Constant of the radius ODE and of `G`.
    #[arg(long = "C")]
    #[serde(rename = "C")]
    c: Option<f64>,
    /// Initial radius; `min(1, fit/2)` of the initial field when absent.
    #[arg(long)]
    tau0: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    m_max: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Config {
    pub n: usize,
    pub t_final: f64,
    pub snap_every: f64,
    pub init: String,
    pub cfl: f64,
    pub save_snapshots: bool,
    pub track_radius: bool,
    #[serde(rename = "C")]
    pub c: f64,
    pub tau0: Option<f64>,
    pub s: f64,
    pub r: f64,
    pub m_max: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            n: 128,
            t_final: 2.0,
            snap_every: 0.1,
            init: "taylor-green".into(),
            cfl: analyticity::flows::euler::DEFAULT_CFL,
            save_snapshots: false,
            track_radius: false,
            c: 1.0,
            tau0: None,
            s: 1.0,
            r: 5.0,
            m_max: 40,
        }
    }
}

#[derive(Debug, Serialize)]
struct Row {
    t: f64,
    energy: f64,
    enstrophy: f64,
    grad_sup: f64,
    #[serde(rename = "Hr")]
    hr: f64,
    tau_fit: Option<f64>,
    fit_residual: Option<f64>,
}

/// Input format of `track-radius`.
#[derive(Debug, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub grad_sup: f64,
    #[serde(rename = "Hr")]
    pub hr: f64,
    pub tau_measured: Option<f64>,
}

fn initial(cfg: &Config) -> anyhow::Result<EulerState2D> {
    if cfg.init == "taylor-green" {
        return Ok(taylor_green(cfg.n)?);
    }
    if let Some(seed) = cfg.init.strip_prefix("random-analytic:") {
        let seed: u64 = seed.parse().with_context(|| format!("bad seed in --init {}", cfg.init))?;
        return Ok(random_analytic(cfg.n, seed)?);
    }
    bail!("--init must be taylor-green or random-analytic:SEED, got {:?}", cfg.init)
}

fn drift(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        (b - a).abs()
    } else {
        (b / a - 1.0).abs()
    }
}

pub fn run(cfg: Config, out: &Path) -> anyhow::Result<bool> {
    let mut manifest = Manifest::new("run-euler", &cfg)?;
    note_gradient_norm(&mut manifest);
    manifest.convention("time_stepping", "RK4 with CFL re-evaluated per step, 2/3 dealiasing");
    let knobs = RadiusKnobs { c: cfg.c, s: cfg.s, r: cfg.r, m_max: cfg.m_max };

    let mut solver = EulerSolver::new(cfg.n, true)?;
    solver.cfl = cfg.cfl;
    let states = solver.run(&initial(&cfg)?, cfg.t_final, cfg.snap_every)?;

    let mut rows = Vec::with_capacity(states.len());
    let mut samples = Vec::with_capacity(states.len());
    for (i, s) in states.iter().enumerate() {
        let u = s.velocity();
        let fit = fit_radius(&u, FitWindow::full()).ok();
        let sample = knobs.sample(&u, s.time(), fit.as_ref().map(|f| f.tau));
        rows.push(Row {
            t: s.time(),
            energy: s.energy(),
            enstrophy: s.enstrophy(),
            grad_sup: sample.grad_sup,
            hr: sample.hr_norm,
            tau_fit: fit.as_ref().map(|f| f.tau),
            fit_residual: fit.as_ref().map(|f| f.residual_rms),
        });
        samples.push(sample);
        if cfg.save_snapshots {
            std::fs::create_dir_all(out.join("snapshots"))?;
            snapshot::save(&manifest.output(out, &format!("snapshots/velocity_{i:04}.snap")), &u)?;
        }
    }
    write_csv(&manifest.output(out, "euler.csv"), &rows)?;
    let traj_rows: Vec<TrajectoryRow> =
        samples.iter().map(|s| TrajectoryRow { t: s.t, grad_sup: s.grad_sup, hr: s.hr_norm, tau_measured: s.tau_measured }).collect();
    write_csv(&manifest.output(out, "trajectory.csv"), &traj_rows)?;

    let (first, last) = (&states[0], &states[states.len() - 1]);
    manifest.constant("euler.energy_drift", drift(first.energy(), last.energy()))?;
    manifest.constant("euler.enstrophy_drift", drift(first.enstrophy(), last.enstrophy()))?;

    if cfg.track_radius {
        let tau0 = match (cfg.tau0, rows[0].tau_fit) {
            (Some(t), _) => t,
            (None, Some(fit)) => (0.5 * fit).min(1.0),
            (None, None) => {
                manifest.partial = true;
                manifest.notes.push("initial field too sparse for a fitted radius; pass --tau0".into());
                manifest.write(out)?;
                bail!("no fitted initial radius; pass --tau0");
            }
        };
        let params = knobs.params(&first.velocity(), tau0)?;
        let traj = RadiusTrajectory::from_samples(params, samples)?;
        emit_radius(&traj, out, &mut manifest)?;
    }
    manifest.write(out)?;
    Ok(true)
}
