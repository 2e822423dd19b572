//! `track-radius`: the radius analysis of a recorded trajectory.

use std::path::{Path, PathBuf};

use analyticity::gevrey::snapshot;
use analyticity::radius::{RadiusParams, RadiusSample, RadiusTrajectory};
use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use super::euler::TrajectoryRow;
use super::{emit_radius, RadiusKnobs};
use crate::output::Manifest;

#[derive(clap::Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Args {
    /// CSV with columns t, grad_sup, Hr and optionally tau_measured.
    #[arg(long)]
    traj: Option<PathBuf>,
    #[arg(long = "C")]
    #[serde(rename = "C")]
    c: Option<f64>,
    #[arg(long)]
    tau0: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    /// Snapshot of the initial velocity; supplies `‖u₀‖_{H^r}` and `‖u₀‖_X`.
    #[arg(long)]
    field: Option<PathBuf>,
    /// `‖u₀‖_{H^r}`; the first row's `Hr` when absent.
    #[arg(long)]
    u0_hr: Option<f64>,
    /// `‖u₀‖_{X_{τ₀}}`; required unless `--field` is given.
    #[arg(long)]
    u0_x: Option<f64>,
    #[arg(long)]
    m_max: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Config {
    pub traj: Option<PathBuf>,
    #[serde(rename = "C")]
    pub c: f64,
    pub tau0: f64,
    pub s: f64,
    pub r: f64,
    pub field: Option<PathBuf>,
    pub u0_hr: Option<f64>,
    pub u0_x: Option<f64>,
    pub m_max: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { traj: None, c: 1.0, tau0: 1.0, s: 1.0, r: 5.0, field: None, u0_hr: None, u0_x: None, m_max: 40 }
    }
}

fn read_rows(path: &Path) -> anyhow::Result<Vec<TrajectoryRow>> {
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let rows: Vec<TrajectoryRow> = rdr.deserialize().collect::<Result<_, _>>().with_context(|| format!("reading {}", path.display()))?;
    if rows.is_empty() {
        bail!("{} holds no samples", path.display());
    }
    Ok(rows)
}

fn params(cfg: &Config, rows: &[TrajectoryRow]) -> anyhow::Result<RadiusParams> {
    let knobs = RadiusKnobs { c: cfg.c, s: cfg.s, r: cfg.r, m_max: cfg.m_max };
    let mut p = match &cfg.field {
        Some(path) => knobs.params(&snapshot::load(path)?, cfg.tau0)?,
        None => RadiusParams { c: cfg.c, s: cfg.s, r: cfg.r, tau0: cfg.tau0, u0_hr: rows[0].hr, u0_x: f64::NAN },
    };
    if let Some(h) = cfg.u0_hr {
        p.u0_hr = h;
    }
    if let Some(x) = cfg.u0_x {
        p.u0_x = x;
    }
    if p.u0_x.is_nan() {
        bail!("‖u₀‖_X is unknown: pass --u0-x or --field");
    }
    p.validate()?;
    Ok(p)
}

pub fn run(cfg: Config, out: &Path) -> anyhow::Result<bool> {
    let Some(path) = cfg.traj.clone() else {
        bail!("--traj is required");
    };
    let mut manifest = Manifest::new("track-radius", &cfg)?;
    let rows = read_rows(&path)?;
    let samples = rows.iter().map(|r| RadiusSample { t: r.t, grad_sup: r.grad_sup, hr_norm: r.hr, tau_measured: r.tau_measured });
    let traj = RadiusTrajectory::from_samples(params(&cfg, &rows)?, samples)?;
    emit_radius(&traj, out, &mut manifest)?;
    manifest.write(out)?;
    Ok(true)
}
