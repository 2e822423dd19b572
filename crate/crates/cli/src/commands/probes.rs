//! `probe-bounds`: implied constants of the commutator and pressure
//! estimates.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use analyticity::gevrey::{snapshot, Geometry, SpectralField};
use analyticity::probes::{probe_field, probe_sweep, ProbeKind, ProbeReport};
use serde::{Deserialize, Serialize};

use crate::config::parse_list;
use crate::output::{write_csv, Manifest};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    Commutator,
    Pressure,
    Both,
}

#[derive(clap::Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Args {
    /// Velocity snapshot; seeded probe fields are used when absent (torus
    /// for the commutator, slab for the pressure).
    #[arg(long)]
    field: Option<PathBuf>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    m_max: Option<usize>,
    /// Extra truncations reported from the same evaluation, e.g. `10,15`.
    #[arg(long)]
    m_sweep: Option<String>,
    #[arg(long, value_enum)]
    which: Option<Which>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Config {
    pub field: Option<PathBuf>,
    pub tau: f64,
    pub s: f64,
    pub m_max: usize,
    pub m_sweep: Option<String>,
    pub which: Which,
    pub seed: u64,
    pub n: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { field: None, tau: 0.3, s: 1.0, m_max: 15, m_sweep: None, which: Which::Both, seed: 0, n: 32 }
    }
}

#[derive(Debug, Serialize)]
struct Row {
    kind: &'static str,
    m_max: usize,
    tau: f64,
    s: f64,
    lhs: f64,
    group1: f64,
    group2: f64,
    x_norm: f64,
    y_norm: f64,
    implied_constant: f64,
    tail_ratio: f64,
    converged: bool,
}

impl From<&ProbeReport> for Row {
    fn from(r: &ProbeReport) -> Self {
        Row {
            kind: r.kind.label(),
            m_max: r.m_max,
            tau: r.tau,
            s: r.s,
            lhs: r.lhs,
            group1: r.group1,
            group2: r.group2,
            x_norm: r.x_norm,
            y_norm: r.y_norm,
            implied_constant: r.implied_constant,
            tail_ratio: r.tail_ratio,
            converged: r.converged,
        }
    }
}

fn field_for(cfg: &Config, kind: ProbeKind) -> anyhow::Result<SpectralField> {
    if let Some(path) = &cfg.field {
        return Ok(snapshot::load(path)?);
    }
    let geometry = match kind {
        ProbeKind::Commutator => Geometry::Torus3,
        ProbeKind::Pressure => Geometry::Slab { depth: PI },
    };
    Ok(probe_field(geometry, [cfg.n; 3], cfg.seed, 6, 3.0, 0.5)?)
}

pub fn run(cfg: Config, out: &Path) -> anyhow::Result<bool> {
    let mut manifest = Manifest::new("probe-bounds", &cfg)?;
    manifest.convention("probe_label", "empirical implied constants at finite truncation");
    let mut orders: Vec<usize> = match &cfg.m_sweep {
        Some(text) => parse_list(text)?,
        None => Vec::new(),
    };
    orders.push(cfg.m_max);
    orders.sort_unstable();
    orders.dedup();
    let kinds: &[ProbeKind] = match cfg.which {
        Which::Commutator => &[ProbeKind::Commutator],
        Which::Pressure => &[ProbeKind::Pressure],
        Which::Both => &[ProbeKind::Commutator, ProbeKind::Pressure],
    };
    let mut rows = Vec::new();
    for &kind in kinds {
        let u = field_for(&cfg, kind)?;
        for r in probe_sweep(&u, kind, cfg.tau, cfg.s, &orders)? {
            manifest.constant(format!("{}.implied_constant.m{}", kind.label(), r.m_max), r.implied_constant)?;
            manifest.constant(format!("{}.converged.m{}", kind.label(), r.m_max), r.converged)?;
            rows.push(Row::from(&r));
        }
    }
    write_csv(&manifest.output(out, "probes.csv"), &rows)?;
    manifest.write(out)?;
    Ok(true)
}
