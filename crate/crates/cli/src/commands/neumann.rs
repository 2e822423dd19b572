//! `solve-neumann`: slab pressure from a source and the estimate probes.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use analyticity::gevrey::random::{random_field, Envelope};
use analyticity::gevrey::snapshot;
use analyticity::gevrey::{Geometry, Parity, SpectralField};
use analyticity::multiindex::up_to_order;
use analyticity::neumann::{d3_recursion, estimate_probe_53, remark52_probe, solve, EstimateKind};
use analyticity::MultiIndex;
use anyhow::bail;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::parse_list;
use crate::output::{write_csv, Manifest};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Probe {
    Recursion,
    Estimate,
    Remark52,
    All,
}

#[derive(clap::Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Args {
    /// Scalar slab snapshot holding the source; a seeded random source is
    /// used when absent.
    #[arg(long)]
    source: Option<PathBuf>,
    #[arg(long, value_enum)]
    probe: Option<Probe>,
    /// Single multi-index `a1,a2,a3`; every index up to `--max-order`
    /// otherwise.
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    max_order: Option<u32>,
    /// Seed of the random source.
    #[arg(long)]
    seed: Option<u64>,
    /// Grid size per axis of the random source.
    #[arg(long)]
    n: Option<usize>,
    /// Slab depth of the random source.
    #[arg(long)]
    depth: Option<f64>,
    /// Envelope decay of the random source.
    #[arg(long)]
    tau0: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Config {
    pub source: Option<PathBuf>,
    pub probe: Probe,
    pub alpha: Option<String>,
    pub max_order: u32,
    pub seed: u64,
    pub n: usize,
    pub depth: f64,
    pub tau0: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config { source: None, probe: Probe::All, alpha: None, max_order: 6, seed: 0, n: 32, depth: 2.0 * PI, tau0: 0.3 }
    }
}

#[derive(Debug, Serialize)]
struct Row {
    probe: &'static str,
    alpha: String,
    variant: &'static str,
    lhs: Option<f64>,
    rhs: Option<f64>,
    ratio: Option<f64>,
}

fn source(cfg: &Config) -> anyhow::Result<SpectralField> {
    if let Some(path) = &cfg.source {
        return Ok(snapshot::load(path)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let env = Envelope { tau0: cfg.tau0, band: (cfg.n / 3) as i64 };
    let mut v = random_field(Geometry::Slab { depth: cfg.depth }, [cfg.n; 3], vec![Parity::Even], env, &mut rng)?;
    v.coeffs_mut(0)[0] = Complex64::default();
    Ok(v)
}

fn alphas(cfg: &Config) -> anyhow::Result<Vec<MultiIndex>> {
    match &cfg.alpha {
        Some(text) => {
            let parts: Vec<u32> = parse_list(text)?;
            let [a1, a2, a3] = parts[..] else {
                bail!("--alpha takes three components, got {text:?}");
            };
            Ok(vec![MultiIndex::new(a1, a2, a3)])
        }
        None => Ok(up_to_order(cfg.max_order).collect()),
    }
}

fn show(a: &MultiIndex) -> String {
    format!("({},{},{})", a.a1, a.a2, a.a3)
}

pub fn run(cfg: Config, out: &Path) -> anyhow::Result<bool> {
    let mut manifest = Manifest::new("solve-neumann", &cfg)?;
    let v = source(&cfg)?;
    let sol = solve(&v)?;
    let p = &sol.pressure;
    snapshot::save(&manifest.output(out, "pressure.snap"), p)?;
    manifest.constant("h2_constant", sol.h2_constant)?;

    let wants = |probe: Probe| cfg.probe == probe || cfg.probe == Probe::All;
    let mut rows = Vec::new();
    let mut maxima: BTreeMap<String, f64> = BTreeMap::new();
    let mut bump = |key: &str, x: f64| {
        let e = maxima.entry(key.to_string()).or_insert(0.0);
        *e = e.max(x);
    };
    for alpha in alphas(&cfg)? {
        if wants(Probe::Recursion) && alpha.a3 >= 1 {
            let rec = d3_recursion(p, &v, &alpha)?;
            let direct = p.derivative(&(alpha + MultiIndex::unit(2)));
            let (err, scale) = (rec.axpy(-1.0, &direct)?.l2_norm(), direct.l2_norm());
            let rel = if scale > 0.0 { err / scale } else { err };
            bump("recursion.max_relative_error", rel);
            rows.push(Row { probe: "recursion", alpha: show(&alpha), variant: "d3", lhs: Some(err), rhs: Some(scale), ratio: Some(rel) });
        }
        if wants(Probe::Estimate) {
            for kind in EstimateKind::ALL.into_iter().filter(|k| alpha.a3 >= k.min_normal_order()) {
                let e = estimate_probe_53(p, &v, &alpha, kind)?;
                bump(&format!("estimate.{}.max_ratio", kind.label()), e.ratio);
                rows.push(Row {
                    probe: "estimate",
                    alpha: show(&alpha),
                    variant: kind.label(),
                    lhs: Some(e.lhs),
                    rhs: Some(e.rhs_sum),
                    ratio: Some(e.ratio),
                });
            }
        }
        if wants(Probe::Remark52) && alpha.a3 == 0 {
            let (r1, r2) = remark52_probe(p, &v, &alpha)?;
            for (variant, r) in [("d1", r1), ("d2", r2)] {
                if let Some(r) = r {
                    bump("remark52.max_ratio", r);
                }
                rows.push(Row { probe: "remark52", alpha: show(&alpha), variant, lhs: None, rhs: None, ratio: r });
            }
        }
    }
    write_csv(&manifest.output(out, "neumann.csv"), &rows)?;
    for (k, x) in maxima {
        manifest.constant(k, x)?;
    }
    manifest.write(out)?;
    Ok(true)
}
