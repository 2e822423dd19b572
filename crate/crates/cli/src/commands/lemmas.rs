//! `verify-lemmas`: exhaustive big-integer checks with a CSV certificate.

use std::collections::HashMap;
use std::path::Path;

use analyticity::multiindex::{
    binomial, choose_ratio, product_identity_sides, ratio_to_f64, star_sup, sweep_choose_lemma, up_to_order,
    BigRatio, StarTable, StarVariant,
};
use analyticity::MultiIndex;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::output::{write_csv, Manifest};

#[derive(clap::Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Args {
    /// Largest |α| in the choose sweep.
    #[arg(long)]
    max_order: Option<u32>,
    /// Largest β₁+β₂ in the star-ratio table.
    #[arg(long)]
    star_range: Option<u32>,
    /// Range within which the star sup must already be attained.
    #[arg(long)]
    star_attained: Option<u32>,
    /// Largest m in the product identity.
    #[arg(long)]
    product_order: Option<u32>,
    /// Number of random coefficient maps for the product identity.
    #[arg(long)]
    product_seeds: Option<u64>,
    /// Certificate file name inside `--out`.
    #[arg(long)]
    certificate: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Config {
    pub max_order: u32,
    pub star_range: u32,
    pub star_attained: u32,
    pub product_order: u32,
    pub product_seeds: u64,
    pub certificate: String,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_order: 20,
            star_range: 400,
            star_attained: 50,
            product_order: 8,
            product_seeds: 100,
            certificate: "certificates.csv".into(),
        }
    }
}

#[derive(Debug, Serialize)]
struct Row {
    lemma_id: &'static str,
    parameters: String,
    lhs: String,
    rhs: String,
    ratio: f64,
    pass: bool,
}

fn show(a: &MultiIndex) -> String {
    format!("({},{},{})", a.a1, a.a2, a.a3)
}

fn choose_rows(cfg: &Config, rows: &mut Vec<Row>, m: &mut Manifest) -> anyhow::Result<usize> {
    let sweep = sweep_choose_lemma(cfg.max_order);
    for v in &sweep.violations {
        let ratio = ratio_to_f64(&v.lhs) / v.rhs.to_string().parse::<f64>().unwrap_or(f64::NAN);
        rows.push(Row {
            lemma_id: "choose",
            parameters: format!("alpha={};beta={}", show(&v.alpha), show(&v.beta)),
            lhs: v.lhs.to_string(),
            rhs: v.rhs.to_string(),
            ratio,
            pass: false,
        });
    }
    let (alpha, beta, tight) = &sweep.tightest;
    rows.push(Row {
        lemma_id: "choose",
        parameters: format!("max_order={};pairs={};tightest_alpha={};tightest_beta={}", cfg.max_order, sweep.pairs_checked, show(alpha), show(beta)),
        lhs: choose_ratio(alpha, beta)?.to_string(),
        rhs: binomial(alpha.order(), beta.order()).to_string(),
        ratio: ratio_to_f64(tight),
        pass: sweep.violations.is_empty(),
    });
    m.constant("choose.pairs_checked", sweep.pairs_checked)?;
    m.constant("choose.tightest_ratio", ratio_to_f64(tight))?;
    Ok(sweep.violations.len())
}

fn product_rows(cfg: &Config, rows: &mut Vec<Row>) -> anyhow::Result<usize> {
    let alphas: Vec<MultiIndex> = up_to_order(cfg.product_order).collect();
    let maps: Vec<(HashMap<MultiIndex, BigInt>, HashMap<MultiIndex, BigInt>)> = (0..cfg.product_seeds)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut draw = || -> HashMap<MultiIndex, BigInt> {
                alphas.iter().map(|a| (*a, BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000)))).collect()
            };
            (draw(), draw())
        })
        .collect();
    let mut failures = 0;
    for m in 0..=cfg.product_order {
        for j in 0..=m {
            let mut first = None;
            let mut unequal = 0;
            for (x, y) in &maps {
                let sides = product_identity_sides(m, j, x, y)?;
                if !sides.equal() {
                    unequal += 1;
                }
                first.get_or_insert(sides);
            }
            failures += unequal;
            let Some(sides) = first else { continue };
            let ratio = if sides.rhs == BigInt::from(0) {
                1.0
            } else {
                ratio_to_f64(&BigRatio::new(sides.lhs.clone(), sides.rhs.clone()))
            };
            rows.push(Row {
                lemma_id: "product",
                parameters: format!("m={m};j={j};seeds={};unequal={unequal}", cfg.product_seeds),
                lhs: sides.lhs.to_string(),
                rhs: sides.rhs.to_string(),
                ratio,
                pass: unequal == 0,
            });
        }
    }
    Ok(failures)
}

fn star_rows(cfg: &Config, rows: &mut Vec<Row>, m: &mut Manifest) -> anyhow::Result<usize> {
    let table = StarTable::new(cfg.star_range);
    let small = cfg.star_attained.min(cfg.star_range);
    let mut failures = 0;
    for variant in StarVariant::ALL {
        let wide = star_sup(&table, cfg.star_range, variant);
        let narrow = star_sup(&table, small, variant);
        let pass = wide.ratio == narrow.ratio;
        failures += usize::from(!pass);
        rows.push(Row {
            lemma_id: variant.label(),
            parameters: format!("range={};attained_within={small};beta=({},{});m={}", cfg.star_range, wide.b1, wide.b2, wide.m),
            lhs: wide.ratio.to_string(),
            rhs: narrow.ratio.to_string(),
            ratio: wide.ratio_f64(),
            pass,
        });
        m.constant(format!("{}.sup", variant.label()), wide.ratio_f64())?;
        m.constant(format!("{}.sup_exact", variant.label()), wide.ratio.to_string())?;
    }
    Ok(failures)
}

pub fn run(cfg: Config, out: &Path) -> anyhow::Result<bool> {
    let mut manifest = Manifest::new("verify-lemmas", &cfg)?;
    let mut rows = Vec::new();
    let choose = choose_rows(&cfg, &mut rows, &mut manifest)?;
    let product = product_rows(&cfg, &mut rows)?;
    let star = star_rows(&cfg, &mut rows, &mut manifest)?;
    write_csv(&manifest.output(out, &cfg.certificate), &rows)?;
    manifest.constant("violations.choose", choose)?;
    manifest.constant("violations.product", product)?;
    manifest.constant("violations.star_not_attained", star)?;
    manifest.write(out)?;
    Ok(choose + product + star == 0)
}
