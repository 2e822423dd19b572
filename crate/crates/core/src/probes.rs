//! Truncated evaluation of both sides of the commutator and pressure
//! estimates, reported as implied constants.
//!
//! The commutator side needs `‖∂^βu·∇∂^{α−β}u‖` for every `0 ≠ β ≤ α`. For
//! fields with few retained modes the product is formed exactly by modal
//! convolution over the pairs `k + l = q`, which reproduces the dealiased
//! pseudo-spectral product whenever the band fits the two-thirds rule.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::gevrey::norms::{compensated_sum, seminorm_table, sup_seminorms, x_norm, DerivativeNorms, FLOOR_REL};
use crate::gevrey::random::{impose_parity, make_real, project_divergence_free};
use crate::gevrey::{Geometry, SeminormTable, SpectralField};
use crate::multiindex::{of_order, MultiIndex};
use crate::neumann;

/// Above this many `(pair, β, α−β)` evaluations the commutator probe refuses
/// to run.
pub const WORK_LIMIT: f64 = 2e11;

/// A report counts as converged when the last term is below this share of
/// the truncated sum.
pub const CONVERGED_TAIL: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeKind {
    Commutator,
    Pressure,
}

impl ProbeKind {
    pub fn label(&self) -> &'static str {
        match self {
            ProbeKind::Commutator => "commutator",
            ProbeKind::Pressure => "pressure",
        }
    }
}

/// Left side of a probe split by order, before the `τ` weights:
/// `terms[m]` is the inner sum over `|α| = m` (zero below 3).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeTerms {
    pub kind: ProbeKind,
    pub terms: Vec<f64>,
}

impl ProbeTerms {
    pub fn m_max(&self) -> usize {
        self.terms.len() - 1
    }

    /// Weighted terms `terms[m] τ^{m−3}/(m−3)!^s` for `m = 3..=m_max`.
    pub fn weighted(&self, tau: f64, s: f64, m_max: usize) -> Vec<f64> {
        (3..=m_max.min(self.m_max()))
            .map(|m| {
                let j = m - 3;
                let t = self.terms[m];
                if t == 0.0 {
                    return 0.0;
                }
                let ln_w = if j == 0 { 0.0 } else { j as f64 * tau.ln() - s * ln_gamma(j as f64 + 1.0) };
                let w = ln_w.exp();
                if j < 2 {
                    t * tau.powi(j as i32)
                } else if w.is_finite() && w > 0.0 {
                    t * w
                } else {
                    (t.ln() + ln_w).exp()
                }
            })
            .collect()
    }
}

/// Right-side ingredients shared by both probes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RightSide {
    /// `|u|_{m,∞}` for `m = 0..=3`.
    pub sup: Vec<f64>,
    /// `|u|_m` up to the largest truncation.
    pub table: SeminormTable,
}

impl RightSide {
    pub fn new(u: &SpectralField, s: f64, m_max: usize) -> Result<Self> {
        Ok(RightSide { sup: sup_seminorms(u, 3, 2)?, table: seminorm_table(u, m_max.max(3), s, false)? })
    }

    fn truncated(&self, m_max: usize) -> Result<SeminormTable> {
        let mut t = SeminormTable::from_values(self.table.s, self.table.l2_seminorms[..=m_max].to_vec())?;
        t.floor_order = self.table.floor_order;
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub kind: ProbeKind,
    pub m_max: usize,
    pub tau: f64,
    pub s: f64,
    pub lhs: f64,
    /// `𝒞₁` or `𝒫₁`
    pub group1: f64,
    /// `𝒞₂` or `𝒫₂`
    pub group2: f64,
    pub x_norm: f64,
    pub y_norm: f64,
    /// `lhs / (group1 + group2·‖u‖_{Y_τ})`
    pub implied_constant: f64,
    /// Last weighted term over the truncated sum.
    pub tail_ratio: f64,
    pub converged: bool,
}

/// Assemble a report at truncation `m_max`.
pub fn report(terms: &ProbeTerms, rhs: &RightSide, tau: f64, s: f64, m_max: usize) -> Result<ProbeReport> {
    if m_max < 3 || m_max > terms.m_max() || m_max > rhs.table.m_max {
        return Err(Error::InvalidArgument(format!("truncation {m_max} outside the computed range")));
    }
    let w = terms.weighted(tau, s, m_max);
    let lhs = compensated_sum(&w);
    let tail_ratio = if lhs > 0.0 { w.last().copied().unwrap_or(0.0) / lhs } else { 0.0 };
    let norms = x_norm(&rhs.truncated(m_max)?, tau)?;
    let (l2, sup) = (&rhs.table.l2_seminorms, &rhs.sup);
    let mut group1 = sup[1] * l2[3] + sup[2] * l2[2] + tau * sup[2] * l2[3];
    if terms.kind == ProbeKind::Pressure {
        group1 += tau * tau * sup[3] * l2[3];
    }
    let group2 = tau * sup[1] + tau.powi(2) * sup[2] + tau.powi(3) * sup[3] + tau.powf(1.5) * norms.x_norm;
    let den = group1 + group2 * norms.y_norm;
    let implied_constant = if lhs == 0.0 {
        0.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        lhs / den
    };
    Ok(ProbeReport {
        kind: terms.kind,
        m_max,
        tau,
        s,
        lhs,
        group1,
        group2,
        x_norm: norms.x_norm,
        y_norm: norms.y_norm,
        implied_constant,
        tail_ratio,
        converged: tail_ratio < CONVERGED_TAIL,
    })
}

/// Modes whose coefficients rise above the round-off floor.
fn significant_modes(u: &SpectralField) -> Vec<crate::gevrey::Mode> {
    let cut = FLOOR_REL * u.max_abs();
    u.modes().into_iter().filter(|m| m.coeffs.iter().any(|c| c.norm() > cut)).collect()
}

/// Copy of `v` with round-off-level coefficients set to zero.
pub fn pruned(v: &SpectralField) -> SpectralField {
    let cut = FLOOR_REL * v.max_abs();
    let mut out = v.clone();
    for c in 0..out.components() {
        for z in out.coeffs_mut(c) {
            if z.norm() <= cut {
                *z = Complex64::default();
            }
        }
    }
    out
}

fn check_vector(u: &SpectralField) -> Result<()> {
    if u.components() != 3 || u.geometry() == Geometry::Torus2 {
        return Err(Error::Geometry("probes need a three-component velocity in 3D".into()));
    }
    Ok(())
}

/// Interaction table for `∂^βu·∇∂^{α−β}u`: every pair of modes `(k, l)`
/// with `c_i(k, l) = Σ_j û_j(k) (i l_j) û_i(l)`, grouped by `q = k + l`.
struct PairTable {
    /// per pair, per axis, `k_a^e` and `l_a^e` for `e = 0..=order`
    kpow: Vec<[Vec<f64>; 3]>,
    lpow: Vec<[Vec<f64>; 3]>,
    coef: Vec<[Complex64; 3]>,
    target: Vec<usize>,
    targets: usize,
}

impl PairTable {
    fn new(u: &SpectralField, order: usize) -> Self {
        let modes = significant_modes(u);
        let powers = |k: [f64; 3]| {
            [0, 1, 2].map(|a| {
                let mut row = Vec::with_capacity(order + 1);
                let mut acc = 1.0;
                for _ in 0..=order {
                    row.push(acc);
                    acc *= k[a];
                }
                row
            })
        };
        let mut slots: HashMap<[i64; 3], usize> = HashMap::new();
        let (mut kpow, mut lpow, mut coef, mut target) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for mk in &modes {
            for ml in &modes {
                let mut c = [Complex64::default(); 3];
                for (i, ci) in c.iter_mut().enumerate() {
                    for j in 0..3 {
                        *ci += mk.coeffs[j] * Complex64::new(0.0, ml.k[j]) * ml.coeffs[i];
                    }
                }
                if c.iter().all(|z| *z == Complex64::default()) {
                    continue;
                }
                let q = [mk.index[0] + ml.index[0], mk.index[1] + ml.index[1], mk.index[2] + ml.index[2]];
                let next = slots.len();
                target.push(*slots.entry(q).or_insert(next));
                kpow.push(powers(mk.k));
                lpow.push(powers(ml.k));
                coef.push(c);
            }
        }
        PairTable { kpow, lpow, coef, target, targets: slots.len() }
    }

    /// `Σ_i (Σ_q |Σ_{k+l=q} k^β l^γ c_i(k,l)|²)^{1/2}`, without the volume.
    fn product_norm(&self, beta: &MultiIndex, gamma: &MultiIndex, acc: &mut [[Complex64; 3]]) -> f64 {
        acc.iter_mut().for_each(|a| *a = [Complex64::default(); 3]);
        let (b, g) = (beta.components(), gamma.components());
        for p in 0..self.coef.len() {
            let (kp, lp) = (&self.kpow[p], &self.lpow[p]);
            let mono = kp[0][b[0] as usize]
                * kp[1][b[1] as usize]
                * kp[2][b[2] as usize]
                * lp[0][g[0] as usize]
                * lp[1][g[1] as usize]
                * lp[2][g[2] as usize];
            if mono == 0.0 {
                continue;
            }
            let slot = &mut acc[self.target[p]];
            for i in 0..3 {
                slot[i] += self.coef[p][i] * mono;
            }
        }
        (0..3).map(|i| acc.iter().map(|a| a[i].norm_sqr()).sum::<f64>().sqrt()).sum()
    }
}

/// `Σ_{|α|=m} Σ_{0≠β≤α} M_α binom(α,β) ‖∂^βu·∇∂^{α−β}u‖` for `m ≤ m_max`.
pub fn commutator_terms(u: &SpectralField, m_max: usize) -> Result<ProbeTerms> {
    check_vector(u)?;
    let table = PairTable::new(u, m_max);
    let work: f64 = table.coef.len() as f64 * (3..=m_max).map(|m| binom_f(m + 5, 5)).sum::<f64>();
    if work > WORK_LIMIT {
        return Err(Error::Resolution(format!(
            "{} interacting mode pairs at m_max = {m_max} exceed the probe budget",
            table.coef.len()
        )));
    }
    let sqrt_v = u.geometry().volume().sqrt();
    let mut terms = vec![0.0; m_max + 1];
    for (m, slot) in terms.iter_mut().enumerate().skip(3) {
        let alphas: Vec<MultiIndex> = of_order(m as u32).collect();
        let parts: Vec<f64> = alphas
            .par_iter()
            .map_init(
                || vec![[Complex64::default(); 3]; table.targets],
                |acc, alpha| {
                    let mut sum = 0.0;
                    for beta in alpha.below() {
                        if beta.order() == 0 {
                            continue;
                        }
                        let gamma = alpha.checked_sub(&beta).expect("β ≤ α");
                        sum += alpha.binom_f64(&beta) * table.product_norm(&beta, &gamma, acc);
                    }
                    alpha.weight_f64() * sum
                },
            )
            .collect();
        *slot = sqrt_v * compensated_sum(&parts);
    }
    Ok(ProbeTerms { kind: ProbeKind::Commutator, terms })
}

fn binom_f(n: usize, k: usize) -> f64 {
    crate::multiindex::binomial_f64(n as u32, k as u32)
}

/// Neumann pressure of a slab velocity, with the source cleaned of
/// round-off-level coefficients.
pub fn pressure_of(u: &SpectralField) -> Result<SpectralField> {
    if !u.geometry().is_slab() {
        return Err(Error::Geometry(format!("pressure probe needs a slab field, got {}", u.geometry().label())));
    }
    let source = pruned(&neumann::pressure_source(u)?);
    Ok(neumann::solve(&source)?.pressure)
}

/// `Σ_{|α|=m, α₃≠0} M_α ‖∇∂^αp‖` for `m ≤ m_max`.
pub fn pressure_terms(u: &SpectralField, m_max: usize) -> Result<ProbeTerms> {
    check_vector(u)?;
    let p = pressure_of(u)?;
    let norms = DerivativeNorms::new(&p, m_max as u32 + 1);
    let mut terms = vec![0.0; m_max + 1];
    for (m, slot) in terms.iter_mut().enumerate().skip(3) {
        let parts = normal_alphas(m as u32)
            .map(|a| {
                let grad: f64 =
                    (0..3).map(|i| norms.norm(&(a + MultiIndex::unit(i)))).collect::<Result<Vec<f64>>>()?.iter().sum();
                Ok(a.weight_f64() * grad)
            })
            .collect::<Result<Vec<f64>>>()?;
        *slot = compensated_sum(&parts);
    }
    Ok(ProbeTerms { kind: ProbeKind::Pressure, terms })
}

/// Multi-indices of order `m` with a normal component.
pub fn normal_alphas(m: u32) -> impl Iterator<Item = MultiIndex> {
    of_order(m).filter(|a| a.a3 != 0)
}

/// Reports at every truncation in `m_values` from one evaluation.
pub fn probe_sweep(u: &SpectralField, kind: ProbeKind, tau: f64, s: f64, m_values: &[usize]) -> Result<Vec<ProbeReport>> {
    if !(tau > 0.0) || s < 1.0 {
        return Err(Error::InvalidArgument(format!("need τ > 0 and s ≥ 1, got τ = {tau}, s = {s}")));
    }
    let top = m_values.iter().copied().max().ok_or_else(|| Error::InvalidArgument("no truncation given".into()))?;
    if top < 3 {
        return Err(Error::InvalidArgument(format!("truncation {top} is below 3")));
    }
    let terms = match kind {
        ProbeKind::Commutator => commutator_terms(u, top)?,
        ProbeKind::Pressure => pressure_terms(u, top)?,
    };
    let rhs = RightSide::new(u, s, top)?;
    m_values.iter().map(|&m| report(&terms, &rhs, tau, s, m)).collect()
}

pub fn commutator_probe(u: &SpectralField, tau: f64, s: f64, m_max: usize) -> Result<ProbeReport> {
    Ok(probe_sweep(u, ProbeKind::Commutator, tau, s, &[m_max])?.remove(0))
}

pub fn pressure_probe(u: &SpectralField, tau: f64, s: f64, m_max: usize) -> Result<ProbeReport> {
    Ok(probe_sweep(u, ProbeKind::Pressure, tau, s, &[m_max])?.remove(0))
}

/// Seeded divergence-free test velocity: a few random wavevectors with
/// `|k| ≤ k_max`, amplitudes `e^{−τ₀|k|}`; on the slab the reflection
/// symmetry is imposed.
pub fn probe_field(geometry: Geometry, shape: [usize; 3], seed: u64, modes: usize, k_max: f64, tau0: f64) -> Result<SpectralField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = SpectralField::vector(geometry, shape)?;
    let scale3 = geometry.k3_scale();
    let reach = [k_max.floor() as i64, k_max.floor() as i64, (k_max / scale3).floor() as i64];
    let mut placed = 0;
    let mut attempts = 0;
    while placed < modes {
        attempts += 1;
        if attempts > 10_000 {
            return Err(Error::InvalidArgument(format!("no wavevectors with |k| ≤ {k_max} available")));
        }
        let idx = [0, 1, 2].map(|a| rng.gen_range(-reach[a]..=reach[a]));
        let k = u.wavevector_of(idx);
        let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        if kn == 0.0 || kn > k_max {
            continue;
        }
        let amp = (-tau0 * kn).exp();
        for comp in 0..3 {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            u.add_conjugate_pair(comp, idx, Complex64::new(re, im) * amp)?;
        }
        placed += 1;
    }
    make_real(&mut u);
    if geometry.is_slab() {
        impose_parity(&mut u);
    }
    project_divergence_free(&mut u)?;
    Ok(u)
}

/// The fixed family used for stability checks: `count` fields from
/// consecutive seeds, six wavevectors with `|k| ≤ 3`, `τ₀ = 0.5`.
pub fn probe_family(geometry: Geometry, shape: [usize; 3], first_seed: u64, count: usize) -> Result<Vec<SpectralField>> {
    (0..count as u64).map(|i| probe_field(geometry, shape, first_seed + i, 6, 3.0, 0.5)).collect()
}
