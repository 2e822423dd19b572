//! Derivative norms, the semi-norms `|v|_m` and `|v|_{m,∞}`, and the
//! weighted series norms `X_τ` and `Y_τ`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::fft::FftBox;
use super::field::SpectralField;
use crate::error::{Error, Result};
use crate::multiindex::{of_order, MultiIndex};

/// Coefficients at or below this fraction of the largest one are treated as
/// round-off floor.
pub const FLOOR_REL: f64 = 1e-13;

/// Above this many retained modes sup-norms go through the FFT.
const SPARSE_SUP_MODES: usize = 64;

/// Sobolev index used for `‖u‖_{H^r}` unless configured otherwise.
pub const DEFAULT_SOBOLEV_INDEX: f64 = 5.0;

struct PowerTable {
    /// `scale = max |k_a|` over nonzero modes, at least 1.
    scale: f64,
    /// per mode and axis, `(|k_a|/scale)^{2n}` for `n = 0..=order`
    pows: Vec<[Vec<f64>; 3]>,
    /// per component, per mode, `|ĉ|²`
    weights: Vec<Vec<f64>>,
}

impl PowerTable {
    fn new(v: &SpectralField, order: u32) -> Self {
        let modes = v.modes();
        let scale = modes
            .iter()
            .flat_map(|m| m.k.iter().map(|x| x.abs()))
            .fold(1.0f64, f64::max);
        let pows = modes
            .iter()
            .map(|m| {
                [0, 1, 2].map(|a| {
                    let q = (m.k[a] / scale).powi(2);
                    let mut row = Vec::with_capacity(order as usize + 1);
                    let mut acc = 1.0;
                    for _ in 0..=order {
                        row.push(acc);
                        acc *= q;
                    }
                    row
                })
            })
            .collect();
        let weights = (0..v.components())
            .map(|c| modes.iter().map(|m| m.coeffs[c].norm_sqr()).collect())
            .collect();
        PowerTable { scale, pows, weights }
    }

    /// `Σ_k |k̃^α|² |ĉ_k|²` for one component.
    fn moment(&self, comp: usize, alpha: &MultiIndex) -> f64 {
        let (a1, a2, a3) = (alpha.a1 as usize, alpha.a2 as usize, alpha.a3 as usize);
        self.pows
            .iter()
            .zip(&self.weights[comp])
            .map(|(p, w)| p[0][a1] * p[1][a2] * p[2][a3] * w)
            .sum()
    }

    /// `Σ_c ‖∂^α v_c‖_{L²}` in the form `(ln scale^{|α|}, Σ_c sqrt(V·moment))`.
    fn norm_parts(&self, alpha: &MultiIndex, volume: f64) -> (f64, f64) {
        let body: f64 = (0..self.weights.len()).map(|c| (volume * self.moment(c, alpha)).sqrt()).sum();
        (alpha.order() as f64 * self.scale.ln(), body)
    }
}

/// `‖∂^α v‖_{L²}` by Parseval, summed over components.
pub fn derivative_l2_norm(v: &SpectralField, alpha: &MultiIndex) -> Result<f64> {
    DerivativeNorms::new(v, alpha.a1.max(alpha.a2).max(alpha.a3)).norm(alpha)
}

/// Precomputed modal powers for evaluating many `‖∂^α v‖_{L²}` on one field.
pub struct DerivativeNorms {
    table: PowerTable,
    volume: f64,
    max_axis_order: u32,
}

impl DerivativeNorms {
    /// Supports every `α` whose components are at most `max_axis_order`.
    pub fn new(v: &SpectralField, max_axis_order: u32) -> Self {
        DerivativeNorms { table: PowerTable::new(v, max_axis_order), volume: v.geometry().volume(), max_axis_order }
    }

    pub fn norm(&self, alpha: &MultiIndex) -> Result<f64> {
        if alpha.a1.max(alpha.a2).max(alpha.a3) > self.max_axis_order {
            return Err(Error::InvalidArgument(format!("{alpha} exceeds the prepared order {}", self.max_axis_order)));
        }
        let (ln_scale, body) = self.table.norm_parts(alpha, self.volume);
        finite_product(ln_scale, body, alpha)
    }

    /// Norm of a single component.
    pub fn component_norm(&self, comp: usize, alpha: &MultiIndex) -> Result<f64> {
        let body = (self.volume * self.table.moment(comp, alpha)).sqrt();
        finite_product(alpha.order() as f64 * self.table.scale.ln(), body, alpha)
    }
}

/// Natural log of [`derivative_l2_norm`], finite even where the norm itself
/// overflows; `-∞` for a vanishing derivative.
pub fn derivative_l2_norm_ln(v: &SpectralField, alpha: &MultiIndex) -> f64 {
    let (ln_scale, body) = PowerTable::new(v, alpha.a1.max(alpha.a2).max(alpha.a3)).norm_parts(alpha, v.geometry().volume());
    ln_scale + body.ln()
}

fn finite_product(ln_scale: f64, body: f64, alpha: &MultiIndex) -> Result<f64> {
    if body == 0.0 {
        return Ok(0.0);
    }
    let value = (ln_scale + body.ln()).exp();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(format!("‖∂^α v‖ for α = {alpha} exceeds the floating range")))
    }
}

/// The sequence `|v|_m`, optionally `|v|_{m,∞}`, for one field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeminormTable {
    pub s: f64,
    pub m_max: usize,
    pub l2_seminorms: Vec<f64>,
    pub sup_seminorms: Option<Vec<f64>>,
    /// First order at which round-off-level modes outweigh resolved ones.
    pub floor_order: Option<usize>,
}

impl SeminormTable {
    /// Table from given values, e.g. synthetic sequences.
    pub fn from_values(s: f64, l2_seminorms: Vec<f64>) -> Result<Self> {
        if s < 1.0 {
            return Err(Error::InvalidArgument(format!("Gevrey index s = {s} must be ≥ 1")));
        }
        if l2_seminorms.iter().any(|x| !(*x >= 0.0)) {
            return Err(Error::InvalidArgument("semi-norms must be non-negative".into()));
        }
        let m_max = l2_seminorms.len().saturating_sub(1);
        Ok(SeminormTable { s, m_max, l2_seminorms, sup_seminorms: None, floor_order: None })
    }

    pub fn get(&self, m: usize) -> f64 {
        self.l2_seminorms.get(m).copied().unwrap_or(0.0)
    }

    pub fn sup(&self, m: usize) -> Option<f64> {
        self.sup_seminorms.as_ref().and_then(|s| s.get(m).copied())
    }

    /// Highest order with a nonzero entry.
    pub fn last_nonzero(&self) -> Option<usize> {
        self.l2_seminorms.iter().rposition(|&x| x != 0.0)
    }

    /// Scale every entry by `c ≥ 0`.
    pub fn scaled(&self, c: f64) -> SeminormTable {
        let mut out = self.clone();
        out.l2_seminorms.iter_mut().for_each(|x| *x *= c);
        if let Some(s) = out.sup_seminorms.as_mut() {
            s.iter_mut().for_each(|x| *x *= c);
        }
        out
    }
}

/// `|v|_m = Σ_{|α|=m} M_α ‖∂^α v‖_{L²}` for `m = 0..=m_max`.
pub fn seminorm_table(v: &SpectralField, m_max: usize, s: f64, with_sup: bool) -> Result<SeminormTable> {
    if s < 1.0 {
        return Err(Error::InvalidArgument(format!("Gevrey index s = {s} must be ≥ 1")));
    }
    let table = PowerTable::new(v, m_max as u32);
    let volume = v.geometry().volume();
    let l2 = (0..=m_max as u32)
        .map(|m| {
            let alphas: Vec<MultiIndex> = of_order(m).collect();
            // every α of one order shares the factor scale^m, applied in log form
            let total: f64 = alphas.par_iter().map(|a| a.weight_f64() * table.norm_parts(a, volume).1).sum();
            if total == 0.0 {
                return Ok(0.0);
            }
            let value = (m as f64 * table.scale.ln() + total.ln()).exp();
            if value.is_finite() {
                Ok(value)
            } else {
                Err(Error::Overflow(format!("|v|_{m} exceeds the floating range")))
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let sup = if with_sup { Some(sup_seminorms(v, m_max, 2)?) } else { None };
    Ok(SeminormTable { s, m_max, l2_seminorms: l2, sup_seminorms: sup, floor_order: floor_order(v, m_max) })
}

/// First order `m` at which round-off-level modes, weighted by `|k|^m`,
/// reach the largest resolved mode. `None` when no such modes exist.
pub fn floor_order(v: &SpectralField, m_max: usize) -> Option<usize> {
    let peak = v.max_abs();
    if peak == 0.0 {
        return None;
    }
    let cut = FLOOR_REL * peak;
    let mut resolved: Vec<(f64, f64)> = Vec::new();
    let mut floor: Vec<(f64, f64)> = Vec::new();
    for mode in v.modes() {
        let kn = (mode.k[0].powi(2) + mode.k[1].powi(2) + mode.k[2].powi(2)).sqrt();
        for c in &mode.coeffs {
            let a = c.norm();
            if a == 0.0 {
                continue;
            }
            let entry = (kn.max(f64::MIN_POSITIVE).ln(), a.ln());
            if a > cut {
                resolved.push(entry);
            } else {
                floor.push(entry);
            }
        }
    }
    if floor.is_empty() {
        return None;
    }
    let best = |set: &[(f64, f64)], m: f64| set.iter().map(|(lk, la)| m * lk + la).fold(f64::NEG_INFINITY, f64::max);
    (0..=m_max).find(|&m| best(&floor, m as f64) >= best(&resolved, m as f64))
}

/// `|v|_{m,∞} = Σ_{|α|=m} M_α ‖∂^α v‖_{L^∞}` for `m = 0..=m_max`, the
/// `L^∞` norms taken as maxima on the grid refined by `oversample`.
pub fn sup_seminorms(v: &SpectralField, m_max: usize, oversample: usize) -> Result<Vec<f64>> {
    let alphas: Vec<MultiIndex> = (0..=m_max as u32).flat_map(of_order).collect();
    let maxima = if v.nonzero_count() <= SPARSE_SUP_MODES {
        sup_norms_sparse(v, &alphas, oversample)
    } else {
        sup_norms_fft(v, &alphas, oversample)
    };
    let mut out = vec![0.0; m_max + 1];
    for (a, per_comp) in alphas.iter().zip(maxima) {
        out[a.order() as usize] += a.weight_f64() * per_comp.iter().sum::<f64>();
    }
    Ok(out)
}

/// `‖∂^α v_c‖_∞` on the refined grid, per α and component, by inverse FFT.
pub fn sup_norms_fft(v: &SpectralField, alphas: &[MultiIndex], oversample: usize) -> Vec<Vec<f64>> {
    let fft = FftBox::new(v.grid_shape(oversample));
    alphas
        .iter()
        .map(|a| {
            let d = v.derivative(a);
            (0..v.components())
                .map(|c| d.to_grid_with(c, &fft).iter().fold(0.0f64, |m, x| m.max(x.abs())))
                .collect()
        })
        .collect()
}

/// Same quantity by direct summation over the retained modes at each node.
pub fn sup_norms_sparse(v: &SpectralField, alphas: &[MultiIndex], oversample: usize) -> Vec<Vec<f64>> {
    let modes = v.modes();
    let ncomp = v.components();
    let gshape = v.grid_shape(oversample);
    // coefficient of ∂^α v_c at each mode, laid out [α][c][mode]
    let coef: Vec<Complex64> = alphas
        .iter()
        .flat_map(|a| {
            let modes = &modes;
            (0..ncomp).flat_map(move |c| modes.iter().map(move |m| m.coeffs[c] * SpectralField::symbol(m.k, a)))
        })
        .collect();
    let nm = modes.len();
    let axis_phase = |axis: usize| -> Vec<Vec<Complex64>> {
        modes
            .iter()
            .map(|m| {
                (0..gshape[axis])
                    .map(|i| {
                        let mut ijl = [0; 3];
                        ijl[axis] = i;
                        let x = v.node(gshape, ijl)[axis];
                        Complex64::from_polar(1.0, m.k[axis] * x)
                    })
                    .collect()
            })
            .collect()
    };
    let (e0, e1, e2) = (axis_phase(0), axis_phase(1), axis_phase(2));
    let slots = alphas.len() * ncomp;
    let plane_max: Vec<Vec<f64>> = (0..gshape[0])
        .into_par_iter()
        .map(|i| {
            let mut best = vec![0.0f64; slots];
            let mut phase = vec![Complex64::default(); nm];
            for j in 0..gshape[1] {
                for l in 0..gshape[2] {
                    for (q, p) in phase.iter_mut().enumerate() {
                        *p = e0[q][i] * e1[q][j] * e2[q][l];
                    }
                    for (slot, b) in best.iter_mut().enumerate() {
                        let row = &coef[slot * nm..(slot + 1) * nm];
                        let val: f64 = row.iter().zip(&phase).map(|(c, p)| c.re * p.re - c.im * p.im).sum();
                        *b = b.max(val.abs());
                    }
                }
            }
            best
        })
        .collect();
    let mut best = vec![0.0f64; slots];
    for row in plane_max {
        for (b, r) in best.iter_mut().zip(row) {
            *b = b.max(r);
        }
    }
    best.chunks(ncomp).map(|c| c.to_vec()).collect()
}

/// `‖u‖_{H^r} = (V Σ_k (1+|k|²)^r |û_k|²)^{1/2}`, Euclidean over components.
pub fn sobolev_norm(v: &SpectralField, r: f64) -> f64 {
    let mut acc = 0.0;
    for flat in 0..v.len() {
        let k = v.wavevector(flat);
        let w = (1.0 + k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).powf(r);
        for c in 0..v.components() {
            acc += w * v.coeffs(c)[flat].norm_sqr();
        }
    }
    (v.geometry().volume() * acc).sqrt()
}

/// Truncated `‖v‖_{X_τ}` and `‖v‖_{Y_τ}` with convergence diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GevreyNormResult {
    pub tau: f64,
    pub x_norm: f64,
    pub y_norm: f64,
    /// Last retained `X` term over the partial sum.
    pub tail_ratio: f64,
    /// Ratio of the last two `X` terms.
    pub term_ratio: f64,
    /// Round-off-level modes visibly affect the sum.
    pub floor_limited: bool,
    pub converged: bool,
}

/// `ln(τ^j / j!^s)`, with `0^0 = 1`.
fn ln_weight(tau: f64, j: usize, s: f64) -> f64 {
    let pow = if j == 0 { 0.0 } else { j as f64 * tau.ln() };
    pow - s * ln_factorial(j)
}

fn ln_factorial(j: usize) -> f64 {
    if j < 2 {
        0.0
    } else {
        ln_gamma(j as f64 + 1.0)
    }
}

/// `v·e^{ln_w}`, in log form only when the weight alone would overflow.
fn weighted(v: f64, ln_w: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    let w = ln_w.exp();
    if w.is_finite() && w > 0.0 {
        v * w
    } else {
        (v.ln() + ln_w).exp()
    }
}

/// `X = Σ_{m≥3} |v|_m τ^{m−3}/(m−3)!^s`, `Y = Σ_{m≥4} |v|_m (m−3) τ^{m−4}/(m−3)!^s`.
pub fn x_norm(table: &SeminormTable, tau: f64) -> Result<GevreyNormResult> {
    if !(tau > 0.0) {
        return Err(Error::InvalidArgument(format!("strip width τ = {tau} must be positive")));
    }
    let s = table.s;
    let term = |m: usize| -> f64 { weighted(table.get(m), ln_weight(tau, m - 3, s)) };
    let x_terms: Vec<f64> = (3..=table.m_max).map(term).collect();
    let y_terms: Vec<f64> = (4..=table.m_max)
        .map(|m| {
            let j = m - 3;
            let ln_w = (j as f64).ln() + ln_weight(tau, j - 1, 0.0) - s * ln_factorial(j);
            weighted(table.get(m), ln_w)
        })
        .collect();
    let x = compensated_sum(&x_terms);
    let y = compensated_sum(&y_terms);
    let last = x_terms.last().copied().unwrap_or(0.0);
    let prev = if x_terms.len() >= 2 { x_terms[x_terms.len() - 2] } else { 0.0 };
    let tail_ratio = if x > 0.0 { last / x } else { 0.0 };
    let term_ratio = if prev > 0.0 { last / prev } else { 0.0 };
    let floor_limited = match table.floor_order {
        Some(f) if f <= table.m_max => {
            let start = f.max(3) - 3;
            let affected = compensated_sum(&x_terms[start.min(x_terms.len())..]);
            affected > 1e-8 * x
        }
        _ => false,
    };
    let converged = x.is_finite() && tail_ratio < 1.0 && term_ratio < 1.0 && !floor_limited;
    Ok(GevreyNormResult { tau, x_norm: x, y_norm: y, tail_ratio, term_ratio, floor_limited, converged })
}

/// Neumaier compensated sum.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Outcome of [`max_tau_for_budget`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum TauBudget {
    Finite(f64),
    /// Every `τ` qualifies.
    Unbounded,
}

impl TauBudget {
    pub fn value(&self) -> f64 {
        match self {
            TauBudget::Finite(t) => *t,
            TauBudget::Unbounded => f64::INFINITY,
        }
    }
}

/// Largest `τ` whose converged `‖v‖_{X_τ}` stays within `m0`.
pub fn max_tau_for_budget(table: &SeminormTable, m0: f64) -> Result<TauBudget> {
    if !(m0 > table.get(3)) {
        return Err(Error::Precondition(format!("budget {m0} must exceed |v|_3 = {}", table.get(3))));
    }
    let ok = |tau: f64| -> bool { x_norm(table, tau).map(|r| r.converged && r.x_norm <= m0).unwrap_or(false) };
    const TAU_CEILING: f64 = 1e12;
    let mut hi = 1.0;
    while ok(hi) {
        if hi >= TAU_CEILING {
            return Ok(TauBudget::Unbounded);
        }
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    while lo > 1e-300 && !ok(lo) {
        lo /= 2.0;
    }
    if !ok(lo) {
        return Ok(TauBudget::Finite(0.0));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-14 * hi {
            break;
        }
    }
    Ok(TauBudget::Finite(lo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gevrey::field::Geometry;
    use std::f64::consts::{E, PI};

    fn sin_x1() -> SpectralField {
        let mut f = SpectralField::scalar(Geometry::Torus3, [8, 8, 8]).unwrap();
        f.add_sin(0, [1, 0, 0], 1.0).unwrap();
        f
    }

    fn two_pi_three_halves() -> f64 {
        2.0 * PI.powf(1.5)
    }

    #[test]
    fn derivative_norm_examples() {
        let v = sin_x1();
        let want = two_pi_three_halves();
        assert!((derivative_l2_norm(&v, &MultiIndex::new(1, 0, 0)).unwrap() - want).abs() < 1e-12 * want);
        assert!((derivative_l2_norm(&v, &MultiIndex::ZERO).unwrap() - v.l2_norm()).abs() < 1e-14);
        assert_eq!(derivative_l2_norm(&v, &MultiIndex::new(0, 1, 0)).unwrap(), 0.0);
        assert!((want - 11.1366).abs() < 1e-4);
    }

    #[test]
    fn derivative_norm_log_guard() {
        let mut v = SpectralField::scalar(Geometry::Torus3, [256, 4, 4]).unwrap();
        v.add_sin(0, [127, 0, 0], 1.0).unwrap();
        let a = MultiIndex::new(200, 0, 0);
        assert!(matches!(derivative_l2_norm(&v, &a), Err(Error::Overflow(_))));
        let ln = derivative_l2_norm_ln(&v, &a);
        assert!((ln - (200.0 * 127f64.ln() + two_pi_three_halves().ln())).abs() < 1e-9);
    }

    #[test]
    fn seminorm_examples() {
        let z = SpectralField::scalar(Geometry::Torus3, [8, 8, 8]).unwrap();
        let t = seminorm_table(&z, 5, 1.0, true).unwrap();
        assert!(t.l2_seminorms.iter().all(|&x| x == 0.0));
        assert!(t.sup_seminorms.unwrap().iter().all(|&x| x == 0.0));

        let v = sin_x1();
        let t = seminorm_table(&v, 6, 1.0, false).unwrap();
        let want = two_pi_three_halves();
        for m in 1..=6 {
            assert!((t.l2_seminorms[m] - want).abs() < 1e-12 * want, "m = {m}");
        }
        let mut w = sin_x1();
        w.add_sin(0, [0, 1, 0], 1.0).unwrap();
        let t = seminorm_table(&w, 2, 1.0, false).unwrap();
        assert!((t.l2_seminorms[1] - 2.0 * want).abs() < 1e-12 * want);
    }

    #[test]
    fn x_norm_examples() {
        let zero = SeminormTable::from_values(1.0, vec![0.0; 10]).unwrap();
        let r = x_norm(&zero, 0.7).unwrap();
        assert_eq!((r.x_norm, r.y_norm), (0.0, 0.0));

        let mut vals = vec![0.0; 10];
        vals[3] = 2.5;
        let only3 = SeminormTable::from_values(1.0, vals).unwrap();
        for tau in [0.1, 1.0, 10.0] {
            let r = x_norm(&only3, tau).unwrap();
            assert_eq!(r.x_norm, 2.5);
            assert_eq!(r.y_norm, 0.0);
            assert!(r.converged);
        }

        let t = seminorm_table(&sin_x1(), 24, 1.0, false).unwrap();
        let r = x_norm(&t, 0.5).unwrap();
        let want = two_pi_three_halves() * 0.5f64.exp();
        assert!((r.x_norm - want).abs() < 1e-12 * want);
        assert!(r.converged);
    }

    #[test]
    fn budget_examples() {
        let zero = SeminormTable::from_values(1.0, vec![0.0; 25]).unwrap();
        assert_eq!(max_tau_for_budget(&zero, 1.0).unwrap(), TauBudget::Unbounded);

        let t = seminorm_table(&sin_x1(), 24, 1.0, false).unwrap();
        let tau = max_tau_for_budget(&t, two_pi_three_halves() * E).unwrap().value();
        assert!((tau - 1.0).abs() < 1e-10, "{tau}");

        // |v|_m = m!^s / ρ^{m−3}: the radius of convergence is ρ, and the
        // truncated ratio test closes at ρ(m_max−3)/m_max
        let rho: f64 = 0.8;
        let m_max = 150;
        let vals: Vec<f64> = (0..=m_max).map(|m| (ln_gamma(m as f64 + 1.0) - (m as f64 - 3.0) * rho.ln()).exp()).collect();
        let t = SeminormTable::from_values(1.0, vals).unwrap();
        let tau = max_tau_for_budget(&t, 1e300).unwrap().value();
        assert!((tau - rho * (m_max as f64 - 3.0) / m_max as f64).abs() < 1e-9, "{tau}");
        assert!((tau - rho).abs() < 0.03 * rho);

        assert!(max_tau_for_budget(&t, 1.0).is_err());
    }

    #[test]
    fn sup_paths_agree() {
        let mut v = SpectralField::vector(Geometry::Torus3, [8, 8, 8]).unwrap();
        v.add_sin(0, [1, 2, 0], 0.7).unwrap();
        v.add_cos(1, [0, -1, 3], 0.4).unwrap();
        v.add_cos(2, [2, 1, 1], -0.3).unwrap();
        let alphas: Vec<MultiIndex> = (0..=3).flat_map(of_order).collect();
        let a = sup_norms_sparse(&v, &alphas, 2);
        let b = sup_norms_fft(&v, &alphas, 2);
        for (x, y) in a.iter().flatten().zip(b.iter().flatten()) {
            assert!((x - y).abs() < 1e-11 * (1.0 + y.abs()));
        }
        let s = sup_seminorms(&sin_x1(), 3, 2).unwrap();
        assert_eq!(s[0], 1.0);
        assert!((s[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let xs = [1.0, 1e-17, -1.0, 1e-17];
        assert_eq!(compensated_sum(&xs), 2e-17);
    }
}
