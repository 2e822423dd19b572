//! Neumann problem for the Poisson equation on the slab `T² × (0, L)`, the
//! normal-derivative recursions for its solution, and probes of the
//! associated higher-regularity estimates.
//!
//! A cosine series in `x3` satisfies `∂p/∂x3 = 0` on both faces, so the
//! solver is an exact division by `|k|²` mode by mode.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gevrey::fft::FftBox;
use crate::gevrey::field::{Geometry, Parity, SpectralField};
use crate::gevrey::norms::DerivativeNorms;
use crate::gevrey::product::dealiased_sum;
use crate::multiindex::{binomial_f64, MultiIndex};

/// Largest admissible mean of a source, relative to its largest coefficient.
pub const MEAN_TOLERANCE: f64 = 1e-12;

/// Largest admissible divergence residual of a velocity.
pub const DIVERGENCE_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct NeumannSolution {
    /// Mean-zero solution of `−Δp = v`.
    pub pressure: SpectralField,
    pub source: SpectralField,
    /// `max |k_i k₃| / |k|²` over the populated modes, `i ∈ {1, 2}`.
    pub h2_constant: f64,
}

fn check_scalar_even(v: &SpectralField, what: &str) -> Result<()> {
    if !v.geometry().is_slab() {
        return Err(Error::Geometry(format!("{what} must live on the slab, got {}", v.geometry().label())));
    }
    if v.components() != 1 || v.parity(0) != Parity::Even {
        return Err(Error::Geometry(format!("{what} must be a scalar cosine series in x3")));
    }
    Ok(())
}

/// `−Δp = v`, `∂p/∂n = 0`, `∫p = 0`.
pub fn solve(v: &SpectralField) -> Result<NeumannSolution> {
    check_scalar_even(v, "Neumann source")?;
    let mean = v.mean(0);
    if mean.abs() > MEAN_TOLERANCE * v.max_abs().max(1.0) {
        return Err(Error::NonzeroMean { mean });
    }
    let mut p = v.clone();
    let mut h2 = 0.0f64;
    for flat in 0..v.len() {
        let k = v.wavevector(flat);
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        let c = &mut p.coeffs_mut(0)[flat];
        if k2 == 0.0 {
            *c = Complex64::default();
            continue;
        }
        *c /= k2;
        if *c != Complex64::default() {
            h2 = h2.max((k[0] * k[2]).abs().max((k[1] * k[2]).abs()) / k2);
        }
    }
    Ok(NeumannSolution { pressure: p, source: v.clone(), h2_constant: h2 })
}

/// `−Δf` by modal multiplication.
pub fn neg_laplacian(f: &SpectralField) -> SpectralField {
    let mut out = f.clone();
    for flat in 0..f.len() {
        let k = f.wavevector(flat);
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        for c in 0..f.components() {
            out.coeffs_mut(c)[flat] *= k2;
        }
    }
    out
}

/// `∂_j u_i ∂_i u_j`, the right side of the pressure equation, dealiased and
/// projected to mean zero.
pub fn pressure_source(u: &SpectralField) -> Result<SpectralField> {
    if u.components() != 3 || u.geometry() == Geometry::Torus2 {
        return Err(Error::Geometry("pressure source needs a three-component velocity in 3D".into()));
    }
    if u.geometry().is_slab() && u.parities() != [Parity::Even, Parity::Even, Parity::Odd] {
        return Err(Error::Geometry("slab velocity must be (even, even, odd) in x3".into()));
    }
    let residual = u.divergence_residual()?;
    if residual > DIVERGENCE_TOLERANCE {
        return Err(Error::NotDivergenceFree { residual });
    }
    let grads: Vec<SpectralField> = (0..3).map(|j| u.derivative(&MultiIndex::unit(j))).collect();
    let mut terms = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            // ∂_j u_i · ∂_i u_j
            terms.push(((&grads[j], i), (&grads[i], j)));
        }
    }
    let fft = FftBox::new(u.shape());
    let mut out = dealiased_sum(&terms, Parity::Even, &fft)?;
    out.coeffs_mut(0)[0] = Complex64::default();
    out.set_time(u.time());
    Ok(out)
}

fn tangential_symbol(k: [f64; 3], alpha: &MultiIndex) -> Complex64 {
    SpectralField::symbol(k, &alpha.tangential())
}

/// `∂₃∂^α p` assembled from tangential derivatives of `p` and derivatives of
/// the source only:
///
/// * `α₃ = 2k+1`: `(−Δ′)^{k+1}∂^{α′}p + Σ_{j≤k} (−1)^{k−j+1} ∂₃^{2j} Δ′^{k−j} ∂^{α′}v`
/// * `α₃ = 2k+2`: the same with one more `∂₃` on every term.
pub fn d3_recursion(p: &SpectralField, v: &SpectralField, alpha: &MultiIndex) -> Result<SpectralField> {
    if alpha.a3 == 0 {
        return Err(Error::Precondition("the normal recursion needs α₃ ≥ 1".into()));
    }
    check_scalar_even(p, "pressure")?;
    check_scalar_even(v, "source")?;
    p.check_compatible(v)?;
    let odd_total = alpha.a3 % 2 == 0; // α₃+1 odd
    let k = ((alpha.a3 - 1) / 2) as i32;
    let mut out = p.zeros_like(vec![if odd_total { Parity::Odd } else { Parity::Even }]);
    for flat in 0..p.len() {
        let kv = p.wavevector(flat);
        let kt2 = kv[0] * kv[0] + kv[1] * kv[1];
        let d3 = Complex64::new(0.0, kv[2]);
        let tan = tangential_symbol(kv, alpha);
        let extra = if odd_total { d3 } else { Complex64::new(1.0, 0.0) };
        let mut acc = p.coeffs(0)[flat] * kt2.powi(k + 1);
        let vk = v.coeffs(0)[flat];
        for j in 0..=k {
            let sign = if (k - j + 1) % 2 == 0 { 1.0 } else { -1.0 };
            let normal = (-kv[2] * kv[2]).powi(j);
            let lap = (-kt2).powi(k - j);
            acc += vk * (sign * normal * lap);
        }
        out.coeffs_mut(0)[flat] = acc * tan * extra;
    }
    Ok(out)
}

/// Which estimate of the normal-derivative lemma to probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EstimateKind {
    /// `‖∂₃∂^α p‖`, needs `α₃ ≥ 1`
    D3,
    /// `‖∂₁∂^α p‖`, needs `α₃ ≥ 2`
    D1,
    /// `‖∂₂∂^α p‖`, needs `α₃ ≥ 2`
    D2,
}

impl EstimateKind {
    pub const ALL: [EstimateKind; 3] = [EstimateKind::D3, EstimateKind::D1, EstimateKind::D2];

    pub fn axis(&self) -> usize {
        match self {
            EstimateKind::D1 => 0,
            EstimateKind::D2 => 1,
            EstimateKind::D3 => 2,
        }
    }

    pub fn min_normal_order(&self) -> u32 {
        match self {
            EstimateKind::D3 => 1,
            _ => 2,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            EstimateKind::D3 => "d3",
            EstimateKind::D1 => "d1",
            EstimateKind::D2 => "d2",
        }
    }
}

/// The lemma's index set: each `β` with `|β| = |α|−1` and its weight
/// `binom(s+t, s)`. The pair `(s, t)` is unique per `β`.
pub fn beta_set(alpha: &MultiIndex, which: EstimateKind) -> Result<Vec<(MultiIndex, f64)>> {
    if alpha.a3 < which.min_normal_order() {
        return Err(Error::Precondition(format!(
            "{} estimate needs α₃ ≥ {}, got {alpha}",
            which.label(),
            which.min_normal_order()
        )));
    }
    let budget = alpha.a3 - which.min_normal_order();
    let (o1, o2) = match which {
        EstimateKind::D3 => (0, 0),
        EstimateKind::D1 => (1, 0),
        EstimateKind::D2 => (0, 1),
    };
    let mut out = Vec::new();
    for s in 0..=budget / 2 {
        for t in 0..=(budget / 2 - s) {
            let beta = MultiIndex::new(alpha.a1 + 2 * s + o1, alpha.a2 + 2 * t + o2, budget - 2 * s - 2 * t);
            out.push((beta, binomial_f64(s + t, s)));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateProbe {
    pub lhs: f64,
    pub rhs_sum: f64,
    /// `lhs / rhs_sum`, zero when both vanish.
    pub ratio: f64,
}

impl EstimateProbe {
    fn new(lhs: f64, rhs_sum: f64) -> Self {
        let ratio = if rhs_sum == 0.0 {
            if lhs == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            lhs / rhs_sum
        };
        EstimateProbe { lhs, rhs_sum, ratio }
    }
}

/// Both sides of one estimate, `‖∂_i∂^α p‖` against
/// `Σ_β binom(s+t,s)‖∂^β v‖`.
pub fn estimate_probe_53(p: &SpectralField, v: &SpectralField, alpha: &MultiIndex, which: EstimateKind) -> Result<EstimateProbe> {
    let order = alpha.order() + 1;
    let pn = DerivativeNorms::new(p, order);
    let vn = DerivativeNorms::new(v, order);
    estimate_probe_with(&pn, &vn, alpha, which)
}

/// [`estimate_probe_53`] with prepared norm evaluators, for sweeps.
pub fn estimate_probe_with(
    pn: &DerivativeNorms,
    vn: &DerivativeNorms,
    alpha: &MultiIndex,
    which: EstimateKind,
) -> Result<EstimateProbe> {
    let set = beta_set(alpha, which)?;
    let lhs = pn.norm(&(*alpha + MultiIndex::unit(which.axis())))?;
    let mut rhs = 0.0;
    for (beta, w) in set {
        rhs += w * vn.norm(&beta)?;
    }
    Ok(EstimateProbe::new(lhs, rhs))
}

/// `‖∂_i∂₃∂^{α′}p‖ / ‖∂^{α′}v‖` for `i = 1, 2`; `None` when the denominator
/// vanishes.
pub fn remark52_probe(p: &SpectralField, v: &SpectralField, alpha_t: &MultiIndex) -> Result<(Option<f64>, Option<f64>)> {
    if alpha_t.a3 != 0 {
        return Err(Error::InvalidArgument(format!("{alpha_t} is not tangential")));
    }
    let order = alpha_t.order() + 2;
    let pn = DerivativeNorms::new(p, order);
    let vn = DerivativeNorms::new(v, order);
    let den = vn.norm(alpha_t)?;
    if den == 0.0 {
        return Ok((None, None));
    }
    let r = |axis: usize| -> Result<f64> {
        Ok(pn.norm(&(*alpha_t + MultiIndex::unit(axis) + MultiIndex::unit(2)))? / den)
    };
    Ok((Some(r(0)?), Some(r(1)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gevrey::random::{random_field, Envelope};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn slab() -> Geometry {
        Geometry::Slab { depth: PI }
    }

    /// `a·cos(k1 x1 + k2 x2)·cos(n x3)` on the slab of depth π.
    fn cos_cos(f: &mut SpectralField, k1: i64, k2: i64, n: i64, a: f64) {
        f.add_cos(0, [k1, k2, n], a / 2.0).unwrap();
        if n != 0 {
            f.add_cos(0, [k1, k2, -n], a / 2.0).unwrap();
        } else {
            f.add_cos(0, [k1, k2, 0], a / 2.0).unwrap();
        }
    }

    fn single_mode() -> (SpectralField, SpectralField) {
        let mut v = SpectralField::scalar(slab(), [8, 8, 8]).unwrap();
        cos_cos(&mut v, 1, 0, 1, 2.0);
        let mut p = SpectralField::scalar(slab(), [8, 8, 8]).unwrap();
        cos_cos(&mut p, 1, 0, 1, 1.0);
        (p, v)
    }

    #[test]
    fn solve_examples() {
        let (p, v) = single_mode();
        let sol = solve(&v).unwrap();
        assert!(sol.pressure.axpy(-1.0, &p).unwrap().max_abs() < 1e-15);
        assert!((sol.h2_constant - 0.5).abs() < 1e-15);

        let z = SpectralField::scalar(slab(), [8, 8, 8]).unwrap();
        assert_eq!(solve(&z).unwrap().pressure.max_abs(), 0.0);

        let mut c = SpectralField::scalar(slab(), [8, 8, 8]).unwrap();
        cos_cos(&mut c, 1, 0, 0, 1.0);
        let sol = solve(&c).unwrap();
        assert!(sol.pressure.axpy(-1.0, &c).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn solve_rejects_mean() {
        let mut v = SpectralField::scalar(slab(), [8, 8, 8]).unwrap();
        cos_cos(&mut v, 0, 0, 0, 0.5);
        assert!(matches!(solve(&v), Err(Error::NonzeroMean { mean }) if (mean - 0.5).abs() < 1e-15));
    }

    #[test]
    fn source_examples() {
        let z = SpectralField::vector(slab(), [8, 8, 8]).unwrap();
        assert_eq!(pressure_source(&z).unwrap().max_abs(), 0.0);

        let mut shear = SpectralField::vector(Geometry::Torus3, [8, 8, 8]).unwrap();
        shear.add_sin(0, [0, 1, 0], 1.0).unwrap();
        assert!(pressure_source(&shear).unwrap().max_abs() < 1e-15);

        // u = (−cos x1 sin x2, sin x1 cos x2, 0): source −cos 2x1 − cos 2x2
        let mut u = SpectralField::vector(Geometry::Torus3, [16, 16, 16]).unwrap();
        u.add_sin(0, [1, 1, 0], -0.5).unwrap();
        u.add_sin(0, [-1, 1, 0], -0.5).unwrap();
        u.add_sin(1, [1, 1, 0], 0.5).unwrap();
        u.add_sin(1, [1, -1, 0], 0.5).unwrap();
        let src = pressure_source(&u).unwrap();
        let mut want = SpectralField::scalar(Geometry::Torus3, [16, 16, 16]).unwrap();
        want.add_cos(0, [2, 0, 0], -1.0).unwrap();
        want.add_cos(0, [0, 2, 0], -1.0).unwrap();
        assert!(src.axpy(-1.0, &want).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn source_rejects_divergent_velocity() {
        let mut u = SpectralField::vector(Geometry::Torus3, [8, 8, 8]).unwrap();
        u.add_sin(0, [1, 0, 0], 1.0).unwrap();
        assert!(matches!(pressure_source(&u), Err(Error::NotDivergenceFree { .. })));
    }

    #[test]
    fn recursion_examples() {
        let (p, v) = single_mode();
        let r = d3_recursion(&p, &v, &MultiIndex::new(0, 0, 1)).unwrap();
        assert!(r.axpy(1.0, &p).unwrap().max_abs() < 1e-15);

        let z = SpectralField::scalar(slab(), [8, 8, 8]).unwrap();
        assert_eq!(d3_recursion(&z, &z, &MultiIndex::new(1, 0, 2)).unwrap().max_abs(), 0.0);
        assert!(d3_recursion(&p, &v, &MultiIndex::new(1, 0, 0)).is_err());
    }

    #[test]
    fn recursion_matches_direct_derivative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut v = random_field(slab(), [16, 16, 16], vec![Parity::Even], Envelope { tau0: 0.5, band: 5 }, &mut rng).unwrap();
        v.coeffs_mut(0)[0] = Complex64::default();
        let p = solve(&v).unwrap().pressure;
        let alpha = MultiIndex::new(1, 2, 3);
        let rec = d3_recursion(&p, &v, &alpha).unwrap();
        let direct = p.derivative(&(alpha + MultiIndex::unit(2)));
        let err = rec.axpy(-1.0, &direct).unwrap().l2_norm() / direct.l2_norm();
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn estimate_examples() {
        let (p, v) = single_mode();
        let e = estimate_probe_53(&p, &v, &MultiIndex::new(0, 0, 1), EstimateKind::D3).unwrap();
        assert!((e.lhs - p.l2_norm()).abs() < 1e-13);
        assert!((e.rhs_sum - 2.0 * p.l2_norm()).abs() < 1e-13);
        assert!((e.ratio - 0.5).abs() < 1e-14);

        let z = SpectralField::scalar(slab(), [8, 8, 8]).unwrap();
        let e = estimate_probe_53(&z, &z, &MultiIndex::new(0, 0, 2), EstimateKind::D1).unwrap();
        assert_eq!((e.lhs, e.rhs_sum, e.ratio), (0.0, 0.0, 0.0));

        assert!(estimate_probe_53(&p, &v, &MultiIndex::new(0, 0, 1), EstimateKind::D1).is_err());
    }

    #[test]
    fn beta_sets_follow_the_lemma() {
        let set = beta_set(&MultiIndex::new(1, 0, 5), EstimateKind::D3).unwrap();
        let betas: Vec<_> = set.iter().map(|(b, w)| (b.components(), *w)).collect();
        assert_eq!(
            betas,
            vec![
                ([1, 0, 4], 1.0),
                ([1, 2, 2], 1.0),
                ([1, 4, 0], 1.0),
                ([3, 0, 2], 1.0),
                ([3, 2, 0], 2.0),
                ([5, 0, 0], 1.0)
            ]
        );
        for (b, _) in &set {
            assert_eq!(b.order(), 5);
        }
        let set = beta_set(&MultiIndex::new(0, 1, 3), EstimateKind::D2).unwrap();
        let betas: Vec<_> = set.iter().map(|(b, _)| b.components()).collect();
        assert_eq!(betas, vec![[0, 2, 1]]);
    }

    #[test]
    fn remark52_examples() {
        let (p, v) = single_mode();
        let (r1, r2) = remark52_probe(&p, &v, &MultiIndex::ZERO).unwrap();
        assert!((r1.unwrap() - 0.5).abs() < 1e-14);
        assert_eq!(r2.unwrap(), 0.0);

        let mut w = SpectralField::scalar(slab(), [8, 8, 8]).unwrap();
        cos_cos(&mut w, 0, 2, 1, 1.0);
        let q = solve(&w).unwrap().pressure;
        assert_eq!(remark52_probe(&q, &w, &MultiIndex::ZERO).unwrap().0, Some(0.0));

        let z = SpectralField::scalar(slab(), [8, 8, 8]).unwrap();
        assert_eq!(remark52_probe(&z, &z, &MultiIndex::ZERO).unwrap(), (None, None));
    }

    #[test]
    fn solve_inverts_laplacian() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut v = random_field(slab(), [12, 12, 12], vec![Parity::Even], Envelope { tau0: 0.3, band: 4 }, &mut rng).unwrap();
        v.coeffs_mut(0)[0] = Complex64::default();
        let back = neg_laplacian(&solve(&v).unwrap().pressure);
        assert!(back.axpy(-1.0, &v).unwrap().max_abs() < 1e-15 * v.max_abs().max(1.0) * 10.0);
    }
}
