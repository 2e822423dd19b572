//! Exact combinatorics of three-dimensional multi-indices.
//!
//! The binomial weight of a multi-index only sees its tangential part:
//! `M_α = (α₁+α₂)! / (α₁! α₂!)`. Everything in this module that feeds a
//! lemma check is computed with arbitrary-precision integers or rationals;
//! floating point appears only in [`stirling_bounds`].

use std::collections::HashMap;
use std::fmt;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial as num_binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact non-negative rational, always stored in lowest terms with a
/// positive denominator.
pub type BigRatio = BigRational;

/// Derivative orders `(α₁, α₂, α₃)` along `x1`, `x2`, `x3`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex {
    pub a1: u32,
    pub a2: u32,
    pub a3: u32,
}

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex { a1: 0, a2: 0, a3: 0 };

    pub const fn new(a1: u32, a2: u32, a3: u32) -> Self {
        MultiIndex { a1, a2, a3 }
    }

    /// Unit multi-index along axis `axis` (0, 1 or 2).
    pub fn unit(axis: usize) -> Self {
        let mut c = [0; 3];
        c[axis] = 1;
        MultiIndex::from(c)
    }

    /// `|α|`
    pub const fn order(&self) -> u32 {
        self.a1 + self.a2 + self.a3
    }

    /// `α′ = (α₁, α₂)` as a multi-index with vanishing normal part.
    pub const fn tangential(&self) -> MultiIndex {
        MultiIndex::new(self.a1, self.a2, 0)
    }

    pub const fn components(&self) -> [u32; 3] {
        [self.a1, self.a2, self.a3]
    }

    /// `M_α = binom(α₁+α₂, α₁)`.
    pub fn weight(&self) -> BigUint {
        binomial(self.a1 + self.a2, self.a1)
    }

    /// `M_α` as a float; exact while the weight fits in 53 bits.
    pub fn weight_f64(&self) -> f64 {
        binomial_f64(self.a1 + self.a2, self.a1)
    }

    /// Componentwise `self ≤ other`.
    pub fn is_below(&self, other: &MultiIndex) -> bool {
        self.a1 <= other.a1 && self.a2 <= other.a2 && self.a3 <= other.a3
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        Some(MultiIndex::new(
            self.a1.checked_sub(other.a1)?,
            self.a2.checked_sub(other.a2)?,
            self.a3.checked_sub(other.a3)?,
        ))
    }

    /// `binom(α, β) = Π binom(αᵢ, βᵢ)`, zero unless `β ≤ α`.
    pub fn binom(&self, beta: &MultiIndex) -> BigUint {
        binomial(self.a1, beta.a1) * binomial(self.a2, beta.a2) * binomial(self.a3, beta.a3)
    }

    pub fn binom_f64(&self, beta: &MultiIndex) -> f64 {
        binomial_f64(self.a1, beta.a1) * binomial_f64(self.a2, beta.a2) * binomial_f64(self.a3, beta.a3)
    }

    /// All `β ≤ self`, in lexicographic order of `(β₁, β₂, β₃)`.
    pub fn below(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        (0..=self.a1).flat_map(move |b1| {
            (0..=self.a2).flat_map(move |b2| (0..=self.a3).map(move |b3| MultiIndex::new(b1, b2, b3)))
        })
    }
}

impl From<[u32; 3]> for MultiIndex {
    fn from(c: [u32; 3]) -> Self {
        MultiIndex::new(c[0], c[1], c[2])
    }
}

impl Add for MultiIndex {
    type Output = MultiIndex;
    fn add(self, rhs: MultiIndex) -> MultiIndex {
        MultiIndex::new(self.a1 + rhs.a1, self.a2 + rhs.a2, self.a3 + rhs.a3)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a1, self.a2, self.a3)
    }
}

/// All `α` with `|α| = m`, lexicographic in `(α₁, α₂)`; `α₃` is implied.
pub fn of_order(m: u32) -> impl Iterator<Item = MultiIndex> {
    (0..=m).flat_map(move |a1| (0..=m - a1).map(move |a2| MultiIndex::new(a1, a2, m - a1 - a2)))
}

/// All `α` with `|α| ≤ max_order`, grouped by increasing order.
pub fn up_to_order(max_order: u32) -> impl Iterator<Item = MultiIndex> {
    (0..=max_order).flat_map(of_order)
}

/// `binom(n, k)`, zero for `k > n`.
pub fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    num_binomial(BigUint::from(n), BigUint::from(k))
}

/// `binom(n, k)` in floating point: exact integer arithmetic while it fits
/// in `u128`, multiplicative float product beyond.
pub fn binomial_f64(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut exact = Some(1u128);
    for i in 0..k {
        exact = exact.and_then(|a| a.checked_mul(u128::from(n - i))).map(|a| a / u128::from(i + 1));
    }
    if let Some(v) = exact {
        return v as f64;
    }
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * f64::from(n - i) / f64::from(i + 1);
    }
    acc
}

pub fn weight(alpha: &MultiIndex) -> BigUint {
    alpha.weight()
}

/// `binom(α,β)·M_α / (M_β·M_{α−β})`, the quantity bounded by `binom(|α|,|β|)`.
pub fn choose_ratio(alpha: &MultiIndex, beta: &MultiIndex) -> Result<BigRatio> {
    let rest = alpha.checked_sub(beta).ok_or(Error::NotBelow { alpha: *alpha, beta: *beta })?;
    let num = alpha.binom(beta) * alpha.weight();
    let den = beta.weight() * rest.weight();
    Ok(BigRatio::new(BigInt::from(num), BigInt::from(den)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChooseViolation {
    pub alpha: MultiIndex,
    pub beta: MultiIndex,
    pub lhs: BigRatio,
    pub rhs: BigUint,
}

/// Summary of an exhaustive sweep of the choose inequality.
#[derive(Clone, Debug)]
pub struct ChooseSweep {
    pub max_order: u32,
    pub pairs_checked: u64,
    pub violations: Vec<ChooseViolation>,
    /// Pair with the largest `lhs / rhs`, first in enumeration order on ties.
    pub tightest: (MultiIndex, MultiIndex, BigRatio),
}

/// Every `(α, β)` with `|α| ≤ max_order`, `β ≤ α` and
/// `choose_ratio(α,β) > binom(|α|,|β|)`. The correct answer is empty.
pub fn verify_choose_lemma(max_order: u32) -> Vec<ChooseViolation> {
    sweep_choose_lemma(max_order).violations
}

pub fn sweep_choose_lemma(max_order: u32) -> ChooseSweep {
    let alphas: Vec<MultiIndex> = up_to_order(max_order).collect();
    let per_alpha: Vec<(u64, Vec<ChooseViolation>, (MultiIndex, MultiIndex, BigRatio))> = alphas
        .par_iter()
        .map(|alpha| {
            let mut count = 0u64;
            let mut bad = Vec::new();
            let mut best = (*alpha, MultiIndex::ZERO, BigRatio::zero());
            let w_alpha = alpha.weight();
            for beta in alpha.below() {
                count += 1;
                let rest = alpha.checked_sub(&beta).expect("β enumerated below α");
                // compare binom(α,β)·M_α against binom(|α|,|β|)·M_β·M_{α−β} in integers
                let num = alpha.binom(&beta) * &w_alpha;
                let den = beta.weight() * rest.weight();
                let rhs = binomial(alpha.order(), beta.order());
                let ratio = BigRatio::new(BigInt::from(num.clone()), BigInt::from(&den * &rhs));
                if ratio > best.2 {
                    best = (*alpha, beta, ratio);
                }
                if num > &den * &rhs {
                    bad.push(ChooseViolation {
                        alpha: *alpha,
                        beta,
                        lhs: BigRatio::new(BigInt::from(num), BigInt::from(den)),
                        rhs,
                    });
                }
            }
            (count, bad, best)
        })
        .collect();

    let mut pairs_checked = 0;
    let mut violations = Vec::new();
    let mut tightest = (MultiIndex::ZERO, MultiIndex::ZERO, BigRatio::zero());
    for (count, bad, best) in per_alpha {
        pairs_checked += count;
        violations.extend(bad);
        if best.2 > tightest.2 {
            tightest = best;
        }
    }
    ChooseSweep { max_order, pairs_checked, violations, tightest }
}

/// `binom(n,i)·binom(m,j) ≤ binom(n+m,i+j)`, the Vandermonde-type inequality
/// behind the choose bound.
pub fn binomial_product_bound_holds(n: u32, m: u32, i: u32, j: u32) -> bool {
    binomial(n, i) * binomial(m, j) <= binomial(n + m, i + j)
}

/// Both sides of the relabelling identity for one `(m, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSides {
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl ProductSides {
    pub fn equal(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `Σ_{|α|=m} Σ_{|β|=j, β≤α} x_β y_{α−β}` and
/// `(Σ_{|β|=j} x_β)(Σ_{|γ|=m−j} y_γ)`. Missing map entries count as zero.
pub fn product_identity_sides(
    m: u32,
    j: u32,
    x: &HashMap<MultiIndex, BigInt>,
    y: &HashMap<MultiIndex, BigInt>,
) -> Result<ProductSides> {
    if j > m {
        return Err(Error::InvalidArgument(format!("j = {j} exceeds m = {m}")));
    }
    let zero = BigInt::zero();
    let get = |map: &HashMap<MultiIndex, BigInt>, k: &MultiIndex| map.get(k).unwrap_or(&zero).clone();

    let mut lhs = BigInt::zero();
    for alpha in of_order(m) {
        for beta in alpha.below().filter(|b| b.order() == j) {
            let rest = alpha.checked_sub(&beta).expect("β ≤ α");
            lhs += get(x, &beta) * get(y, &rest);
        }
    }
    let sx: BigInt = of_order(j).map(|b| get(x, &b)).sum();
    let sy: BigInt = of_order(m - j).map(|g| get(y, &g)).sum();
    Ok(ProductSides { lhs, rhs: sx * sy })
}

pub fn verify_product_identity(
    m: u32,
    j: u32,
    x: &HashMap<MultiIndex, BigInt>,
    y: &HashMap<MultiIndex, BigInt>,
) -> Result<bool> {
    Ok(product_identity_sides(m, j, x, y)?.equal())
}

/// Which of the three binomial double sums of the pressure recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StarVariant {
    /// `Σ_s Σ_t binom(β₁+β₂−2s−2t, β₁−2s) binom(s+t, s)`
    Plain,
    /// first index shifted by one, requires `β₁ ≥ 1`
    Shift1,
    /// second index shifted by one, requires `β₂ ≥ 1`
    Shift2,
}

impl StarVariant {
    pub const ALL: [StarVariant; 3] = [StarVariant::Plain, StarVariant::Shift1, StarVariant::Shift2];

    pub fn label(&self) -> &'static str {
        match self {
            StarVariant::Plain => "star",
            StarVariant::Shift1 => "star1",
            StarVariant::Shift2 => "star2",
        }
    }

    fn admissible(&self, b1: u32, b2: u32) -> bool {
        match self {
            StarVariant::Plain => true,
            StarVariant::Shift1 => b1 >= 1,
            StarVariant::Shift2 => b2 >= 1,
        }
    }
}

/// The double sum on the left of the variant, by direct enumeration.
pub fn star_sum(b1: u32, b2: u32, variant: StarVariant) -> Result<BigUint> {
    if !variant.admissible(b1, b2) {
        return Err(Error::Precondition(format!("{variant:?} needs a positive shifted index, got ({b1},{b2})")));
    }
    let (s_max, t_max, shift) = match variant {
        StarVariant::Plain => (b1 / 2, b2 / 2, 0),
        StarVariant::Shift1 => ((b1 - 1) / 2, b2 / 2, 1),
        StarVariant::Shift2 => (b1 / 2, (b2 - 1) / 2, 1),
    };
    let top_shift1 = matches!(variant, StarVariant::Shift1) as u32;
    let mut acc = BigUint::zero();
    for s in 0..=s_max {
        for t in 0..=t_max {
            let top = b1 + b2 - shift - 2 * s - 2 * t;
            let bottom = b1 - top_shift1 - 2 * s;
            acc += binomial(top, bottom) * binomial(s + t, s);
        }
    }
    Ok(acc)
}

fn check_star_args(b1: u32, b2: u32, m: u32) -> Result<()> {
    if m < 3 {
        return Err(Error::Precondition(format!("m = {m} must be at least 3")));
    }
    if b1 + b2 > m - 1 {
        return Err(Error::Precondition(format!("β₁+β₂ = {} exceeds m−1 = {}", b1 + b2, m - 1)));
    }
    Ok(())
}

/// Double sum divided by `m·binom(β₁+β₂, β₁)`; bounded uniformly in
/// `(β₁, β₂, m)` if only a factor `m` is lost.
pub fn lemma_star_ratio(b1: u32, b2: u32, m: u32, variant: StarVariant) -> Result<BigRatio> {
    check_star_args(b1, b2, m)?;
    let sum = star_sum(b1, b2, variant)?;
    let den = BigUint::from(m) * binomial(b1 + b2, b1);
    Ok(BigRatio::new(BigInt::from(sum), BigInt::from(den)))
}

/// Table of the plain double sums `S(β₁, β₂)` for `β₁+β₂ ≤ n_max`.
///
/// Generating-function identity: `Σ S(β₁,β₂) x^β₁ y^β₂ = 1/((1−x−y)(1−x²−y²))`,
/// hence `S(β₁,β₂) = binom(β₁+β₂,β₁) + S(β₁−2,β₂) + S(β₁,β₂−2)`.
/// The shifted variants are `S(β₁−1,β₂)` and `S(β₁,β₂−1)`.
pub struct StarTable {
    n_max: u32,
    rows: Vec<Vec<BigUint>>, // rows[n][b1] = S(b1, n - b1)
    pascal: Vec<Vec<BigUint>>,
}

impl StarTable {
    pub fn new(n_max: u32) -> Self {
        let mut pascal: Vec<Vec<BigUint>> = Vec::with_capacity(n_max as usize + 1);
        for n in 0..=n_max as usize {
            let mut row = vec![BigUint::one(); n + 1];
            for k in 1..n {
                row[k] = &pascal[n - 1][k - 1] + &pascal[n - 1][k];
            }
            pascal.push(row);
        }
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n_max as usize + 1);
        for n in 0..=n_max as usize {
            let mut row = Vec::with_capacity(n + 1);
            for b1 in 0..=n {
                let b2 = n - b1;
                let mut v = pascal[n][b1].clone();
                if b1 >= 2 {
                    v += &rows[n - 2][b1 - 2];
                }
                if b2 >= 2 {
                    v += &rows[n - 2][b1];
                }
                row.push(v);
            }
            rows.push(row);
        }
        StarTable { n_max, rows, pascal }
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    fn plain(&self, b1: u32, b2: u32) -> &BigUint {
        &self.rows[(b1 + b2) as usize][b1 as usize]
    }

    pub fn sum(&self, b1: u32, b2: u32, variant: StarVariant) -> Option<&BigUint> {
        if b1 + b2 > self.n_max || !variant.admissible(b1, b2) {
            return None;
        }
        Some(match variant {
            StarVariant::Plain => self.plain(b1, b2),
            StarVariant::Shift1 => self.plain(b1 - 1, b2),
            StarVariant::Shift2 => self.plain(b1, b2 - 1),
        })
    }

    pub fn ratio(&self, b1: u32, b2: u32, m: u32, variant: StarVariant) -> Option<BigRatio> {
        check_star_args(b1, b2, m).ok()?;
        let sum = self.sum(b1, b2, variant)?;
        let den = BigUint::from(m) * &self.pascal[(b1 + b2) as usize][b1 as usize];
        Some(BigRatio::new(BigInt::from(sum.clone()), BigInt::from(den)))
    }
}

/// Supremum of [`lemma_star_ratio`] over a range of `β₁+β₂`.
#[derive(Clone, Debug)]
pub struct StarSup {
    pub variant: StarVariant,
    pub range: u32,
    pub ratio: BigRatio,
    pub b1: u32,
    pub b2: u32,
    pub m: u32,
}

impl StarSup {
    pub fn ratio_f64(&self) -> f64 {
        ratio_to_f64(&self.ratio)
    }
}

/// The ratio decreases in `m`, so for each `β` only the smallest admissible
/// `m = max(3, β₁+β₂+1)` matters.
pub fn star_sup(table: &StarTable, range: u32, variant: StarVariant) -> StarSup {
    assert!(range <= table.n_max(), "table too small for range {range}");
    let mut best = StarSup { variant, range, ratio: BigRatio::zero(), b1: 0, b2: 0, m: 3 };
    for n in 0..=range {
        let m = (n + 1).max(3);
        for b1 in 0..=n {
            let b2 = n - b1;
            if let Some(r) = table.ratio(b1, b2, m, variant) {
                if r > best.ratio {
                    best = StarSup { variant, range, ratio: r, b1, b2, m };
                }
            }
        }
    }
    best
}

pub fn ratio_to_f64(r: &BigRatio) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Stirling-type bracket `e^{7/8}√n (n/e)^n < n! < e√n (n/e)^n`, kept in
/// log form so that large `n` does not overflow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StirlingBounds {
    pub n: u64,
    pub ln_lower: f64,
    pub ln_value: f64,
    pub ln_upper: f64,
}

impl StirlingBounds {
    pub fn lower(&self) -> f64 {
        self.ln_lower.exp()
    }
    pub fn value(&self) -> f64 {
        self.ln_value.exp()
    }
    pub fn upper(&self) -> f64 {
        self.ln_upper.exp()
    }

    /// Strict on both sides except at `n = 1`, where the upper bound is an
    /// equality.
    pub fn holds(&self) -> bool {
        let upper_ok = if self.n == 1 {
            self.ln_value <= self.ln_upper
        } else {
            self.ln_value < self.ln_upper
        };
        self.ln_lower < self.ln_value && upper_ok
    }
}

pub fn stirling_bounds(n: u64) -> Result<StirlingBounds> {
    if n == 0 {
        return Err(Error::InvalidArgument("Stirling bounds need n ≥ 1".into()));
    }
    let nf = n as f64;
    let base = 0.5 * nf.ln() + nf * (nf.ln() - 1.0);
    let ln_value = if n <= 170 {
        (1..=n).map(|k| k as f64).product::<f64>().ln()
    } else {
        statrs::function::gamma::ln_gamma(nf + 1.0)
    };
    Ok(StirlingBounds { n, ln_lower: 7.0 / 8.0 + base, ln_value, ln_upper: 1.0 + base })
}
