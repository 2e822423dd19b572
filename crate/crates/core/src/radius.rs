//! Bookkeeping for the analyticity radius along a trajectory: the Lipschitz
//! accumulation `G`, the budget `M`, the radius ODE
//! `τ̇ = −Cτ‖∇u‖_∞ − Cτ^{3/2}(C′‖u‖_{H^r} + M)`, the closed-form radius as
//! printed, and the explicit lower bound `G^{−1/2}/(C₀(1+t))`.
//!
//! `G` grows like `e^{t²/2}` on the shear flow, so it and the radii are
//! carried as logarithms; the plain values may over- or underflow.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest RK4 substep used between samples.
pub const MAX_SUBSTEP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusParams {
    /// Constant shared by `G` and the radius ODE.
    pub c: f64,
    /// Gevrey index.
    pub s: f64,
    /// Sobolev index, above 9/2.
    pub r: f64,
    pub tau0: f64,
    /// `‖u₀‖_{H^r}`
    pub u0_hr: f64,
    /// `‖u₀‖_{X_{τ₀}}`
    pub u0_x: f64,
}

impl RadiusParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.s >= 1.0 && self.tau0 > 0.0 && self.u0_hr >= 0.0 && self.u0_x >= 0.0) {
            return Err(Error::InvalidArgument(format!("radius parameters out of range: {self:?}")));
        }
        if !(self.r > 4.5) {
            return Err(Error::InvalidArgument(format!("Sobolev index r = {} must exceed 9/2", self.r)));
        }
        Ok(())
    }

    /// `C_τ₀ = 1 + τ₀²`
    pub fn c_tau0(&self) -> f64 {
        1.0 + self.tau0 * self.tau0
    }

    /// `C′_τ₀ = τ₀^{1/2} + τ₀^{3/2}`
    pub fn c_tau0_prime(&self) -> f64 {
        self.tau0.sqrt() * (1.0 + self.tau0)
    }
}

/// One observation of the flow.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusSample {
    pub t: f64,
    /// `‖∇u(t)‖_{L^∞}`
    pub grad_sup: f64,
    /// `‖u(t)‖_{H^r}`
    pub hr_norm: f64,
    pub tau_measured: Option<f64>,
}

/// Time-ordered samples with the running integrals behind `G` and `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusTrajectory {
    params: RadiusParams,
    samples: Vec<RadiusSample>,
    /// `∫ ‖∇u‖_∞`
    grad_integral: Vec<f64>,
    /// `∫ ‖u‖²_{H^r}`
    hr2_integral: Vec<f64>,
}

impl RadiusTrajectory {
    pub fn new(params: RadiusParams) -> Result<Self> {
        params.validate()?;
        Ok(RadiusTrajectory { params, samples: Vec::new(), grad_integral: Vec::new(), hr2_integral: Vec::new() })
    }

    pub fn from_samples(params: RadiusParams, samples: impl IntoIterator<Item = RadiusSample>) -> Result<Self> {
        let mut traj = Self::new(params)?;
        for s in samples {
            traj.accumulate(s)?;
        }
        Ok(traj)
    }

    /// Append a sample and extend the trapezoidal integrals.
    pub fn accumulate(&mut self, sample: RadiusSample) -> Result<()> {
        if !(sample.t.is_finite() && sample.grad_sup >= 0.0 && sample.hr_norm >= 0.0) {
            return Err(Error::InvalidArgument(format!("malformed sample {sample:?}")));
        }
        match self.samples.last() {
            None => {
                self.grad_integral.push(0.0);
                self.hr2_integral.push(0.0);
            }
            Some(prev) => {
                if sample.t <= prev.t {
                    return Err(Error::Precondition(format!("time {} does not follow {}", sample.t, prev.t)));
                }
                let h = sample.t - prev.t;
                let gi = self.grad_integral.last().copied().unwrap_or(0.0);
                let hi = self.hr2_integral.last().copied().unwrap_or(0.0);
                self.grad_integral.push(gi + 0.5 * h * (prev.grad_sup + sample.grad_sup));
                self.hr2_integral.push(hi + 0.5 * h * (prev.hr_norm.powi(2) + sample.hr_norm.powi(2)));
            }
        }
        self.samples.push(sample);
        Ok(())
    }

    pub fn params(&self) -> &RadiusParams {
        &self.params
    }

    pub fn samples(&self) -> &[RadiusSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    /// `ln G = C ∫ ‖∇u‖_∞`
    pub fn ln_g(&self) -> Vec<f64> {
        self.grad_integral.iter().map(|i| self.params.c * i).collect()
    }

    pub fn g(&self) -> Vec<f64> {
        self.ln_g().into_iter().map(f64::exp).collect()
    }

    /// `M = ‖u₀‖_X + C_τ₀ ∫ ‖u‖²_{H^r}`
    pub fn m(&self) -> Vec<f64> {
        let ct = self.params.c_tau0();
        self.hr2_integral.iter().map(|i| self.params.u0_x + ct * i).collect()
    }

    /// ODE coefficients `(a, b)` at every sample.
    pub fn coefficients(&self) -> Vec<(f64, f64)> {
        let p = &self.params;
        let cp = p.c_tau0_prime();
        self.samples.iter().zip(self.m()).map(|(s, m)| (p.c * s.grad_sup, p.c * (cp * s.hr_norm + m))).collect()
    }
}

/// RK4 solution of `τ̇ = −a(t)τ − b(t)τ^{3/2}` at `times`, integrated in
/// `σ = ln τ` so that deep decay does not underflow. Returns `ln τ`.
pub fn solve_ln_tau<F>(tau0: f64, times: &[f64], coeffs: F, max_substep: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> (f64, f64),
{
    if !(tau0 > 0.0) {
        return Err(Error::Precondition(format!("initial radius {tau0} must be positive")));
    }
    let rhs = |t: f64, sigma: f64| {
        let (a, b) = coeffs(t);
        -a - b * (0.5 * sigma).exp()
    };
    let mut out = Vec::with_capacity(times.len());
    let mut sigma = tau0.ln();
    for (i, &t) in times.iter().enumerate() {
        if i > 0 {
            let t_prev = times[i - 1];
            let span = t - t_prev;
            let n = (span / max_substep).ceil().max(1.0) as usize;
            let h = span / n as f64;
            for j in 0..n {
                let s = t_prev + j as f64 * h;
                let k1 = rhs(s, sigma);
                let k2 = rhs(s + 0.5 * h, sigma + 0.5 * h * k1);
                let k3 = rhs(s + 0.5 * h, sigma + 0.5 * h * k2);
                let k4 = rhs(s + h, sigma + h * k3);
                sigma += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            if !sigma.is_finite() {
                return Err(Error::StepRejected(format!("ln τ left the finite range at t = {t}")));
            }
        }
        out.push(sigma);
    }
    Ok(out)
}

/// `ln τ` from the radius ODE with coefficients interpolated linearly
/// between samples.
pub fn integrate_ln_tau_ode(traj: &RadiusTrajectory) -> Result<Vec<f64>> {
    let times = traj.times();
    let coef = traj.coefficients();
    let lerp = |t: f64| -> (f64, f64) {
        let i = match times.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(i) => return coef[i],
            Err(i) => i.clamp(1, times.len() - 1),
        };
        let w = (t - times[i - 1]) / (times[i] - times[i - 1]);
        let (a0, b0) = coef[i - 1];
        let (a1, b1) = coef[i];
        (a0 + w * (a1 - a0), b0 + w * (b1 - b0))
    };
    if times.is_empty() {
        return Ok(Vec::new());
    }
    solve_ln_tau(traj.params.tau0, &times, lerp, MAX_SUBSTEP)
}

pub fn integrate_tau_ode(traj: &RadiusTrajectory) -> Result<Vec<f64>> {
    Ok(integrate_ln_tau_ode(traj)?.into_iter().map(f64::exp).collect())
}

/// `ln` of the printed closed form
/// `G^{−1/2}(τ₀^{−1/2} + C∫(C′‖u‖_{H^r} + M)G^{−1})^{−1/2}`.
/// At `t = 0` it equals `τ₀^{1/4}`, not `τ₀`.
pub fn ln_tau_paper_formula(traj: &RadiusTrajectory) -> Vec<f64> {
    let p = &traj.params;
    let ln_g = traj.ln_g();
    let m = traj.m();
    let integrand: Vec<f64> = traj
        .samples
        .iter()
        .zip(&m)
        .zip(&ln_g)
        .map(|((s, m), lg)| p.c * (p.c_tau0_prime() * s.hr_norm + m) * (-lg).exp())
        .collect();
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(traj.len());
    for i in 0..traj.len() {
        if i > 0 {
            acc += 0.5 * (traj.samples[i].t - traj.samples[i - 1].t) * (integrand[i] + integrand[i - 1]);
        }
        out.push(-0.5 * ln_g[i] - 0.5 * (p.tau0.powf(-0.5) + acc).ln());
    }
    out
}

pub fn tau_paper_formula(traj: &RadiusTrajectory) -> Vec<f64> {
    ln_tau_paper_formula(traj).into_iter().map(f64::exp).collect()
}

/// Smallest `C₀` with
/// `C₀(1+t)² ≥ τ₀^{−1/2} + C∫₀ᵗ(C′‖u₀‖_{H^r} + ‖u₀‖_X + s C_τ₀‖u₀‖²_{H^r}) ds`
/// on `[0, horizon]`, where `s` is the integration variable.
pub fn c0_constant(params: &RadiusParams, horizon: f64) -> Result<f64> {
    params.validate()?;
    if !(horizon >= 0.0) {
        return Err(Error::InvalidArgument(format!("horizon {horizon} must be non-negative")));
    }
    let a = params.tau0.powf(-0.5);
    let b = params.c * (params.c_tau0_prime() * params.u0_hr + params.u0_x);
    let d = 0.5 * params.c * params.c_tau0() * params.u0_hr * params.u0_hr;
    let f = |t: f64| (a + b * t + d * t * t) / ((1.0 + t) * (1.0 + t));
    let mut best = f(0.0).max(f(horizon));
    if 2.0 * d != b {
        let t_star = (2.0 * a - b) / (2.0 * d - b);
        if t_star > 0.0 && t_star < horizon {
            best = best.max(f(t_star));
        }
    }
    Ok(best)
}

/// The lower bound with its constant.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerBound {
    pub c0: f64,
    pub ln_tau: Vec<f64>,
}

impl LowerBound {
    pub fn tau(&self) -> Vec<f64> {
        self.ln_tau.iter().map(|x| x.exp()).collect()
    }
}

/// `τ_lb = G^{−1/2}/(C₀(1+t))` with `C₀` fitted to the sampled horizon.
pub fn lower_bound(traj: &RadiusTrajectory) -> Result<LowerBound> {
    let horizon = traj.samples.last().map_or(0.0, |s| s.t);
    let c0 = c0_constant(&traj.params, horizon)?;
    let ln_tau = traj.samples.iter().zip(traj.ln_g()).map(|(s, lg)| -0.5 * lg - c0.ln() - (1.0 + s.t).ln()).collect();
    Ok(LowerBound { c0, ln_tau })
}

/// Residuals of `τ̇ + aτ + bτ^{3/2}` at each sample.
#[derive(Clone, Debug, PartialEq)]
pub struct Condition2 {
    pub residuals: Vec<f64>,
    /// `max |residual|`
    pub max_abs: f64,
    /// Largest signed residual; positive values violate the inequality.
    pub max_signed: f64,
}

/// Evaluate the sufficient condition on a radius series, `τ̇` by centered
/// differences inside and second-order one-sided differences at the ends.
pub fn check_condition2(tau: &[f64], traj: &RadiusTrajectory) -> Result<Condition2> {
    let n = traj.len();
    if n < 3 {
        return Err(Error::Precondition(format!("condition check needs 3 samples, got {n}")));
    }
    if tau.len() != n {
        return Err(Error::InvalidArgument(format!("{} radii for {n} samples", tau.len())));
    }
    let t = traj.times();
    // derivative of the quadratic through three nodes, evaluated at node `at`
    let quad = |i: usize, at: usize| -> f64 {
        let (x0, x1, x2) = (t[i], t[i + 1], t[i + 2]);
        let x = t[at];
        let l0 = (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2));
        let l1 = (2.0 * x - x0 - x2) / ((x1 - x0) * (x1 - x2));
        let l2 = (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1));
        l0 * tau[i] + l1 * tau[i + 1] + l2 * tau[i + 2]
    };
    let coef = traj.coefficients();
    let residuals: Vec<f64> = (0..n)
        .map(|i| {
            let dtau = if i == 0 {
                quad(0, 0)
            } else if i == n - 1 {
                quad(n - 3, n - 1)
            } else {
                quad(i - 1, i)
            };
            let (a, b) = coef[i];
            dtau + a * tau[i] + b * tau[i].max(0.0).powf(1.5)
        })
        .collect();
    let max_abs = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let max_signed = residuals.iter().fold(f64::NEG_INFINITY, |m, &r| m.max(r));
    Ok(Condition2 { residuals, max_abs, max_signed })
}

/// One row of the trajectory report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusRow {
    pub t: f64,
    pub grad_sup: f64,
    #[serde(rename = "Hr")]
    pub hr: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub tau_ode: f64,
    pub tau_paper: f64,
    pub tau_lower: f64,
    pub tau_measured: Option<f64>,
    pub cond2_residual: Option<f64>,
    #[serde(rename = "ln_G")]
    pub ln_g: f64,
    pub ln_tau_ode: f64,
    pub ln_tau_lower: f64,
}

/// Everything derived from a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusReport {
    pub c0: f64,
    pub rows: Vec<RadiusRow>,
    /// Condition residuals of the ODE and printed radii (absent below 3
    /// samples).
    pub ode_condition: Option<Condition2>,
    pub paper_condition: Option<Condition2>,
}

pub fn analyse(traj: &RadiusTrajectory) -> Result<RadiusReport> {
    let ln_ode = integrate_ln_tau_ode(traj)?;
    let ln_paper = ln_tau_paper_formula(traj);
    let lb = lower_bound(traj)?;
    let tau_ode: Vec<f64> = ln_ode.iter().map(|x| x.exp()).collect();
    let tau_paper: Vec<f64> = ln_paper.iter().map(|x| x.exp()).collect();
    let (ode_condition, paper_condition) = if traj.len() >= 3 {
        (Some(check_condition2(&tau_ode, traj)?), Some(check_condition2(&tau_paper, traj)?))
    } else {
        (None, None)
    };
    let ln_g = traj.ln_g();
    let m = traj.m();
    let rows = (0..traj.len())
        .map(|i| {
            let s = traj.samples[i];
            RadiusRow {
                t: s.t,
                grad_sup: s.grad_sup,
                hr: s.hr_norm,
                g: ln_g[i].exp(),
                m: m[i],
                tau_ode: tau_ode[i],
                tau_paper: tau_paper[i],
                tau_lower: lb.ln_tau[i].exp(),
                tau_measured: s.tau_measured,
                cond2_residual: ode_condition.as_ref().map(|c| c.residuals[i]),
                ln_g: ln_g[i],
                ln_tau_ode: ln_ode[i],
                ln_tau_lower: lb.ln_tau[i],
            }
        })
        .collect();
    Ok(RadiusReport { c0: lb.c0, rows, ode_condition, paper_condition })
}
