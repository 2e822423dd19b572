//! Pseudo-spectral solver for the 2D periodic Euler equations in vorticity
//! form, `∂_t ω + u·∇ω = 0` with `u = ∇^⊥ψ`, `−Δψ = ω`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gevrey::fft::FftBox;
use crate::gevrey::random::{random_field, Envelope};
use crate::gevrey::{Geometry, Parity, SpectralField};

/// Default advective Courant number.
pub const DEFAULT_CFL: f64 = 0.5;

/// Envelope decay rate of the random analytic ensemble.
pub const RANDOM_TAU0: f64 = 1.0;

/// Vorticity on `T²` with its time stamp.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerState2D {
    pub vorticity: SpectralField,
    pub dealias: bool,
}

impl EulerState2D {
    pub fn new(vorticity: SpectralField, dealias: bool) -> Result<Self> {
        if vorticity.geometry() != Geometry::Torus2 || vorticity.components() != 1 {
            return Err(Error::Geometry("Euler state needs a scalar vorticity on T²".into()));
        }
        let mut vorticity = vorticity;
        vorticity.coeffs_mut(0)[0] = Complex64::default();
        if dealias {
            vorticity.dealias();
        }
        Ok(EulerState2D { vorticity, dealias })
    }

    pub fn time(&self) -> f64 {
        self.vorticity.time()
    }

    /// Grid size per axis.
    pub fn resolution(&self) -> usize {
        self.vorticity.shape()[0]
    }

    /// Streamfunction `ψ̂ = ω̂/|k|²`.
    pub fn streamfunction(&self) -> SpectralField {
        let w = &self.vorticity;
        let mut psi = w.clone();
        for flat in 0..w.len() {
            let k = w.wavevector(flat);
            let k2 = k[0] * k[0] + k[1] * k[1];
            psi.coeffs_mut(0)[flat] = if k2 == 0.0 { Complex64::default() } else { w.coeffs(0)[flat] / k2 };
        }
        psi
    }

    /// Velocity `(∂₂ψ, −∂₁ψ)` as a two-component field.
    pub fn velocity(&self) -> SpectralField {
        let psi = self.streamfunction();
        let mut u = SpectralField::vector(Geometry::Torus2, psi.shape()).expect("validated shape");
        for flat in 0..psi.len() {
            let k = psi.wavevector(flat);
            let c = psi.coeffs(0)[flat] * Complex64::i();
            u.coeffs_mut(0)[flat] = c * k[1];
            u.coeffs_mut(1)[flat] = -c * k[0];
        }
        u.set_time(self.time());
        u
    }

    /// `½∫|u|² = ½ V Σ |ω̂|²/|k|²`.
    pub fn energy(&self) -> f64 {
        let w = &self.vorticity;
        let mut s = 0.0;
        for flat in 1..w.len() {
            let k = w.wavevector(flat);
            s += w.coeffs(0)[flat].norm_sqr() / (k[0] * k[0] + k[1] * k[1]);
        }
        0.5 * Geometry::Torus2.volume() * s
    }

    /// `½∫ω²`.
    pub fn enstrophy(&self) -> f64 {
        let s: f64 = self.vorticity.coeffs(0).iter().map(|c| c.norm_sqr()).sum();
        0.5 * Geometry::Torus2.volume() * s
    }

    /// `‖ω‖_{L^p}` by quadrature on the doubled grid, exact for `p ≤ 4` on
    /// dealiased states.
    pub fn vorticity_lp(&self, p: f64) -> f64 {
        let g = self.vorticity.to_grid(0, 2);
        let mean = g.iter().map(|x| x.abs().powf(p)).sum::<f64>() / g.len() as f64;
        (Geometry::Torus2.volume() * mean).powf(1.0 / p)
    }

    /// Largest CFL-admissible step for Courant number `cfl`.
    pub fn cfl_bound(&self, cfl: f64) -> f64 {
        let u = self.velocity();
        let (g0, g1) = (u.to_grid(0, 1), u.to_grid(1, 1));
        let umax = g0.iter().zip(&g1).map(|(a, b)| a.hypot(*b)).fold(0.0, f64::max);
        if umax == 0.0 {
            return f64::INFINITY;
        }
        cfl * 2.0 * PI / self.resolution() as f64 / umax
    }
}

/// RK4 integrator with cached transforms and symbols.
pub struct EulerSolver {
    fft: FftBox,
    kx: Vec<f64>,
    ky: Vec<f64>,
    keep: Vec<bool>,
    pub cfl: f64,
}

impl EulerSolver {
    pub fn new(n: usize, dealias: bool) -> Result<Self> {
        let probe = SpectralField::scalar(Geometry::Torus2, [n, n, 1])?;
        let cut = (n / 3) as i64;
        let len = probe.len();
        let mut kx = vec![0.0; len];
        let mut ky = vec![0.0; len];
        let mut keep = vec![true; len];
        for flat in 0..len {
            let k = probe.wavevector(flat);
            let idx = probe.index_of(flat);
            kx[flat] = k[0];
            ky[flat] = k[1];
            keep[flat] = !dealias || (idx[0].abs() <= cut && idx[1].abs() <= cut);
        }
        Ok(EulerSolver { fft: FftBox::new([n, n, 1]), kx, ky, keep, cfl: DEFAULT_CFL })
    }

    /// `−u·∇ω` in modal form.
    fn rhs(&self, w: &[Complex64]) -> Vec<Complex64> {
        let len = w.len();
        let mut bufs = vec![vec![Complex64::default(); len]; 4];
        for flat in 1..len {
            let (k1, k2) = (self.kx[flat], self.ky[flat]);
            let iw = w[flat] * Complex64::i();
            let ipsi = iw / (k1 * k1 + k2 * k2);
            bufs[0][flat] = ipsi * k2;
            bufs[1][flat] = -ipsi * k1;
            bufs[2][flat] = iw * k1;
            bufs[3][flat] = iw * k2;
        }
        for b in bufs.iter_mut() {
            self.fft.inverse(b);
        }
        let mut out: Vec<Complex64> =
            (0..len).map(|i| -(bufs[0][i].re * bufs[2][i].re + bufs[1][i].re * bufs[3][i].re)).map(|x| Complex64::new(x, 0.0)).collect();
        self.fft.forward(&mut out);
        self.project(&mut out);
        out
    }

    fn project(&self, w: &mut [Complex64]) {
        let n = self.fft.shape()[0];
        w[0] = Complex64::default();
        for (flat, c) in w.iter_mut().enumerate() {
            let (i, j) = (flat / n, flat % n);
            if !self.keep[flat] || i == n / 2 || j == n / 2 {
                *c = Complex64::default();
            }
        }
    }

    /// One classical RK4 step.
    pub fn step(&self, state: &EulerState2D, dt: f64) -> Result<EulerState2D> {
        let bound = state.cfl_bound(self.cfl);
        if !(dt > 0.0) || dt > bound {
            return Err(Error::Cfl { dt, bound });
        }
        Ok(self.step_unchecked(state, dt))
    }

    fn step_unchecked(&self, state: &EulerState2D, dt: f64) -> EulerState2D {
        let w0 = state.vorticity.coeffs(0);
        let stage = |base: &[Complex64], k: &[Complex64], h: f64| -> Vec<Complex64> {
            base.iter().zip(k).map(|(a, b)| a + b * h).collect()
        };
        let k1 = self.rhs(w0);
        let k2 = self.rhs(&stage(w0, &k1, 0.5 * dt));
        let k3 = self.rhs(&stage(w0, &k2, 0.5 * dt));
        let k4 = self.rhs(&stage(w0, &k3, dt));
        let mut next = state.clone();
        let out = next.vorticity.coeffs_mut(0);
        for i in 0..out.len() {
            out[i] = w0[i] + (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
        }
        next.vorticity.set_time(state.time() + dt);
        next
    }

    /// Advance by `span`. Each step splits the remaining span into the
    /// fewest equal pieces admissible under the current CFL bound.
    pub fn advance(&self, state: &EulerState2D, span: f64) -> Result<EulerState2D> {
        let t_end = state.time() + span;
        let mut cur = state.clone();
        let mut left = span;
        while left > 1e-14 * span.abs().max(1.0) {
            let bound = cur.cfl_bound(self.cfl);
            let dt = left / (left / bound).ceil().max(1.0);
            cur = self.step(&cur, dt)?;
            left = t_end - cur.time();
        }
        cur.vorticity.set_time(t_end);
        Ok(cur)
    }

    /// Snapshots at `0, every, 2·every, …` up to `t_final`.
    pub fn run(&self, state: &EulerState2D, t_final: f64, every: f64) -> Result<Vec<EulerState2D>> {
        if !(every > 0.0) {
            return Err(Error::InvalidArgument(format!("snapshot interval {every} must be positive")));
        }
        let count = (t_final / every + 1e-9).floor() as usize;
        let mut out = vec![state.clone()];
        let t0 = state.time();
        for s in 1..=count {
            let target = t0 + s as f64 * every;
            let next = self.advance(out.last().expect("nonempty"), target - out.last().expect("nonempty").time())?;
            out.push(next);
        }
        Ok(out)
    }
}

/// One RK4 step with a freshly built solver.
pub fn euler_step(state: &EulerState2D, dt: f64) -> Result<EulerState2D> {
    EulerSolver::new(state.resolution(), state.dealias)?.step(state, dt)
}

/// `ω = 2 cos x₁ cos x₂`, a steady state with `ψ = cos x₁ cos x₂`.
pub fn taylor_green(n: usize) -> Result<EulerState2D> {
    let mut w = SpectralField::scalar(Geometry::Torus2, [n, n, 1])?;
    for k in [[1, 1, 0], [1, -1, 0]] {
        w.add_cos(0, k, 1.0)?;
    }
    EulerState2D::new(w, true)
}

/// Seeded random vorticity with `e^{−τ₀|k|}` envelope on the dealiased band,
/// normalised to unit mean-square vorticity.
pub fn random_analytic(n: usize, seed: u64) -> Result<EulerState2D> {
    random_analytic_with(n, seed, RANDOM_TAU0)
}

/// As [`random_analytic`] with envelope rate `tau0`.
pub fn random_analytic_with(n: usize, seed: u64, tau0: f64) -> Result<EulerState2D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let env = Envelope { tau0, band: (n / 3) as i64 };
    let w = random_field(Geometry::Torus2, [n, n, 1], vec![Parity::Even], env, &mut rng)?;
    let s: f64 = w.coeffs(0).iter().map(|c| c.norm_sqr()).sum();
    EulerState2D::new(w.scale(1.0 / s.sqrt()), true)
}
