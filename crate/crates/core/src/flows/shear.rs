//! The explicit shear flow `u = (a sin(p x2), 0, sin(q(x1 − t a sin(p x2))))`.
//!
//! It solves the Euler equations on `T³` with zero pressure: `u1` depends on
//! `x2` only and `u3` is transported by `u1`. By Jacobi–Anger,
//! `e^{−iz sin θ} = Σ_n J_n(z) e^{−inθ}`, so the spectrum of `u3` at time `t`
//! is `J_n(qta)` along the `x2` axis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bessel::bessel_j_all;
use crate::error::{Error, Result};
use crate::gevrey::field::{Geometry, SpectralField};

/// Largest admissible Bessel coefficient beyond the retained band.
pub const TAIL_TOLERANCE: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShearFlow {
    pub amplitude: f64,
    /// Wavenumber `p` of the profile `f(x2) = a sin(p x2)`.
    pub f_mode: i64,
    /// Wavenumber `q` of the transported profile `g(y) = sin(q y)`.
    pub g_mode: i64,
}

impl Default for ShearFlow {
    fn default() -> Self {
        ShearFlow { amplitude: 1.0, f_mode: 1, g_mode: 1 }
    }
}

impl ShearFlow {
    fn check(&self) -> Result<()> {
        if self.f_mode < 1 || self.g_mode < 1 || !(self.amplitude > 0.0) {
            return Err(Error::InvalidArgument("shear flow needs positive amplitude and modes".into()));
        }
        Ok(())
    }

    /// Bessel argument `q t a`.
    pub fn phase(&self, t: f64) -> f64 {
        self.g_mode as f64 * t * self.amplitude
    }

    /// Pointwise velocity.
    pub fn velocity(&self, x: [f64; 3], t: f64) -> [f64; 3] {
        let (a, p, q) = (self.amplitude, self.f_mode as f64, self.g_mode as f64);
        let f = a * (p * x[1]).sin();
        [f, 0.0, (q * (x[0] - t * f)).sin()]
    }

    /// `max_x max_{ij} |∂_j u_i|`, attained at `x2 = 0`:
    /// `max(ap, q, qtap)`.
    pub fn grad_sup(&self, t: f64) -> f64 {
        let (a, p, q) = (self.amplitude, self.f_mode as f64, self.g_mode as f64);
        (a * p).max(q).max(q * t.abs() * a * p)
    }

    /// Smallest `K` with `|J_n(qta)| < TAIL_TOLERANCE` for every `n ≥ K`.
    pub fn required_k_max(&self, t: f64) -> usize {
        let z = self.phase(t).abs();
        let guess = (z + 10.0 * z.cbrt() + 40.0) as usize;
        let j = bessel_j_all(guess + 2, z);
        // J_n decays monotonically once n exceeds z
        let mut k = guess + 1;
        while k > 0 && (k as f64 > z) && j[k - 1].abs() < TAIL_TOLERANCE {
            k -= 1;
        }
        k
    }
}

/// Modal snapshot of the shear flow at time `t` with `k_max` Bessel modes in
/// each direction along `x2`.
pub fn shear_snapshot(flow: &ShearFlow, t: f64, k_max: usize) -> Result<SpectralField> {
    flow.check()?;
    let z = flow.phase(t);
    let j = bessel_j_all(k_max + 1, z.abs());
    let sign = |n: usize| if z < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    if j[k_max + 1].abs() >= TAIL_TOLERANCE || (k_max as f64) < z.abs() {
        return Err(Error::Resolution(format!(
            "K_max = {k_max} leaves Bessel tail |J_{}({z})| = {:e}",
            k_max + 1,
            j[k_max + 1].abs()
        )));
    }
    let (p, q) = (flow.f_mode, flow.g_mode);
    let n1 = 2 * (k_max * p as usize + 1).max(2);
    let n0 = 2 * (q as usize + 1).max(2);
    let mut u = SpectralField::vector(Geometry::Torus3, [n0, n1, 4])?;
    u.add_sin(0, [0, p, 0], flow.amplitude)?;
    // u3 = Im Σ_n J_n(z) e^{i(q x1 − n p x2)}
    for n in -(k_max as i64)..=(k_max as i64) {
        let m = n.unsigned_abs() as usize;
        let mut jn = j[m] * sign(m);
        if n < 0 && m % 2 == 1 {
            jn = -jn;
        }
        if jn == 0.0 {
            continue;
        }
        u.add_conjugate_pair(2, [q, -n * p, 0], Complex64::new(0.0, -jn / 2.0))?;
    }
    u.set_time(t);
    Ok(u)
}

/// Largest `r` with `sup_{|Im x2| ≤ r} |u3| ≤ M0`, using
/// `|e^{iq(x1 − t a sin(p x2))}| ≤ e^{qta sinh(pr)}` and dropping the
/// bounded prefactors: `r = asinh(ln M0 / (qta)) / p`.
pub fn shear_radius_exact(flow: &ShearFlow, t: f64, m0: f64) -> Result<f64> {
    flow.check()?;
    if !(m0 > 1.0) {
        return Err(Error::Precondition(format!("budget M0 = {m0} must exceed 1")));
    }
    if t < 0.0 {
        return Err(Error::Precondition(format!("time {t} must be non-negative")));
    }
    let z = flow.phase(t);
    if z == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((m0.ln() / z).asinh() / flow.f_mode as f64)
}
