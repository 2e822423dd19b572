//! Strip width from the exponential decay of Fourier coefficients.

use serde::{Deserialize, Serialize};

use super::field::SpectralField;
use super::norms::FLOOR_REL;
use crate::error::{Error, Result};

/// Range of shell indices `round(|k|)` used by [`fit_radius`], inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitWindow {
    pub k_min: f64,
    pub k_max: f64,
}

impl FitWindow {
    pub fn new(k_min: f64, k_max: f64) -> Self {
        FitWindow { k_min, k_max }
    }

    /// Every nonzero shell.
    pub fn full() -> Self {
        FitWindow { k_min: 1.0, k_max: f64::INFINITY }
    }

    fn contains(&self, shell: u64) -> bool {
        let s = shell as f64;
        shell > 0 && s >= self.k_min && s <= self.k_max
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusFit {
    /// Measured decay rate, `−slope`.
    pub tau: f64,
    pub intercept: f64,
    /// Populated shells that entered the regression.
    pub shells: usize,
    /// Root-mean-square residual of the log-linear fit.
    pub residual_rms: f64,
}

/// Least-squares fit of `ln max_{shell}|v̂_k|` against `|k|`.
///
/// Each shell `round(|k|) = n` contributes its largest coefficient over all
/// components, placed at the `|k|` where that maximum sits. Shells whose
/// maximum is at round-off level relative to the whole field are skipped.
pub fn fit_radius(v: &SpectralField, window: FitWindow) -> Result<RadiusFit> {
    let peak = v.max_abs();
    let cut = FLOOR_REL * peak;
    let mut shells: std::collections::BTreeMap<u64, (f64, f64)> = Default::default();
    for mode in v.modes() {
        let kn = (mode.k[0].powi(2) + mode.k[1].powi(2) + mode.k[2].powi(2)).sqrt();
        let shell = kn.round() as u64;
        if !window.contains(shell) {
            continue;
        }
        let amp = mode.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let e = shells.entry(shell).or_insert((0.0, kn));
        if amp > e.0 {
            *e = (amp, kn);
        }
    }
    let points: Vec<(f64, f64)> = shells.values().filter(|(a, _)| *a > cut).map(|&(a, k)| (k, a.ln())).collect();
    if points.len() < 3 {
        return Err(Error::InsufficientShells { found: points.len() });
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(RadiusFit { tau: -slope, intercept, shells: points.len(), residual_rms: (rss / n).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gevrey::field::Geometry;
    use num_complex::Complex64;

    fn synthetic(tau: f64) -> SpectralField {
        let mut v = SpectralField::scalar(Geometry::Torus3, [32, 32, 32]).unwrap();
        for flat in 0..v.len() {
            let k = v.wavevector(flat);
            let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
            v.coeffs_mut(0)[flat] = Complex64::new((-tau * kn).exp(), 0.0);
        }
        v
    }

    #[test]
    fn recovers_synthetic_rate() {
        for tau in [0.1, 0.5, 0.7, 1.0] {
            let fit = fit_radius(&synthetic(tau), FitWindow::full()).unwrap();
            assert!((fit.tau - tau).abs() < 1e-6, "{tau}: {}", fit.tau);
        }
    }

    #[test]
    fn single_mode_is_rejected() {
        let mut v = SpectralField::scalar(Geometry::Torus3, [8, 8, 8]).unwrap();
        v.add_sin(0, [1, 0, 0], 1.0).unwrap();
        assert!(matches!(fit_radius(&v, FitWindow::full()), Err(Error::InsufficientShells { found: 1 })));
    }
}
