//! Multi-dimensional complex FFTs on row-major boxes.
//!
//! Forward transforms carry the `1/N` factor so that modal coefficients
//! satisfy `v(x) = Σ_k ĉ_k e^{ik·x}`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Planned transforms for one box shape.
pub struct FftBox {
    shape: [usize; 3],
    fwd: [Arc<dyn Fft<f64>>; 3],
    inv: [Arc<dyn Fft<f64>>; 3],
}

impl FftBox {
    pub fn new(shape: [usize; 3]) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = [0, 1, 2].map(|a| planner.plan_fft_forward(shape[a]));
        let inv = [0, 1, 2].map(|a| planner.plan_fft_inverse(shape[a]));
        FftBox { shape, fwd, inv }
    }

    pub fn shape(&self) -> [usize; 3] {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid values to modal coefficients, in place.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.fwd);
        let scale = 1.0 / self.len() as f64;
        data.iter_mut().for_each(|c| *c *= scale);
    }

    /// Modal coefficients to grid values, in place.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inv);
    }

    fn transform(&self, data: &mut [Complex64], plans: &[Arc<dyn Fft<f64>>; 3]) {
        assert_eq!(data.len(), self.len(), "buffer does not match the box shape");
        let [n0, n1, n2] = self.shape;
        if n2 > 1 {
            plans[2].process(data);
        }
        let mut line = Vec::new();
        if n1 > 1 {
            line.resize(n1, Complex64::default());
            for i in 0..n0 {
                for l in 0..n2 {
                    let base = i * n1 * n2 + l;
                    for j in 0..n1 {
                        line[j] = data[base + j * n2];
                    }
                    plans[1].process(&mut line);
                    for j in 0..n1 {
                        data[base + j * n2] = line[j];
                    }
                }
            }
        }
        if n0 > 1 {
            line.resize(n0, Complex64::default());
            let stride = n1 * n2;
            for off in 0..stride {
                for i in 0..n0 {
                    line[i] = data[off + i * stride];
                }
                plans[0].process(&mut line);
                for i in 0..n0 {
                    data[off + i * stride] = line[i];
                }
            }
        }
    }
}

/// Signed frequency of storage index `i` on an axis of length `n`.
pub fn signed_index(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Storage index of signed frequency `k`, if it is strictly inside the band
/// (the Nyquist index is excluded).
pub fn storage_index(k: i64, n: usize) -> Option<usize> {
    if n == 1 {
        return (k == 0).then_some(0);
    }
    let half = (n / 2) as i64;
    if k.abs() >= half {
        return None;
    }
    Some(if k >= 0 { k as usize } else { (n as i64 + k) as usize })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_single_mode() {
        let shape = [8, 6, 4];
        let fft = FftBox::new(shape);
        let mut data: Vec<Complex64> = (0..fft.len()).map(|i| Complex64::new(i as f64, -(i as f64) * 0.5)).collect();
        let orig = data.clone();
        fft.forward(&mut data);
        fft.inverse(&mut data);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-10);
        }

        // e^{i(2 x1 − x2)} sampled on the grid has a single unit coefficient
        let mut grid = vec![Complex64::default(); fft.len()];
        for i in 0..8 {
            for j in 0..6 {
                for l in 0..4 {
                    let x1 = 2.0 * std::f64::consts::PI * i as f64 / 8.0;
                    let x2 = 2.0 * std::f64::consts::PI * j as f64 / 6.0;
                    grid[(i * 6 + j) * 4 + l] = Complex64::from_polar(1.0, 2.0 * x1 - x2);
                }
            }
        }
        fft.forward(&mut grid);
        let at = (storage_index(2, 8).unwrap() * 6 + storage_index(-1, 6).unwrap()) * 4;
        for (i, c) in grid.iter().enumerate() {
            let want = if i == at { 1.0 } else { 0.0 };
            assert!((c - Complex64::new(want, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn index_maps() {
        assert_eq!(signed_index(5, 8), -3);
        assert_eq!(signed_index(4, 8), 4);
        assert_eq!(storage_index(-3, 8), Some(5));
        assert_eq!(storage_index(4, 8), None);
        assert_eq!(storage_index(0, 1), Some(0));
        assert_eq!(storage_index(1, 1), None);
    }
}
