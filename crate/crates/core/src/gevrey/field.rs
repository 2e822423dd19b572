//! Band-limited fields stored as modal coefficients.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fft::{signed_index, storage_index, FftBox};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;

/// Domain of a field. Periodic axes have period `2π`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Geometry {
    /// `T²`, stored with a trivial third axis.
    Torus2,
    Torus3,
    /// `T² × (0, L)` with reflection symmetry in `x3`. Components are kept as
    /// their even or odd extension to a periodic box of length `2L`, so that
    /// the `x3` wavenumber of index `n` is `nπ/L`.
    Slab { depth: f64 },
}

impl Geometry {
    /// Physical volume (the slab counts only `(0, L)`).
    pub fn volume(&self) -> f64 {
        match self {
            Geometry::Torus2 => (2.0 * PI).powi(2),
            Geometry::Torus3 => (2.0 * PI).powi(3),
            Geometry::Slab { depth } => (2.0 * PI).powi(2) * depth,
        }
    }

    /// Wavenumber per unit index along `x3`.
    pub fn k3_scale(&self) -> f64 {
        match self {
            Geometry::Slab { depth } => PI / depth,
            _ => 1.0,
        }
    }

    /// Period of the stored box along `x3`.
    pub fn period3(&self) -> f64 {
        match self {
            Geometry::Slab { depth } => 2.0 * depth,
            _ => 2.0 * PI,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Geometry::Torus2 => 2,
            _ => 3,
        }
    }

    pub fn is_slab(&self) -> bool {
        matches!(self, Geometry::Slab { .. })
    }

    pub fn label(&self) -> String {
        match self {
            Geometry::Torus2 => "torus2".into(),
            Geometry::Torus3 => "torus3".into(),
            Geometry::Slab { depth } => format!("slab(L={depth})"),
        }
    }
}

/// Reflection type of a slab component about `x3 = 0`: cosine series are
/// even, sine series odd. Periodic fields are always tagged even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// One retained wavevector of a field with its coefficients in every
/// component.
#[derive(Clone, Debug)]
pub struct Mode {
    pub flat: usize,
    pub index: [i64; 3],
    pub k: [f64; 3],
    pub coeffs: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    geometry: Geometry,
    shape: [usize; 3],
    parities: Vec<Parity>,
    data: Vec<Vec<Complex64>>,
    time: f64,
}

impl SpectralField {
    /// All-zero field with one component per entry of `parities`.
    pub fn zeros(geometry: Geometry, shape: [usize; 3], parities: Vec<Parity>) -> Result<Self> {
        if parities.is_empty() {
            return Err(Error::InvalidArgument("a field needs at least one component".into()));
        }
        match geometry {
            Geometry::Torus2 if shape[2] != 1 => {
                return Err(Error::Geometry(format!("T² fields need a trivial third axis, got {shape:?}")))
            }
            Geometry::Slab { depth } if !(depth > 0.0 && depth.is_finite()) => {
                return Err(Error::Geometry(format!("slab depth must be positive, got {depth}")))
            }
            _ => {}
        }
        let axes = if geometry == Geometry::Torus2 { 2 } else { 3 };
        for &n in &shape[..axes] {
            if n < 4 || n % 2 != 0 {
                return Err(Error::Geometry(format!("axis lengths must be even and ≥ 4, got {shape:?}")));
            }
        }
        let parities = if geometry.is_slab() { parities } else { vec![Parity::Even; parities.len()] };
        let len = shape.iter().product();
        let data = vec![vec![Complex64::default(); len]; parities.len()];
        Ok(SpectralField { geometry, shape, parities, data, time: 0.0 })
    }

    pub fn scalar(geometry: Geometry, shape: [usize; 3]) -> Result<Self> {
        Self::zeros(geometry, shape, vec![Parity::Even])
    }

    /// Velocity-like vector field; on the slab the normal component is odd.
    pub fn vector(geometry: Geometry, shape: [usize; 3]) -> Result<Self> {
        let parities = match geometry {
            Geometry::Torus2 => vec![Parity::Even; 2],
            Geometry::Torus3 => vec![Parity::Even; 3],
            Geometry::Slab { .. } => vec![Parity::Even, Parity::Even, Parity::Odd],
        };
        Self::zeros(geometry, shape, parities)
    }

    /// Same geometry and shape, zero data, given parities.
    pub fn zeros_like(&self, parities: Vec<Parity>) -> Self {
        Self::zeros(self.geometry, self.shape, parities).expect("shape already validated")
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
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
    pub fn components(&self) -> usize {
        self.data.len()
    }
    pub fn parity(&self, comp: usize) -> Parity {
        self.parities[comp]
    }
    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }
    pub fn time(&self) -> f64 {
        self.time
    }
    pub fn set_time(&mut self, t: f64) {
        self.time = t;
    }
    pub fn coeffs(&self, comp: usize) -> &[Complex64] {
        &self.data[comp]
    }
    pub fn coeffs_mut(&mut self, comp: usize) -> &mut [Complex64] {
        &mut self.data[comp]
    }

    /// Largest retained integer index per axis.
    pub fn k_max(&self) -> usize {
        self.shape.iter().map(|&n| if n == 1 { 0 } else { n / 2 - 1 }).max().unwrap_or(0)
    }

    /// Split one component off as a scalar field.
    pub fn component(&self, comp: usize) -> SpectralField {
        SpectralField {
            geometry: self.geometry,
            shape: self.shape,
            parities: vec![self.parities[comp]],
            data: vec![self.data[comp].clone()],
            time: self.time,
        }
    }

    /// Assemble a vector field from scalar fields of equal geometry.
    pub fn stack(parts: &[SpectralField]) -> Result<SpectralField> {
        let first = parts.first().ok_or_else(|| Error::InvalidArgument("nothing to stack".into()))?;
        let mut out = first.clone();
        out.parities.clear();
        out.data.clear();
        for p in parts {
            if p.geometry != first.geometry || p.shape != first.shape {
                return Err(Error::Geometry("stacked fields differ in geometry or shape".into()));
            }
            out.parities.extend_from_slice(&p.parities);
            out.data.extend(p.data.iter().cloned());
        }
        Ok(out)
    }

    /// Integer index triple of storage slot `flat`.
    pub fn index_of(&self, flat: usize) -> [i64; 3] {
        let [n0, n1, n2] = self.shape;
        let i = flat / (n1 * n2);
        let j = (flat / n2) % n1;
        let l = flat % n2;
        [signed_index(i, n0), signed_index(j, n1), signed_index(l, n2)]
    }

    /// Physical wavevector of storage slot `flat`.
    pub fn wavevector(&self, flat: usize) -> [f64; 3] {
        self.wavevector_of(self.index_of(flat))
    }

    pub fn wavevector_of(&self, idx: [i64; 3]) -> [f64; 3] {
        [idx[0] as f64, idx[1] as f64, idx[2] as f64 * self.geometry.k3_scale()]
    }

    /// Storage slot of an integer index triple inside the band.
    pub fn slot(&self, idx: [i64; 3]) -> Option<usize> {
        let [n0, n1, n2] = self.shape;
        let i = storage_index(idx[0], n0)?;
        let j = storage_index(idx[1], n1)?;
        let l = storage_index(idx[2], n2)?;
        Some((i * n1 + j) * n2 + l)
    }

    pub fn get(&self, comp: usize, idx: [i64; 3]) -> Complex64 {
        self.slot(idx).map_or(Complex64::default(), |s| self.data[comp][s])
    }

    /// Add `c·e^{ik·x}` together with its complex conjugate.
    pub fn add_conjugate_pair(&mut self, comp: usize, idx: [i64; 3], c: Complex64) -> Result<()> {
        let neg = [-idx[0], -idx[1], -idx[2]];
        let s = self.slot(idx).ok_or_else(|| Error::Resolution(format!("index {idx:?} outside band {:?}", self.shape)))?;
        let sn = self.slot(neg).expect("band is symmetric");
        if s == sn {
            self.data[comp][s] += Complex64::new(2.0 * c.re, 0.0);
        } else {
            self.data[comp][s] += c;
            self.data[comp][sn] += c.conj();
        }
        Ok(())
    }

    /// Add `a·cos(k·x)` for the integer index triple `idx`.
    pub fn add_cos(&mut self, comp: usize, idx: [i64; 3], a: f64) -> Result<()> {
        self.add_conjugate_pair(comp, idx, Complex64::new(a / 2.0, 0.0))
    }

    /// Add `a·sin(k·x)` for the integer index triple `idx`.
    pub fn add_sin(&mut self, comp: usize, idx: [i64; 3], a: f64) -> Result<()> {
        if idx == [0, 0, 0] {
            return Ok(());
        }
        self.add_conjugate_pair(comp, idx, Complex64::new(0.0, -a / 2.0))
    }

    /// Every slot with a nonzero coefficient in some component.
    pub fn modes(&self) -> Vec<Mode> {
        (0..self.len())
            .filter(|&f| self.data.iter().any(|d| d[f] != Complex64::default()))
            .map(|flat| Mode {
                flat,
                index: self.index_of(flat),
                k: self.wavevector(flat),
                coeffs: self.data.iter().map(|d| d[flat]).collect(),
            })
            .collect()
    }

    pub fn nonzero_count(&self) -> usize {
        (0..self.len()).filter(|&f| self.data.iter().any(|d| d[f] != Complex64::default())).count()
    }

    pub fn scale(&self, c: f64) -> SpectralField {
        let mut out = self.clone();
        out.data.iter_mut().flatten().for_each(|z| *z *= c);
        out
    }

    /// `self + c·other`, requiring identical layout.
    pub fn axpy(&self, c: f64, other: &SpectralField) -> Result<SpectralField> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y * c;
            }
        }
        Ok(out)
    }

    pub fn check_compatible(&self, other: &SpectralField) -> Result<()> {
        if self.geometry != other.geometry || self.shape != other.shape || self.parities != other.parities {
            return Err(Error::Geometry("fields differ in geometry, shape or parity".into()));
        }
        Ok(())
    }

    /// Mean value of a component (the zero mode).
    pub fn mean(&self, comp: usize) -> f64 {
        self.data[comp][0].re
    }

    /// `‖v_c‖_{L²}` of one component by Parseval.
    pub fn l2_norm_component(&self, comp: usize) -> f64 {
        let s: f64 = self.data[comp].iter().map(|c| c.norm_sqr()).sum();
        (self.geometry.volume() * s).sqrt()
    }

    /// Sum of the component `L²` norms (the componentwise-sum convention).
    pub fn l2_norm(&self) -> f64 {
        (0..self.components()).map(|c| self.l2_norm_component(c)).sum()
    }

    /// Euclidean `L²` norm `(∫|v|²)^{1/2}` over all components.
    pub fn l2_norm_euclid(&self) -> f64 {
        let s: f64 = self.data.iter().flatten().map(|c| c.norm_sqr()).sum();
        (self.geometry.volume() * s).sqrt()
    }

    /// Complex symbol `(ik)^α`.
    pub fn symbol(k: [f64; 3], alpha: &MultiIndex) -> Complex64 {
        let mag = k[0].powi(alpha.a1 as i32) * k[1].powi(alpha.a2 as i32) * k[2].powi(alpha.a3 as i32);
        Complex64::new(mag, 0.0) * i_pow(alpha.order())
    }

    /// `∂^α v` by modal multiplication. Slab parities flip with odd `α₃`.
    pub fn derivative(&self, alpha: &MultiIndex) -> SpectralField {
        let mut out = self.clone();
        if self.geometry.is_slab() && alpha.a3 % 2 == 1 {
            out.parities.iter_mut().for_each(|p| *p = p.flip());
        }
        for flat in 0..self.len() {
            let m = Self::symbol(self.wavevector(flat), alpha);
            for d in out.data.iter_mut() {
                d[flat] *= m;
            }
        }
        out
    }

    /// Zero every mode outside the two-thirds band on each axis.
    pub fn dealias(&mut self) {
        let cut = self.shape.map(|n| (n / 3) as i64);
        for flat in 0..self.len() {
            let idx = self.index_of(flat);
            let keep = (0..3).all(|a| self.shape[a] == 1 || idx[a].abs() <= cut[a]);
            if !keep {
                self.data.iter_mut().for_each(|d| d[flat] = Complex64::default());
            }
        }
    }

    /// Maximum `|ĉ(k) − conj ĉ(−k)|` relative to the largest coefficient.
    pub fn hermitian_residual(&self) -> f64 {
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let mut worst = 0.0f64;
        for d in &self.data {
            for flat in 0..self.len() {
                let idx = self.index_of(flat);
                if let Some(s) = self.slot([-idx[0], -idx[1], -idx[2]]) {
                    worst = worst.max((d[flat] - d[s].conj()).norm());
                } else {
                    worst = worst.max(d[flat].norm());
                }
            }
        }
        worst / scale
    }

    /// Maximum violation of the `x3` reflection symmetry, relative.
    pub fn parity_residual(&self) -> f64 {
        if !self.geometry.is_slab() {
            return 0.0;
        }
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let mut worst = 0.0f64;
        for (d, p) in self.data.iter().zip(&self.parities) {
            for flat in 0..self.len() {
                let idx = self.index_of(flat);
                let r = self.slot([idx[0], idx[1], -idx[2]]).map_or(Complex64::default(), |s| d[s]);
                worst = worst.max((d[flat] - r * p.sign()).norm());
            }
        }
        worst / scale
    }

    /// `max_k |k·û(k)| / max_k |k||û(k)|` for a vector field.
    pub fn divergence_residual(&self) -> Result<f64> {
        let dim = self.geometry.dim();
        if self.components() != dim {
            return Err(Error::Geometry(format!("divergence needs {dim} components, got {}", self.components())));
        }
        let (mut num, mut den) = (0.0f64, 0.0f64);
        for flat in 0..self.len() {
            let k = self.wavevector(flat);
            let mut div = Complex64::default();
            let mut mag = 0.0;
            for (a, d) in self.data.iter().enumerate() {
                div += d[flat] * k[a];
                mag += d[flat].norm_sqr();
            }
            let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
            num = num.max(div.norm());
            den = den.max(kn * mag.sqrt());
        }
        Ok(if den == 0.0 { 0.0 } else { num / den })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Shape of the sampling grid refined by `factor` (trivial axes stay trivial).
    pub fn grid_shape(&self, factor: usize) -> [usize; 3] {
        self.shape.map(|n| if n == 1 { 1 } else { n * factor })
    }

    /// Coordinates of grid node `(i, j, l)` on a grid of `shape`.
    pub fn node(&self, shape: [usize; 3], ijl: [usize; 3]) -> [f64; 3] {
        [
            2.0 * PI * ijl[0] as f64 / shape[0] as f64,
            2.0 * PI * ijl[1] as f64 / shape[1] as f64,
            self.geometry.period3() * ijl[2] as f64 / shape[2] as f64,
        ]
    }

    /// Real values of one component on the grid refined by `factor`.
    pub fn to_grid(&self, comp: usize, factor: usize) -> Vec<f64> {
        let gshape = self.grid_shape(factor);
        let fft = FftBox::new(gshape);
        self.to_grid_with(comp, &fft)
    }

    /// As [`Self::to_grid`] with a pre-planned transform of the target shape.
    pub fn to_grid_with(&self, comp: usize, fft: &FftBox) -> Vec<f64> {
        let gshape = fft.shape();
        let mut buf = vec![Complex64::default(); fft.len()];
        for flat in 0..self.len() {
            let c = self.data[comp][flat];
            if c == Complex64::default() {
                continue;
            }
            let idx = self.index_of(flat);
            let at = padded_slot(idx, gshape);
            buf[at] = c;
        }
        fft.inverse(&mut buf);
        buf.into_iter().map(|z| z.re).collect()
    }

    /// Field from grid samples on the storage grid; the Nyquist slots are
    /// zeroed.
    pub fn from_grids(
        geometry: Geometry,
        shape: [usize; 3],
        parities: Vec<Parity>,
        grids: &[Vec<f64>],
        fft: &FftBox,
    ) -> Result<SpectralField> {
        let mut out = SpectralField::zeros(geometry, shape, parities)?;
        if grids.len() != out.components() || fft.shape() != shape {
            return Err(Error::Geometry("grid data does not match the field layout".into()));
        }
        for (comp, g) in grids.iter().enumerate() {
            let mut buf: Vec<Complex64> = g.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            fft.forward(&mut buf);
            out.data[comp] = buf;
        }
        out.zero_nyquist();
        Ok(out)
    }

    fn zero_nyquist(&mut self) {
        for flat in 0..self.len() {
            let [n0, n1, n2] = self.shape;
            let i = flat / (n1 * n2);
            let j = (flat / n2) % n1;
            let l = flat % n2;
            let nyq = (n0 > 1 && i == n0 / 2) || (n1 > 1 && j == n1 / 2) || (n2 > 1 && l == n2 / 2);
            if nyq {
                self.data.iter_mut().for_each(|d| d[flat] = Complex64::default());
            }
        }
    }

    /// Copy into a different (larger or smaller) box, dropping modes that
    /// do not fit.
    pub fn resized(&self, shape: [usize; 3]) -> Result<SpectralField> {
        let mut out = SpectralField::zeros(self.geometry, shape, self.parities.clone())?;
        out.time = self.time;
        for flat in 0..self.len() {
            if let Some(s) = out.slot(self.index_of(flat)) {
                for (o, d) in out.data.iter_mut().zip(&self.data) {
                    o[s] = d[flat];
                }
            }
        }
        Ok(out)
    }

    /// Point evaluation of one component by direct modal summation.
    pub fn eval(&self, comp: usize, x: [f64; 3]) -> f64 {
        let mut acc = 0.0;
        for flat in 0..self.len() {
            let c = self.data[comp][flat];
            if c == Complex64::default() {
                continue;
            }
            let k = self.wavevector(flat);
            let phase = k[0] * x[0] + k[1] * x[1] + k[2] * x[2];
            acc += (c * Complex64::from_polar(1.0, phase)).re;
        }
        acc
    }
}

/// `i^n`
pub fn i_pow(n: u32) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn padded_slot(idx: [i64; 3], shape: [usize; 3]) -> usize {
    let m = |k: i64, n: usize| -> usize { k.rem_euclid(n as i64) as usize };
    (m(idx[0], shape[0]) * shape[1] + m(idx[1], shape[1])) * shape[2] + m(idx[2], shape[2])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_builders_evaluate_pointwise() {
        let mut f = SpectralField::scalar(Geometry::Torus3, [8, 8, 8]).unwrap();
        f.add_sin(0, [1, 0, 0], 1.0).unwrap();
        f.add_cos(0, [0, 2, -1], 0.5).unwrap();
        f.add_cos(0, [0, 0, 0], 0.25).unwrap();
        let x: [f64; 3] = [0.3, -1.1, 2.0];
        let want = x[0].sin() + 0.5 * (2.0 * x[1] - x[2]).cos() + 0.25;
        assert!((f.eval(0, x) - want).abs() < 1e-14);
        assert!(f.hermitian_residual() < 1e-15);
        assert!((f.mean(0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn grid_roundtrip_preserves_band() {
        let mut f = SpectralField::scalar(Geometry::Torus3, [8, 8, 8]).unwrap();
        f.add_sin(0, [1, 2, 3], 1.0).unwrap();
        f.add_cos(0, [3, -1, 0], 2.0).unwrap();
        let fft = FftBox::new(f.shape());
        let g = f.to_grid_with(0, &fft);
        let back = SpectralField::from_grids(Geometry::Torus3, f.shape(), vec![Parity::Even], &[g], &fft).unwrap();
        assert!(back.axpy(-1.0, &f).unwrap().max_abs() < 1e-14);
        let fine = f.to_grid(0, 2);
        let node = f.node(f.grid_shape(2), [3, 5, 7]);
        assert!((fine[(3 * 16 + 5) * 16 + 7] - f.eval(0, node)).abs() < 1e-13);
    }

    #[test]
    fn slab_parity_and_derivative() {
        let geom = Geometry::Slab { depth: PI };
        let mut f = SpectralField::scalar(geom, [8, 8, 8]).unwrap();
        // cos x1 cos x3
        f.add_cos(0, [1, 0, 1], 0.5).unwrap();
        f.add_cos(0, [1, 0, -1], 0.5).unwrap();
        assert!(f.parity_residual() < 1e-15);
        let x: [f64; 3] = [0.4, 0.0, 1.3];
        assert!((f.eval(0, x) - x[0].cos() * x[2].cos()).abs() < 1e-14);
        let d = f.derivative(&MultiIndex::new(0, 0, 1));
        assert_eq!(d.parity(0), Parity::Odd);
        assert!(d.parity_residual() < 1e-15);
        assert!((d.eval(0, x) + x[0].cos() * x[2].sin()).abs() < 1e-14);
        // ‖cos x1 cos x3‖² over (2π)²·π is (2π)²π/4
        let want = ((2.0 * PI).powi(2) * PI / 4.0).sqrt();
        assert!((f.l2_norm() - want).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(SpectralField::scalar(Geometry::Torus2, [8, 8, 8]).is_err());
        assert!(SpectralField::scalar(Geometry::Torus3, [7, 8, 8]).is_err());
        assert!(SpectralField::scalar(Geometry::Slab { depth: -1.0 }, [8, 8, 8]).is_err());
    }

    #[test]
    fn divergence_of_taylor_green() {
        let mut u = SpectralField::vector(Geometry::Torus2, [8, 8, 1]).unwrap();
        // u = (cos x1 sin x2, −sin x1 cos x2)
        for (idx, s) in [([1, 1, 0], 1.0), ([1, -1, 0], -1.0)] {
            u.add_sin(0, idx, 0.5 * s).unwrap();
        }
        u.add_sin(1, [1, 1, 0], -0.5).unwrap();
        u.add_sin(1, [1, -1, 0], -0.5).unwrap();
        let x: [f64; 3] = [0.7, 0.2, 0.0];
        assert!((u.eval(0, x) - x[0].cos() * x[1].sin()).abs() < 1e-14);
        assert!((u.eval(1, x) + x[0].sin() * x[1].cos()).abs() < 1e-14);
        assert!(u.divergence_residual().unwrap() < 1e-15);
    }
}
