//! Dealiased pseudo-spectral products.

use num_complex::Complex64;

use super::fft::FftBox;
use super::field::{Parity, SpectralField};
use crate::error::{Error, Result};

/// One factor pair `a[ca] · b[cb]` of a quadratic expression.
pub type Factor<'a> = (&'a SpectralField, usize);

/// `Σ_n a_n b_n` on the storage grid of the inputs: factors are cut to the
/// two-thirds band, multiplied pointwise and the result cut again, so the
/// retained modes are free of aliasing.
pub fn dealiased_sum(terms: &[(Factor<'_>, Factor<'_>)], parity: Parity, fft: &FftBox) -> Result<SpectralField> {
    let ((first, _), _) = terms.first().ok_or_else(|| Error::InvalidArgument("empty product".into()))?;
    if fft.shape() != first.shape() {
        return Err(Error::Geometry("transform does not match the field shape".into()));
    }
    let mut acc = vec![0.0f64; fft.len()];
    for ((a, ca), (b, cb)) in terms {
        if a.shape() != first.shape() || b.shape() != first.shape() || a.geometry() != first.geometry() {
            return Err(Error::Geometry("product factors differ in layout".into()));
        }
        let ga = truncated(a, *ca).to_grid_with(0, fft);
        let gb = truncated(b, *cb).to_grid_with(0, fft);
        for ((s, x), y) in acc.iter_mut().zip(&ga).zip(&gb) {
            *s += x * y;
        }
    }
    let mut buf: Vec<Complex64> = acc.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    fft.forward(&mut buf);
    let mut out = first.zeros_like(vec![parity]);
    out.coeffs_mut(0).copy_from_slice(&buf);
    out.dealias();
    Ok(out)
}

fn truncated(v: &SpectralField, comp: usize) -> SpectralField {
    let mut c = v.component(comp);
    c.dealias();
    c
}
