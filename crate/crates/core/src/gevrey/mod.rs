//! Spectral fields, derivative semi-norms, Gevrey series norms and radius
//! estimation from Fourier decay.

pub mod decay;
pub mod fft;
pub mod field;
pub mod norms;
pub mod product;
pub mod random;
pub mod snapshot;

pub use decay::{fit_radius, FitWindow, RadiusFit};
pub use field::{Geometry, Mode, Parity, SpectralField};
pub use norms::{
    derivative_l2_norm, max_tau_for_budget, DerivativeNorms, seminorm_table, sobolev_norm, sup_seminorms, x_norm, GevreyNormResult,
    SeminormTable, TauBudget,
};
