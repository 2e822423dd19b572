//! Numerical companion to the Gevrey-class analyticity theory of the
//! incompressible Euler equations.

pub mod error;
pub mod flows;
pub mod gevrey;
pub mod multiindex;
pub mod neumann;
pub mod probes;
pub mod radius;

pub use error::{Error, Result};
pub use multiindex::MultiIndex;

/// Version of this crate, echoed into run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
