pub mod euler;
pub mod lemmas;
pub mod neumann;
pub mod probes;
pub mod radius;
pub mod shear;

use analyticity::flows::grad_sup_norm;
use analyticity::gevrey::{seminorm_table, sobolev_norm, x_norm, SpectralField};
use analyticity::radius::{analyse, RadiusParams, RadiusReport, RadiusSample, RadiusTrajectory};
use crate::output::Manifest;

/// Grid oversampling for `‖∇u‖_{L^∞}`.
pub const GRAD_OVERSAMPLE: usize = 2;

/// Constants of the radius theorem shared by the tracking subcommands.
#[derive(Clone, Copy, Debug)]
pub struct RadiusKnobs {
    pub c: f64,
    pub s: f64,
    pub r: f64,
    /// Orders kept in the seminorm table behind `‖u₀‖_X`.
    pub m_max: usize,
}

impl RadiusKnobs {
    /// Parameters measured on the initial field at radius `tau0`.
    pub fn params(&self, u0: &SpectralField, tau0: f64) -> anyhow::Result<RadiusParams> {
        let table = seminorm_table(u0, self.m_max, self.s, false)?;
        let p = RadiusParams {
            c: self.c,
            s: self.s,
            r: self.r,
            tau0,
            u0_hr: sobolev_norm(u0, self.r),
            u0_x: x_norm(&table, tau0)?.x_norm,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn sample(&self, u: &SpectralField, t: f64, measured: Option<f64>) -> RadiusSample {
        RadiusSample { t, grad_sup: grad_sup_norm(u, GRAD_OVERSAMPLE), hr_norm: sobolev_norm(u, self.r), tau_measured: measured }
    }
}

pub fn note_gradient_norm(manifest: &mut Manifest) {
    manifest.convention("grad_sup", "max over i,j of sup |∂_j u_i| on a 2x oversampled grid");
    manifest.convention("hr_norm", "(V Σ (1+|k|²)^r |û_k|²)^{1/2}, Euclidean over components");
}

/// Analyse a trajectory, write `radius.csv` and record its constants.
pub fn emit_radius(traj: &RadiusTrajectory, dir: &std::path::Path, manifest: &mut Manifest) -> anyhow::Result<RadiusReport> {
    let report = analyse(traj)?;
    crate::output::write_csv(&manifest.output(dir, "radius.csv"), &report.rows)?;
    let p = traj.params();
    manifest.constant("radius.tau0", p.tau0)?;
    manifest.constant("radius.u0_hr", p.u0_hr)?;
    manifest.constant("radius.u0_x", p.u0_x)?;
    manifest.constant("radius.c0", report.c0)?;
    if let Some(c) = &report.ode_condition {
        manifest.constant("radius.ode_condition_max_abs", c.max_abs)?;
    }
    if let Some(c) = &report.paper_condition {
        manifest.constant("radius.paper_condition_max_signed", c.max_signed)?;
    }
    let below = report.rows.iter().filter(|r| r.tau_measured.is_some_and(|m| r.tau_lower > m)).count();
    manifest.constant("radius.lower_bound_violations", below)?;
    let crossings = report.rows.iter().filter(|r| r.ln_tau_ode < r.ln_tau_lower).count();
    manifest.constant("radius.ode_below_lower_bound", crossings)?;
    Ok(report)
}
