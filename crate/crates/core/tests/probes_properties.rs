use std::f64::consts::PI;

use analyticity::gevrey::Geometry;
use analyticity::probes::{probe_family, probe_field, probe_sweep, ProbeKind};

const SLAB: Geometry = Geometry::Slab { depth: PI };

fn geometry(kind: ProbeKind) -> Geometry {
    match kind {
        ProbeKind::Commutator => Geometry::Torus3,
        ProbeKind::Pressure => SLAB,
    }
}

#[test]
fn implied_constants_are_scale_invariant() {
    for kind in [ProbeKind::Commutator, ProbeKind::Pressure] {
        let u = probe_field(geometry(kind), [32, 32, 32], 21, 6, 3.0, 0.5).unwrap();
        let base = probe_sweep(&u, kind, 0.3, 1.0, &[12]).unwrap()[0].implied_constant;
        assert!(base > 0.0 && base.is_finite());
        for c in [2.0, 10.0] {
            let scaled = probe_sweep(&u.scale(c), kind, 0.3, 1.0, &[12]).unwrap()[0].implied_constant;
            assert!((scaled / base - 1.0).abs() < 1e-10, "{kind:?} ×{c}: {base} → {scaled}");
        }
    }
}

#[test]
fn implied_constants_settle_with_truncation() {
    for kind in [ProbeKind::Commutator, ProbeKind::Pressure] {
        for u in probe_family(geometry(kind), [32, 32, 32], 100, 3).unwrap() {
            let reports = probe_sweep(&u, kind, 0.3, 1.0, &[8, 12, 16]).unwrap();
            let c: Vec<f64> = reports.iter().map(|r| r.implied_constant).collect();
            let (lo, hi) = c.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
            assert!(hi / lo - 1.0 < 0.2, "{kind:?}: {c:?}");
            assert!(reports.last().unwrap().converged);
        }
    }
}

#[test]
fn sums_grow_with_the_radius() {
    let u = probe_field(Geometry::Torus3, [32, 32, 32], 5, 6, 3.0, 0.5).unwrap();
    let small = probe_sweep(&u, ProbeKind::Commutator, 0.1, 1.0, &[12]).unwrap().remove(0);
    let large = probe_sweep(&u, ProbeKind::Commutator, 0.4, 1.0, &[12]).unwrap().remove(0);
    assert!(large.lhs > small.lhs);
    assert!(large.x_norm > small.x_norm);
    assert!(large.y_norm > small.y_norm);
}

#[test]
fn family_is_reproducible_and_divergence_free() {
    let a = probe_family(SLAB, [16, 16, 16], 7, 4).unwrap();
    let b = probe_family(SLAB, [16, 16, 16], 7, 4).unwrap();
    assert_eq!(a, b);
    for u in &a {
        assert!(u.divergence_residual().unwrap() < 1e-12);
        assert!(u.parity_residual() < 1e-14);
    }
    assert_ne!(a[0], a[1]);
}

#[test]
fn bad_arguments_are_rejected() {
    let u = probe_field(Geometry::Torus3, [16, 16, 16], 1, 3, 2.0, 0.5).unwrap();
    assert!(probe_sweep(&u, ProbeKind::Commutator, 0.0, 1.0, &[6]).is_err());
    assert!(probe_sweep(&u, ProbeKind::Commutator, 0.3, 0.5, &[6]).is_err());
    assert!(probe_sweep(&u, ProbeKind::Commutator, 0.3, 1.0, &[2]).is_err());
    assert!(probe_sweep(&u, ProbeKind::Commutator, 0.3, 1.0, &[]).is_err());
    // the pressure probe needs the slab
    assert!(probe_sweep(&u, ProbeKind::Pressure, 0.3, 1.0, &[6]).is_err());
}
