//! Structural checks on period computations: symmetry, path independence,
//! precision stability, rank and gauge behavior.

use attractor_lab::curve::{eigenform_basis, normalize, Eigenform, PointConfiguration, ProjectivePoint};
use attractor_lab::mp::{Complex, Precision};
use attractor_lab::periods::{
    default_start_args, integrate_eigenform, integrate_forms, period_matrix, schwarz_jacobian, schwarz_map, BranchPath,
};

fn prec(d: u32) -> Precision {
    Precision::digits(d).unwrap()
}

fn generic_cubic(bits: u32) -> PointConfiguration {
    PointConfiguration::from_f64(3, bits, &[(0.3, 0.2), (0.5, -0.1), (0.8, 0.15)]).unwrap()
}

/// `|z^order - 1|`, zero exactly for roots of unity of that order.
fn root_of_unity_defect(z: &Complex, order: u32) -> f64 {
    (&z.powi(order) - &Complex::one(z.prec())).abs_f64()
}

#[test]
fn conjugate_configuration_has_conjugate_periods() {
    let p = prec(40);
    let cfg = generic_cubic(p.bits());
    let a = schwarz_map(&cfg, p).unwrap();
    let b = schwarz_map(&cfg.conj(), p).unwrap();
    for (x, y) in a.values.iter().zip(&b.values) {
        let unit = y.div(&x.conj());
        // Only the branch bookkeeping differs, by a root of unity of order 2n.
        assert!(root_of_unity_defect(&unit, 6) < 1e-35, "factor {unit}");
    }
}

#[test]
fn detour_around_no_branch_point_leaves_integral_unchanged() {
    let p = prec(40);
    let bits = p.bits();
    let cfg = generic_cubic(bits);
    let chain = cfg.chain(bits);
    for k in 1..=4 {
        let straight = BranchPath::delta(3, k);
        let direct = integrate_eigenform(&cfg, Eigenform::OMEGA, &straight, p).unwrap();
        // Bend the path sideways by a fraction of its length.
        let (a, b) = (&chain[k - 1], &chain[k]);
        let mid = (a + b).scale_f64(0.5);
        let bump = (b - a).mul_i().scale_f64(0.12);
        let mut bent = straight.clone();
        bent.detour = vec![&mid + &bump];
        let reference = default_start_args(&chain, k - 1, b);
        let (vals, _) = integrate_forms(&cfg, &[Eigenform::OMEGA], &bent, Some(&reference), p).unwrap();
        let diff = (&vals[0].value - &direct.value).abs_f64();
        assert!(diff < 1e-35, "delta_{k}: {diff:e}");
    }
}

#[test]
fn doubling_precision_agrees_with_the_lower_value() {
    let low = prec(30);
    let high = prec(60);
    let cfg = generic_cubic(high.bits());
    let a = schwarz_map(&cfg, low).unwrap();
    let b = schwarz_map(&cfg, high).unwrap();
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!((x - y).abs_f64() < 1e-28);
    }
    assert!(b.max_error() < 1e-55);
}

#[test]
fn jacobian_has_full_rank_at_equally_spaced_points() {
    let p = prec(30);
    for n in [2, 3, 5] {
        let cfg = PointConfiguration::equally_spaced(n, p.bits()).unwrap();
        let j = schwarz_jacobian(&cfg, p).unwrap();
        assert_eq!(j.rank, 2 * n as usize - 2, "n = {n}: {:?}", j.singular_values);
    }
}

#[test]
fn period_matrix_shapes_follow_the_hodge_table() {
    let p = prec(30);
    let cfg = PointConfiguration::equally_spaced(5, p.bits()).unwrap();
    let pm = period_matrix(&cfg, 4, false, p).unwrap();
    assert_eq!(pm.entries.rows(), 7);
    assert_eq!(pm.entries.cols(), 8);
    assert_eq!(eigenform_basis(5, 4).unwrap().len(), 7);
    let full = period_matrix(&cfg, 1, true, p).unwrap();
    assert_eq!(full.entries.rows(), 8);
}

#[test]
fn mobius_equivalent_point_sets_give_the_same_periods() {
    let p = prec(40);
    let bits = p.bits();
    let cfg = generic_cubic(bits);
    // Move the normalized points by z -> (2z + 1) / (z + 3) and normalize back.
    let moved: Vec<ProjectivePoint> = cfg
        .points()
        .into_iter()
        .map(|pt| match pt {
            ProjectivePoint::Finite(z) => {
                let num = &z.scale_f64(2.0) + &Complex::one(bits);
                let den = &z + &Complex::from_f64(bits, 3.0, 0.0);
                ProjectivePoint::Finite(num.div(&den))
            }
            ProjectivePoint::Infinity => ProjectivePoint::Finite(Complex::from_f64(bits, 2.0, 0.0)),
        })
        .collect();
    let (back, _) = normalize(&moved, bits).unwrap();
    assert!(back.distance(&cfg) < 1e-35);
    let a = schwarz_map(&cfg, p).unwrap();
    let b = schwarz_map(&back, p).unwrap();
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!((x - y).abs_f64() < 1e-33);
    }
}
