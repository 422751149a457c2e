use flexbie::checks::*;
use flexbie::geometry::{Panelization, ParametricCurve};
use flexbie::kernels::Side;

#[test]
fn check_constructors() {
    assert!(Check::at_most("a", 1.0, 1.0).passed);
    assert!(!Check::at_most("a", 1.5, 1.0).passed);
    assert!(Check::at_least("b", 2.0, 1.0).passed);
    assert!(!Check::at_least("b", 0.5, 1.0).passed);
    assert!(!Check::at_most("nan", f64::NAN, 1.0).passed);
}

#[test]
fn kernel_limits_on_circles() {
    for radius in [1.0, 2.0] {
        for nu in [1.0 / 3.0, 0.0] {
            let checks = kernel_limits(radius, nu, 1e-6).unwrap();
            assert_eq!(checks.len(), 3 * ENTRY_NAMES.len());
            for c in &checks {
                assert!(c.passed, "{}: {:e}", c.name, c.measured);
            }
        }
    }
}

#[test]
fn cancelled_forms_beat_naive_sums() {
    for c in cancellation_control(1.0, 1.0 / 3.0).unwrap() {
        assert!(c.passed, "{}: {:e}", c.name, c.measured);
    }
}

#[test]
fn hilbert_identity_on_the_droplet() {
    let p = Panelization::new(&[ParametricCurve::droplet()], 16, 16).unwrap();
    let c = hilbert_identity(&p, 5, 7, 1e-8).unwrap();
    assert!(c.passed, "{:e}", c.measured);
}

#[test]
fn jump_relations_both_sides() {
    for side in [Side::Exterior, Side::Interior] {
        let p = Panelization::new(&[ParametricCurve::droplet()], 8, 16).unwrap();
        let prob = single_problem(p, "free", 3.0, 1.0 / 3.0, side).unwrap();
        for c in jump_relations(&prob, &[5, 40, 100], 1e-4).unwrap() {
            assert!(c.passed, "{}: {:e}", c.name, c.measured);
        }
    }
}

#[test]
fn jump_relations_reject_bad_node() {
    let p = Panelization::new(&[ParametricCurve::droplet()], 4, 16).unwrap();
    let prob = single_problem(p, "clamped", 3.0, 1.0 / 3.0, Side::Exterior).unwrap();
    assert!(jump_relations(&prob, &[10_000], 1e-4).is_err());
}
