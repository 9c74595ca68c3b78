use super::*;
use crate::potential::{turning_points, Polynomial, DEFAULT_ROOT_TOL};

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn airy() -> Characteristic {
    Characteristic::from_q(Polynomial::real(&[0.0, 1.0]))
}

fn harmonic() -> Characteristic {
    Characteristic::from_q(Polynomial::real(&[-1.0, 0.0, 1.0]))
}

#[test]
fn monodromy_one_and_two_turning_points() {
    let q = airy();
    let loop1 = OrientedPath::circle(c(0.0, 0.0), 1.0, 0.0, 1.0);
    let b = continue_branch(&q, &loop1, c(1.0, 0.0)).unwrap();
    assert!((b.end_sample().sqrt_q() + 1.0).norm() < 1e-12);
    let q2 = harmonic();
    let loop2 = OrientedPath::circle(c(0.0, 0.0), 2.0, 0.0, 1.0);
    let init = c(3.0, 0.0).sqrt();
    let b2 = continue_branch(&q2, &loop2, init).unwrap();
    assert!((b2.end_sample().sqrt_q() - init).norm() < 1e-12);
}

#[test]
fn samples_square_to_q_and_are_continuous() {
    let q = harmonic();
    let p = OrientedPath::polyline(&[c(2.0, 1.0), c(-3.0, 0.5)]);
    let b = continue_branch(&q, &p, q.eval(c(2.0, 1.0)).sqrt()).unwrap();
    for w in b.samples.windows(2) {
        let s0 = w[0].sqrt_q();
        let s1 = w[1].sqrt_q();
        assert!((s1 / s0).arg().abs() < PI / 2.0);
        assert!((s1 * s1 - w[1].q).norm() < 1e-12 * w[1].q.norm());
    }
}

#[test]
fn airy_action_closed_form() {
    let q = airy();
    let mut p = OrientedPath::polyline(&[c(0.0, 0.0), c(1.0, 0.0)]);
    p.start_at_turning_point = true;
    let b = continue_branch_at(&q, &p, 1.0, c(1.0, 0.0)).unwrap();
    let w = b.total_action().unwrap();
    assert!((w - c(2.0 / 3.0, 0.0)).norm() < 1e-12);
    let back = continue_branch_at(&q, &p.reversed(), 0.0, c(1.0, 0.0)).unwrap();
    assert_eq!(back.total_action().unwrap(), -w);
    assert!((xi_of(&b, -1.0).unwrap().norm() - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn harmonic_inner_action_is_imaginary() {
    let q = harmonic();
    let mut p = OrientedPath::polyline(&[c(-1.0, 0.0), c(1.0, 0.0)]);
    p.start_at_turning_point = true;
    p.end_at_turning_point = true;
    let b = continue_branch_at(&q, &p, 1.0, c(0.0, 1.0).sqrt()).unwrap();
    let w = b.total_action().unwrap();
    assert!(w.re.abs() < 1e-12);
    assert!((w.im.abs() - PI / 2.0).abs() < 1e-10);
}

#[test]
fn additivity_and_homotopy() {
    let q = harmonic();
    let a = c(2.0, 1.0);
    let m = c(0.5, 2.0);
    let e = c(-2.0, 1.5);
    let p = OrientedPath::polyline(&[a, m, e]);
    let b = continue_branch(&q, &p, q.eval(a).sqrt()).unwrap();
    let ab = b.action(a, m).unwrap().value;
    let be = b.action(m, e).unwrap().value;
    let ae = b.action(a, e).unwrap().value;
    assert!((ab + be - ae).norm() < 1e-11);
    let p2 = OrientedPath::polyline(&[a, c(0.0, 3.0), e]);
    let b2 = continue_branch(&q, &p2, q.eval(a).sqrt()).unwrap();
    assert!((b2.total_action().unwrap() - ae).norm() < 1e-10);
}

#[test]
fn canonical_ray_and_its_reverse() {
    let q = airy();
    let p = OrientedPath::new(vec![
        Segment::Ray { p: c(3.0, 0.0), inward: true },
        Segment::Line { a: c(3.0, 0.0), b: c(1.0, 0.0) },
    ]);
    let b = continue_branch_at(&q, &p, 1.0, c(3f64.sqrt().sqrt(), 0.0)).unwrap();
    assert!(is_canonical(&b, -1.0, 0.0).canonical);
    let r = continue_branch_at(&q, &p.reversed(), 0.0, c(1.0, 0.0)).unwrap();
    let check = is_canonical(&r, -1.0, 0.0);
    assert!(!check.canonical);
    assert!(check.violation_at.unwrap() < 1e-9);
    let single = continue_branch(&q, &OrientedPath::polyline(&[c(1.0, 0.0), c(1.0 + 1e-300, 0.0)]), c(1.0, 0.0)).unwrap();
    assert!(is_canonical(&single, 1.0, 0.0).canonical);
}

#[test]
fn exclusion_radius_and_json() {
    let q = harmonic();
    let tps = turning_points(&q, DEFAULT_ROOT_TOL).unwrap();
    let mut p = OrientedPath::polyline(&[c(-2.0, 0.0), c(2.0, 0.0)]);
    p.exclusion_radius = OrientedPath::default_exclusion(&tps);
    assert!(p.validate(&tps).is_err());
    let mut p = OrientedPath::polyline(&[c(-2.0, 1.0), c(2.0, 1.0)]);
    p.exclusion_radius = 1e-3;
    assert!(p.validate(&tps).is_ok());
    let arc = OrientedPath::new(vec![Segment::arc(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), None)]);
    let back = OrientedPath::from_json(&arc.to_json()).unwrap();
    assert!((back.point(0.5) - arc.point(0.5)).norm() < 1e-15);
}
