use super::*;
use crate::potential::{characteristic, Polynomial};
use crate::stokes::build_graph;

fn airy() -> StokesGraph {
    build_graph(&Characteristic::from_q(Polynomial::real(&[0.0, 1.0])), 0.0).unwrap()
}

/// u_k of the Airy asymptotic expansion.
fn airy_u(k: usize) -> f64 {
    let mut u = 1.0;
    for j in 1..=k {
        let jf = j as f64;
        u *= (6.0 * jf - 5.0) * (6.0 * jf - 3.0) * (6.0 * jf - 1.0) / ((2.0 * jf - 1.0) * 216.0 * jf);
    }
    u
}

#[test]
fn airy_coefficients() {
    let g = airy();
    let x = C::new(1.7, 0.0);
    let s = chi_series(&g, 1, x, 8).unwrap();
    assert_eq!(s.coeffs[0], C::new(1.0, 0.0));
    assert_eq!(s.sigma, -1.0);
    for k in 1..=8 {
        let expect = airy_u(k) * 3f64.powi(k as i32) * x.re.powf(-1.5 * k as f64);
        let rel = (s.coeffs[k] - expect).norm() / expect;
        assert!(rel < 1e-10, "k={k} {} vs {expect} rel {rel}", s.coeffs[k]);
    }
}

#[test]
fn kernel_first_term_is_omega() {
    let q = characteristic(&Polynomial::real(&[0.3, -1.0, 0.0, 0.5]), C::new(0.2, 0.1)).unwrap();
    let y = C::new(1.3, 0.7);
    let sq = q.eval(y).sqrt();
    let a = transport_kernel(&q, y, sq, 3).unwrap();
    let w = crate::potential::omega(&q, y, sq).unwrap();
    assert!((a[1] - w).norm() < 1e-13 * (1.0 + w.norm()));
}

#[test]
fn translation_identity_airy() {
    let g = airy();
    let x0 = C::new(1.2, 0.3);
    let x = C::new(2.0, -0.4);
    let n = 10;
    let a = chi_series(&g, 1, x0, n).unwrap();
    let b = chi_series(&g, 1, x, n).unwrap();
    let cp = g.canonical_path(1, x0).unwrap();
    let seg = crate::path::OrientedPath::polyline(&[x0, x]);
    let br = crate::path::continue_branch_at(&g.characteristic, &seg, 0.0, cp.branched.end_sample().fourth_root).unwrap();
    let i = iterated_i(&br, n).unwrap();
    assert_eq!(i[0], C::new(1.0, 0.0));
    let t = translate(&a.coeffs, &i);
    for k in 0..=n {
        assert!((t[k] - b.coeffs[k]).norm() < 1e-8 * (1.0 + b.coeffs[k].norm()), "k={k}");
    }
}

#[test]
fn rho_reproduces_series() {
    let g = airy();
    let x = C::new(1.4, 0.2);
    let cp = g.canonical_path(1, x).unwrap();
    let s = chi_series_on(&cp.branched, -1.0, 8, Anchor::Sector(1)).unwrap();
    let rep = rho_pm(&cp.branched, -1.0, 8).unwrap();
    let r = rep.chi_series(8);
    for k in 0..=8 {
        assert!((r.coeffs[k] - s.coeffs[k]).norm() < 1e-9 * (1.0 + s.coeffs[k].norm()), "k={k}");
    }
    // S_2 = ω/2 and S_3 = −ω̃′/4
    let sq = cp.branched.end_sample().sqrt_q();
    let w = crate::potential::omega(&g.characteristic, x, sq).unwrap();
    assert!((rep.rho_minus[0] - w / 2.0).norm() < 1e-13);
}

#[test]
fn rho_plus_has_no_residue() {
    let q = characteristic(&Polynomial::real(&[0.0, 0.0, 0.5]), C::new(0.5, 0.0)).unwrap();
    for n in 0..=3 {
        let r = rho_plus_residue(&q, C::new(1.0, 0.0), 1.0, n, 512).unwrap();
        assert!(r.norm() < 1e-8, "n={n} {r}");
    }
}

#[test]
fn algebra() {
    let a = AsymptoticSeries::new(1.0, vec![C::new(1.0, 0.0), C::new(0.5, -0.2), C::new(0.0, 0.0), C::new(0.0, 0.0)], C::new(0.0, 0.0), Anchor::Free);
    let r = series_reciprocal(&a).unwrap();
    let p = series_mul(&a, &r).unwrap();
    assert_eq!(p.coeffs[0], C::new(1.0, 0.0));
    for c in &p.coeffs[1..] {
        assert!(c.norm() < 1e-16);
    }
    let z = AsymptoticSeries::new(1.0, vec![C::new(0.0, 0.0), C::new(1.0, 0.0)], C::new(0.0, 0.0), Anchor::Free);
    assert!(series_reciprocal(&z).is_err());
}
