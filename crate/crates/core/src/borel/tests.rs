use super::*;
use crate::potential::{characteristic, Characteristic, Polynomial};
use crate::series::{chi_series, series_mul};
use crate::stokes::build_graph;

fn airy() -> StokesGraph {
    build_graph(&Characteristic::from_q(Polynomial::real(&[0.0, 1.0])), 0.0).unwrap()
}

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

#[test]
fn unit_series() {
    let b = to_borel(&AsymptoticSeries::unit(1.0, 5));
    assert_eq!(b.coeffs[0], c(1.0, 0.0));
    assert!(b.coeffs[1..].iter().all(|z| z.norm() == 0.0));
}

#[test]
fn airy_radius_and_poles() {
    let g = airy();
    for &x in &[0.8, 1.0, 1.5] {
        let x = c(x, 0.0);
        let s = chi_series(&g, 1, x, 20).unwrap();
        let b = to_borel(&s);
        let xi = g.xi(x).unwrap();
        let ratio = b.radius_estimate / xi.norm();
        assert!((0.98..=1.02).contains(&ratio), "x={x} ratio {ratio}");
        let p = pade(&b, 10, 10).unwrap();
        assert!(p.taylor_residual(&b.coeffs) < 1e-10);
        let near = p.nearest_pole().unwrap();
        assert!((near.arg() - xi.arg()).abs() < 3f64.to_radians(), "{near} vs {xi}");
        assert!((near.norm() / xi.norm() - 1.0).abs() < 0.05, "{near} vs {xi}");
    }
}

#[test]
fn pade_exact_rational() {
    let r = c(0.7, 0.2);
    let coeffs: Vec<C> = (0..8).map(|n| c(2.0, 0.0) * r.powi(n)).collect();
    let b = BorelSeries { sigma: 1.0, radius_estimate: radius_estimate(&coeffs), coeffs, at: c(0.0, 0.0) };
    let p = pade(&b, 1, 1).unwrap();
    assert_eq!(p.m, 1);
    assert!((p.poles[0] - 1.0 / r).norm() < 1e-12);
    assert!(p.taylor_residual(&b.coeffs) < 1e-12);
    // Over-specified request reduces to the true type.
    let p = pade(&b, 3, 3).unwrap();
    assert!(p.genuine_poles().iter().any(|z| (z - 1.0 / r).norm() < 1e-8));
}

#[test]
fn pade_polynomial_input() {
    let coeffs = vec![c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
    let b = BorelSeries { sigma: 1.0, radius_estimate: f64::INFINITY, coeffs, at: c(0.0, 0.0) };
    let p = pade(&b, 2, 3).unwrap();
    assert_eq!(p.m, 0);
    assert!((p.eval(c(0.3, 0.0)) - c(1.15, 0.0)).norm() < 1e-14);
}

#[test]
fn laplace_normalization() {
    let lam = c(3.0, 0.0);
    let one = laplace_sum(|_| c(1.0, 0.0), lam, std::f64::consts::PI).unwrap();
    assert!((one.value - 1.0).norm() < 1e-13);
    let lin = laplace_sum(|s| -s, lam, std::f64::consts::PI).unwrap();
    assert!((lin.value - 1.0 / 6.0).norm() < 1e-13);
    assert!(matches!(laplace_sum(|_| c(1.0, 0.0), lam, 0.0), Err(Error::Divergent { .. })));
    // Complex λ with a rotated ray.
    let lam = c(2.0, 1.0);
    let th = std::f64::consts::PI - lam.arg();
    let v = laplace_sum(|s| -s, lam, th).unwrap();
    assert!((v.value - 1.0 / (2.0 * lam)).norm() < 1e-13);
}

#[test]
fn pole_on_ray_is_refused() {
    let coeffs: Vec<C> = (0..8).map(|n| c(-1.0, 0.0).powi(n)).collect();
    let b = BorelSeries { sigma: 1.0, radius_estimate: 1.0, coeffs, at: c(0.0, 0.0) };
    let p = pade(&b, 1, 1).unwrap();
    let e = laplace_pade(&p, c(2.0, 0.0), std::f64::consts::PI, 1e-3).unwrap_err();
    assert!(matches!(e, Error::PoleOnRay { .. }));
}

#[test]
fn convolution_algebra() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut rs = |n: usize| {
        let mut v: Vec<C> = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        v[0] = c(1.0, 0.0);
        AsymptoticSeries::new(1.0, v, c(0.0, 0.0), Anchor::Free)
    };
    let (a, b, d) = (rs(12), rs(12), rs(12));
    let lhs = to_borel(&series_mul(&a, &b).unwrap());
    let rhs = convolve(&to_borel(&a), &to_borel(&b));
    for (l, r) in lhs.coeffs.iter().zip(&rhs.coeffs) {
        assert!((l - r).norm() <= 4.0 * f64::EPSILON * (1.0 + l.norm()));
    }
    let unit = to_borel(&AsymptoticSeries::unit(1.0, 11));
    assert_eq!(convolve(&to_borel(&a), &unit).coeffs, to_borel(&a).coeffs);
    let l = convolve(&convolve(&to_borel(&a), &to_borel(&b)), &to_borel(&d));
    let r = convolve(&to_borel(&a), &convolve(&to_borel(&b), &to_borel(&d)));
    for (x, y) in l.coeffs.iter().zip(&r.coeffs) {
        assert!((x - y).norm() < 1e-13 * (1.0 + x.norm()));
    }
}

#[test]
fn forecasts() {
    let g = airy();
    let f = predicted_singularities(&g, c(1.0, 0.0)).unwrap();
    assert!(f.fixed.is_empty());
    assert!((f.moving - 2.0 / 3.0).norm() < 1e-10);
    let near = predicted_singularities(&g, c(1e-3, 0.0)).unwrap();
    assert!(near.moving.norm() < 1e-4);
    let q = characteristic(&Polynomial::real(&[0.0, 0.0, 0.5]), c(0.5, 0.0)).unwrap();
    let g = build_graph(&q, 0.0).unwrap();
    let f = predicted_singularities(&g, c(0.0, 2.0)).unwrap();
    assert_eq!(f.fixed.len(), 2);
    for z in &f.fixed {
        assert!(z.re.abs() < 1e-8 && (z.im.abs() - std::f64::consts::FRAC_PI_2).abs() < 1e-8, "{z}");
    }
}

#[test]
fn topological_terms() {
    let g = airy();
    let x = c(1.3, 0.4);
    let cp = g.canonical_path(1, x).unwrap();
    let sigma = g.sector(1).signature;
    let ctx = TopoContext::new(&cp.branched, sigma, g.xi(x).unwrap()).unwrap();
    let b = to_borel(&chi_series(&g, 1, x, 4).unwrap());
    assert_eq!(phi_topological(&ctx, c(0.0, 0.0), 0).unwrap(), c(1.0, 0.0));
    let h = 1e-4;
    let d = (phi_topological(&ctx, c(h, 0.0), 0).unwrap() - phi_topological(&ctx, c(-h, 0.0), 0).unwrap()) / (2.0 * h);
    assert!((d - b.coeffs[1]).norm() < 1e-9, "{d} {}", b.coeffs[1]);
    assert!((ctx.omega_big - b.coeffs[1]).norm() < 1e-12);
    // s² coefficient of Φ⁰ + Φ¹ from a Cauchy integral.
    let r = 0.05 * ctx.xi.norm();
    let m = 32;
    let mut acc = c(0.0, 0.0);
    for j in 0..m {
        let e = C::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / m as f64);
        let s = e * r;
        let v = phi_topological(&ctx, s, 0).unwrap() + phi_topological(&ctx, s, 1).unwrap();
        acc += v / (s * s);
    }
    let b2 = acc / m as f64;
    assert!((b2 - b.coeffs[2]).norm() < 1e-8 * (1.0 + b.coeffs[2].norm()), "{b2} vs {}", b.coeffs[2]);
}
