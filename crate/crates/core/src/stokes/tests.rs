use super::*;
use crate::potential::{characteristic, Polynomial};

fn q(coeffs: &[f64], e: f64) -> Characteristic {
    characteristic(&Polynomial::real(coeffs), C::new(e, 0.0)).unwrap()
}

#[test]
fn airy_graph() {
    let g = build_graph(&Characteristic::from_q(Polynomial::real(&[0.0, 1.0])), 0.0).unwrap();
    assert_eq!(g.lines.len(), 3);
    assert_eq!(g.sectors.len(), 3);
    let mut angles: Vec<f64> = g
        .lines
        .iter()
        .map(|l| match l.terminus {
            Terminus::Infinity { angle } => angle,
            _ => panic!(),
        })
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (a, e) in angles.iter().zip([PI / 3.0, PI, 5.0 * PI / 3.0]) {
        assert!((a - e).abs() < 1e-8, "{a} vs {e}");
    }
    for l in &g.lines {
        assert!(l.residual < 1e-9);
    }
    let s1 = g.sector(1);
    assert!(s1.contains_direction(0.0));
    assert_eq!(s1.signature, -1.0);
    assert_eq!(g.sector(2).signature, 1.0);
    assert_eq!(g.sector(3).signature, -1.0);
    // W_1(R) = (2/3) R^{3/2}
    let r = g.r_infinity;
    assert!((s1.anchor_action - C::new(2.0 / 3.0 * r.powf(1.5), 0.0)).norm() < 1e-9 * r.powf(1.5));
}

#[test]
fn harmonic_graph_has_finite_line() {
    let g = build_graph(&q(&[0.0, 0.0, 0.5], 0.5), 0.0).unwrap();
    assert_eq!(g.sectors.len(), 4);
    assert_eq!(g.finite_pairs(), vec![(0, 1)]);
    assert_eq!(g.lines.iter().filter(|l| l.is_finite()).count(), 2);
    let c = g.classify_point(C::new(0.0, 0.0)).unwrap();
    assert!(matches!(c.class, PointClass::OnFiniteLine { .. }), "{c:?}");
    let c = g.classify_point(C::new(0.3, 0.4)).unwrap();
    assert!(matches!(c.class, PointClass::Interior { .. }), "{c:?}");
}

#[test]
fn rotated_harmonic_has_strip() {
    let g = build_graph(&q(&[0.0, 0.0, 0.5], 0.5), 0.15).unwrap();
    assert!(g.finite_pairs().is_empty());
    let c = g.classify_point(C::new(0.0, 0.0)).unwrap();
    assert_eq!(c.class, PointClass::Strip);
}

#[test]
fn canonical_paths_in_airy_sectors() {
    let g = build_graph(&Characteristic::from_q(Polynomial::real(&[0.0, 1.0])), 0.0).unwrap();
    let x = C::new(2.0, 0.5);
    let cp = g.canonical_path(1, x).expect("S1");
    let w = g.sector_action(&cp).unwrap();
    let exact = x.powf(1.5) * (2.0 / 3.0);
    assert!((w - exact).norm() < 1e-9, "{w} {exact}");
    assert!((g.xi(x).unwrap() - exact).norm() < 1e-9);
    // x in S1 is reachable from the neighbouring sectors as well.
    assert!(g.canonical_path(2, x).is_some());
    assert!(g.canonical_path(3, x).is_some());
    let y = C::from_polar(3.0, 2.0 * PI / 3.0);
    let cp = g.canonical_path(1, y).expect("growth into S2");
    assert!(is_canonical_with(&cp.branched, g.sector(1).signature, 0.0, 1e-7).canonical);
    assert!((cp.path.end() - y).norm() < 1e-14);
}

#[test]
fn summable_sets() {
    let g = build_graph(&Characteristic::from_q(Polynomial::real(&[0.0, 1.0])), 0.0).unwrap();
    let set = g.summable_set(C::new(2.0, 0.3)).unwrap();
    let ks: Vec<usize> = set.iter().map(|s| s.0).collect();
    assert!(ks.contains(&1));
    assert!(set.iter().any(|&(k, s)| k != 1 && s == -g.sector(1).signature), "{set:?}");
}

#[test]
fn double_well_sectors() {
    let g = build_graph(&q(&[0.0, 0.0, -1.0, 0.0, 1.0], -0.1), 0.0).unwrap();
    assert_eq!(g.sectors.len(), 6);
    assert_eq!(g.lines.len(), 12);
    for w in g.sectors.windows(2) {
        assert_eq!(w[0].signature, -w[1].signature);
    }
}

