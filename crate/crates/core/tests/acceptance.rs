//! Acceptance suite. Prints one line per criterion and fails if any does.

use std::f64::consts::PI;
use std::time::Instant;

use exwkb::borel::{self, phi_topological, to_borel, TopoContext};
use exwkb::oracle::{self, EigenMethod};
use exwkb::path::{continue_branch_at, OrientedPath};
use exwkb::potential::{characteristic, Characteristic, Polynomial};
use exwkb::series::{self, chi_series, rho_plus_residue, series_mul, series_reciprocal, Anchor, AsymptoticSeries};
use exwkb::stokes::{build_graph, StokesGraph};
use exwkb::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn airy() -> StokesGraph {
    build_graph(&Characteristic::from_q(Polynomial::real(&[0.0, 1.0])), 0.0).unwrap()
}

fn harmonic() -> StokesGraph {
    build_graph(&characteristic(&Polynomial::real(&[0.0, 0.0, 0.5]), c(0.5, 0.0)).unwrap(), 0.0).unwrap()
}

fn double_well() -> StokesGraph {
    let v = Polynomial::real(&[0.0, 0.0, -0.5, 0.0, 0.25]);
    build_graph(&characteristic(&v, c(-0.1, 0.0)).unwrap(), 0.0).unwrap()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn sector_count() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..20 {
        let deg = 1 + i % 6;
        let mut coeffs: Vec<C> = (0..=deg).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        coeffs[deg] = C::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(-PI..PI));
        let q = Characteristic::from_q(Polynomial::new(coeffs));
        let g = build_graph(&q, 0.0).map_err(|e| format!("degree {deg}: {e}"))?;
        if g.sectors.len() != deg + 2 {
            return Err(format!("degree {deg}: {} sectors", g.sectors.len()));
        }
    }
    let secs = t.elapsed().as_secs_f64();
    check(secs < 10.0, format!("20 graphs, {secs:.2} s"))
}

fn airy_coefficients() -> Outcome {
    let g = airy();
    let x = 1.3;
    let s = chi_series(&g, 1, c(x, 0.0), 2).map_err(|e| e.to_string())?;
    // c_k = u_k 3^k x^{−3k/2}
    let u = [5.0 / 72.0, 385.0 / 10368.0];
    let mut worst: f64 = 0.0;
    for k in 1..=2 {
        let expect = u[k - 1] * 3f64.powi(k as i32) * x.powf(-1.5 * k as f64);
        worst = worst.max((s.coeffs[k] - expect).norm() / expect);
    }
    check(worst < 1e-10, format!("max relative error {worst:.1e}"))
}

fn radius_law() -> Outcome {
    let g = airy();
    let mut lines = vec![];
    let mut ok = true;
    for x in [0.8, 1.0, 1.5] {
        let x = c(x, 0.0);
        let b = to_borel(&chi_series(&g, 1, x, 20).map_err(|e| e.to_string())?);
        let xi = g.xi(x).map_err(|e| e.to_string())?;
        let ratio = b.radius_estimate / xi.norm();
        let p = borel::pade(&b, 10, 10).map_err(|e| e.to_string())?;
        let pole = p.nearest_pole().ok_or("no pole")?;
        let dev = (pole.arg() - xi.arg()).abs().to_degrees();
        ok &= (0.98..=1.02).contains(&ratio) && dev < 3.0;
        lines.push(format!("x={} ratio {ratio:.4} arg {dev:.2e}°", x.re));
    }
    check(ok, lines.join(", "))
}

/// Three probes per sector admitted by `summable_set`.
fn summable_probes(g: &StokesGraph) -> Vec<(usize, C)> {
    let family = g.rotation_family(12);
    let scale = g.scale();
    let mut out = vec![];
    for s in &g.sectors {
        let mid = s.bisector();
        let half = 0.5 * (s.interval.1 - s.interval.0);
        let mut found = 0;
        'cand: for r in [1.0, 1.4, 2.0] {
            for d in [0.0, 0.3, -0.3] {
                if found == 3 {
                    break 'cand;
                }
                let x = C::from_polar(r * scale, mid + d * half);
                if let Ok(set) = g.summable_set_with(x, &family) {
                    if set.iter().any(|&(k, _)| k == s.index) {
                        out.push((s.index, x));
                        found += 1;
                        continue 'cand;
                    }
                }
            }
        }
    }
    out
}

fn summation_equals_solution() -> Outcome {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (name, g) in [("airy", airy()), ("double well", double_well())] {
        let probes = summable_probes(&g);
        if probes.len() < g.sectors.len() {
            return Err(format!("{name}: only {} probes", probes.len()));
        }
        for lam in [5.0, 10.0] {
            for &(k, x) in &probes {
                let r = oracle::summation_check(&g, k, x, c(lam, 0.0), 20, (10, 10))
                    .map_err(|e| format!("{name} sector {k} x {x} λ {lam}: {e}"))?;
                worst = worst.max(r.relative_error);
                count += 1;
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    check(worst < 1e-6 && secs < 60.0, format!("{count} checks, max relative error {worst:.1e}, {secs:.1} s"))
}

fn translation_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 12;
    let mut worst: f64 = 0.0;
    for (g, lo, hi) in [(airy(), 0.8, 3.0), (harmonic(), 1.8, 3.5)] {
        let q = &g.characteristic;
        let mut pairs = 0;
        let mut tries = 0;
        while pairs < 5 {
            tries += 1;
            if tries > 200 {
                return Err("could not draw canonical pairs".into());
            }
            let x0 = c(rng.gen_range(lo..hi), rng.gen_range(-0.8..0.8));
            let x = c(rng.gen_range(lo..hi), rng.gen_range(-0.8..0.8));
            let (Some(cp0), Some(cpx)) = (g.canonical_path(1, x0), g.canonical_path(1, x)) else { continue };
            let line = OrientedPath::polyline(&[x0, x]);
            let Ok(br) = continue_branch_at(q, &line, 0.0, cp0.branched.end_sample().fourth_root) else { continue };
            if (br.end_sample().fourth_root - cpx.branched.end_sample().fourth_root).norm() > 1e-8 {
                continue;
            }
            let a = series::chi_series_on(&cp0.branched, -1.0, n, Anchor::Sector(1)).map_err(|e| e.to_string())?;
            let b = series::chi_series_on(&cpx.branched, -1.0, n, Anchor::Sector(1)).map_err(|e| e.to_string())?;
            let i = series::iterated_i(&br, n).map_err(|e| e.to_string())?;
            let r = series::translation_residuals(&a.coeffs, &i, &b.coeffs);
            worst = r.iter().fold(worst, |m, &v| m.max(v));
            pairs += 1;
        }
    }
    check(worst < 1e-8, format!("10 pairs, max residual {worst:.1e}"))
}

fn resummed_chi_solves_ode() -> Outcome {
    let g = airy();
    let q = &g.characteristic;
    let lam = c(5.0, 0.0);
    let x = c(1.5, 0.2);
    let h = 0.02;
    let mut v = [c(0.0, 0.0); 5];
    for (j, vj) in v.iter_mut().enumerate() {
        let p = x + h * (j as f64 - 2.0);
        let s = chi_series(&g, 1, p, 20).map_err(|e| e.to_string())?;
        *vj = borel::resum(&s, lam, 10, 10, None).map_err(|e| e.to_string())?.value;
    }
    let d1 = (v[0] - 8.0 * v[1] + 8.0 * v[3] - v[4]) / (12.0 * h);
    let d2 = (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h);
    let cp = g.canonical_path(1, x).ok_or("no path")?;
    let sample = oracle::ChiSample {
        x,
        chi: v[2],
        chi_prime: d1,
        sigma: -1.0,
        lambda: lam,
        s: 0.0,
        fourth_root: cp.branched.end_sample().fourth_root,
    };
    let r = sample.residual(q, d2);
    check(r < 1e-6, format!("relative residual {r:.1e}"))
}

fn connection_formula() -> Outcome {
    let g = airy();
    let probes = oracle::default_probes(&g, 1, 2);
    let mut gaps = vec![];
    let mut beta_err = 0.0;
    for lam in [5.0, 10.0, 20.0, 40.0] {
        let lam = c(lam, 0.0);
        let d = oracle::connection(&g, 3, (1, 2), lam, &probes).map_err(|e| e.to_string())?;
        let chi31 = oracle::chi_transfer(&g, 3, 1, lam).map_err(|e| e.to_string())?;
        if lam.re == 10.0 {
            beta_err = (d.beta + C::i() * chi31).norm();
        }
        gaps.push((d.beta + C::i()).norm());
    }
    let trend = gaps.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    check(
        beta_err < 1e-6 && trend,
        format!("|β + iχ₃→₁| = {beta_err:.1e} at λ=10, |C + i| = {}", gaps.iter().map(|g| format!("{g:.1e}")).collect::<Vec<_>>().join(" ")),
    )
}

fn non_summability() -> Outcome {
    let g = airy();
    let r = oracle::lemma3_experiment(&g, c(1.75, 0.0), c(2.0, 0.0), &[6.0, 9.0, 10.0, 12.0, 15.0])
        .map_err(|e| e.to_string())?;
    let three_way = r.residuals[2].three_way;
    check(
        three_way < 1e-5 && r.slope_fit.relative_error < 0.1,
        format!(
            "three-way residual {three_way:.1e}, slope {:.4} vs {:.4}",
            r.slope_fit.slope, r.slope_fit.expected
        ),
    )
}

fn residues() -> Outcome {
    let mut worst: f64 = 0.0;
    let airy = Characteristic::from_q(Polynomial::real(&[0.0, 1.0]));
    let ho = characteristic(&Polynomial::real(&[0.0, 0.0, 0.5]), c(0.5, 0.0)).unwrap();
    for (q, tp) in [(&airy, c(0.0, 0.0)), (&ho, c(1.0, 0.0))] {
        for n in 0..=3 {
            let r = rho_plus_residue(q, tp, 0.5, n, 512).map_err(|e| e.to_string())?;
            worst = worst.max(r.norm());
        }
    }
    check(worst < 1e-8, format!("max |∮ρ⁺| {worst:.1e}"))
}

fn eigenvalues() -> Outcome {
    let ho = Polynomial::real(&[0.0, 0.0, 0.5]);
    let e = oracle::eigenvalues(&ho, 1.0, (0.0, 6.0), 6).map_err(|e| e.to_string())?;
    let ho_err = e.iter().enumerate().map(|(n, r)| (r.energy.re - n as f64 - 0.5).abs()).fold(0.0, f64::max);
    let quartic = Polynomial::real(&[0.0, 0.0, 0.0, 0.0, 1.0]);
    let a = oracle::eigenvalues(&quartic, 1.0, (0.0, 1.0), 1).map_err(|e| e.to_string())?;
    let b = oracle::eigenvalues_with(&quartic, 1.0, (0.0, 1.0), 1, EigenMethod::Shooting).map_err(|e| e.to_string())?;
    let gap = (a[0].energy - b[0].energy).norm();
    check(
        e.len() == 6 && ho_err < 1e-8 && gap < 1e-8,
        format!("HO max error {ho_err:.1e}, quartic E₀ = {:.12} (methods differ by {gap:.1e})", a[0].energy.re),
    )
}

fn convolution_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 16;
    let mut worst: f64 = 0.0;
    let mut recip: f64 = 0.0;
    for _ in 0..10 {
        let mut draw = || {
            let mut v: Vec<C> = (0..=n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            v[0] = c(1.0, 0.0);
            AsymptoticSeries::new(1.0, v, c(0.0, 0.0), Anchor::Free)
        };
        let (f, g) = (draw(), draw());
        let lhs = to_borel(&series_mul(&f, &g).map_err(|e| e.to_string())?);
        let rhs = borel::convolve(&to_borel(&f), &to_borel(&g));
        for (l, r) in lhs.coeffs.iter().zip(&rhs.coeffs) {
            worst = worst.max((l - r).norm() / (f64::EPSILON * (1.0 + l.norm())));
        }
        let one = series_mul(&f, &series_reciprocal(&f).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        recip = recip.max((one.coeffs[0] - 1.0).norm());
        for z in &one.coeffs[1..] {
            recip = recip.max(z.norm());
        }
    }
    check(
        worst <= 8.0 && recip < 1e-12,
        format!("convolution mismatch {worst:.1} ulp, max |f·(1/f) − 1| {recip:.1e}"),
    )
}

fn topological_term() -> Outcome {
    let g = airy();
    let x = c(1.3, 0.4);
    let cp = g.canonical_path(1, x).ok_or("no path")?;
    let ctx = TopoContext::new(&cp.branched, g.sector(1).signature, g.xi(x).unwrap()).map_err(|e| e.to_string())?;
    let b = to_borel(&chi_series(&g, 1, x, 2).map_err(|e| e.to_string())?);
    let at0 = phi_topological(&ctx, c(0.0, 0.0), 0).map_err(|e| e.to_string())?;
    let h = 1e-4;
    let d = (phi_topological(&ctx, c(h, 0.0), 0).unwrap() - phi_topological(&ctx, c(-h, 0.0), 0).unwrap()) / (2.0 * h);
    let e1 = (d - ctx.omega_big).norm();
    let e2 = (ctx.omega_big - b.coeffs[1]).norm();
    check(
        at0 == c(1.0, 0.0) && e1 < 1e-9 && e2 < 1e-9,
        format!("Φ⁰(ξ,0) = {at0}, |∂Φ⁰ − Ω| {e1:.1e}, |Ω − b₁| {e2:.1e}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("sector count", sector_count),
        ("Airy coefficients", airy_coefficients),
        ("Borel radius law", radius_law),
        ("summation equals solution", summation_equals_solution),
        ("translation identity", translation_identity),
        ("Borel sum solves the χ-equation", resummed_chi_solves_ode),
        ("connection formula", connection_formula),
        ("non-summability", non_summability),
        ("ρ⁺ residues", residues),
        ("eigenvalues", eigenvalues),
        ("convolution algebra", convolution_algebra),
        ("topological leading term", topological_term),
    ];
    let mut failed = vec![];
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d}", i + 1),
            Err(d) => {
                println!("criterion {:>2} FAIL  {name}: {d}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
