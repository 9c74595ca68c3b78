//! Built-in verification suites with fixed inputs and pass thresholds.

use exwkb::borel;
use exwkb::oracle::{self, ChiSample};
use exwkb::path::{continue_branch_at, OrientedPath};
use exwkb::potential::{characteristic, Characteristic, Polynomial};
use exwkb::series::{self, chi_series, Anchor};
use exwkb::stokes::{build_graph, StokesGraph};
use num_complex::Complex64 as C;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{module, CliError, Result};

pub const SUITES: &[&str] = &["eq21", "appendix2", "lemma3", "connection", "eigen-ho"];

#[derive(Serialize)]
pub struct Report {
    pub suite: String,
    pub pass: bool,
    pub threshold: f64,
    pub max_residual: f64,
    pub details: Value,
}

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn airy() -> Result<StokesGraph> {
    build_graph(&Characteristic::from_q(Polynomial::real(&[0.0, 1.0])), 0.0).map_err(module("stokes"))
}

fn harmonic() -> Result<StokesGraph> {
    let q = characteristic(&Polynomial::real(&[0.0, 0.0, 0.5]), c(0.5, 0.0)).map_err(module("potential"))?;
    build_graph(&q, 0.0).map_err(module("stokes"))
}

pub fn run(suite: &str) -> Result<Report> {
    let (threshold, max_residual, details) = match suite {
        "eq21" => translation()?,
        "appendix2" => resummed_ode()?,
        "lemma3" => non_summability()?,
        "connection" => connection()?,
        "eigen-ho" => eigen_ho()?,
        _ => return Err(CliError::Config(format!("unknown suite '{suite}' (available: {})", SUITES.join(", ")))),
    };
    Ok(Report { suite: suite.into(), pass: max_residual < threshold, threshold, max_residual, details })
}

/// Translation of the coefficients between canonical points, scaled residual.
fn translation() -> Result<(f64, f64, Value)> {
    let n = 12;
    let cases = [
        ("airy", airy()?, [(c(1.0, 0.2), c(2.0, -0.3)), (c(1.5, 0.0), c(2.5, 0.5)), (c(2.2, -0.4), c(1.2, 0.1))]),
        ("harmonic", harmonic()?, [(c(2.0, 0.3), c(3.0, -0.2)), (c(2.5, -0.5), c(1.9, 0.4)), (c(3.2, 0.0), c(2.2, 0.6))]),
    ];
    let mut rows = vec![];
    let mut worst: f64 = 0.0;
    for (name, g, pairs) in &cases {
        let q = &g.characteristic;
        for &(x0, x) in pairs {
            let no_path = |p: C| CliError::Module { module: "stokes", source: exwkb::Error::NoCanonicalPath { sector: 1, x: p } };
            let cp0 = g.canonical_path(1, x0).ok_or_else(|| no_path(x0))?;
            let cpx = g.canonical_path(1, x).ok_or_else(|| no_path(x))?;
            let line = OrientedPath::polyline(&[x0, x]);
            let br = continue_branch_at(q, &line, 0.0, cp0.branched.end_sample().fourth_root).map_err(module("path"))?;
            let a = series::chi_series_on(&cp0.branched, -1.0, n, Anchor::Sector(1)).map_err(module("series"))?;
            let b = series::chi_series_on(&cpx.branched, -1.0, n, Anchor::Sector(1)).map_err(module("series"))?;
            let i = series::iterated_i(&br, n).map_err(module("series"))?;
            let r = series::translation_residuals(&a.coeffs, &i, &b.coeffs);
            let m = r.iter().cloned().fold(0.0, f64::max);
            worst = worst.max(m);
            rows.push(json!({ "graph": name, "x0": [x0.re, x0.im], "x": [x.re, x.im], "residuals": r }));
        }
    }
    Ok((1e-8, worst, json!({ "order": n, "pairs": rows })))
}

/// Five-point stencil residual of the χ-equation for the Borel sum.
fn resummed_ode() -> Result<(f64, f64, Value)> {
    let g = airy()?;
    let lam = c(5.0, 0.0);
    let x = c(1.5, 0.2);
    let h = 0.02;
    let mut v = [c(0.0, 0.0); 5];
    for (j, vj) in v.iter_mut().enumerate() {
        let s = chi_series(&g, 1, x + h * (j as f64 - 2.0), 20).map_err(module("series"))?;
        *vj = borel::resum(&s, lam, 10, 10, None).map_err(module("borel"))?.value;
    }
    let d1 = (v[0] - 8.0 * v[1] + 8.0 * v[3] - v[4]) / (12.0 * h);
    let d2 = (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h);
    let cp = g.canonical_path(1, x).ok_or(CliError::Module {
        module: "stokes",
        source: exwkb::Error::NoCanonicalPath { sector: 1, x },
    })?;
    let sample = ChiSample {
        x,
        chi: v[2],
        chi_prime: d1,
        sigma: -1.0,
        lambda: lam,
        s: 0.0,
        fourth_root: cp.branched.end_sample().fourth_root,
    };
    let r = sample.residual(&g.characteristic, d2);
    Ok((1e-6, r, json!({ "x": [x.re, x.im], "lambda": 5.0, "step": h, "chi": [v[2].re, v[2].im] })))
}

/// Slope of the exponentially small discrepancy; the residual is the relative
/// slope error.
fn non_summability() -> Result<(f64, f64, Value)> {
    let g = airy()?;
    let r = oracle::lemma3_experiment(&g, c(1.75, 0.0), c(2.0, 0.0), &[6.0, 9.0, 10.0, 12.0, 15.0])
        .map_err(module("oracle"))?;
    let three_way = r.residuals[2].three_way;
    let worst = if three_way < 1e-5 { r.slope_fit.relative_error } else { f64::INFINITY };
    Ok((0.1, worst, serde_json::to_value(&r).map_err(|e| CliError::Config(e.to_string()))?))
}

/// Airy connection coefficient against the transfer oracle.
fn connection() -> Result<(f64, f64, Value)> {
    let g = airy()?;
    let probes = oracle::default_probes(&g, 1, 2);
    let mut rows = vec![];
    let mut worst: f64 = 0.0;
    for lam in [5.0, 10.0, 20.0] {
        let lam = c(lam, 0.0);
        let d = oracle::connection(&g, 3, (1, 2), lam, &probes).map_err(module("oracle"))?;
        let chi31 = oracle::chi_transfer(&g, 3, 1, lam).map_err(module("oracle"))?;
        let err = (d.beta + C::i() * chi31).norm();
        worst = worst.max(err);
        rows.push(json!({ "lambda": lam.re, "beta": [d.beta.re, d.beta.im], "chi31": [chi31.re, chi31.im], "error": err }));
    }
    Ok((1e-6, worst, json!(rows)))
}

fn eigen_ho() -> Result<(f64, f64, Value)> {
    let ho = Polynomial::real(&[0.0, 0.0, 0.5]);
    let levels = oracle::eigenvalues(&ho, 1.0, (0.0, 6.0), 6).map_err(module("oracle"))?;
    let residuals: Vec<f64> = levels.iter().enumerate().map(|(n, e)| e.energy.re - n as f64 - 0.5).collect();
    let worst = residuals.iter().map(|r| r.abs()).fold(0.0, f64::max);
    Ok((1e-8, worst, json!({ "levels": levels, "residuals": residuals })))
}
