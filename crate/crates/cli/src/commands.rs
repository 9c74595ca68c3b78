use exwkb::borel::{self, laplace_pade, pade, predicted_singularities, to_borel, RaySum};
use exwkb::oracle::{self, EigenMethod};
use exwkb::par::{self, Exec};
use exwkb::potential::characteristic;
use exwkb::series::chi_series;
use exwkb::stokes::{build_graph_with, StokesGraph};
use num_complex::Complex64 as C;
use serde_json::{json, Value};

use crate::config::{parse_complex, Format, RunConfig};
use crate::error::{module, CliError, Result};
use crate::output::{num, Output};
use crate::svg;

fn pair(z: C) -> [f64; 2] {
    [z.re, z.im]
}

fn graph(cfg: &RunConfig, phase: f64) -> Result<StokesGraph> {
    let q = characteristic(cfg.potential()?, cfg.energy).map_err(module("potential"))?;
    build_graph_with(&q, phase, cfg.tolerances.graph_options()).map_err(module("stokes"))
}

fn check_sector(g: &StokesGraph, k: usize) -> Result<()> {
    if k == 0 || k > g.sectors.len() {
        return Err(CliError::Config(format!("sector {k} out of range 1..={}", g.sectors.len())));
    }
    Ok(())
}

pub fn stokes(cfg: &RunConfig, out: &mut Output) -> Result<Value> {
    let phase = cfg.lambda[0].arg();
    let g = graph(cfg, phase)?;
    let sectors: Vec<Value> = g
        .sectors
        .iter()
        .map(|s| {
            json!({
                "index": s.index,
                "interval": [s.interval.0, s.interval.1],
                "signature": s.signature,
                "attached_turning_point": s.attached_turning_point,
                "bounding_lines": [s.bounding_lines.0, s.bounding_lines.1],
                "anchor": pair(s.anchor),
            })
        })
        .collect();
    let report = json!({
        "phase": phase,
        "turning_points": g.turning_points.points,
        "lines": g.lines,
        "finite_pairs": g.finite_pairs(),
        "sectors": sectors,
    });
    if cfg.wants(Format::Json) {
        out.json("stokes.json", &report)?;
    }
    if cfg.wants(Format::Csv) {
        let rows: Vec<Vec<String>> = g
            .sectors
            .iter()
            .map(|s| {
                vec![
                    s.index.to_string(),
                    num(s.interval.0),
                    num(s.interval.1),
                    num(s.signature),
                    s.attached_turning_point.to_string(),
                ]
            })
            .collect();
        out.csv("sectors.csv", &["index", "theta_from", "theta_to", "signature", "turning_point"], &rows)?;
        let rows: Vec<Vec<String>> = g
            .turning_points
            .points
            .iter()
            .map(|t| vec![num(t.location.re), num(t.location.im), t.multiplicity.to_string()])
            .collect();
        out.csv("turning_points.csv", &["re", "im", "multiplicity"], &rows)?;
    }
    if cfg.wants(Format::Svg) {
        out.write("stokes.svg", svg::stokes(&g).as_bytes())?;
    }
    Ok(json!({ "phase": phase }))
}

pub struct SeriesArgs {
    pub sector: usize,
    pub x: String,
    pub order: usize,
}

pub fn coeffs(cfg: &RunConfig, a: &SeriesArgs, out: &mut Output) -> Result<Value> {
    let x = parse_complex(&a.x)?;
    let g = graph(cfg, cfg.lambda[0].arg())?;
    check_sector(&g, a.sector)?;
    let s = chi_series(&g, a.sector, x, a.order).map_err(module("series"))?;
    let b = to_borel(&s);
    let xi = g.xi(x).map_err(module("stokes"))?;
    let report = json!({
        "sector": a.sector,
        "x": pair(x),
        "sigma": s.sigma,
        "xi": pair(xi),
        "radius_estimate": b.radius_estimate,
        "coefficients": s.coeffs.iter().map(|z| pair(*z)).collect::<Vec<_>>(),
        "borel": b.coeffs.iter().map(|z| pair(*z)).collect::<Vec<_>>(),
    });
    if cfg.wants(Format::Json) {
        out.json("coeffs.json", &report)?;
    }
    if cfg.wants(Format::Csv) {
        out.csv("coeffs.csv", &["n", "c_re", "c_im", "b_re", "b_im"], &coefficient_rows(&s.coeffs, &b.coeffs))?;
    }
    Ok(json!({ "sector": a.sector, "x": pair(x), "order": a.order }))
}

fn coefficient_rows(c: &[C], b: &[C]) -> Vec<Vec<String>> {
    c.iter()
        .zip(b)
        .enumerate()
        .map(|(n, (c, b))| vec![n.to_string(), num(c.re), num(c.im), num(b.re), num(b.im)])
        .collect()
}

pub struct BorelArgs {
    pub series: SeriesArgs,
    pub pade: String,
    pub rays: Vec<f64>,
}

fn parse_lm(s: &str) -> Result<(usize, usize)> {
    let bad = || CliError::Config(format!("Padé order '{s}' is not L/M"));
    let (l, m) = s.split_once('/').ok_or_else(bad)?;
    Ok((l.trim().parse().map_err(|_| bad())?, m.trim().parse().map_err(|_| bad())?))
}

pub fn borel_cmd(cfg: &RunConfig, a: &BorelArgs, out: &mut Output) -> Result<Value> {
    let x = parse_complex(&a.series.x)?;
    let (l, m) = parse_lm(&a.pade)?;
    if l + m + 1 > a.series.order + 1 {
        return Err(CliError::Config(format!("[{l}/{m}] needs order ≥ {}", l + m)));
    }
    let g = graph(cfg, cfg.lambda[0].arg())?;
    check_sector(&g, a.series.sector)?;
    let s = chi_series(&g, a.series.sector, x, a.series.order).map_err(module("series"))?;
    let b = to_borel(&s);
    let p = pade(&b, l, m).map_err(module("borel"))?;
    let forecast = predicted_singularities(&g, x).map_err(module("borel"))?;
    let nearest = p.nearest_pole();

    // ray sums in parallel over (λ, ray); the writes below stay sequential
    let jobs: Vec<(C, Option<f64>)> = cfg
        .lambda
        .iter()
        .flat_map(|&lam| {
            if a.rays.is_empty() {
                vec![(lam, None)]
            } else {
                a.rays.iter().map(|&r| (lam, Some(r))).collect()
            }
        })
        .collect();
    let sums: Vec<exwkb::Result<RaySum>> = par::map(&jobs, Exec::default(), |&(lam, ray)| match ray {
        Some(th) => laplace_pade(&p, lam, th, 1e-3),
        None => borel::resum(&s, lam, l, m, None),
    });
    let sums = sums.into_iter().collect::<exwkb::Result<Vec<_>>>().map_err(module("borel"))?;

    let mut agreement = vec![];
    for &lam in &cfg.lambda {
        let group: Vec<&RaySum> = sums.iter().filter(|r| r.lambda == lam).collect();
        let mut spread: f64 = 0.0;
        let mut ok = true;
        for i in 0..group.len() {
            for j in i + 1..group.len() {
                let d = (group[i].value - group[j].value).norm();
                spread = spread.max(d);
                ok &= d <= group[i].err + group[j].err + 1e-10 * group[i].value.norm();
            }
        }
        agreement.push(json!({ "lambda": pair(lam), "spread": spread, "within_error_bars": ok }));
    }

    let comparison = json!({
        "forecast": forecast,
        "nearest_pole": nearest.map(pair),
        "modulus_ratio": nearest.map(|z| z.norm() / forecast.moving.norm()),
        "arg_difference": nearest.map(|z| (z / forecast.moving).arg()),
        "radius_estimate": b.radius_estimate,
        "radius_ratio": b.radius_estimate / forecast.moving.norm(),
    });
    let report = json!({
        "sector": a.series.sector,
        "x": pair(x),
        "order": a.series.order,
        "pade": { "l": l, "m": m, "poles": p.poles.iter().map(|z| pair(*z)).collect::<Vec<_>>(),
                  "residues": p.residues.iter().map(|z| pair(*z)).collect::<Vec<_>>(), "froissart": p.froissart },
        "singularities": comparison,
        "ray_sums": sums,
        "agreement": agreement,
    });
    if cfg.wants(Format::Json) {
        out.json("borel.json", &report)?;
    }
    if cfg.wants(Format::Csv) {
        out.csv("borel_coeffs.csv", &["n", "c_re", "c_im", "b_re", "b_im"], &coefficient_rows(&s.coeffs, &b.coeffs))?;
        let rows: Vec<Vec<String>> = p
            .poles
            .iter()
            .zip(&p.residues)
            .zip(&p.froissart)
            .map(|((z, r), f)| vec![num(z.re), num(z.im), num(r.re), num(r.im), f.to_string()])
            .collect();
        out.csv("poles.csv", &["re", "im", "residue_re", "residue_im", "froissart"], &rows)?;
        let rows: Vec<Vec<String>> = sums
            .iter()
            .map(|r| vec![num(r.lambda.re), num(r.lambda.im), num(r.ray), num(r.value.re), num(r.value.im), num(r.err)])
            .collect();
        out.csv("ray_sums.csv", &["lambda_re", "lambda_im", "ray", "re", "im", "err"], &rows)?;
    }
    if cfg.wants(Format::Svg) {
        let rays: Vec<f64> = sums.iter().map(|r| r.ray).collect();
        out.write("poles.svg", svg::pole_map(&p, &forecast, &rays).as_bytes())?;
    }
    Ok(json!({ "sector": a.series.sector, "x": pair(x), "order": a.series.order, "pade": [l, m], "rays": a.rays }))
}

pub struct ConnectArgs {
    pub from: usize,
    pub basis: (usize, usize),
}

pub fn connect(cfg: &RunConfig, a: &ConnectArgs, out: &mut Output) -> Result<Value> {
    // one graph per λ, since the sector structure follows arg λ
    let rows: Vec<Result<oracle::ConnectionData>> = par::map(&cfg.lambda, Exec::default(), |&lam| {
        let g = graph(cfg, lam.arg())?;
        for k in [a.from, a.basis.0, a.basis.1] {
            check_sector(&g, k)?;
        }
        let probes = oracle::default_probes(&g, a.basis.0, a.basis.1);
        oracle::connection(&g, a.from, a.basis, lam, &probes).map_err(module("oracle"))
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    if cfg.wants(Format::Json) {
        out.json("connection.json", &rows)?;
    }
    if cfg.wants(Format::Csv) {
        let t: Vec<Vec<String>> = rows
            .iter()
            .map(|d| {
                vec![
                    num(d.lambda.re),
                    num(d.lambda.im),
                    num(d.alpha.re),
                    num(d.alpha.im),
                    num(d.beta.re),
                    num(d.beta.im),
                    num(d.chi_ab.re),
                    num(d.chi_ab.im),
                    num(d.residual),
                    num(d.cond),
                ]
            })
            .collect();
        out.csv(
            "connection.csv",
            &["lambda_re", "lambda_im", "alpha_re", "alpha_im", "beta_re", "beta_im", "chi_re", "chi_im", "residual", "cond"],
            &t,
        )?;
    }
    Ok(json!({ "from": a.from, "basis": [a.basis.0, a.basis.1] }))
}

pub struct EigenArgs {
    pub bracket: (f64, f64),
    pub count: usize,
    pub method: EigenMethod,
}

pub fn eigen(cfg: &RunConfig, a: &EigenArgs, out: &mut Output) -> Result<Value> {
    let v = cfg.potential()?;
    let lam = cfg.lambda[0];
    if lam.im != 0.0 || lam.re <= 0.0 {
        return Err(CliError::Config(format!("eigenvalues need a real positive λ, got {lam}")));
    }
    let levels = oracle::eigenvalues_with(v, lam.re, a.bracket, a.count, a.method).map_err(module("oracle"))?;
    if cfg.wants(Format::Json) {
        out.json("eigen.json", &levels)?;
    }
    if cfg.wants(Format::Csv) {
        let rows: Vec<Vec<String>> = levels
            .iter()
            .map(|e| vec![e.index_hint.to_string(), num(e.energy.re), num(e.energy.im), num(e.wronskian_residual)])
            .collect();
        out.csv("eigen.csv", &["n", "energy_re", "energy_im", "wronskian_residual"], &rows)?;
    }
    let method = match a.method {
        EigenMethod::Wronskian => "wronskian",
        EigenMethod::Shooting => "shooting",
    };
    Ok(json!({ "bracket": [a.bracket.0, a.bracket.1], "count": a.count, "method": method }))
}
