//! Direct solutions of the χ-equation along complex paths: fundamental
//! solutions, the base pair, connection coefficients, eigenvalues, and the
//! resummation experiments that compare Borel sums with actual solutions.
//!
//! The χ-factor of `ψ = q^{-1/4} e^{σλW} χ` solves
//! `q^{-1/4}(q^{-1/4}χ)″ + 2σλχ′ = 0`, integrated here by a Taylor method
//! whose coefficient jets come from the local expansion of `q`.

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::borel;
use crate::error::{Error, Result};
use crate::fps::Jet;
use crate::par::{self, Exec};
use crate::path::{continue_branch_at, BranchedRoot, OrientedPath, Segment};
use crate::potential::{characteristic, turning_points, Characteristic, Polynomial, DEFAULT_ROOT_TOL};
use crate::series::{self, chi_series, chi_series_on, rho_pm, series_mul, transport_kernel, Anchor, AsymptoticSeries};
use crate::stokes::StokesGraph;

mod dopri;
mod taylor;

use taylor::{State, Stepper, System};

pub const ODE_TOL: f64 = 1e-10;
pub const REC_TOL: f64 = 1e-6;
pub const EIG_TOL: f64 = 1e-10;
/// Condition number above which a probe basis is refused.
pub const MAX_COND: f64 = 1e8;
/// Series order for the eigenvalue start data, taken where `λ∫√q ≥ 30`.
const EIGEN_ORDER: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSample {
    #[serde(with = "crate::cjson::one")]
    pub x: C,
    #[serde(with = "crate::cjson::one")]
    pub chi: C,
    #[serde(with = "crate::cjson::one")]
    pub chi_prime: C,
    pub sigma: f64,
    #[serde(with = "crate::cjson::one")]
    pub lambda: C,
    /// Parameter of `x` on the path that produced the sample.
    pub s: f64,
    #[serde(with = "crate::cjson::one")]
    pub fourth_root: C,
}

impl ChiSample {
    /// Pointwise residual of the χ-equation given `χ″` at the sample.
    pub fn residual(&self, q: &Characteristic, chi_second: C) -> f64 {
        let (qv, q1, q2) = q.eval_d2(self.x);
        let s = self.fourth_root * self.fourth_root;
        let a = 0.25 * q2 / qv - 5.0 / 16.0 * (q1 / qv).powi(2);
        let b = 0.5 * q1 / qv - 2.0 * self.sigma * self.lambda * s;
        let terms = [chi_second.norm(), (a * self.chi).norm(), (b * self.chi_prime).norm()];
        let scale = terms.iter().cloned().fold(0.0, f64::max).max(1e-300);
        (chi_second - a * self.chi - b * self.chi_prime).norm() / scale
    }
}

fn stepper(q: &Characteristic, sigma: f64, lambda: C) -> Result<Stepper<'_>> {
    let singular = if q.base.degree() == 0 { vec![] } else { turning_points(q, DEFAULT_ROOT_TOL)?.locations() };
    Ok(Stepper::new(q, System::Chi { sigma, lambda }, singular))
}

fn first_finite_param(path: &OrientedPath) -> f64 {
    match path.segments.first() {
        Some(Segment::Ray { inward: true, .. }) => 1.0,
        _ => 0.0,
    }
}

/// Integrates the χ-equation along the finite part of a branched path from
/// parameter `s0`, returning samples at the branch nodes and the path end.
pub fn solve_chi_from(branched: &BranchedRoot, sigma: f64, lambda: C, s0: f64, init: (C, C)) -> Result<Vec<ChiSample>> {
    let path = &branched.path;
    if path.end_at_turning_point {
        return Err(Error::TurningPointProximity { x: path.end() });
    }
    if matches!(path.segments.last(), Some(Segment::Ray { inward: false, .. })) {
        return Err(Error::Invalid("the χ-equation is integrated on finite paths".into()));
    }
    let end = path.param_end();
    let mut params: Vec<f64> = branched.samples.iter().map(|b| b.s).filter(|&s| s > s0 && s < end).collect();
    params.push(end);
    let vertices: Vec<C> = params.iter().map(|&s| path.point(s)).collect();
    let q = &branched.q;
    let mut st = stepper(q, sigma, lambda)?;
    let start = State { x: path.point(s0), y: init.0, dy: init.1, fourth_root: branched.fourth_root_at(s0), arc: 0.0 };
    let states = st.run(start, &vertices)?;
    let all_params = std::iter::once(s0).chain(params);
    Ok(states
        .iter()
        .zip(all_params)
        .map(|(s, p)| ChiSample {
            x: s.x,
            chi: s.y,
            chi_prime: s.dy,
            sigma,
            lambda,
            s: p,
            fourth_root: s.fourth_root,
        })
        .collect())
}

/// [`solve_chi_from`] starting at the first finite point of the path.
pub fn solve_chi(branched: &BranchedRoot, sigma: f64, lambda: C, init: (C, C)) -> Result<Vec<ChiSample>> {
    solve_chi_from(branched, sigma, lambda, first_finite_param(&branched.path), init)
}

/// Solution of the χ-equation with dense output along its path.
pub struct DenseChi {
    pub samples: Vec<ChiSample>,
    steps: Vec<taylor::Step>,
}

impl DenseChi {
    /// `(χ, χ′, χ″)` at a point within one step of the integration path.
    pub fn eval(&self, x: C) -> Option<(C, C, C)> {
        let step = self
            .steps
            .iter()
            .filter(|s| (x - s.x).norm() <= 1.5 * s.h)
            .min_by(|a, b| (x - a.x).norm().partial_cmp(&(x - b.x).norm()).unwrap())?;
        Some(step.eval(x))
    }
}

/// Like [`solve_chi`], keeping the local Taylor series of every step.
pub fn solve_chi_dense(branched: &BranchedRoot, sigma: f64, lambda: C, init: (C, C)) -> Result<DenseChi> {
    let s0 = first_finite_param(&branched.path);
    let path = &branched.path;
    let end = path.param_end();
    let mut params: Vec<f64> = branched.samples.iter().map(|b| b.s).filter(|&s| s > s0 && s < end).collect();
    params.push(end);
    let vertices: Vec<C> = params.iter().map(|&s| path.point(s)).collect();
    let mut st = stepper(&branched.q, sigma, lambda)?;
    st.keep_steps = true;
    let start = State { x: path.point(s0), y: init.0, dy: init.1, fourth_root: branched.fourth_root_at(s0), arc: 0.0 };
    let states = st.run(start, &vertices)?;
    let samples = states
        .iter()
        .zip(std::iter::once(s0).chain(params))
        .map(|(s, p)| ChiSample { x: s.x, chi: s.y, chi_prime: s.dy, sigma, lambda, s: p, fourth_root: s.fourth_root })
        .collect();
    Ok(DenseChi { samples, steps: st.steps })
}

/// Optimally truncated sums of `Σ c_n t^n` and `Σ d_n t^n`, cut where the
/// terms of the first series stop decreasing.
fn truncated_pair(c: &[C], d: &[C], t: C) -> (C, C) {
    let mut sc = C::new(0.0, 0.0);
    let mut sd = C::new(0.0, 0.0);
    let mut tn = C::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for n in 0..c.len() {
        let term = c[n] * tn;
        if n > 1 && term.norm() > last {
            break;
        }
        if n > 0 {
            last = term.norm();
        }
        sc += term;
        sd += d[n] * tn;
        tn *= t;
    }
    (sc, sd)
}

/// Optimal truncation of a single series.
pub fn truncated_sum(c: &[C], t: C) -> C {
    truncated_pair(c, c, t).0
}

/// `(χ, χ′)` at a point of an inward ray from the asymptotic series.
fn asymptotic_init(q: &Characteristic, p: C, fourth_root: C, sigma: f64, lambda: C, n: usize) -> Result<(C, C)> {
    let path = OrientedPath::new(vec![Segment::Ray { p, inward: true }]);
    let br = continue_branch_at(q, &path, 1.0, fourth_root)?;
    let c = chi_series_on(&br, sigma, n, Anchor::Point(p))?.coeffs;
    let r = br.end_sample().fourth_root;
    let a = transport_kernel(q, p, r * r, n)?;
    let d: Vec<C> = (0..=n).map(|k| (0..k).map(|j| a[k - j] * c[j]).sum()).collect();
    Ok(truncated_pair(&c, &d, sigma / (2.0 * lambda)))
}

/// A fundamental solution evaluated at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fundamental {
    pub sector: usize,
    pub sigma: f64,
    pub sample: ChiSample,
    /// `W_k(x)` on the sector branch.
    #[serde(with = "crate::cjson::one")]
    pub action: C,
}

impl Fundamental {
    /// `(ψ_k, ψ_k′)` with the prefactor `q^{-1/4} e^{σλW}`.
    pub fn psi(&self, q: &Characteristic) -> (C, C) {
        let s = &self.sample;
        let (qv, q1) = (q.eval(s.x), q.eval_d2(s.x).1);
        let pre = (self.sigma * s.lambda * self.action).exp() / s.fourth_root;
        let sq = s.fourth_root * s.fourth_root;
        let psi = pre * s.chi;
        let dpsi = pre * (s.chi_prime + (self.sigma * s.lambda * sq - 0.25 * q1 / qv) * s.chi);
        (psi, dpsi)
    }
}

/// `χ_k(x, λ)` integrated from the sector anchor along a canonical path,
/// started from the optimally truncated asymptotic series.
pub fn fundamental_chi(graph: &StokesGraph, k: usize, x: C, lambda: C) -> Result<Fundamental> {
    let cp = graph.canonical_path(k, x).ok_or(Error::NoCanonicalPath { sector: graph.sector(k).index, x })?;
    let sector = graph.sector(k);
    let sigma = sector.signature;
    let init = asymptotic_init(&graph.characteristic, sector.anchor, sector.anchor_fourth_root, sigma, lambda, series::N_MAX)?;
    let samples = solve_chi_from(&cp.branched, sigma, lambda, 1.0, init)?;
    let action = graph.sector_action(&cp)?;
    Ok(Fundamental { sector: sector.index, sigma, sample: *samples.last().unwrap(), action })
}

/// The pair with `χ₁(x₀) = 1, χ₁′(x₀) = 0` and `χ₂(x₀) = 0, χ₂′(x₀) = 1`,
/// integrated along a finite branched path starting at `x₀`.
pub fn base_pair(branched: &BranchedRoot, sigma: f64, lambda: C) -> Result<(Vec<ChiSample>, Vec<ChiSample>)> {
    let one = C::new(1.0, 0.0);
    let zero = C::new(0.0, 0.0);
    Ok((solve_chi(branched, sigma, lambda, (one, zero))?, solve_chi(branched, sigma, lambda, (zero, one))?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectionData {
    pub from: usize,
    pub basis: (usize, usize),
    #[serde(with = "crate::cjson::one")]
    pub lambda: C,
    #[serde(with = "crate::cjson::one")]
    pub alpha: C,
    #[serde(with = "crate::cjson::one")]
    pub beta: C,
    /// `χ_{a→b}(λ)` of the basis pair.
    #[serde(with = "crate::cjson::one")]
    pub chi_ab: C,
    /// Relative reconstruction residual on the probe set.
    pub residual: f64,
    pub cond: f64,
    #[serde(with = "crate::cjson::vec")]
    pub probes: Vec<C>,
}

/// Probe points in sectors `a` and `b`: four per sector at two radii and
/// two directions inside the sector.
pub fn default_probes(graph: &StokesGraph, a: usize, b: usize) -> Vec<C> {
    let center: C = graph.locations().iter().sum::<C>() / graph.locations().len().max(1) as f64;
    let base = graph.scale();
    let mut out = vec![];
    for k in [a, b] {
        let s = graph.sector(k);
        let (t1, t2) = s.interval;
        let w = t2 - t1;
        for frac in [0.4, 0.6] {
            for rad in [1.2, 1.6] {
                out.push(center + C::from_polar(rad * base, t1 + frac * w));
            }
        }
    }
    out
}

/// `χ_a` continued to the far end of sector `b`, divided by the dominant
/// formal series there.
pub fn chi_transfer(graph: &StokesGraph, a: usize, b: usize, lambda: C) -> Result<C> {
    let sb = graph.sector(b);
    let x = sb.anchor * 0.9;
    let fa = fundamental_chi(graph, a, x, lambda)?;
    let cp = graph.canonical_path(b, x).ok_or(Error::NoCanonicalPath { sector: sb.index, x })?;
    let ser = chi_series_on(&cp.branched, sb.signature, series::N_MAX, Anchor::Sector(sb.index))?;
    let rb = cp.branched.end_sample().fourth_root;
    let s_a = fa.sigma * fa.sample.fourth_root.powi(2);
    let s_b = sb.signature * rb * rb;
    let t = sb.signature / (2.0 * lambda);
    let t = if (s_a + s_b).norm() < (s_a - s_b).norm() { -t } else { t };
    Ok(fa.sample.chi / truncated_sum(&ser.coeffs, t))
}

/// Decomposes `ψ_from = αψ_a + βψ_b` by least squares on the probes.
pub fn connection(graph: &StokesGraph, from: usize, basis: (usize, usize), lambda: C, probes: &[C]) -> Result<ConnectionData> {
    let q = &graph.characteristic;
    let rows: Vec<[C; 3]> = par::map(probes, Exec::default(), |&x| -> Result<Vec<[C; 3]>> {
        let f = fundamental_chi(graph, from, x, lambda)?.psi(q);
        let a = fundamental_chi(graph, basis.0, x, lambda)?.psi(q);
        let b = fundamental_chi(graph, basis.1, x, lambda)?.psi(q);
        Ok(vec![[a.0, b.0, f.0], [a.1, b.1, f.1]])
    })
    .into_iter()
    .filter_map(|r| r.ok())
    .flatten()
    .collect();
    if rows.len() < 4 {
        return Err(Error::Invalid(format!("only {} usable probe rows", rows.len())));
    }
    let scaled: Vec<[C; 3]> = rows
        .iter()
        .map(|r| {
            let m = r.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
            [r[0] / m, r[1] / m, r[2] / m]
        })
        .collect();
    let n = scaled.len();
    let a = DMatrix::<C>::from_fn(n, 2, |i, j| scaled[i][j]);
    let rhs = DMatrix::<C>::from_fn(n, 1, |i, _| scaled[i][2]);
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let cond = sv.max() / sv.min();
    if !(cond <= MAX_COND) {
        return Err(Error::IllConditioned { cond });
    }
    let sol = svd.solve(&rhs, 0.0).map_err(|e| Error::Invalid(e.to_string()))?;
    let (alpha, beta) = (sol[(0, 0)], sol[(1, 0)]);
    let res = (&a * &sol - &rhs).norm() / rhs.norm().max(1e-300);
    let chi_ab = chi_transfer(graph, basis.0, basis.1, lambda)?;
    Ok(ConnectionData {
        from: graph.sector(from).index,
        basis: (graph.sector(basis.0).index, graph.sector(basis.1).index),
        lambda,
        alpha,
        beta,
        chi_ab,
        residual: res,
        cond,
        probes: probes.to_vec(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    #[serde(with = "crate::cjson::one")]
    pub energy: C,
    pub wronskian_residual: f64,
    /// Ordinal of the level within the scanned bracket.
    pub index_hint: usize,
}

/// Real turning points of `2V − 2E` bounding the classically allowed region.
fn real_extent(v: &Polynomial, e: f64) -> Result<(f64, f64)> {
    let q = characteristic(v, C::new(e, 0.0))?;
    let tps = turning_points(&q, DEFAULT_ROOT_TOL)?;
    let real: Vec<f64> = tps.locations().iter().filter(|z| z.im.abs() < 1e-8 * (1.0 + z.norm())).map(|z| z.re).collect();
    if real.is_empty() {
        let c = tps.locations().iter().map(|z| z.re).sum::<f64>() / tps.locations().len().max(1) as f64;
        return Ok((c, c));
    }
    Ok((real.iter().cloned().fold(f64::INFINITY, f64::min), real.iter().cloned().fold(f64::NEG_INFINITY, f64::max)))
}

/// Smallest radius beyond the turning point at which `λ∫√q` reaches `target`.
fn decay_point(q: &Characteristic, from: f64, dir: f64, lambda: f64, target: f64) -> f64 {
    let mut x = from;
    let mut acc = 0.0;
    let mut h = 0.01 * (1.0 + from.abs());
    while lambda * acc < target {
        let (a, b) = (x, x + dir * h);
        let f = |t: f64| q.eval(C::new(t, 0.0)).re.max(0.0).sqrt();
        acc += h / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
        x = b;
        h *= 1.05;
    }
    x
}

fn check_confining(v: &Polynomial) -> Result<()> {
    let real = v.coeffs.iter().all(|c| c.im == 0.0);
    let n = v.degree();
    if !real || n == 0 || n % 2 == 1 || v.leading().re <= 0.0 {
        return Err(Error::Invalid("eigenvalues need a real confining potential".into()));
    }
    Ok(())
}

struct Window {
    left: f64,
    right: f64,
    mid: f64,
}

fn window(v: &Polynomial, lambda: f64, e_max: f64, target: f64) -> Result<Window> {
    let (lo, hi) = real_extent(v, e_max)?;
    let q = characteristic(v, C::new(e_max, 0.0))?;
    Ok(Window {
        left: decay_point(&q, lo, -1.0, lambda, target),
        right: decay_point(&q, hi, 1.0, lambda, target),
        mid: 0.5 * (lo + hi),
    })
}

/// Normalized Wronskian of the solutions recessive at real ±∞, each started
/// from its asymptotic series and integrated as `ψ″ = λ²qψ`.
fn wronskian_fundamental(v: &Polynomial, lambda: f64, e: f64, w: &Window) -> Result<(f64, f64)> {
    let q = characteristic(v, C::new(e, 0.0))?;
    let lam = C::new(lambda, 0.0);
    let side = |x0: f64, sigma: f64| -> Result<(C, C)> {
        let p = C::new(x0, 0.0);
        let qv = q.eval(p);
        let r = qv.sqrt().sqrt();
        let (chi, dchi) = asymptotic_init(&q, p, r, sigma, lam, EIGEN_ORDER)?;
        let q1 = q.eval_d2(p).1;
        let psi = chi / r;
        let dpsi = (dchi + (sigma * lam * r * r - 0.25 * q1 / qv) * chi) / r;
        let mut st = Stepper::new(&q, System::Schrodinger { lambda: lam }, vec![]);
        let s = st.chord(State { x: p, y: psi, dy: dpsi, fourth_root: r, arc: 0.0 }, C::new(w.mid, 0.0))?;
        Ok((s.y, s.dy))
    };
    let (rl, rr) = (side(w.left, 1.0)?, side(w.right, -1.0)?);
    let wr = rl.0 * rr.1 - rl.1 * rr.0;
    let scale = (rl.0.norm_sqr() + rl.1.norm_sqr()).sqrt() * (rr.0.norm_sqr() + rr.1.norm_sqr()).sqrt();
    Ok((wr.re / scale, wr.norm() / scale))
}

/// Real-axis shooting with Dirichlet data far out and DOPRI5 integration.
fn wronskian_shooting(v: &Polynomial, lambda: f64, e: f64, w: &Window) -> Result<(f64, f64)> {
    let f = |x: f64, y: &[f64; 2]| [y[1], lambda * lambda * 2.0 * (v.eval(C::new(x, 0.0)).re - e) * y[0]];
    let l = dopri::integrate(f, w.left, w.mid, [0.0, 1.0], 1e-13)?;
    let r = dopri::integrate(f, w.right, w.mid, [0.0, -1.0], 1e-13)?;
    let wr = l[0] * r[1] - l[1] * r[0];
    let scale = l[0].hypot(l[1]) * r[0].hypot(r[1]);
    Ok((wr / scale, (wr / scale).abs()))
}

/// Which Wronskian the eigenvalue scan uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenMethod {
    /// Fundamental solutions from their asymptotic series, Taylor integration.
    Wronskian,
    /// Dirichlet shooting with DOPRI5.
    Shooting,
}

/// Levels of `−ψ″/(2λ²) + Vψ = Eψ` in a real bracket.
pub fn eigenvalues(v: &Polynomial, lambda: f64, bracket: (f64, f64), count: usize) -> Result<Vec<EigenResult>> {
    eigenvalues_with(v, lambda, bracket, count, EigenMethod::Wronskian)
}

pub fn eigenvalues_with(v: &Polynomial, lambda: f64, bracket: (f64, f64), count: usize, method: EigenMethod) -> Result<Vec<EigenResult>> {
    if count == 0 {
        return Ok(vec![]);
    }
    check_confining(v)?;
    let target = match method {
        EigenMethod::Wronskian => 30.0,
        EigenMethod::Shooting => 40.0,
    };
    let w = window(v, lambda, bracket.1, target)?;
    let f = |e: f64| -> Result<(f64, f64)> {
        match method {
            EigenMethod::Wronskian => wronskian_fundamental(v, lambda, e, &w),
            EigenMethod::Shooting => wronskian_shooting(v, lambda, e, &w),
        }
    };
    let n = (20 * count).max(60);
    let grid: Vec<f64> = (0..=n).map(|i| bracket.0 + (bracket.1 - bracket.0) * i as f64 / n as f64).collect();
    let vals: Vec<f64> = par::map(&grid, Exec::default(), |&e| f(e).map(|r| r.0))
        .into_iter()
        .collect::<Result<_>>()?;
    let mut cells = vec![];
    for i in 0..n {
        if vals[i] == 0.0 || vals[i] * vals[i + 1] < 0.0 {
            cells.push((grid[i], vals[i], grid[i + 1], vals[i + 1]));
        }
    }
    cells.truncate(count);
    let found: Vec<EigenResult> = par::map(&cells, Exec::default(), |&(a, fa, b, fb)| -> Result<EigenResult> {
        let e = illinois(|e| f(e).map(|r| r.0), a, fa, b, fb)?;
        Ok(EigenResult { energy: C::new(e, 0.0), wronskian_residual: f(e)?.1, index_hint: 0 })
    })
    .into_iter()
    .collect::<Result<_>>()?;
    if found.len() < count {
        return Err(Error::BracketExhausted { found: found.len(), wanted: count });
    }
    Ok(found.into_iter().enumerate().map(|(i, mut r)| {
        r.index_hint = i;
        r
    }).collect())
}

fn illinois<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64) -> Result<f64> {
    if fa == 0.0 {
        return Ok(a);
    }
    let mut side = 0;
    for _ in 0..200 {
        let c = (a * fb - b * fa) / (fb - fa);
        if (b - a).abs() < EIG_TOL * 1e-2 * (1.0 + c.abs()) {
            return Ok(c);
        }
        let fc = f(c)?;
        if fc == 0.0 {
            return Ok(c);
        }
        if fc * fb < 0.0 {
            a = b;
            fa = fb;
            side = 0;
        } else {
            fa *= if side == 1 { 0.5 } else { 1.0 };
            side = 1;
        }
        b = c;
        fb = fc;
    }
    Ok(0.5 * (a + b))
}

/// Borel–Padé sum of a fundamental χ-series compared with the ODE value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummationCheck {
    pub sector: usize,
    #[serde(with = "crate::cjson::one")]
    pub x: C,
    #[serde(with = "crate::cjson::one")]
    pub lambda: C,
    #[serde(with = "crate::cjson::one")]
    pub borel_sum: C,
    #[serde(with = "crate::cjson::one")]
    pub oracle: C,
    pub relative_error: f64,
}

pub fn summation_check(graph: &StokesGraph, k: usize, x: C, lambda: C, order: usize, lm: (usize, usize)) -> Result<SummationCheck> {
    let ser = chi_series(graph, k, x, order)?;
    let sum = borel::resum(&ser, lambda, lm.0, lm.1, None)?;
    let f = fundamental_chi(graph, k, x, lambda)?;
    Ok(SummationCheck {
        sector: f.sector,
        x,
        lambda,
        borel_sum: sum.value,
        oracle: f.sample.chi,
        relative_error: (sum.value - f.sample.chi).norm() / f.sample.chi.norm(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Residuals {
    /// `|BS₂₈ − C_a χ_a(x)/χ_a(x₀)|`, relative.
    pub three_way: f64,
    /// `|BS − χ₁|`.
    pub bs_oracle: f64,
    /// `|C_a χ_a(x)/χ_a(x₀) − χ₁|`.
    pub rhs_oracle: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    /// Fitted slope of `log|(BS − χ₁)/(1 − C_d)|` against λ.
    pub slope: f64,
    /// `−2ℜ(ξ(x₀) − ξ(x))`.
    pub expected: f64,
    pub relative_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Report {
    pub sector: usize,
    #[serde(with = "crate::cjson::one")]
    pub x: C,
    #[serde(with = "crate::cjson::one")]
    pub x0: C,
    pub lambda: Vec<f64>,
    /// Borel sum of the standard series of `χ₁`.
    #[serde(with = "crate::cjson::vec")]
    pub bs_value: Vec<C>,
    /// Borel sum of `C^{as} I(x, x₀)` with `C^{as} = exp(2∫ρ⁺)`.
    #[serde(with = "crate::cjson::vec")]
    pub bs_product: Vec<C>,
    #[serde(with = "crate::cjson::vec")]
    pub oracle_value: Vec<C>,
    #[serde(with = "crate::cjson::vec")]
    pub rhs_eq30: Vec<C>,
    #[serde(with = "crate::cjson::vec")]
    pub c_a: Vec<C>,
    /// Borel sum of the prefactor of `χ_a` in `χ₁`.
    #[serde(with = "crate::cjson::vec")]
    pub c_d: Vec<C>,
    pub residuals: Vec<Lemma3Residuals>,
    pub slope_fit: SlopeFit,
}

struct Row {
    bs: C,
    bs_prod: C,
    chi1: C,
    rhs: C,
    ca: C,
    cd: C,
}

/// Formal prefactor `α` in `χ₁ = α χ_a + β e^{−2σλ(W−W₀)} χ_b` for the pair
/// normalized by `χ₁(x₀) = 1`, `χ₁′(x₀) = 0`:
/// `α χ_a(x₀) = 1/(1 + tρ_a/(√q − tρ_b))` with `ρ = χ′/χ` and `χ_b(t) = χ_a(−t)`.
pub fn derivative_prefactor(
    q: &Characteristic,
    to_x0: &BranchedRoot,
    sigma: f64,
    order: usize,
) -> Result<AsymptoticSeries> {
    let x0 = to_x0.path.end();
    let c = chi_series_on(to_x0, sigma, order, Anchor::Point(x0))?.coeffs;
    let r = to_x0.end_sample().fourth_root;
    let sq = r * r;
    let a = transport_kernel(q, x0, sq, order)?;
    let d: Vec<C> = (0..=order).map(|k| (0..k).map(|j| a[k - j] * c[j]).sum()).collect();
    let flip = |v: &[C]| -> Jet { Jet(v.iter().enumerate().map(|(n, z)| if n % 2 == 1 { -z } else { *z }).collect()) };
    let shift = |j: Jet| -> Jet {
        let mut v = vec![C::new(0.0, 0.0)];
        v.extend(j.0);
        Jet(v).truncate(order + 1)
    };
    let rho_a = Jet(d.clone()).div(&Jet(c.clone()))?;
    let rho_b = flip(&d).div(&flip(&c))?;
    let den = Jet::constant(sq, order + 1).sub(&shift(rho_b));
    let ratio = shift(rho_a).div(&den)?;
    let alpha = Jet::constant(C::new(1.0, 0.0), order + 1).add(&ratio).recip()?;
    Ok(AsymptoticSeries::new(sigma, alpha.0, x0, Anchor::Point(x0)))
}

/// `exp(2 Σ λ^{−(2n+2)} ∫ρ⁺_{2n+1})`, optimally truncated.
fn c_a_value(int_plus: &[C], lambda: f64) -> C {
    let mut s = C::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    for (n, c) in int_plus.iter().enumerate() {
        let term = c / lambda.powi(2 * n as i32 + 2);
        if term.norm() > last {
            break;
        }
        last = term.norm();
        s += term;
    }
    (2.0 * s).exp()
}

/// Compares the Borel sum of the standard series of the base solution `χ₁`
/// with `C_a χ_a(x)/χ_a(x₀)` and with the ODE value of `χ₁` itself.
pub fn lemma3_experiment(graph: &StokesGraph, x: C, x0: C, lambdas: &[f64]) -> Result<Lemma3Report> {
    let order = 20;
    let q = &graph.characteristic;
    let k = (1..=graph.sectors.len())
        .find(|&k| {
            graph.sector(k).signature < 0.0
                && graph.canonical_path(k, x0).is_some()
                && graph.canonical_path(k, x).is_some()
        })
        .ok_or(Error::NoCanonicalPath { sector: 1, x: x0 })?;
    let sector = graph.sector(k);
    let sigma = sector.signature;
    let cp0 = graph.canonical_path(k, x0).unwrap();
    let cpx = graph.canonical_path(k, x).unwrap();
    let w0 = graph.sector_action(&cp0)?;
    let wx = graph.sector_action(&cpx)?;
    let (xi0, xix) = (-sigma * w0, -sigma * wx);
    if !(xix.re < xi0.re) {
        return Err(Error::Invalid("the experiment needs Re ξ(x) < Re ξ(x0)".into()));
    }
    let rep = rho_pm(&cp0.branched, sigma, order)?;
    let c_as = rep.c_series(order);
    let c_d = derivative_prefactor(q, &cp0.branched, sigma, order)?;
    let line = OrientedPath::polyline(&[x0, x]);
    let br = continue_branch_at(q, &line, 0.0, cp0.branched.end_sample().fourth_root)?;
    let i_n = series::iterated_i(&br, order)?;
    let i_ser = AsymptoticSeries::new(sigma, i_n, x, Anchor::Free);
    let product = series_mul(&c_as, &i_ser)?;
    let chi1_as = series_mul(&c_d, &i_ser)?;
    let rows: Vec<Result<Row>> = par::map(lambdas, Exec::default(), |&lam| {
        let lc = C::new(lam, 0.0);
        let bs_prod = borel::resum(&product, lc, order / 2, order / 2, None)?.value;
        let bs = borel::resum(&chi1_as, lc, order / 2, order / 2, None)?.value;
        let ca = c_a_value(&rep.int_plus, lam);
        let cd = borel::resum(&c_d, lc, order / 2, order / 2, None)?.value;
        let fx = fundamental_chi(graph, k, x, lc)?;
        let f0 = fundamental_chi(graph, k, x0, lc)?;
        let rhs = ca * fx.sample.chi / f0.sample.chi;
        let chi1 = base_pair(&br, sigma, lc)?.0.last().unwrap().chi;
        Ok(Row { bs, bs_prod, chi1, rhs, ca, cd })
    });
    let rows: Vec<Row> = rows.into_iter().collect::<Result<_>>()?;
    let residuals = rows
        .iter()
        .map(|r| Lemma3Residuals {
            three_way: (r.bs_prod - r.rhs).norm() / r.rhs.norm(),
            bs_oracle: (r.bs - r.chi1).norm(),
            rhs_oracle: (r.rhs - r.chi1).norm(),
        })
        .collect();
    let pts: Vec<(f64, f64)> = lambdas
        .iter()
        .zip(&rows)
        .map(|(&l, r)| (l, ((r.bs - r.chi1) / (1.0 - r.cd)).norm().ln()))
        .collect();
    let slope = linear_slope(&pts);
    let expected = -2.0 * (xi0 - xix).re;
    Ok(Lemma3Report {
        sector: sector.index,
        x,
        x0,
        lambda: lambdas.to_vec(),
        bs_value: rows.iter().map(|r| r.bs).collect(),
        bs_product: rows.iter().map(|r| r.bs_prod).collect(),
        oracle_value: rows.iter().map(|r| r.chi1).collect(),
        rhs_eq30: rows.iter().map(|r| r.rhs).collect(),
        c_a: rows.iter().map(|r| r.ca).collect(),
        c_d: rows.iter().map(|r| r.cd).collect(),
        residuals,
        slope_fit: SlopeFit { slope, expected, relative_error: ((slope - expected) / expected).abs() },
    })
}

fn linear_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
