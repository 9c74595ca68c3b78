//! Borel plane: Borel series, Padé continuation, singularity forecasts,
//! directional Laplace sums, convolution, and the leading terms of the
//! topological expansion.
//!
//! With `χ ~ Σ c_n t^n`, `t = σ/(2λ)`, the Borel coefficients are
//! `b_n = (−σ)^n c_n / n!` and `χ = 2λ ∫_{∞e^{iθ}}^{0} e^{2λs} Σ b_n s^n ds`.

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::{continue_branch_at, OrientedPath};
use crate::potential::{polynomial_roots, Polynomial};
use crate::quad;
use crate::series::{Anchor, AsymptoticSeries};
use crate::stokes::{StokesGraph, Terminus};

mod topo;
pub use topo::{bessel_i0_sq, phi_topological, TopoContext};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BorelSeries {
    pub sigma: f64,
    #[serde(with = "crate::cjson::vec")]
    pub coeffs: Vec<C>,
    pub radius_estimate: f64,
    #[serde(with = "crate::cjson::one")]
    pub at: C,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn to_borel(a: &AsymptoticSeries) -> BorelSeries {
    let coeffs: Vec<C> = a
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| c * (-a.sigma).powi(n as i32) / factorial(n))
        .collect();
    let radius_estimate = radius_estimate(&coeffs);
    BorelSeries { sigma: a.sigma, coeffs, radius_estimate, at: a.at }
}

pub fn from_borel(b: &BorelSeries) -> AsymptoticSeries {
    let coeffs = b
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| c * (-b.sigma).powi(n as i32) * factorial(n))
        .collect();
    AsymptoticSeries::new(b.sigma, coeffs, b.at, Anchor::Free)
}

/// Domb–Sykes estimate: |b_n/b_{n−1}| extrapolated linearly in 1/n over the
/// top third of the available orders.
pub fn radius_estimate(b: &[C]) -> f64 {
    let n = b.len().saturating_sub(1);
    if n < 3 {
        return f64::INFINITY;
    }
    let lo = (2 * n / 3).max(2);
    let pts: Vec<(f64, f64)> = (lo..=n)
        .filter(|&k| b[k - 1].norm() > 0.0 && b[k].norm() > 0.0)
        .map(|k| (1.0 / k as f64, (b[k] / b[k - 1]).norm()))
        .collect();
    if pts.is_empty() {
        return f64::INFINITY;
    }
    if pts.len() == 1 {
        return 1.0 / pts[0].1;
    }
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    let inv = (sy - slope * sx) / m;
    if inv > 0.0 {
        1.0 / inv
    } else {
        f64::INFINITY
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PadeApproximant {
    pub l: usize,
    pub m: usize,
    #[serde(with = "crate::cjson::vec")]
    pub numerator: Vec<C>,
    #[serde(with = "crate::cjson::vec")]
    pub denominator: Vec<C>,
    #[serde(with = "crate::cjson::vec")]
    pub poles: Vec<C>,
    #[serde(with = "crate::cjson::vec")]
    pub residues: Vec<C>,
    pub froissart: Vec<bool>,
}

fn horner(c: &[C], s: C) -> C {
    c.iter().rev().fold(C::new(0.0, 0.0), |acc, a| acc * s + a)
}

impl PadeApproximant {
    pub fn eval(&self, s: C) -> C {
        horner(&self.numerator, s) / horner(&self.denominator, s)
    }

    /// Non-Froissart poles sorted by modulus.
    pub fn genuine_poles(&self) -> Vec<C> {
        let mut p: Vec<C> = self.poles.iter().zip(&self.froissart).filter(|(_, f)| !**f).map(|(p, _)| *p).collect();
        p.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
        p
    }

    pub fn nearest_pole(&self) -> Option<C> {
        self.genuine_poles().first().copied()
    }

    /// Largest relative mismatch of the Taylor coefficients through order L+M.
    pub fn taylor_residual(&self, b: &[C]) -> f64 {
        let n = (self.l + self.m + 1).min(b.len());
        let d = Polynomial::new(self.denominator.clone());
        let mut worst: f64 = 0.0;
        let scale = b[..n].iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
        for k in 0..n {
            let mut s = C::new(0.0, 0.0);
            for j in 0..=k.min(d.coeffs.len() - 1) {
                s += d.coeffs[j] * b[k - j];
            }
            let p = self.numerator.get(k).copied().unwrap_or_default();
            worst = worst.max((s - p).norm() / scale);
        }
        worst
    }
}

/// [L/M] Padé approximant of the Borel series with rank-revealing reduction.
pub fn pade(b: &BorelSeries, l: usize, m: usize) -> Result<PadeApproximant> {
    let scale = if b.radius_estimate.is_finite() && b.radius_estimate > 0.0 { b.radius_estimate } else { 1.0 };
    let fd_tol = 1e-3 * scale;
    pade_coeffs(&b.coeffs, l, m, scale, fd_tol)
}

pub fn pade_coeffs(b: &[C], l: usize, m: usize, scale: f64, fd_tol: f64) -> Result<PadeApproximant> {
    if l + m + 1 > b.len() {
        return Err(Error::Invalid(format!("[{l}/{m}] needs {} coefficients, have {}", l + m + 1, b.len())));
    }
    let bs: Vec<C> = b.iter().enumerate().map(|(n, c)| c * scale.powi(n as i32)).collect();
    let norm = bs[..=l + m].iter().map(|c| c.norm()).fold(0.0, f64::max);
    if norm == 0.0 {
        return Ok(PadeApproximant {
            l,
            m: 0,
            numerator: vec![C::new(0.0, 0.0)],
            denominator: vec![C::new(1.0, 0.0)],
            poles: vec![],
            residues: vec![],
            froissart: vec![],
        });
    }
    let get = |k: isize| if k < 0 { C::new(0.0, 0.0) } else { bs[k as usize] / norm };
    let tol = 1e-13;
    let (mut l, mut m) = (l, m);
    let den: Vec<C>;
    loop {
        if m == 0 {
            den = vec![C::new(1.0, 0.0)];
            break;
        }
        let rows = m;
        let mat = DMatrix::<C>::from_fn(rows, m + 1, |i, j| get(l as isize + 1 + i as isize - j as isize));
        let svd = mat.clone().svd(false, true);
        let sv = &svd.singular_values;
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        let rank = sv.iter().filter(|&&s| s > tol * smax).count();
        if rank < m {
            let drop = m - rank;
            m -= drop;
            l = l.saturating_sub(drop);
            continue;
        }
        // Null vector of the full (m × m+1) matrix.
        let full = DMatrix::<C>::from_fn(m + 1, m + 1, |i, j| {
            if i < m {
                mat[(i, j)]
            } else {
                C::new(0.0, 0.0)
            }
        });
        let svd = full.svd(false, true);
        let vt = svd.v_t.ok_or(Error::DegeneratePade)?;
        let (imin, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        let v: Vec<C> = (0..=m).map(|j| vt[(imin, j)].conj()).collect();
        if v[0].norm() < 1e-12 {
            m -= 1;
            l = l.saturating_sub(1);
            continue;
        }
        den = v.iter().map(|c| c / v[0]).collect();
        break;
    }
    let mut den = den;
    while den.len() > 1 && den.last().unwrap().norm() < tol {
        den.pop();
    }
    let mut num = vec![C::new(0.0, 0.0); l + 1];
    for (k, nk) in num.iter_mut().enumerate() {
        for (j, dj) in den.iter().enumerate().take(k + 1) {
            *nk += dj * get(k as isize - j as isize);
        }
    }
    while num.len() > 1 && num.last().unwrap().norm() < tol {
        num.pop();
    }
    let l = num.len() - 1;
    // Undo the scaling s ↦ s/scale and the normalization.
    let numerator: Vec<C> = num.iter().enumerate().map(|(k, c)| c * norm / scale.powi(k as i32)).collect();
    let denominator: Vec<C> = den.iter().enumerate().map(|(k, c)| c / scale.powi(k as i32)).collect();
    let dpoly = Polynomial::new(denominator.clone());
    let poles = if dpoly.degree() > 0 { polynomial_roots(&dpoly)? } else { vec![] };
    let npoly = Polynomial::new(numerator.clone());
    let zeros = if npoly.degree() > 0 { polynomial_roots(&npoly)? } else { vec![] };
    let dd = dpoly.derivative();
    let residues: Vec<C> = poles.iter().map(|&p| npoly.eval(p) / dd.eval(p)).collect();
    let froissart: Vec<bool> = poles
        .iter()
        .zip(&residues)
        .map(|(p, r)| zeros.iter().any(|z| (z - p).norm() < fd_tol) || r.norm() < 1e-12 * norm * scale)
        .collect();
    let m = denominator.len() - 1;
    Ok(PadeApproximant { l, m, numerator, denominator, poles, residues, froissart })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularityForecast {
    #[serde(with = "crate::cjson::one")]
    pub moving: C,
    #[serde(with = "crate::cjson::vec")]
    pub fixed: Vec<C>,
}

/// Moving branch point `ξ(x)` and the first-sheet fixed candidates
/// `±∫√q` along each finite Stokes line.
pub fn predicted_singularities(graph: &StokesGraph, x: C) -> Result<SingularityForecast> {
    let moving = graph.xi(x)?;
    let mut fixed = vec![];
    let mut seen = vec![];
    for line in &graph.lines {
        let Terminus::TurningPoint(j) = line.terminus else { continue };
        let key = (line.origin.min(j), line.origin.max(j));
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        let mut path = OrientedPath::polyline(&thin_line(&line.polyline));
        path.start_at_turning_point = true;
        path.end_at_turning_point = true;
        let mid = 0.5 * path.param_end();
        let r = graph.characteristic.eval(path.point(mid)).sqrt().sqrt();
        let w = continue_branch_at(&graph.characteristic, &path, mid, r)?.total_action()?;
        fixed.push(w);
        fixed.push(-w);
    }
    Ok(SingularityForecast { moving, fixed })
}

fn thin_line(p: &[C]) -> Vec<C> {
    let (a, b) = (p[0], *p.last().unwrap());
    let mut out = vec![a];
    for &z in &p[1..p.len() - 1] {
        let last = *out.last().unwrap();
        let d = (z - a).norm().min((z - b).norm());
        if (z - last).norm() > 0.2 * d {
            out.push(z);
        }
    }
    out.push(b);
    out.dedup();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RaySum {
    #[serde(with = "crate::cjson::one")]
    pub lambda: C,
    pub ray: f64,
    #[serde(with = "crate::cjson::one")]
    pub value: C,
    pub err: f64,
}

/// Decay rate of `e^{2λs}` along the ray of direction `theta`.
fn decay(lambda: C, theta: f64) -> f64 {
    -2.0 * (lambda * C::from_polar(1.0, theta)).re
}

fn ray_integral<F: Fn(C) -> C>(f: &F, lambda: C, theta: f64, t0: f64) -> Result<(C, f64)> {
    let kappa = decay(lambda, theta);
    if kappa <= 0.0 {
        return Err(Error::Divergent { ray: theta });
    }
    let e = C::from_polar(1.0, theta);
    let g = |t: f64| {
        let s = e * (t0 + t);
        2.0 * lambda * e * (2.0 * lambda * s).exp() * f(s)
    };
    let mut total = C::new(0.0, 0.0);
    let mut err = 0.0;
    let mut a = 0.0;
    for b in [0.25, 1.0, 3.0, 8.0, 20.0, 45.0, 80.0] {
        let b = b / kappa;
        let (v, e) = quad::integrate(g, a, b, 1e-15, 1e-13)?;
        total += v;
        err += e;
        a = b;
    }
    // Integral from t0 outwards; the sum runs inwards.
    Ok((-total, err))
}

/// `2λ ∫_{∞e^{iθ}}^{0} e^{2λs} f(s) ds`.
pub fn laplace_sum<F: Fn(C) -> C>(f: F, lambda: C, ray_angle: f64) -> Result<RaySum> {
    let (value, err) = ray_integral(&f, lambda, ray_angle, 0.0)?;
    Ok(RaySum { lambda, ray: ray_angle, value, err: err + 1e-15 * value.norm() })
}

/// Laplace sum of a Padé approximant, refusing rays that pass within
/// `margin·(1+|p|)` of a genuine pole.
pub fn laplace_pade(p: &PadeApproximant, lambda: C, ray_angle: f64, margin: f64) -> Result<RaySum> {
    let e = C::from_polar(1.0, ray_angle);
    for pole in p.genuine_poles() {
        let t = (pole * e.conj()).re.max(0.0);
        if (pole - e * t).norm() < margin * (1.0 + pole.norm()) {
            return Err(Error::PoleOnRay { pole });
        }
    }
    laplace_sum(|s| p.eval(s), lambda, ray_angle)
}

/// Borel–Padé sum of an asymptotic series along `ray` (default: the direction
/// of fastest decay, `π − arg λ`). If a pole sits on the default ray the sum
/// is taken on the nearer of two laterally tilted rays.
pub fn resum(a: &AsymptoticSeries, lambda: C, l: usize, m: usize, ray: Option<f64>) -> Result<RaySum> {
    let b = to_borel(a);
    let p = pade(&b, l, m)?;
    let margin = 1e-3;
    if let Some(theta) = ray {
        return laplace_pade(&p, lambda, theta, margin);
    }
    let theta = std::f64::consts::PI - lambda.arg();
    match laplace_pade(&p, lambda, theta, margin) {
        Err(Error::PoleOnRay { .. }) => laplace_pade(&p, lambda, theta - 0.15, margin)
            .or_else(|_| laplace_pade(&p, lambda, theta + 0.15, margin)),
        r => r,
    }
}

/// Term-by-term Laplace transform of the truncated Borel series.
pub fn laplace_truncated(b: &BorelSeries, lambda: C) -> C {
    b.coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| c * (-1.0f64).powi(n as i32) * factorial(n) / (2.0 * lambda).powi(n as i32))
        .sum()
}

/// Contour from `∞e^{iθ_a}` to `R e^{iθ_a}`, along `|s| = R` to `R e^{iθ_b}`
/// and out to `∞e^{iθ_b}`; the difference of the two ray sums across the cut
/// structure enclosed between them.
pub fn laplace_cut<F: Fn(C) -> C>(f: F, lambda: C, theta_a: f64, theta_b: f64, radius: f64) -> Result<RaySum> {
    let (va, ea) = ray_integral(&f, lambda, theta_a, radius)?;
    let (vb, eb) = ray_integral(&f, lambda, theta_b, radius)?;
    let sweep = theta_b - theta_a;
    let arc = |u: f64| {
        let th = theta_a + sweep * u;
        let s = C::from_polar(radius, th);
        2.0 * lambda * (2.0 * lambda * s).exp() * f(s) * s * C::i() * sweep
    };
    let (vc, ec) = quad::integrate(arc, 0.0, 1.0, 1e-15, 1e-13)?;
    Ok(RaySum { lambda, ray: theta_a, value: va + vc - vb, err: ea + eb + ec })
}

/// Convolution of Borel functions in the factorial basis:
/// `(f∗g)_k = Σ f_i g_{k−i} i!(k−i)!/k!`.
pub fn convolve(f: &BorelSeries, g: &BorelSeries) -> BorelSeries {
    let n = f.coeffs.len().min(g.coeffs.len());
    let mut row = vec![1.0f64];
    let mut coeffs = Vec::with_capacity(n);
    for k in 0..n {
        if k > 0 {
            let mut next = vec![1.0; k + 1];
            for i in 1..k {
                next[i] = row[i - 1] + row[i];
            }
            row = next;
        }
        coeffs.push((0..=k).map(|i| f.coeffs[i] * g.coeffs[k - i] / row[i]).sum());
    }
    let radius_estimate = radius_estimate(&coeffs);
    BorelSeries { sigma: f.sigma, coeffs, radius_estimate, at: f.at }
}

#[cfg(test)]
mod tests;
