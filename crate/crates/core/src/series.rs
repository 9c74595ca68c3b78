//! Semiclassical coefficients along paths, iterated integrals, series
//! algebra and the exponential (ρ±) representation.
//!
//! Coefficients `c_n` multiply `(σ/(2λ))^n`. They satisfy
//! `c_n′ = ω c_{n−1} + ½q′q^{−3/2} c′_{n−1} − q^{−1/2} c″_{n−1}`,
//! which is transported pointwise as `c_n′(y) = Σ_{p<n} a_{n−p}(y) c_p(y)`
//! with `a_k(y) = ∂_x I_k(x, y)|_{x=y}` taken from local Taylor jets.

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fps::Jet;
use crate::path::{BranchedRoot, Segment};
use crate::potential::Characteristic;
use crate::stokes::StokesGraph;

mod grid;
pub use grid::PathGrid;

pub const N_MAX: usize = 24;
pub const CHEB_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Anchor {
    Sector(usize),
    Point(#[serde(with = "crate::cjson::one")] C),
    Free,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticSeries {
    pub sigma: f64,
    #[serde(with = "crate::cjson::vec")]
    pub coeffs: Vec<C>,
    pub order: usize,
    #[serde(with = "crate::cjson::one")]
    pub at: C,
    #[serde(skip, default = "free")]
    pub anchor: Anchor,
}

fn free() -> Anchor {
    Anchor::Free
}

impl AsymptoticSeries {
    pub fn new(sigma: f64, coeffs: Vec<C>, at: C, anchor: Anchor) -> Self {
        let order = coeffs.len().saturating_sub(1);
        AsymptoticSeries { sigma, coeffs, order, at, anchor }
    }

    pub fn unit(sigma: f64, order: usize) -> Self {
        let mut c = vec![C::new(0.0, 0.0); order + 1];
        c[0] = C::new(1.0, 0.0);
        Self::new(sigma, c, C::new(0.0, 0.0), Anchor::Free)
    }

    /// Expansion variable `t = σ/(2λ)`.
    pub fn t(&self, lambda: C) -> C {
        self.sigma / (2.0 * lambda)
    }

    /// Truncated sum at `λ`.
    pub fn eval(&self, lambda: C) -> C {
        let t = self.t(lambda);
        self.coeffs.iter().rev().fold(C::new(0.0, 0.0), |acc, c| acc * t + c)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut s = self.clone();
        s.coeffs.truncate(order + 1);
        s.order = s.coeffs.len() - 1;
        s
    }

    /// The series in `t ↦ −t`.
    pub fn reflect(&self) -> Self {
        let mut s = self.clone();
        for (n, c) in s.coeffs.iter_mut().enumerate() {
            if n % 2 == 1 {
                *c = -*c;
            }
        }
        s
    }

    fn jet(&self) -> Jet {
        Jet(self.coeffs.clone())
    }
}

fn check_sigma(a: &AsymptoticSeries, b: &AsymptoticSeries) -> Result<()> {
    if a.sigma != b.sigma {
        return Err(Error::Invalid("series with different signatures".into()));
    }
    Ok(())
}

pub fn series_mul(a: &AsymptoticSeries, b: &AsymptoticSeries) -> Result<AsymptoticSeries> {
    check_sigma(a, b)?;
    Ok(AsymptoticSeries::new(a.sigma, a.jet().mul(&b.jet()).0, a.at, a.anchor))
}

pub fn series_reciprocal(a: &AsymptoticSeries) -> Result<AsymptoticSeries> {
    Ok(AsymptoticSeries::new(a.sigma, a.jet().recip()?.0, a.at, a.anchor))
}

pub fn series_exp(a: &AsymptoticSeries) -> AsymptoticSeries {
    AsymptoticSeries::new(a.sigma, a.jet().exp().0, a.at, a.anchor)
}

/// Local jets of `ω`, `½q′q^{−3/2}` and `−q^{−1/2}` at `y`, of length `len`.
fn coefficient_jets(q: &Characteristic, y: C, sqrt_q: C, len: usize) -> Result<(Jet, Jet, Jet)> {
    let qj = q.jet(y, len + 2);
    let q1 = qj.deriv();
    let q2 = q1.deriv();
    let qv = qj.truncate(len);
    let q1 = q1.truncate(len);
    let s = qv.sqrt_with(sqrt_q)?;
    let rq = qv.mul(&s).recip()?;
    let gamma = s.recip()?.scale(C::new(-1.0, 0.0));
    let beta = q1.mul(&rq).scale(C::new(0.5, 0.0));
    let alpha = q2
        .mul(&rq)
        .scale(C::new(0.25, 0.0))
        .sub(&q1.mul(&q1).mul(&rq).mul(&qv.recip()?).scale(C::new(5.0 / 16.0, 0.0)));
    Ok((alpha, beta, gamma))
}

/// `a_k(y)` for `k = 0..=n` (`a_0 = 0`).
pub fn transport_kernel(q: &Characteristic, y: C, sqrt_q: C, n: usize) -> Result<Vec<C>> {
    let len = n + 3;
    let (alpha, beta, gamma) = coefficient_jets(q, y, sqrt_q, len)?;
    let mut a = vec![C::new(0.0, 0.0); n + 1];
    let mut i_prev = Jet::constant(C::new(1.0, 0.0), len);
    for ak in a.iter_mut().skip(1) {
        let d1 = i_prev.deriv();
        let d2 = d1.deriv();
        let m = d2.len();
        let f = alpha
            .clone()
            .truncate(m)
            .mul(&i_prev.clone().truncate(m))
            .add(&beta.clone().truncate(m).mul(&d1.truncate(m)))
            .add(&gamma.clone().truncate(m).mul(&d2));
        *ak = f.0[0];
        i_prev = f.integ(C::new(0.0, 0.0));
    }
    Ok(a)
}

/// Solves `c_n′ = Σ_{p<n} a_{n−p} c_p` along the branched path from the
/// given start values; returns the coefficients at the path end.
pub fn transport(branched: &BranchedRoot, init: &[C]) -> Result<Vec<C>> {
    let n = init.len() - 1;
    if n > N_MAX {
        return Err(Error::Invalid(format!("order {n} exceeds N_max = {N_MAX}")));
    }
    let mut grid = PathGrid::new(branched)?;
    for _round in 0..8 {
        let kernels: Vec<Vec<C>> = grid
            .nodes
            .iter()
            .map(|nd| transport_kernel(&branched.q, nd.x, nd.sqrt_q, n))
            .collect::<Result<_>>()?;
        let mut c: Vec<Vec<C>> = vec![init.to_vec(); grid.nodes.len()];
        let mut end = init.to_vec();
        let mut bad = vec![false; grid.panels.len()];
        for order in 1..=n {
            let d: Vec<C> = (0..grid.nodes.len())
                .map(|i| (0..order).map(|p| kernels[i][order - p] * c[i][p]).sum())
                .collect();
            let cum = grid.cumulative(&d, init[order]);
            for (i, v) in cum.values.iter().enumerate() {
                c[i][order] = *v;
            }
            end[order] = cum.end;
            for (b, f) in bad.iter_mut().zip(&cum.failing) {
                *b |= *f;
            }
        }
        if !bad.iter().any(|b| *b) {
            return Ok(end);
        }
        grid = grid.refine(branched, &bad)?;
    }
    Err(Error::SpectralResolution { tail: grid.last_tail })
}

/// Coefficients `c_0..c_N` of the fundamental χ-factor of a sector at the end
/// of a branched path that starts with an inward ray from the sector anchor.
pub fn chi_series_on(branched: &BranchedRoot, sigma: f64, order: usize, anchor: Anchor) -> Result<AsymptoticSeries> {
    if !matches!(branched.path.segments.first(), Some(Segment::Ray { inward: true, .. })) {
        return Err(Error::Invalid("fundamental series need a path from infinity".into()));
    }
    let mut init = vec![C::new(0.0, 0.0); order + 1];
    init[0] = C::new(1.0, 0.0);
    let coeffs = transport(branched, &init)?;
    Ok(AsymptoticSeries::new(sigma, coeffs, branched.path.end(), anchor))
}

pub fn chi_series(graph: &StokesGraph, k: usize, x: C, order: usize) -> Result<AsymptoticSeries> {
    let cp = graph.canonical_path(k, x).ok_or(Error::NoCanonicalPath { sector: k, x })?;
    let sector = graph.sector(k);
    chi_series_on(&cp.branched, sector.signature, order, Anchor::Sector(sector.index))
}

/// `I_0..I_N` of `(x, x0)` along a branched path from `x0` to `x`.
pub fn iterated_i(branched: &BranchedRoot, order: usize) -> Result<Vec<C>> {
    let mut init = vec![C::new(0.0, 0.0); order + 1];
    init[0] = C::new(1.0, 0.0);
    transport(branched, &init)
}

/// Translation identity: coefficients at `x` from those at `x0` and `I_k`.
pub fn translate(at_x0: &[C], i: &[C]) -> Vec<C> {
    (0..at_x0.len().min(i.len())).map(|n| (0..=n).map(|p| at_x0[p] * i[n - p]).sum()).collect()
}

/// Per-order residual of the translation identity against direct values at
/// `x`, scaled by `Σ_p |c_p(x₀) I_{n−p}|` (the sum cancels heavily near
/// turning points).
pub fn translation_residuals(at_x0: &[C], i: &[C], at_x: &[C]) -> Vec<f64> {
    let t = translate(at_x0, i);
    t.iter()
        .zip(at_x)
        .enumerate()
        .map(|(n, (a, b))| {
            let scale: f64 = (0..=n).map(|p| (at_x0[p] * i[n - p]).norm()).sum();
            (a - b).norm() / scale.max(f64::MIN_POSITIVE)
        })
        .collect()
}

mod rho;
pub use rho::{rho_pm, rho_plus_residue, riccati_values, ExponentialRep};

#[cfg(test)]
mod tests;
