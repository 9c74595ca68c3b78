//! Exponential representation from the Riccati form of the χ-ODE.
//!
//! With `Y = λS_0 + S_1 + λ^{−1}S_2 + …`, `S_0 = √q` on the path branch,
//! `χ′/χ = Σ_{k≥2} (σ/λ)^{k−1} S_k`; even `k` give ρ⁻, odd `k` give ρ⁺.

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use super::{AsymptoticSeries, PathGrid, N_MAX};
use crate::error::{Error, Result};
use crate::fps::Jet;
use crate::path::{BranchedRoot, Segment};
use crate::potential::Characteristic;

const PAR_TOL: f64 = 1e-10;

/// `S_0..=S_kmax` at `y`.
pub fn riccati_values(q: &Characteristic, y: C, sqrt_q: C, kmax: usize) -> Result<Vec<C>> {
    let len = kmax + 2;
    let qj = q.jet(y, len + 1);
    let q1 = qj.deriv();
    let qv = qj.truncate(len);
    let mut s: Vec<Jet> = vec![qv.sqrt_with(sqrt_q)?];
    s.push(q1.mul(&qv.recip()?).scale(C::new(-0.25, 0.0)));
    let inv2s0 = s[0].scale(C::new(2.0, 0.0)).recip()?;
    for k in 2..=kmax {
        let mut acc = s[k - 1].deriv();
        let m = acc.len();
        for j in 1..k {
            acc = acc.add(&s[j].clone().truncate(m).mul(&s[k - j].clone().truncate(m)));
        }
        s.push(acc.mul(&inv2s0.clone().truncate(m)).scale(C::new(-1.0, 0.0)));
    }
    Ok(s.iter().take(kmax + 1).map(|j| j.0[0]).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentialRep {
    /// ρ⁻_{2n}(x), coefficients of `λ^{−(2n+1)}`.
    #[serde(with = "crate::cjson::vec")]
    pub rho_minus: Vec<C>,
    /// ρ⁺_{2n+1}(x), coefficients of `λ^{−(2n+2)}`.
    #[serde(with = "crate::cjson::vec")]
    pub rho_plus: Vec<C>,
    /// `∫_{∞}^{x} ρ⁻_{2n}`.
    #[serde(with = "crate::cjson::vec")]
    pub int_minus: Vec<C>,
    /// `∫_{∞}^{x} ρ⁺_{2n+1}`.
    #[serde(with = "crate::cjson::vec")]
    pub int_plus: Vec<C>,
    pub sigma: f64,
    #[serde(with = "crate::cjson::one")]
    pub at_point: C,
}

impl ExponentialRep {
    /// `∫_{∞}^{x} S_k` for `k ≥ 2`.
    fn integral(&self, k: usize) -> C {
        if k % 2 == 0 {
            self.int_minus[(k - 2) / 2]
        } else {
            self.int_plus[(k - 3) / 2]
        }
    }

    fn max_order(&self) -> usize {
        self.int_minus.len() + self.int_plus.len()
    }

    /// `log χ` as a series in `t = σ/(2λ)`.
    pub fn log_series(&self, order: usize) -> AsymptoticSeries {
        let order = order.min(self.max_order());
        let mut c = vec![C::new(0.0, 0.0); order + 1];
        for (m, cm) in c.iter_mut().enumerate().skip(1) {
            *cm = self.integral(m + 1) * 2f64.powi(m as i32);
        }
        AsymptoticSeries::new(self.sigma, c, self.at_point, super::Anchor::Free)
    }

    pub fn chi_series(&self, order: usize) -> AsymptoticSeries {
        super::series_exp(&self.log_series(order))
    }

    /// `exp(2∫_{∞}^{x} ρ⁺)` as a series in `t`.
    pub fn c_series(&self, order: usize) -> AsymptoticSeries {
        let mut l = self.log_series(order);
        for (m, c) in l.coeffs.iter_mut().enumerate() {
            *c = if m % 2 == 0 { *c * 2.0 } else { C::new(0.0, 0.0) };
        }
        super::series_exp(&l)
    }
}

/// Exponential representation at the end of a path from infinity.
pub fn rho_pm(branched: &BranchedRoot, sigma: f64, order: usize) -> Result<ExponentialRep> {
    if !matches!(branched.path.segments.first(), Some(Segment::Ray { inward: true, .. })) {
        return Err(Error::Invalid("exponential representation needs a path from infinity".into()));
    }
    let order = order.min(N_MAX);
    let kmax = order + 1;
    let q = &branched.q;
    let x = branched.path.end();
    let sx = branched.end_sample().sqrt_q();
    let here = riccati_values(q, x, sx, kmax)?;
    let flipped = riccati_values(q, x, -sx, kmax)?;
    for k in 0..=kmax {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let d = (flipped[k] - here[k] * sign).norm();
        if d > PAR_TOL * (1.0 + here[k].norm()) {
            return Err(Error::Parity { size: d });
        }
    }

    let mut grid = PathGrid::new(branched)?;
    let mut ints = vec![C::new(0.0, 0.0); kmax + 1];
    for _ in 0..8 {
        let vals: Vec<Vec<C>> = grid
            .nodes
            .iter()
            .map(|nd| riccati_values(q, nd.x, nd.sqrt_q, kmax))
            .collect::<Result<_>>()?;
        let mut bad = vec![false; grid.panels.len()];
        for k in 2..=kmax {
            let f: Vec<C> = vals.iter().map(|v| v[k]).collect();
            let cum = grid.cumulative(&f, C::new(0.0, 0.0));
            ints[k] = cum.end;
            for (b, f) in bad.iter_mut().zip(&cum.failing) {
                *b |= *f;
            }
        }
        if !bad.iter().any(|b| *b) {
            let pick = |start: usize, src: &[C]| (start..=kmax).step_by(2).map(|k| src[k]).collect::<Vec<C>>();
            return Ok(ExponentialRep {
                rho_minus: pick(2, &here),
                rho_plus: pick(3, &here),
                int_minus: pick(2, &ints),
                int_plus: pick(3, &ints),
                sigma,
                at_point: x,
            });
        }
        grid = grid.refine(branched, &bad)?;
    }
    Err(Error::SpectralResolution { tail: grid.last_tail })
}

/// `∮ ρ⁺_{2n+1}` over the circle `|y − center| = radius` (trapezoid rule).
pub fn rho_plus_residue(q: &Characteristic, center: C, radius: f64, n: usize, points: usize) -> Result<C> {
    let k = 2 * n + 3;
    let mut acc = C::new(0.0, 0.0);
    for j in 0..points {
        let th = 2.0 * std::f64::consts::PI * j as f64 / points as f64;
        let e = C::from_polar(1.0, th);
        let y = center + e * radius;
        let s = riccati_values(q, y, q.eval(y).sqrt(), k)?;
        acc += s[k] * C::i() * e * radius;
    }
    Ok(acc * (2.0 * std::f64::consts::PI / points as f64))
}
