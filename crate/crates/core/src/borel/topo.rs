//! Leading terms Φ̃⁽⁰⁾ and Φ̃⁽¹⁾ of the topological expansion of the Borel
//! function in the ξ-variable.

use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::fps::Jet;
use crate::path::BranchedRoot;
use crate::potential::Characteristic;
use crate::quad::gauss_legendre;
use crate::series::{chi_series_on, Anchor};

const JET_LEN: usize = 40;
const CONTOUR_REACH: f64 = 0.6;

/// `I₀(2√z) = Σ z^k/(k!)²`.
pub fn bessel_i0_sq(z: C) -> C {
    let mut term = C::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..200 {
        term *= z / ((k * k) as f64);
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// Local data at `x` in the ξ-variable of sector 1.
#[derive(Clone, Debug)]
pub struct TopoContext {
    pub xi: C,
    /// `Ω(ξ) = ∫_{∞₁}^{ξ} ω̃`.
    pub omega_big: C,
    /// `ω̃(ξ + u)` as a series in `u`.
    pub omega_tilde: Jet,
    /// `Ω(ξ + u) − Ω(ξ)` as a series in `u`.
    pub omega_shift: Jet,
}

impl TopoContext {
    /// Builds the context from a canonical path of sector 1 ending at `x`.
    pub fn new(branched: &BranchedRoot, sigma1: f64, xi: C) -> Result<Self> {
        let q: &Characteristic = &branched.q;
        let x = branched.path.end();
        let sq = branched.end_sample().sqrt_q();
        let c1 = chi_series_on(branched, sigma1, 1, Anchor::Sector(1))?.coeffs[1];
        let omega_big = -sigma1 * c1;

        let qj = q.jet(x, JET_LEN + 2);
        let q1 = qj.deriv();
        let q2 = q1.deriv();
        let qv = qj.clone().truncate(JET_LEN);
        let q1 = q1.truncate(JET_LEN);
        let inv = qv.recip()?;
        let inv2 = inv.mul(&inv);
        let wt = q2.mul(&inv2).scale(C::new(0.25, 0.0)).sub(&q1.mul(&q1).mul(&inv2).mul(&inv).scale(C::new(5.0 / 16.0, 0.0)));
        let dxi = qv.sqrt_with(sq)?.scale(C::new(-sigma1, 0.0)).integ(C::new(0.0, 0.0)).truncate(JET_LEN);
        let h = dxi.revert()?;
        let omega_tilde = wt.compose(&h);
        let omega_shift = omega_tilde.integ(C::new(0.0, 0.0)).truncate(JET_LEN);
        Ok(TopoContext { xi, omega_big, omega_tilde, omega_shift })
    }

    fn phi0_at(&self, u: C, s: C) -> C {
        bessel_i0_sq(s * (self.omega_big + self.omega_shift.eval(u)))
    }
}

/// Φ̃⁽⁰⁾ (order 0) or Φ̃⁽¹⁾ (order 1) at `s`, with straight η-contours from 0.
pub fn phi_topological(ctx: &TopoContext, s: C, order: u8) -> Result<C> {
    match order {
        0 => Ok(bessel_i0_sq(s * ctx.omega_big)),
        1 => {
            if s.norm() > CONTOUR_REACH * ctx.xi.norm() {
                return Err(Error::ContourSingularity { point: ctx.xi });
            }
            let (gx, gw) = gauss_legendre(24);
            let mut acc = C::new(0.0, 0.0);
            for (ai, wa) in gx.iter().zip(&gw) {
                let a = 0.5 * (ai + 1.0);
                let eta = s * a;
                for (bi, wb) in gx.iter().zip(&gw) {
                    let b = 0.5 * (bi + 1.0);
                    let etap = eta * b;
                    let u = -etap;
                    let wt = ctx.omega_tilde.eval(u);
                    let phi0 = ctx.phi0_at(u, eta - etap);
                    let d_omega = -ctx.omega_shift.eval(u);
                    let k = bessel_i0_sq(-(s - eta) * d_omega);
                    acc += wt * phi0 * k * (0.25 * wa * wb) * eta;
                }
            }
            Ok(-acc * s)
        }
        _ => Err(Error::Invalid("only orders 0 and 1 are available".into())),
    }
}
