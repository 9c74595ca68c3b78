//! Polynomial potentials, the characteristic `q = 2V - 2E`, turning points
//! and the local quantities entering the WKB formulas.

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fps::Jet;

mod parse;
pub use parse::parse_polynomial;

/// Complex polynomial with ascending coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    #[serde(with = "crate::cjson::vec")]
    pub coeffs: Vec<C>,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Polynomial {
    /// Builds a polynomial, trimming trailing zero coefficients.
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(C::new(0.0, 0.0));
        }
        Polynomial { coeffs }
    }

    pub fn real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C::new(c, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> C {
        *self.coeffs.last().unwrap()
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Compensated Horner evaluation.
    pub fn eval(&self, x: C) -> C {
        let n = self.coeffs.len();
        let mut re = self.coeffs[n - 1].re;
        let mut im = self.coeffs[n - 1].im;
        let mut cre = 0.0;
        let mut cim = 0.0;
        for a in self.coeffs[..n - 1].iter().rev() {
            let (p1, e1) = two_prod(re, x.re);
            let (p2, e2) = two_prod(-im, x.im);
            let (p3, e3) = two_prod(re, x.im);
            let (p4, e4) = two_prod(im, x.re);
            let (s1, e5) = two_sum(p1, p2);
            let (s2, e6) = two_sum(p3, p4);
            let (r, e7) = two_sum(s1, a.re);
            let (i, e8) = two_sum(s2, a.im);
            let err_re = e1 + e2 + e5 + e7;
            let err_im = e3 + e4 + e6 + e8;
            let ncre = cre * x.re - cim * x.im + err_re;
            let ncim = cre * x.im + cim * x.re + err_im;
            cre = ncre;
            cim = ncim;
            re = r;
            im = i;
        }
        C::new(re + cre, im + cim)
    }

    /// Value and first two derivatives.
    pub fn eval_d2(&self, x: C) -> (C, C, C) {
        let mut p = C::new(0.0, 0.0);
        let mut d1 = C::new(0.0, 0.0);
        let mut d2 = C::new(0.0, 0.0);
        for a in self.coeffs.iter().rev() {
            d2 = d2 * x + d1 * 2.0;
            d1 = d1 * x + p;
            p = p * x + a;
        }
        (self.eval(x), d1, d2)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::new(vec![C::new(0.0, 0.0)]);
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    /// Taylor jet of the polynomial about `x0` with `len` terms.
    pub fn jet(&self, x0: C, len: usize) -> Jet {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for k in 0..n {
            for j in (k..n - 1).rev() {
                let t = c[j + 1] * x0;
                c[j] += t;
            }
        }
        c.resize(len.max(n), C::new(0.0, 0.0));
        Jet(c).truncate(len)
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &Vec<C>, i: usize| v.get(i).copied().unwrap_or_default();
        Polynomial::new((0..n).map(|i| get(&self.coeffs, i) + get(&o.coeffs, i)).collect())
    }

    pub fn scale(&self, c: C) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        let mut out = vec![C::new(0.0, 0.0); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    /// Expression text that `parse_polynomial` maps back to the same coefficients.
    pub fn to_expr(&self) -> String {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.norm() == 0.0 && self.coeffs.len() > 1 {
                continue;
            }
            let coef = format!("({:?}+{:?}*i)", c.re, c.im);
            terms.push(match k {
                0 => coef,
                1 => format!("{coef}*x"),
                _ => format!("{coef}*x^{k}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// `q(x) = 2V(x) - 2E` together with the energy that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Characteristic {
    pub base: Polynomial,
    #[serde(with = "crate::cjson::one")]
    pub energy: C,
    #[serde(skip)]
    d1: Option<Polynomial>,
}

impl Characteristic {
    /// Wraps a q-polynomial directly (energy recorded as zero).
    pub fn from_q(q: Polynomial) -> Self {
        Characteristic { base: q, energy: C::new(0.0, 0.0), d1: None }
    }

    pub fn degree(&self) -> usize {
        self.base.degree()
    }

    pub fn eval(&self, x: C) -> C {
        self.base.eval(x)
    }

    pub fn eval_d2(&self, x: C) -> (C, C, C) {
        self.base.eval_d2(x)
    }

    pub fn derivative(&self) -> Polynomial {
        self.d1.clone().unwrap_or_else(|| self.base.derivative())
    }

    pub fn jet(&self, x0: C, len: usize) -> Jet {
        self.base.jet(x0, len)
    }

    /// Magnitude scale used for proximity thresholds.
    pub fn scale(&self) -> f64 {
        self.base.max_coeff()
    }
}

pub fn characteristic(v: &Polynomial, energy: C) -> Result<Characteristic> {
    if v.degree() < 1 {
        return Err(Error::Invalid("potential must have degree at least 1".into()));
    }
    let mut q = v.scale(C::new(2.0, 0.0));
    q.coeffs[0] -= energy * 2.0;
    let d1 = Some(q.derivative());
    Ok(Characteristic { base: q, energy, d1 })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TurningPoint {
    #[serde(with = "crate::cjson::one")]
    pub location: C,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TurningPointSet {
    pub points: Vec<TurningPoint>,
}

impl TurningPointSet {
    pub fn locations(&self) -> Vec<C> {
        self.points.iter().map(|p| p.location).collect()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity).sum()
    }

    /// `leading · Π (x − x_i)^{m_i}` expanded.
    pub fn reconstruct(&self, leading: C) -> Polynomial {
        let mut p = Polynomial::new(vec![leading]);
        for tp in &self.points {
            for _ in 0..tp.multiplicity {
                p = p.mul(&Polynomial::new(vec![-tp.location, C::new(1.0, 0.0)]));
            }
        }
        p
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for a in &self.points {
            for b in &self.points {
                d = d.max((a.location - b.location).norm());
            }
        }
        d
    }
}

pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

fn aberth(p: &Polynomial, max_iter: usize) -> Option<Vec<C>> {
    let n = p.degree();
    let monic: Vec<C> = p.coeffs.iter().map(|c| c / p.leading()).collect();
    let monic = Polynomial::new(monic);
    let dp = monic.derivative();
    let bound = 1.0 + monic.coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let r0 = monic.coeffs[0].norm().powf(1.0 / n as f64).clamp(1e-3, bound);
    let mut z: Vec<C> = (0..n)
        .map(|k| C::from_polar(r0, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..max_iter {
        let mut done = true;
        for i in 0..n {
            let pv = monic.eval(z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dp.eval(z[i]);
            let mut s = C::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            let w = ratio / (C::new(1.0, 0.0) - ratio * s);
            if !w.is_finite() {
                return None;
            }
            z[i] -= w;
            if w.norm() > 4.0 * f64::EPSILON * (1.0 + z[i].norm()) {
                done = false;
            }
        }
        if done {
            return Some(z);
        }
    }
    None
}

fn companion_roots(p: &Polynomial) -> Option<Vec<C>> {
    let n = p.degree();
    let lead = p.leading();
    let mut m = DMatrix::<C>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = C::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -p.coeffs[i] / lead;
    }
    let ev = m.schur().eigenvalues()?;
    Some(ev.iter().copied().collect())
}

fn newton_polish(p: &Polynomial, dp: &Polynomial, mut z: C) -> C {
    for _ in 0..3 {
        let d = dp.eval(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = p.eval(z) / d;
        if !step.is_finite() || step.norm() > 1e-3 * (1.0 + z.norm()) {
            break;
        }
        z -= step;
    }
    z
}

/// All roots of a polynomial of degree ≥ 1, without clustering.
pub fn polynomial_roots(p: &Polynomial) -> Result<Vec<C>> {
    if p.degree() == 0 {
        return Ok(vec![]);
    }
    let raw = companion_roots(p)
        .or_else(|| aberth(p, 500))
        .ok_or(Error::RootsNotConverged { iterations: 500, residual: f64::NAN })?;
    let dp = p.derivative();
    Ok(raw.into_iter().map(|z| newton_polish(p, &dp, z)).collect())
}

/// Roots of `q` with multiplicities.
pub fn turning_points(q: &Characteristic, root_tol: f64) -> Result<TurningPointSet> {
    let p = &q.base;
    let n = p.degree();
    if n == 0 {
        return Err(Error::Invalid("characteristic is constant".into()));
    }
    let max_iter = 500;
    let raw = aberth(p, max_iter)
        .or_else(|| companion_roots(p))
        .ok_or(Error::RootsNotConverged { iterations: max_iter, residual: f64::NAN })?;
    let dp = p.derivative();
    let raw: Vec<C> = raw.into_iter().map(|z| newton_polish(p, &dp, z)).collect();

    let mut clusters: Vec<Vec<C>> = raw.iter().map(|&z| vec![z]).collect();
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let ci = centroid(&clusters[i]);
                let cj = centroid(&clusters[j]);
                let m = clusters[i].len() + clusters[j].len();
                let radius = 2.0 * root_tol.powf(1.0 / m as f64) * (1.0 + ci.norm());
                let d = (ci - cj).norm();
                if d < radius && best.is_none_or(|b| d / radius < b.2) {
                    best = Some((i, j, d / radius));
                }
            }
        }
        match best {
            Some((i, j, _)) => {
                let cj = clusters.remove(j);
                clusters[i].extend(cj);
            }
            None => break,
        }
    }
    let scale = p.max_coeff();
    let mut points = Vec::new();
    let mut worst: f64 = 0.0;
    for c in &clusters {
        let loc = centroid(c);
        let res = p.eval(loc).norm() / scale;
        worst = worst.max(res);
        points.push(TurningPoint { location: loc, multiplicity: c.len() });
    }
    if worst >= root_tol {
        return Err(Error::RootsNotConverged { iterations: max_iter, residual: worst });
    }
    points.sort_by(|a, b| {
        (a.location.re, a.location.im)
            .partial_cmp(&(b.location.re, b.location.im))
            .unwrap()
    });
    Ok(TurningPointSet { points })
}

fn centroid(v: &[C]) -> C {
    v.iter().sum::<C>() / v.len() as f64
}

/// ω = ¼ q''/q^{3/2} − (5/16) q'^2/q^{5/2} on the branch fixed by `sqrt_q`.
pub fn omega(q: &Characteristic, x: C, sqrt_q: C) -> Result<C> {
    let (v, d1, d2) = q.eval_d2(x);
    if v.norm() < 1e-13 * q.scale().max(1.0) {
        return Err(Error::TurningPointProximity { x });
    }
    Ok(0.25 * d2 / (v * sqrt_q) - 0.3125 * d1 * d1 / (v * v * sqrt_q))
}

/// ω̃ = ω q^{-1/2}; independent of the branch.
pub fn omega_tilde(q: &Characteristic, x: C) -> Result<C> {
    let (v, d1, d2) = q.eval_d2(x);
    if v.norm() < 1e-13 * q.scale().max(1.0) {
        return Err(Error::TurningPointProximity { x });
    }
    Ok(0.25 * d2 / (v * v) - 0.3125 * d1 * d1 / (v * v * v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn characteristic_examples() {
        let v = parse_polynomial("x^2/2").unwrap();
        let q = characteristic(&v, c(0.5, 0.0)).unwrap();
        assert_eq!(q.base.coeffs, vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let v = parse_polynomial("x^4").unwrap();
        let q = characteristic(&v, c(0.0, 1.0)).unwrap();
        assert_eq!(q.base.coeffs[0], c(0.0, -2.0));
        assert_eq!(q.base.coeffs[4], c(2.0, 0.0));
    }

    #[test]
    fn roots_of_small_polynomials() {
        let q = Characteristic::from_q(Polynomial::real(&[0.0, -1.0, 0.0, 1.0]));
        let tp = turning_points(&q, DEFAULT_ROOT_TOL).unwrap();
        let locs = tp.locations();
        assert_eq!(locs.len(), 3);
        for (z, want) in locs.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((z - c(want, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn double_root_is_clustered() {
        // (x-1)^2 (x+2)
        let q = Characteristic::from_q(Polynomial::real(&[2.0, -3.0, 0.0, 1.0]));
        let tp = turning_points(&q, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(tp.points.len(), 2);
        let double = tp.points.iter().find(|p| p.multiplicity == 2).unwrap();
        assert!((double.location - c(1.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn omega_values() {
        let q = Characteristic::from_q(Polynomial::real(&[0.0, 1.0]));
        let w = omega(&q, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((w - c(-5.0 / 16.0, 0.0)).norm() < 1e-15);
        let w = omega(&q, c(4.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!((w - c(-5.0 / 512.0, 0.0)).norm() < 1e-16);
        let k = Characteristic::from_q(Polynomial::real(&[3.0]));
        assert_eq!(omega(&k, c(0.3, 0.1), c(3f64.sqrt(), 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn jet_matches_derivatives() {
        let p = Polynomial::real(&[1.0, -2.0, 0.5, 3.0]);
        let x0 = c(0.3, -0.7);
        let j = p.jet(x0, 6);
        let (v, d1, d2) = p.eval_d2(x0);
        assert!((j.0[0] - v).norm() < 1e-14);
        assert!((j.0[1] - d1).norm() < 1e-14);
        assert!((j.0[2] - d2 / 2.0).norm() < 1e-14);
        assert!((j.0[3] - c(3.0, 0.0)).norm() < 1e-14);
        assert_eq!(j.0[5], c(0.0, 0.0));
    }
}
