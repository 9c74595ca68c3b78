//! Taylor-series stepping for `y″ = A(x)y + B(x)y′` along chords in the
//! complex plane, with `√q` continued through the coefficient jets.

use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::fps::Jet;
use crate::path::nearest_fourth_root;
use crate::potential::Characteristic;

pub const ORDER: usize = 32;
/// Bound on `|rate|·h` so the truncated exponential stays stable.
const STIFF_CAP: f64 = 8.0;
const STEP_FRACTION: f64 = 0.3;

#[derive(Clone, Copy, Debug)]
pub enum System {
    /// `q^{-1/4}(q^{-1/4}χ)″ + 2σλχ′ = 0`.
    Chi { sigma: f64, lambda: C },
    /// `ψ″ = λ²qψ`.
    Schrodinger { lambda: C },
}

#[derive(Clone, Copy, Debug)]
pub struct State {
    pub x: C,
    pub y: C,
    pub dy: C,
    /// `q^{1/4}` on the continued branch (unused for the Schrödinger form).
    pub fourth_root: C,
    pub arc: f64,
}

/// One accepted step: the local series of `y` around `x`.
#[derive(Clone, Debug)]
pub struct Step {
    pub x: C,
    pub h: f64,
    pub coeffs: Vec<C>,
}

impl Step {
    /// `(y, y′, y″)` at `z`.
    pub fn eval(&self, z: C) -> (C, C, C) {
        let d = z - self.x;
        let mut y = C::new(0.0, 0.0);
        let mut dy = C::new(0.0, 0.0);
        let mut d2 = C::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            y = y * d + c;
            if k >= 1 {
                dy = dy * d + c * k as f64;
            }
            if k >= 2 {
                d2 = d2 * d + c * (k * (k - 1)) as f64;
            }
        }
        (y, dy, d2)
    }
}

fn jets(q: &Characteristic, sys: System, x: C, fourth_root: C, len: usize) -> Result<(Jet, Jet, Option<Jet>)> {
    let qj = q.jet(x, len + 2);
    match sys {
        System::Chi { sigma, lambda } => {
            let r = qj.clone().truncate(len).pow_with(0.25, fourth_root)?;
            let s = r.mul(&r);
            let rq = qj.recip()?;
            let q1 = qj.deriv();
            let q2 = q1.deriv();
            let l1 = q1.mul(&rq);
            let a = q2
                .mul(&rq)
                .scale(C::new(0.25, 0.0))
                .sub(&l1.mul(&l1).scale(C::new(5.0 / 16.0, 0.0)));
            let b = l1.scale(C::new(0.5, 0.0)).sub(&s.scale(2.0 * sigma * lambda));
            Ok((a.truncate(len), b.truncate(len), Some(r)))
        }
        System::Schrodinger { lambda } => {
            let a = qj.scale(lambda * lambda).truncate(len);
            Ok((a, Jet::zeros(len), None))
        }
    }
}

fn series(a: &Jet, b: &Jet, y: C, dy: C, p: usize) -> Vec<C> {
    let mut c = vec![C::new(0.0, 0.0); p + 1];
    c[0] = y;
    c[1] = dy;
    for k in 0..p - 1 {
        let mut s = C::new(0.0, 0.0);
        for j in 0..=k {
            s += a.0[j] * c[k - j] + b.0[j] * c[k - j + 1] * (k - j + 1) as f64;
        }
        c[k + 2] = s / ((k + 1) * (k + 2)) as f64;
    }
    c
}

pub struct Stepper<'a> {
    pub q: &'a Characteristic,
    pub sys: System,
    /// Singular points of the coefficients.
    pub singular: Vec<C>,
    pub keep_steps: bool,
    pub steps: Vec<Step>,
}

impl<'a> Stepper<'a> {
    pub fn new(q: &'a Characteristic, sys: System, singular: Vec<C>) -> Self {
        Stepper { q, sys, singular, keep_steps: false, steps: vec![] }
    }

    fn dist(&self, x: C) -> f64 {
        self.singular.iter().map(|z| (z - x).norm()).fold(f64::INFINITY, f64::min)
    }

    /// Advances along the straight chord from the current state to `xb`.
    pub fn chord(&mut self, mut st: State, xb: C) -> Result<State> {
        let p = ORDER;
        let total = (xb - st.x).norm();
        if total == 0.0 {
            return Ok(st);
        }
        let e = (xb - st.x) / total;
        let x0 = st.x;
        let mut done = 0.0;
        while done < total {
            let (a, b, rj) = jets(self.q, self.sys, st.x, st.fourth_root, p - 1)?;
            let c = series(&a, &b, st.y, st.dy, p);
            let norm = st.y.norm() + st.dy.norm() + 1e-300;
            let r1 = (norm / c[p - 1].norm()).powf(1.0 / (p - 1) as f64);
            let r2 = (norm / c[p].norm()).powf(1.0 / p as f64);
            let mut h = STEP_FRACTION * r1.min(r2);
            let rate = match self.sys {
                System::Chi { .. } => b.0[0].norm(),
                System::Schrodinger { .. } => a.0[0].norm().sqrt(),
            };
            if rate > 0.0 {
                h = h.min(STIFF_CAP / rate);
            }
            h = h.min(0.5 * self.dist(st.x));
            let rem = total - done;
            if h >= rem {
                h = rem;
            }
            if !(h > 1e-13 * (1.0 + st.x.norm())) && h < rem {
                return Err(Error::StepUnderflow { at: st.arc });
            }
            let d = e * h;
            let xn = if h == rem { xb } else { x0 + e * (done + h) };
            let step = Step { x: st.x, h, coeffs: c };
            let (y, dy, _) = step.eval(xn);
            let fourth_root = match &rj {
                Some(r) => nearest_fourth_root(self.q.eval(xn), r.eval(d)),
                None => st.fourth_root,
            };
            if self.keep_steps {
                self.steps.push(step);
            }
            done += h;
            st = State { x: xn, y, dy, fourth_root, arc: st.arc + h };
        }
        Ok(st)
    }

    /// Runs through a sequence of vertices, returning the state at each.
    pub fn run(&mut self, start: State, vertices: &[C]) -> Result<Vec<State>> {
        let mut out = vec![start];
        let mut st = start;
        for &v in vertices {
            st = self.chord(st, v)?;
            out.push(st);
        }
        Ok(out)
    }
}
