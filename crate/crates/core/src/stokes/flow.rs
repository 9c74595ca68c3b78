//! Curve following in the x-plane along level sets and gradient lines of
//! ℜ(e^{iφ}W) with a continuously tracked branch of `q^{1/4}`.

use num_complex::Complex64 as C;

use super::chord_action;
use crate::error::Result;
use crate::potential::Characteristic;

const TILT: f64 = 0.2;

pub(crate) fn nearest_root(q: C, prev: C) -> C {
    let r = q.sqrt().sqrt();
    let mut best = r;
    let mut bd = (r - prev).norm_sqr();
    let mut c = r;
    for _ in 0..3 {
        c *= C::i();
        let d = (c - prev).norm_sqr();
        if d < bd {
            bd = d;
            best = c;
        }
    }
    best
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum FlowKind {
    /// ℜ(e^{iφ}W) held at `target`, heading initially along `toward`.
    Level { toward: C, target: f64 },
    /// Decreasing `sign·ℜ(e^{iφ}W)`.
    Descent { sign: f64 },
    /// Mostly along the level set, with a slight descent of `sign·ℜ(e^{iφ}W)`.
    Tilted { toward: C, sign: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum FlowStop {
    Infinity,
    TurningPoint(usize),
    Steps,
}

pub(crate) struct FlowResult {
    pub points: Vec<C>,
    pub stop: FlowStop,
    pub max_residual: f64,
}

pub(crate) struct Flow<'a> {
    pub q: &'a Characteristic,
    pub locs: Vec<C>,
    pub phase: f64,
    pub r_inf: f64,
    pub capture: f64,
    pub skip: Option<usize>,
}

impl Flow<'_> {
    fn dmin(&self, x: C) -> f64 {
        self.locs.iter().map(|l| (x - l).norm()).fold(f64::INFINITY, f64::min)
    }

    fn field(&self, x: C, r: C, kind: FlowKind, orient: f64) -> (C, C) {
        let r = nearest_root(self.q.eval(x), r);
        let f = C::from_polar(1.0, self.phase) * r * r;
        let g = f.conj() / f.norm();
        let u = match kind {
            FlowKind::Level { .. } => C::i() * g * orient,
            FlowKind::Descent { sign } => -g * sign,
            FlowKind::Tilted { sign, .. } => {
                let (sa, ca) = TILT.sin_cos();
                C::i() * g * (orient * ca) - g * (sign * sa)
            }
        };
        (u, r)
    }

    pub fn run(&self, kind: FlowKind, start: C, r0: C, w0: C, max_steps: usize) -> Result<FlowResult> {
        let rot = C::from_polar(1.0, self.phase);
        let mut x = start;
        let mut r = nearest_root(self.q.eval(x), r0);
        let mut w = w0;
        let orient = match kind {
            FlowKind::Level { toward, .. } | FlowKind::Tilted { toward, .. } => {
                let (u, _) = self.field(x, r, FlowKind::Level { toward, target: 0.0 }, 1.0);
                if (u * toward.conj()).re >= 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
            _ => 1.0,
        };
        let mut points = Vec::new();
        let mut max_residual: f64 = 0.0;
        for _ in 0..max_steps {
            let h = 0.1 * self.dmin(x);
            let (k1, r1) = self.field(x, r, kind, orient);
            let (k2, r2) = self.field(x + k1 * (0.5 * h), r1, kind, orient);
            let (k3, r3) = self.field(x + k2 * (0.5 * h), r2, kind, orient);
            let (k4, _) = self.field(x + k3 * h, r3, kind, orient);
            let mut xn = x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
            let (dw, mut rn) = chord_action(self.q, x, xn, r);
            let mut wn = w + dw;
            if let FlowKind::Level { target, .. } = kind {
                let res = (rot * wn).re - target;
                let g = rot * rn * rn;
                let dx = -g.conj() * (res / g.norm_sqr());
                xn += dx;
                rn = nearest_root(self.q.eval(xn), rn);
                wn += rn * rn * dx;
                max_residual = max_residual.max(((rot * wn).re - target).abs());
            }
            if xn.norm() >= self.r_inf {
                let d = xn - x;
                let a = d.norm_sqr();
                let b = 2.0 * (x * d.conj()).re;
                let c = x.norm_sqr() - self.r_inf * self.r_inf;
                let t = (-b + (b * b - 4.0 * a * c).max(0.0).sqrt()) / (2.0 * a);
                points.push(x + d * t.clamp(0.0, 1.0));
                return Ok(FlowResult { points, stop: FlowStop::Infinity, max_residual });
            }
            for (j, l) in self.locs.iter().enumerate() {
                if Some(j) != self.skip && (xn - l).norm() < self.capture {
                    points.push(xn);
                    return Ok(FlowResult { points, stop: FlowStop::TurningPoint(j), max_residual });
                }
            }
            points.push(xn);
            x = xn;
            r = rn;
            w = wn;
        }
        Ok(FlowResult { points, stop: FlowStop::Steps, max_residual })
    }
}
