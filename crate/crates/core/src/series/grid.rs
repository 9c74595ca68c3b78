//! Chebyshev panels along a branched path and cumulative integration.

use num_complex::Complex64 as C;

use super::CHEB_TOL;
use crate::error::{Error, Result};
use crate::path::{BranchedRoot, Segment};
use crate::quad::ChebPanel;

const NODES: usize = 28;
const REACH: f64 = 2.0;

#[derive(Clone, Copy, Debug)]
pub struct GridNode {
    pub s: f64,
    pub x: C,
    pub dxds: C,
    pub sqrt_q: C,
}

#[derive(Clone, Debug)]
pub struct PathGrid {
    pub panels: Vec<(f64, f64)>,
    pub nodes: Vec<GridNode>,
    cheb: ChebPanel,
    pub last_tail: f64,
}

pub struct Cumulative {
    pub values: Vec<C>,
    pub end: C,
    pub failing: Vec<bool>,
}

fn singular_params(seg: &Segment, tps: &[C]) -> Option<Vec<C>> {
    match *seg {
        Segment::Line { a, b } => Some(tps.iter().map(|x| (x - a) / (b - a)).collect()),
        Segment::Ray { p, inward } => Some(
            tps.iter()
                .filter(|x| x.norm() > 1e-300)
                .flat_map(|x| {
                    let r = (p / x).sqrt();
                    if inward {
                        [r, -r]
                    } else {
                        [1.0 - r, 1.0 + r]
                    }
                })
                .filter(|z: &C| z.is_finite())
                .collect(),
        ),
        Segment::Arc { .. } => None,
    }
}

fn dist_to_interval(z: C, a: f64, b: f64) -> f64 {
    let re = z.re.clamp(a, b);
    (z - C::new(re, 0.0)).norm()
}

fn panel_ok(seg: &Segment, sing: &Option<Vec<C>>, tps: &[C], a: f64, b: f64) -> bool {
    let len = b - a;
    match sing {
        Some(v) => v.iter().all(|z| dist_to_interval(*z, a, b) >= REACH * len),
        None => {
            let mut dmin = f64::INFINITY;
            let mut speed: f64 = 0.0;
            for k in 0..=8 {
                let u = a + len * k as f64 / 8.0;
                let x = seg.point(u);
                speed = speed.max(seg.deriv(u).norm());
                for t in tps {
                    dmin = dmin.min((x - t).norm());
                }
            }
            len * speed * REACH <= 0.8 * dmin
        }
    }
}

impl PathGrid {
    pub fn new(branched: &BranchedRoot) -> Result<Self> {
        let tps: Vec<C> = turning_points_of(branched);
        let mut panels = vec![];
        for (i, seg) in branched.path.segments.iter().enumerate() {
            let sing = singular_params(seg, &tps);
            let mut stack = vec![(0.0, 1.0)];
            let mut local = vec![];
            while let Some((a, b)) = stack.pop() {
                if panel_ok(seg, &sing, &tps, a, b) || b - a < 1e-6 {
                    if b - a < 1e-6 {
                        return Err(Error::TurningPointProximity { x: seg.point(a) });
                    }
                    local.push((a, b));
                } else {
                    let m = 0.5 * (a + b);
                    stack.push((m, b));
                    stack.push((a, m));
                }
            }
            panels.extend(local.into_iter().map(|(a, b)| (i as f64 + a, i as f64 + b)));
        }
        Self::from_panels(branched, panels)
    }

    fn from_panels(branched: &BranchedRoot, panels: Vec<(f64, f64)>) -> Result<Self> {
        let cheb = ChebPanel::new(NODES);
        let mut nodes = Vec::with_capacity(panels.len() * NODES);
        for &(a, b) in &panels {
            for &tau in &cheb.nodes {
                let s = a + (b - a) * 0.5 * (tau + 1.0);
                let x = branched.path.point(s);
                let dxds = branched.path.deriv(s);
                nodes.push(GridNode { s, x, dxds, sqrt_q: branched.sqrt_at(s) });
            }
        }
        Ok(PathGrid { panels, nodes, cheb, last_tail: 0.0 })
    }

    pub fn refine(&self, branched: &BranchedRoot, bad: &[bool]) -> Result<Self> {
        let mut panels = vec![];
        for (p, &b) in self.panels.iter().zip(bad) {
            if b {
                let m = 0.5 * (p.0 + p.1);
                if p.1 - p.0 < 1e-9 {
                    return Err(Error::SpectralResolution { tail: self.last_tail });
                }
                panels.push((p.0, m));
                panels.push((m, p.1));
            } else {
                panels.push(*p);
            }
        }
        let mut g = Self::from_panels(branched, panels)?;
        g.last_tail = self.last_tail;
        Ok(g)
    }

    /// `start + ∫ f dx` at every node, with `f` given per node in `x`.
    pub fn cumulative(&mut self, f: &[C], start: C) -> Cumulative {
        let mut values = vec![C::new(0.0, 0.0); self.nodes.len()];
        let mut running = start;
        let mut failing = vec![false; self.panels.len()];
        let mut scale: f64 = start.norm();
        let mut tails = vec![0.0; self.panels.len()];
        for (pi, &(a, b)) in self.panels.iter().enumerate() {
            let half = 0.5 * (b - a);
            let off = pi * NODES;
            let vals: Vec<C> = (0..NODES).map(|j| f[off + j] * self.nodes[off + j].dxds * half).collect();
            let co = self.cheb.coeffs(&vals);
            let tail = co[NODES - 3..].iter().map(|c| c.norm()).fold(0.0, f64::max);
            tails[pi] = tail;
            let anti = ChebPanel::antideriv(&co);
            for (j, &tau) in self.cheb.nodes.iter().enumerate() {
                values[off + j] = running + ChebPanel::eval(&anti, tau);
            }
            running += ChebPanel::eval(&anti, 1.0);
            scale = scale.max(running.norm());
            for v in &values[off..off + NODES] {
                scale = scale.max(v.norm());
            }
        }
        let scale = scale.max(1e-300);
        for (pi, t) in tails.iter().enumerate() {
            let rel = t / scale;
            self.last_tail = self.last_tail.max(rel);
            if rel > CHEB_TOL {
                failing[pi] = true;
            }
        }
        Cumulative { values, end: running, failing }
    }
}

fn turning_points_of(branched: &BranchedRoot) -> Vec<C> {
    crate::potential::turning_points(&branched.q, crate::potential::DEFAULT_ROOT_TOL)
        .map(|t| t.locations())
        .unwrap_or_default()
}
