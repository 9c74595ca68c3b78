//! Oriented contours in the x-plane, continuous branches of `q^{1/4}` and
//! `q^{1/2}` along them, action integrals and the canonicality test.

use std::f64::consts::PI;

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{Characteristic, TurningPointSet};
use crate::quad;

pub const QUAD_TOL: f64 = 1e-12;
pub const MONO_TOL: f64 = 1e-9;

/// Smallest ray parameter sampled; the point at infinity sits at `t = 0`.
const RAY_T_MIN: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Segment {
    Line { a: C, b: C },
    /// Spiral arc about `center`: radius and angle interpolate linearly.
    Arc { center: C, r0: f64, r1: f64, theta0: f64, sweep: f64 },
    /// Radial ray through `p`; inward rays come from infinity, outward rays go there.
    Ray { p: C, inward: bool },
}

impl Segment {
    pub fn arc(center: C, a: C, b: C, sweep: Option<f64>) -> Self {
        let da = a - center;
        let db = b - center;
        let sweep = sweep.unwrap_or_else(|| (db / da).arg());
        Segment::Arc { center, r0: da.norm(), r1: db.norm(), theta0: da.arg(), sweep }
    }

    pub fn point(&self, t: f64) -> C {
        match *self {
            Segment::Line { a, b } => a + (b - a) * t,
            Segment::Arc { center, r0, r1, theta0, sweep } => {
                center + C::from_polar(r0 + (r1 - r0) * t, theta0 + sweep * t)
            }
            Segment::Ray { p, inward } => {
                let u = if inward { t } else { 1.0 - t };
                p / (u * u)
            }
        }
    }

    pub fn deriv(&self, t: f64) -> C {
        match *self {
            Segment::Line { a, b } => b - a,
            Segment::Arc { r0, r1, theta0, sweep, .. } => {
                let e = C::from_polar(1.0, theta0 + sweep * t);
                e * (r1 - r0) + C::new(0.0, sweep) * e * (r0 + (r1 - r0) * t)
            }
            Segment::Ray { p, inward } => {
                if inward {
                    -2.0 * p / (t * t * t)
                } else {
                    let u = 1.0 - t;
                    2.0 * p / (u * u * u)
                }
            }
        }
    }

    pub fn start(&self) -> C {
        match self {
            Segment::Ray { inward: true, .. } => C::new(f64::INFINITY, 0.0),
            _ => self.point(0.0),
        }
    }

    pub fn end(&self) -> C {
        match self {
            Segment::Ray { inward: false, .. } => C::new(f64::INFINITY, 0.0),
            _ => self.point(1.0),
        }
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { a, b } => Segment::Line { a: b, b: a },
            Segment::Arc { center, r0, r1, theta0, sweep } => {
                Segment::Arc { center, r0: r1, r1: r0, theta0: theta0 + sweep, sweep: -sweep }
            }
            Segment::Ray { p, inward } => Segment::Ray { p, inward: !inward },
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Segment::Line { .. } => "line",
            Segment::Arc { .. } => "arc",
            Segment::Ray { .. } => "ray",
        }
    }

    fn is_infinite_at(&self, t: f64) -> bool {
        matches!(self, Segment::Ray { inward: true, .. } if t == 0.0)
            || matches!(self, Segment::Ray { inward: false, .. } if t == 1.0)
    }
}

/// Piecewise contour. Global parameter `s ∈ [0, segments.len()]`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrientedPath {
    pub segments: Vec<Segment>,
    pub exclusion_radius: f64,
    /// Start and end deliberately placed on a simple turning point.
    pub start_at_turning_point: bool,
    pub end_at_turning_point: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PathJson {
    #[serde(with = "crate::cjson::vec")]
    pub nodes: Vec<C>,
    pub kinds: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centers: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweeps: Option<Vec<f64>>,
}

impl OrientedPath {
    pub fn new(segments: Vec<Segment>) -> Self {
        OrientedPath {
            segments,
            exclusion_radius: 0.0,
            start_at_turning_point: false,
            end_at_turning_point: false,
        }
    }

    pub fn polyline(nodes: &[C]) -> Self {
        Self::new(nodes.windows(2).map(|w| Segment::Line { a: w[0], b: w[1] }).collect())
    }

    /// Circle about `center` starting at angle `theta0`, `turns` full anticlockwise circuits.
    pub fn circle(center: C, radius: f64, theta0: f64, turns: f64) -> Self {
        let n = (4.0 * turns.abs()).ceil().max(1.0) as usize;
        let sweep = 2.0 * PI * turns / n as f64;
        Self::new(
            (0..n)
                .map(|k| Segment::Arc {
                    center,
                    r0: radius,
                    r1: radius,
                    theta0: theta0 + sweep * k as f64,
                    sweep,
                })
                .collect(),
        )
    }

    /// The closed contour K′ around all turning points; odd degree uses a
    /// double circuit.
    pub fn k_prime(tps: &TurningPointSet, double_circuit: bool) -> Self {
        let locs = tps.locations();
        let center = locs.iter().sum::<C>() / locs.len() as f64;
        let r = locs.iter().map(|z| (z - center).norm()).fold(0.0, f64::max) * 1.5 + 1.0;
        Self::circle(center, r, 0.0, if double_circuit { 2.0 } else { 1.0 })
    }

    pub fn start(&self) -> C {
        self.segments[0].start()
    }

    pub fn end(&self) -> C {
        self.segments.last().unwrap().end()
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn param_end(&self) -> f64 {
        self.segments.len() as f64
    }

    fn split(&self, s: f64) -> (usize, f64) {
        let n = self.segments.len();
        let i = (s.floor() as usize).min(n - 1);
        (i, s - i as f64)
    }

    pub fn point(&self, s: f64) -> C {
        let (i, t) = self.split(s);
        self.segments[i].point(t)
    }

    pub fn deriv(&self, s: f64) -> C {
        let (i, t) = self.split(s);
        self.segments[i].deriv(t)
    }

    pub fn reversed(&self) -> Self {
        OrientedPath {
            segments: self.segments.iter().rev().map(|s| s.reversed()).collect(),
            exclusion_radius: self.exclusion_radius,
            start_at_turning_point: self.end_at_turning_point,
            end_at_turning_point: self.start_at_turning_point,
        }
    }

    pub fn concat(&self, other: &OrientedPath) -> Self {
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().copied());
        OrientedPath {
            segments,
            exclusion_radius: self.exclusion_radius.max(other.exclusion_radius),
            start_at_turning_point: self.start_at_turning_point,
            end_at_turning_point: other.end_at_turning_point,
        }
    }

    /// Default exclusion radius: `1e-3 · (diameter + 1)`.
    pub fn default_exclusion(tps: &TurningPointSet) -> f64 {
        1e-3 * (tps.diameter() + 1.0)
    }

    /// Checks the exclusion-radius invariant against turning points.
    pub fn validate(&self, tps: &TurningPointSet) -> Result<()> {
        let n = self.segments.len();
        for (i, seg) in self.segments.iter().enumerate() {
            for k in 0..=64 {
                let t = k as f64 / 64.0;
                if seg.is_infinite_at(t) {
                    continue;
                }
                let skip_start = i == 0 && k == 0 && self.start_at_turning_point;
                let skip_end = i == n - 1 && k == 64 && self.end_at_turning_point;
                if skip_start || skip_end {
                    continue;
                }
                let x = seg.point(t);
                for tp in &tps.points {
                    if (x - tp.location).norm() < self.exclusion_radius {
                        return Err(Error::TurningPointProximity { x });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> PathJson {
        let mut nodes = vec![];
        let mut kinds = vec![];
        let mut centers = vec![];
        let mut sweeps = vec![];
        for seg in &self.segments {
            let s = seg.start();
            nodes.push(if s.is_finite() { s } else { seg.point(1.0) });
            kinds.push(seg.kind().to_string());
            match *seg {
                Segment::Arc { center, sweep, .. } => {
                    centers.push([center.re, center.im]);
                    sweeps.push(sweep);
                }
                _ => {
                    centers.push([0.0, 0.0]);
                    sweeps.push(0.0);
                }
            }
        }
        let e = self.end();
        if e.is_finite() {
            nodes.push(e);
        } else {
            nodes.push(self.segments.last().unwrap().point(0.0));
        }
        PathJson { nodes, kinds, centers: Some(centers), sweeps: Some(sweeps) }
    }

    /// Builds a path from its JSON form. Arc segments default to the origin
    /// as center and the principal sweep; a `ray` kind at the first
    /// position comes in from infinity to `nodes[1]`, at the last position it
    /// leaves from `nodes[n-2]` to infinity.
    pub fn from_json(j: &PathJson) -> Result<Self> {
        if j.nodes.len() != j.kinds.len() + 1 || j.kinds.is_empty() {
            return Err(Error::Invalid("path needs nodes.len() == kinds.len() + 1 >= 2".into()));
        }
        let mut segs = vec![];
        for (i, kind) in j.kinds.iter().enumerate() {
            let a = j.nodes[i];
            let b = j.nodes[i + 1];
            if a == b && kind != "arc" {
                return Err(Error::Invalid(format!("repeated node {i}")));
            }
            segs.push(match kind.as_str() {
                "line" => Segment::Line { a, b },
                "arc" => {
                    let c = j.centers.as_ref().map(|c| C::new(c[i][0], c[i][1])).unwrap_or_default();
                    let sw = j.sweeps.as_ref().map(|s| s[i]).filter(|s| *s != 0.0);
                    Segment::arc(c, a, b, sw)
                }
                "ray" if i == 0 => Segment::Ray { p: b, inward: true },
                "ray" if i + 1 == j.kinds.len() => Segment::Ray { p: a, inward: false },
                other => return Err(Error::Invalid(format!("unknown segment kind '{other}'"))),
            });
        }
        Ok(Self::new(segs))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchSample {
    pub s: f64,
    pub x: C,
    pub q: C,
    pub fourth_root: C,
}

impl BranchSample {
    pub fn sqrt_q(&self) -> C {
        self.fourth_root * self.fourth_root
    }
}

/// A path together with a continuously tracked branch of `q^{1/4}`.
#[derive(Clone, Debug)]
pub struct BranchedRoot {
    pub q: Characteristic,
    pub path: OrientedPath,
    pub samples: Vec<BranchSample>,
}

pub fn nearest_fourth_root(q: C, reference: C) -> C {
    let r = q.sqrt().sqrt();
    let mut best = r;
    let mut score = f64::NEG_INFINITY;
    for k in 0..4 {
        let cand = r * C::new(0.0, 1.0).powi(k);
        let sc = (cand * reference.conj()).re;
        if sc > score {
            score = sc;
            best = cand;
        }
    }
    best
}

fn param_limits(path: &OrientedPath) -> (f64, f64) {
    let n = path.len();
    let mut lo = 0.0;
    let mut hi = n as f64;
    if matches!(path.segments[0], Segment::Ray { inward: true, .. }) {
        lo = RAY_T_MIN;
    } else if path.start_at_turning_point {
        lo = 1e-12;
    }
    if matches!(path.segments[n - 1], Segment::Ray { inward: false, .. }) {
        hi = n as f64 - RAY_T_MIN;
    } else if path.end_at_turning_point {
        hi = n as f64 - 1e-12;
    }
    (lo, hi)
}

/// Continues `q^{1/4}` from its value at parameter `s0`.
pub fn continue_branch_at(q: &Characteristic, path: &OrientedPath, s0: f64, fourth_root: C) -> Result<BranchedRoot> {
    let (lo, hi) = param_limits(path);
    let s0 = s0.clamp(lo, hi);
    let x0 = path.point(s0);
    let q0 = q.eval(x0);
    let first = BranchSample { s: s0, x: x0, q: q0, fourth_root: nearest_fourth_root(q0, fourth_root) };
    let forward = march(q, path, first, hi)?;
    let backward = march(q, path, first, lo)?;
    let mut samples: Vec<BranchSample> = backward.into_iter().rev().collect();
    samples.pop();
    samples.extend(forward);
    Ok(BranchedRoot { q: q.clone(), path: path.clone(), samples })
}

/// Continues `√q` from `initial` at the start of the path.
pub fn continue_branch(q: &Characteristic, path: &OrientedPath, initial_sqrt: C) -> Result<BranchedRoot> {
    let (lo, _) = param_limits(path);
    continue_branch_at(q, path, lo, initial_sqrt.sqrt())
}

fn march(q: &Characteristic, path: &OrientedPath, first: BranchSample, target: f64) -> Result<Vec<BranchSample>> {
    let mut out = vec![first];
    let dir = if target >= first.s { 1.0 } else { -1.0 };
    let mut cur = first;
    let mut h: f64 = 1.0 / 32.0;
    while (target - cur.s) * dir > 0.0 {
        let mut ds = h.min((target - cur.s).abs());
        let mut tries = 0;
        loop {
            let s = cur.s + dir * ds;
            if s == cur.s {
                return Ok(out);
            }
            let x = path.point(s);
            let qv = q.eval(x);
            let ratio = qv / cur.q;
            let ok = ratio.norm() > 0.0 && ratio.ln().norm() <= 0.6 && (x - cur.x).norm().is_finite();
            if ok {
                let r = nearest_fourth_root(qv, cur.fourth_root);
                cur = BranchSample { s, x, q: qv, fourth_root: r };
                out.push(cur);
                if tries == 0 {
                    h = (h * 1.5).min(1.0 / 16.0);
                }
                break;
            }
            ds *= 0.5;
            h = ds;
            tries += 1;
            if ds < 1e-15 {
                return Err(Error::StepCollapse { at: cur.s });
            }
        }
    }
    Ok(out)
}

/// An action integral with its endpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ActionValue {
    pub value: C,
    pub start: C,
    pub end: C,
}

impl BranchedRoot {
    fn nearest(&self, s: f64) -> &BranchSample {
        let idx = self.samples.partition_point(|b| b.s < s);
        let a = &self.samples[idx.saturating_sub(1).min(self.samples.len() - 1)];
        let b = &self.samples[idx.min(self.samples.len() - 1)];
        if (a.s - s).abs() <= (b.s - s).abs() {
            a
        } else {
            b
        }
    }

    pub fn fourth_root_at(&self, s: f64) -> C {
        let x = self.path.point(s);
        nearest_fourth_root(self.q.eval(x), self.nearest(s).fourth_root)
    }

    pub fn sqrt_at(&self, s: f64) -> C {
        let r = self.fourth_root_at(s);
        r * r
    }

    pub fn start_sample(&self) -> &BranchSample {
        &self.samples[0]
    }

    pub fn end_sample(&self) -> &BranchSample {
        self.samples.last().unwrap()
    }

    /// Parameter of the path point closest to `x`.
    pub fn locate(&self, x: C) -> Option<f64> {
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for w in self.samples.windows(2) {
            let ds = (w[1].s - w[0].s) / 16.0;
            for k in 0..=16 {
                let s = w[0].s + ds * k as f64;
                let d = (self.path.point(s) - x).norm();
                if d < best.0 {
                    best = (d, s, ds);
                }
            }
        }
        let (lo_s, hi_s) = (self.samples[0].s, self.samples[self.samples.len() - 1].s);
        let (mut lo, mut hi) = ((best.1 - best.2).max(lo_s), (best.1 + best.2).min(hi_s));
        for _ in 0..80 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if (self.path.point(m1) - x).norm() < (self.path.point(m2) - x).norm() {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let s = 0.5 * (lo + hi);
        let d = (self.path.point(s) - x).norm();
        if d < best.0 {
            best = (d, s, 0.0);
        }
        let scale = 1.0 + x.norm();
        (best.0 < 1e-8 * scale).then_some(best.1)
    }

    fn integrand(&self, s: f64) -> C {
        self.sqrt_at(s) * self.path.deriv(s)
    }

    /// ∫ √q dx between two path parameters.
    pub fn action_params(&self, s_from: f64, s_to: f64) -> Result<C> {
        if s_from > s_to {
            return Ok(-self.action_params(s_to, s_from)?);
        }
        let (lo, hi) = (s_from, s_to);
        if lo == hi {
            return Ok(C::new(0.0, 0.0));
        }
        let n = self.path.len();
        let mut total = C::new(0.0, 0.0);
        let mut seg = lo.floor() as usize;
        while (seg as f64) < hi && seg < n {
            let a = lo.max(seg as f64);
            let b = hi.min(seg as f64 + 1.0);
            if b > a {
                if self.path.segments[seg].is_infinite_at(a - seg as f64) {
                    return Err(Error::Invalid("action integral reaches infinity".into()));
                }
                let tp_start = seg == 0 && a == 0.0 && self.path.start_at_turning_point;
                let tp_end = seg == n - 1 && b == n as f64 && self.path.end_at_turning_point;
                total += self.segment_integral(a, b, tp_start, tp_end)?;
            }
            seg += 1;
        }
        Ok(total)
    }

    fn segment_integral(&self, a: f64, b: f64, tp_start: bool, tp_end: bool) -> Result<C> {
        let tol = QUAD_TOL;
        if tp_start && tp_end {
            let m = 0.5 * (a + b);
            return Ok(self.segment_integral(a, m, true, false)? + self.segment_integral(m, b, false, true)?);
        }
        if tp_start {
            // s = a + u², integrand vanishes like u at u = 0.
            let w = (b - a).sqrt();
            let f = |u: f64| self.integrand(a + u * u) * (2.0 * u);
            return Ok(quad::integrate(f, 0.0, w, tol, tol)?.0);
        }
        if tp_end {
            let w = (b - a).sqrt();
            let f = |u: f64| self.integrand(b - u * u) * (2.0 * u);
            return Ok(quad::integrate(f, 0.0, w, tol, tol)?.0);
        }
        let f = |s: f64| self.integrand(s);
        Ok(quad::integrate(f, a, b, tol, tol)?.0)
    }

    /// Action between two points located on the path.
    pub fn action(&self, from: C, to: C) -> Result<ActionValue> {
        let sf = self.locate_or_endpoint(from)?;
        let st = self.locate_or_endpoint(to)?;
        Ok(ActionValue { value: self.action_params(sf, st)?, start: from, end: to })
    }

    fn locate_or_endpoint(&self, x: C) -> Result<f64> {
        if (x - self.path.start()).norm() <= 1e-12 * (1.0 + x.norm()) {
            return Ok(0.0);
        }
        if (x - self.path.end()).norm() <= 1e-12 * (1.0 + x.norm()) {
            return Ok(self.path.param_end());
        }
        self.locate(x).ok_or_else(|| Error::Invalid(format!("point {x} is not on the path")))
    }

    /// Action from the path start to its end.
    pub fn total_action(&self) -> Result<C> {
        let (lo, hi) = param_limits(&self.path);
        let lo = if self.path.start_at_turning_point { 0.0 } else { lo };
        let hi = if self.path.end_at_turning_point { self.path.param_end() } else { hi };
        self.action_params(lo, hi)
    }

    /// Values of `W(s)` relative to the finite path start (or the end when the
    /// path comes from infinity) on a grid refining the sample set.
    pub fn action_profile(&self) -> Result<Vec<(f64, C, f64)>> {
        let mut grid = vec![];
        for w in self.samples.windows(2) {
            for k in 0..4 {
                grid.push(w[0].s + (w[1].s - w[0].s) * k as f64 / 4.0);
            }
        }
        grid.push(self.samples.last().unwrap().s);
        let mut w = vec![C::new(0.0, 0.0); grid.len()];
        let mut arc = vec![0.0; grid.len()];
        if self.path.start().is_finite() {
            for i in 1..grid.len() {
                w[i] = w[i - 1] + self.action_params(grid[i - 1], grid[i])?;
            }
        } else {
            for i in (0..grid.len() - 1).rev() {
                w[i] = w[i + 1] - self.action_params(grid[i], grid[i + 1])?;
            }
        }
        for i in 1..grid.len() {
            arc[i] = arc[i - 1] + (self.path.point(grid[i]) - self.path.point(grid[i - 1])).norm();
        }
        Ok(grid.into_iter().zip(w).zip(arc).map(|((s, w), a)| (s, w, a)).collect())
    }
}

/// Outcome of the monotonicity check along a path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalCheck {
    pub canonical: bool,
    /// Arc length (from the path start) of the first violation.
    pub violation_at: Option<f64>,
}

/// Checks that `σ·ℜ(e^{iφ} W)` never decreases along the path, which is the
/// condition for a path running from `∞_k` toward the evaluation point.
pub fn is_canonical(branched: &BranchedRoot, sigma: f64, arg_lambda: f64) -> CanonicalCheck {
    is_canonical_with(branched, sigma, arg_lambda, MONO_TOL)
}

pub fn is_canonical_with(branched: &BranchedRoot, sigma: f64, arg_lambda: f64, mono_tol: f64) -> CanonicalCheck {
    if branched.samples.len() < 2 {
        return CanonicalCheck { canonical: true, violation_at: None };
    }
    let Ok(profile) = branched.action_profile() else {
        return CanonicalCheck { canonical: false, violation_at: Some(0.0) };
    };
    let rot = C::from_polar(1.0, arg_lambda);
    let f: Vec<f64> = profile.iter().map(|p| sigma * (rot * p.1).re).collect();
    let mut running = f[0];
    for i in 1..f.len() {
        let slack = mono_tol * (1.0 + running.abs().min(f[i].abs()));
        if f[i] < running - slack {
            return CanonicalCheck { canonical: false, violation_at: Some(profile[i - 1].2) };
        }
        running = running.max(f[i]);
    }
    CanonicalCheck { canonical: true, violation_at: None }
}

/// ξ = −σ₁ W₁ for a branched path starting at the turning point x₁.
pub fn xi_of(branched: &BranchedRoot, sigma1: f64) -> Result<C> {
    Ok(-sigma1 * branched.total_action()?)
}

#[cfg(test)]
mod tests;
