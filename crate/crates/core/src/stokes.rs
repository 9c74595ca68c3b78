//! Stokes graphs: traced Stokes lines, cyclically labelled sectors with
//! their signatures and branch data, point classification, canonical paths
//! and summable sets.

use std::f64::consts::PI;

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::{continue_branch_at, is_canonical_with, BranchedRoot, OrientedPath, Segment};
use crate::potential::{turning_points, Characteristic, TurningPointSet, DEFAULT_ROOT_TOL};
use crate::quad::gauss_legendre;

mod flow;
use flow::{Flow, FlowKind, FlowStop};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Terminus {
    TurningPoint(usize),
    Infinity { angle: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StokesLine {
    pub origin: usize,
    #[serde(with = "crate::cjson::vec")]
    pub polyline: Vec<C>,
    pub terminus: Terminus,
    pub phase: f64,
    /// Largest |ℜ(e^{iφ}W)| seen along the traced polyline.
    pub residual: f64,
}

impl StokesLine {
    pub fn is_finite(&self) -> bool {
        matches!(self.terminus, Terminus::TurningPoint(_))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sector {
    /// Cyclic label, starting at 1.
    pub index: usize,
    /// Directions at infinity, anticlockwise, `θ₁ < θ₂`.
    pub interval: (f64, f64),
    pub signature: f64,
    /// Indices into `StokesGraph::lines` (clockwise, anticlockwise).
    pub bounding_lines: (usize, usize),
    pub attached_turning_point: usize,
    #[serde(with = "crate::cjson::one")]
    pub anchor: C,
    /// `q^{1/4}` at the anchor on the sector branch.
    #[serde(with = "crate::cjson::one")]
    pub anchor_fourth_root: C,
    /// `W_k(anchor) = ∫_{x_k}^{anchor} √q` on the sector branch.
    #[serde(with = "crate::cjson::one")]
    pub anchor_action: C,
}

impl Sector {
    pub fn bisector(&self) -> f64 {
        0.5 * (self.interval.0 + self.interval.1)
    }

    pub fn contains_direction(&self, theta: f64) -> bool {
        let t = self.interval.0 + (theta - self.interval.0).rem_euclid(2.0 * PI);
        t > self.interval.0 && t < self.interval.1
    }

    pub fn anchor_sqrt(&self) -> C {
        self.anchor_fourth_root * self.anchor_fourth_root
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphOptions {
    pub root_tol: f64,
    pub capture_factor: f64,
    pub r_infinity: Option<f64>,
    pub line_tol: f64,
}

impl Default for GraphOptions {
    fn default() -> Self {
        GraphOptions { root_tol: DEFAULT_ROOT_TOL, capture_factor: 1e-6, r_infinity: None, line_tol: 1e-8 }
    }
}

#[derive(Clone, Debug)]
pub struct StokesGraph {
    pub characteristic: Characteristic,
    pub turning_points: TurningPointSet,
    pub lines: Vec<StokesLine>,
    pub sectors: Vec<Sector>,
    pub phase: f64,
    pub r_infinity: f64,
    pub options: GraphOptions,
}

pub fn wrap_angle(t: f64) -> f64 {
    let r = t.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Gauss–Legendre 6-point chord integral of √q using the branch `r0` at `a`.
pub(crate) fn chord_action(q: &Characteristic, a: C, b: C, r0: C) -> (C, C) {
    thread_local! {
        static GL: (Vec<f64>, Vec<f64>) = gauss_legendre(6);
    }
    GL.with(|(x, w)| {
        let mut acc = C::new(0.0, 0.0);
        let mut r = r0;
        for (xi, wi) in x.iter().zip(w) {
            let t = 0.5 * (xi + 1.0);
            let y = a + (b - a) * t;
            r = flow::nearest_root(q.eval(y), r);
            acc += r * r * (0.5 * wi);
        }
        let rb = flow::nearest_root(q.eval(b), r);
        (acc * (b - a), rb)
    })
}

/// Builds the Stokes graph of `q` at `arg λ = arg_lambda`.
pub fn build_graph(q: &Characteristic, arg_lambda: f64) -> Result<StokesGraph> {
    build_graph_with(q, arg_lambda, GraphOptions::default())
}

pub fn build_graph_with(q: &Characteristic, phase: f64, options: GraphOptions) -> Result<StokesGraph> {
    let tps = turning_points(q, options.root_tol)?;
    if let Some(tp) = tps.points.iter().find(|p| p.multiplicity > 1) {
        return Err(Error::MultipleTurningPoint { x: tp.location, multiplicity: tp.multiplicity });
    }
    let locs = tps.locations();
    let max_abs = locs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let r_inf = options.r_infinity.unwrap_or(10.0 * (1.0 + max_abs));
    let scale = 1.0 + max_abs;
    let capture = options.capture_factor * scale;

    let mut lines = Vec::new();
    for (i, &xi) in locs.iter().enumerate() {
        let (_, d1, _) = q.eval_d2(xi);
        for m in 0..3 {
            let theta = (PI / 2.0 + m as f64 * PI - phase - d1.arg() / 2.0) * 2.0 / 3.0;
            lines.push(trace_line(q, &locs, i, theta, phase, r_inf, capture)?);
        }
    }

    let n = q.degree();
    let mh = (n as f64 + 2.0) / 2.0;
    let lead = q.base.leading();
    let mut dirs: Vec<f64> = (0..n + 2)
        .map(|j| ((PI / 2.0 + j as f64 * PI - phase - lead.arg() / 2.0) / mh).rem_euclid(2.0 * PI))
        .collect();
    dirs.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // Assign infinite lines to asymptotic directions.
    let mut assigned: Vec<Vec<(usize, f64)>> = vec![vec![]; dirs.len()];
    for (li, line) in lines.iter().enumerate() {
        if let Terminus::Infinity { angle } = line.terminus {
            let (j, off) = dirs
                .iter()
                .enumerate()
                .map(|(j, d)| (j, wrap_angle(angle - d)))
                .min_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
                .unwrap();
            if off.abs() > 0.45 * PI / mh {
                return Err(Error::Invalid(format!(
                    "Stokes line {li} ends at angle {angle:.4} away from every asymptotic direction"
                )));
            }
            assigned[j].push((li, off));
        }
    }
    let hit: Vec<usize> = (0..dirs.len()).filter(|&j| !assigned[j].is_empty()).collect();
    if hit.len() < 2 {
        return Err(Error::Invalid("fewer than two asymptotic Stokes directions reached".into()));
    }

    // Sector wedges between consecutive reached directions; label origin at θ = 0.
    let nh = hit.len();
    let mut wedges: Vec<(usize, usize, f64, f64)> = (0..nh)
        .map(|w| {
            let j0 = hit[w];
            let j1 = hit[(w + 1) % nh];
            let t0 = dirs[j0];
            let mut t1 = dirs[j1];
            if t1 <= t0 {
                t1 += 2.0 * PI;
            }
            (j0, j1, t0, t1)
        })
        .collect();
    let first = wedges
        .iter()
        .position(|w| {
            let t0 = if w.2 > 2.0 * PI - 1e-12 { w.2 - 2.0 * PI } else { w.2 };
            let lo = if t0.abs() < 1e-12 { 0.0 } else { t0 };
            let rel = (0.0 - lo).rem_euclid(2.0 * PI);
            (t0.abs() < 1e-12) || (rel > 0.0 && rel < w.3 - w.2)
        })
        .unwrap_or(0);
    wedges.rotate_left(first);
    // Keep the first interval containing θ = 0 in its natural range.
    if wedges[0].2 > PI {
        wedges[0].2 -= 2.0 * PI;
        wedges[0].3 -= 2.0 * PI;
    }
    for w in 1..nh {
        while wedges[w].2 < wedges[w - 1].3 - 1e-12 {
            wedges[w].2 += 2.0 * PI;
            wedges[w].3 += 2.0 * PI;
        }
    }

    // Branch bookkeeping: principal q^{1/4} at the first anchor, continued
    // anticlockwise along |x| = R∞.
    let mut sectors = Vec::with_capacity(nh);
    let mut prev: Option<(C, f64)> = None;
    for (w, &(j0, j1, t0, t1)) in wedges.iter().enumerate() {
        let mid = 0.5 * (t0 + t1);
        let anchor = C::from_polar(r_inf, mid);
        let root = match prev {
            None => q.eval(anchor).sqrt().sqrt(),
            Some((r_prev, t_prev)) => {
                let arc = OrientedPath::new(vec![Segment::Arc {
                    center: C::new(0.0, 0.0),
                    r0: r_inf,
                    r1: r_inf,
                    theta0: t_prev,
                    sweep: mid - t_prev,
                }]);
                let b = continue_branch_at(q, &arc, 0.0, r_prev)?;
                b.end_sample().fourth_root
            }
        };
        prev = Some((root, mid));
        let sq = root * root;
        let rot = C::from_polar(1.0, phase);
        let signature = if (rot * sq * anchor).re > 0.0 { -1.0 } else { 1.0 };
        let cw = assigned[j0].iter().max_by(|a, b| a.1.partial_cmp(&b.1).unwrap()).unwrap().0;
        let ccw = assigned[j1].iter().min_by(|a, b| a.1.partial_cmp(&b.1).unwrap()).unwrap().0;
        let attached = lines[cw].origin;
        let anchor_action = anchor_action(q, &lines[cw], locs[attached], anchor, root, r_inf)?;
        sectors.push(Sector {
            index: w + 1,
            interval: (t0, t1),
            signature,
            bounding_lines: (cw, ccw),
            attached_turning_point: attached,
            anchor,
            anchor_fourth_root: root,
            anchor_action,
        });
    }

    Ok(StokesGraph { characteristic: q.clone(), turning_points: tps, lines, sectors, phase, r_infinity: r_inf, options })
}

fn anchor_action(q: &Characteristic, line: &StokesLine, tp: C, anchor: C, root: C, r_inf: f64) -> Result<C> {
    // Turning point -> along the bounding line -> arc at R∞ -> anchor.
    let pts = thin(&line.polyline, q, tp);
    let mut segs: Vec<Segment> = pts.windows(2).map(|w| Segment::Line { a: w[0], b: w[1] }).collect();
    let end = *pts.last().unwrap();
    let sweep = wrap_angle(anchor.arg() - end.arg());
    if sweep.abs() > 1e-14 {
        segs.push(Segment::Arc { center: C::new(0.0, 0.0), r0: end.norm(), r1: r_inf, theta0: end.arg(), sweep });
    }
    let mut path = OrientedPath::new(segs);
    path.start_at_turning_point = true;
    let b = continue_branch_at(q, &path, path.param_end(), root)?;
    b.total_action()
}

/// Keeps polyline vertices so that chords stay short relative to the
/// distance from `tp` (the only singular point near the curve start).
fn thin(pts: &[C], _q: &Characteristic, tp: C) -> Vec<C> {
    let mut out = vec![tp];
    let mut last = tp;
    for (k, &p) in pts.iter().enumerate().skip(1) {
        let d = (p - tp).norm().max((last - tp).norm());
        if (p - last).norm() > 0.25 * d || k == pts.len() - 1 {
            out.push(p);
            last = p;
        }
    }
    out
}

fn trace_line(q: &Characteristic, locs: &[C], origin: usize, theta: f64, phase: f64, r_inf: f64, capture: f64) -> Result<StokesLine> {
    let x0 = locs[origin];
    let others = locs.iter().enumerate().filter(|(j, _)| *j != origin).map(|(_, z)| (z - x0).norm()).fold(f64::INFINITY, f64::min);
    let eps = 1e-3 * others.min(1.0).min(r_inf / 10.0);
    let start = x0 + C::from_polar(eps, theta);
    let r0 = q.eval(start).sqrt().sqrt();
    let mut seg = OrientedPath::polyline(&[x0, start]);
    seg.start_at_turning_point = true;
    let w0 = continue_branch_at(q, &seg, 1.0, r0)?.total_action()?;
    let flow = Flow { q, locs: locs.to_vec(), phase, r_inf, capture, skip: Some(origin) };
    let res = flow.run(FlowKind::Level { toward: start - x0, target: 0.0 }, start, r0, w0, 40_000)?;
    let terminus = match res.stop {
        FlowStop::Infinity => Terminus::Infinity { angle: res.points.last().unwrap().arg().rem_euclid(2.0 * PI) },
        FlowStop::TurningPoint(j) => Terminus::TurningPoint(j),
        FlowStop::Steps => return Err(Error::TracerStall { x: *res.points.last().unwrap() }),
    };
    let mut polyline = vec![x0];
    polyline.extend(res.points);
    if let Terminus::TurningPoint(j) = terminus {
        polyline.push(locs[j]);
    }
    Ok(StokesLine { origin, polyline, terminus, phase, residual: res.max_residual })
}

/// Classification of a point relative to the graph.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PointClass {
    Interior { sector: usize },
    Strip,
    OnFiniteLine { line: usize },
    OnInfiniteLine { line: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub class: PointClass,
    pub distance_to_line: f64,
}

fn seg_dist(p: C, a: C, b: C) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_sqr();
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / l2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

fn cross(a: C, b: C) -> f64 {
    a.re * b.im - a.im * b.re
}

fn segments_intersect(p1: C, p2: C, q1: C, q2: C) -> bool {
    let d1 = cross(q2 - q1, p1 - q1);
    let d2 = cross(q2 - q1, p2 - q1);
    let d3 = cross(p2 - p1, q1 - p1);
    let d4 = cross(p2 - p1, q2 - p1);
    (d1 > 0.0) != (d2 > 0.0) && (d3 > 0.0) != (d4 > 0.0)
}

/// A canonical path together with its branch continued from the sector anchor.
#[derive(Clone, Debug)]
pub struct CanonicalPath {
    pub sector: usize,
    pub path: OrientedPath,
    pub branched: BranchedRoot,
}

impl StokesGraph {
    pub fn degree(&self) -> usize {
        self.characteristic.degree()
    }

    pub fn locations(&self) -> Vec<C> {
        self.turning_points.locations()
    }

    pub fn scale(&self) -> f64 {
        1.0 + self.locations().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn capture_radius(&self) -> f64 {
        self.options.capture_factor * self.scale()
    }

    /// Sector by its 1-based label (taken modulo the sector count).
    pub fn sector(&self, k: usize) -> &Sector {
        let n = self.sectors.len();
        &self.sectors[(k + n - 1) % n]
    }

    pub fn sector_of_direction(&self, theta: f64) -> Option<usize> {
        self.sectors.iter().find(|s| s.contains_direction(theta)).map(|s| s.index)
    }

    /// Finite lines, each counted once.
    pub fn finite_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = vec![];
        for l in &self.lines {
            if let Terminus::TurningPoint(j) = l.terminus {
                let p = (l.origin.min(j), l.origin.max(j));
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out
    }

    fn flow(&self) -> Flow<'_> {
        Flow {
            q: &self.characteristic,
            locs: self.locations(),
            phase: self.phase,
            r_inf: self.r_infinity,
            capture: 1e-3 * self.scale(),
            skip: None,
        }
    }

    fn check_regular(&self, x: C) -> Result<()> {
        for tp in &self.turning_points.points {
            if (x - tp.location).norm() < self.capture_radius().max(1e-9) {
                return Err(Error::TurningPointProximity { x });
            }
        }
        Ok(())
    }

    pub fn classify_point(&self, x: C) -> Result<Classification> {
        self.check_regular(x)?;
        let mut best = (f64::INFINITY, 0usize);
        for (li, l) in self.lines.iter().enumerate() {
            for w in l.polyline.windows(2) {
                let d = seg_dist(x, w[0], w[1]);
                if d < best.0 {
                    best = (d, li);
                }
            }
        }
        let tol = self.options.line_tol * self.scale();
        if best.0 < tol {
            let class = if self.lines[best.1].is_finite() {
                PointClass::OnFiniteLine { line: best.1 }
            } else {
                PointClass::OnInfiniteLine { line: best.1 }
            };
            return Ok(Classification { class, distance_to_line: best.0 });
        }
        let r0 = self.characteristic.eval(x).sqrt().sqrt();
        let flow = self.flow();
        for sign in [1.0, -1.0] {
            let res = flow.run(FlowKind::Descent { sign }, x, r0, C::new(0.0, 0.0), 20_000)?;
            if !matches!(res.stop, FlowStop::Infinity) {
                continue;
            }
            if !self.crosses_any_line(&res.points, x) {
                let end = res.points.last().unwrap().arg();
                if let Some(k) = self.sector_of_direction(end) {
                    return Ok(Classification { class: PointClass::Interior { sector: k }, distance_to_line: best.0 });
                }
            }
        }
        Ok(Classification { class: PointClass::Strip, distance_to_line: best.0 })
    }

    fn crosses_any_line(&self, pts: &[C], start: C) -> bool {
        let mut prev = start;
        for &p in pts {
            for l in &self.lines {
                for w in l.polyline.windows(2) {
                    if segments_intersect(prev, p, w[0], w[1]) {
                        return true;
                    }
                }
            }
            prev = p;
        }
        false
    }

    /// Searches a canonical path from the anchor of sector `k` to `x`.
    pub fn canonical_path(&self, k: usize, x: C) -> Option<CanonicalPath> {
        self.check_regular(x).ok()?;
        let sector = self.sector(k).clone();
        let flow = self.flow();
        let rx = self.characteristic.eval(x).sqrt().sqrt();

        for sign in [1.0, -1.0] {
            let mut seeds: Vec<(Vec<C>, C, C)> = vec![(vec![], x, rx)];
            let mut tilted: Vec<Vec<(Vec<C>, C, C)>> = vec![];
            for orient in [1.0, -1.0] {
                let mut found = vec![];
                let f = C::from_polar(1.0, self.phase) * rx * rx;
                let toward = C::i() * f.conj() * orient;
                let Ok(res) = flow.run(FlowKind::Tilted { toward, sign }, x, rx, C::new(0.0, 0.0), 300) else {
                    continue;
                };
                let mut trail = vec![];
                let mut r = rx;
                for (i, &p) in res.points.iter().enumerate() {
                    r = flow::nearest_root(self.characteristic.eval(p), r);
                    trail.push(p);
                    if i % 2 == 1 || i == res.points.len() - 1 {
                        found.push((trail.clone(), p, r));
                    }
                }
                tilted.push(found);
            }
            // far end of the tilted flows first
            let longest = tilted.iter().map(Vec::len).max().unwrap_or(0);
            for i in (0..longest).rev() {
                for list in &tilted {
                    if let Some(seed) = list.get(i) {
                        seeds.push(seed.clone());
                    }
                }
            }
            for (trail, y, ry) in seeds {
                let Ok(res) = flow.run(FlowKind::Descent { sign }, y, ry, C::new(0.0, 0.0), 20_000) else {
                    continue;
                };
                if !matches!(res.stop, FlowStop::Infinity) {
                    continue;
                }
                let p = *res.points.last().unwrap();
                if !sector.contains_direction(p.arg()) {
                    continue;
                }
                if let Some(cp) = self.assemble(&sector, x, &trail, y, &res.points) {
                    return Some(cp);
                }
            }
        }
        None
    }

    fn assemble(&self, sector: &Sector, x: C, trail: &[C], y: C, descent: &[C]) -> Option<CanonicalPath> {
        let mut pts: Vec<C> = descent.iter().rev().copied().collect();
        pts.push(y);
        for &t in trail.iter().rev().skip(1) {
            pts.push(t);
        }
        pts.push(x);
        pts.dedup_by(|a, b| (*a - *b).norm() < 1e-14 * (1.0 + a.norm()));
        let locs = self.locations();
        let dist = |z: C| locs.iter().map(|l| (z - l).norm()).fold(f64::INFINITY, f64::min);
        let mut thinned = vec![pts[0]];
        for i in 1..pts.len() {
            let last = *thinned.last().unwrap();
            let limit = 0.3 * dist(pts[i]).min(dist(last));
            if (pts[i] - last).norm() > limit && pts[i - 1] != last {
                thinned.push(pts[i - 1]);
            }
        }
        thinned.push(*pts.last().unwrap());
        let p = thinned[0];
        let mut segs = vec![Segment::Ray { p: sector.anchor, inward: true }];
        let sweep = wrap_angle(p.arg() - sector.anchor.arg());
        if sweep.abs() > 1e-14 || (p.norm() - sector.anchor.norm()).abs() > 1e-12 * p.norm() {
            segs.push(Segment::Arc {
                center: C::new(0.0, 0.0),
                r0: sector.anchor.norm(),
                r1: p.norm(),
                theta0: sector.anchor.arg(),
                sweep,
            });
        }
        for w in thinned.windows(2) {
            segs.push(Segment::Line { a: w[0], b: w[1] });
        }
        let path = OrientedPath::new(segs);
        let branched = continue_branch_at(&self.characteristic, &path, 1.0, sector.anchor_fourth_root).ok()?;
        let check = is_canonical_with(&branched, sector.signature, self.phase, 1e-7);
        check.canonical.then(|| CanonicalPath { sector: sector.index, path, branched })
    }

    /// `W_k(x)` on the sector branch, via a canonical path.
    pub fn sector_action(&self, cp: &CanonicalPath) -> Result<C> {
        let s = self.sector(cp.sector);
        Ok(s.anchor_action + cp.branched.action_params(1.0, cp.path.param_end())?)
    }

    /// ξ(x) = −σ₁W₁(x) along a canonical path of sector 1.
    pub fn xi(&self, x: C) -> Result<C> {
        let cp = self.canonical_path(1, x).ok_or(Error::NoCanonicalPath { sector: 1, x })?;
        Ok(-self.sector(1).signature * self.sector_action(&cp)?)
    }

    pub fn rotate(&self, delta_phi: f64) -> Result<StokesGraph> {
        build_graph_with(&self.characteristic, self.phase + delta_phi, self.options)
    }

    /// Sector of the graph rotated by `delta` that continues sector `k`.
    pub fn follow_sector(&self, rotated: &StokesGraph, k: usize, delta: f64) -> Option<usize> {
        let m = (self.degree() as f64 + 2.0) / 2.0;
        rotated.sector_of_direction(self.sector(k).bisector() - delta / m)
    }

    /// Borel-summability post-check: canonical paths must persist on a
    /// contiguous window of arg λ of total width at least π containing 0.
    /// The window is grown outward from 0 and exploration stops once it
    /// reaches π, so larger windows are reported as π (up to the grid).
    pub fn rotation_window(&self, k: usize, x: C, rotated: &[(f64, StokesGraph)]) -> f64 {
        let found = |i: usize| {
            let (d, g) = &rotated[i];
            self.follow_sector(g, k, *d).and_then(|kk| g.canonical_path(kk, x)).is_some()
        };
        let Some(zero) = rotated.iter().position(|(d, _)| d.abs() < 1e-12) else { return 0.0 };
        if !found(zero) {
            return 0.0;
        }
        let (mut lo, mut hi) = (zero, zero);
        let (mut lo_open, mut hi_open) = (lo > 0, hi + 1 < rotated.len());
        let width = |lo: usize, hi: usize| rotated[hi].0 - rotated[lo].0;
        while (lo_open || hi_open) && width(lo, hi) < PI - 1e-9 {
            if hi_open && (!lo_open || zero - lo >= hi - zero) {
                if found(hi + 1) {
                    hi += 1;
                    hi_open = hi + 1 < rotated.len();
                } else {
                    hi_open = false;
                }
            } else if found(lo - 1) {
                lo -= 1;
                lo_open = lo > 0;
            } else {
                lo_open = false;
            }
        }
        width(lo, hi)
    }

    /// Graphs rotated over `[-π, π]` on a uniform grid of `steps` per π.
    pub fn rotation_family(&self, steps: usize) -> Vec<(f64, StokesGraph)> {
        let n = 2 * steps;
        crate::par::map(&(0..=n).collect::<Vec<_>>(), crate::par::Exec::default(), |&i| {
            let d = -PI + PI * i as f64 / steps as f64;
            let d = if i == steps { 0.0 } else { d };
            self.rotate(d).ok().map(|g| (d, g))
        })
        .into_iter()
        .flatten()
        .collect()
    }

    /// Sectors whose fundamental solutions are Borel summable at `x0`.
    pub fn summable_set(&self, x0: C) -> Result<Vec<(usize, f64)>> {
        let family = self.rotation_family(12);
        self.summable_set_with(x0, &family)
    }

    pub fn summable_set_with(&self, x0: C, family: &[(f64, StokesGraph)]) -> Result<Vec<(usize, f64)>> {
        self.check_regular(x0)?;
        let mut out = vec![];
        for s in &self.sectors {
            if self.canonical_path(s.index, x0).is_none() {
                continue;
            }
            if self.rotation_window(s.index, x0, family) >= PI - 1e-9 {
                out.push((s.index, s.signature));
            }
        }
        if out.is_empty() {
            return Err(Error::Invalid(format!("empty summable set at {x0}")));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests;
