//! Piecewise segment/arc paths in the plane and loop generators for the
//! fundamental group of the thrice-punctured sphere.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathPiece {
    Segment { from: Complex64, to: Complex64 },
    /// `center + radius·e^{i(start + s·sweep)}`, `s ∈ [0, 1]`
    Arc { center: Complex64, radius: f64, start: f64, sweep: f64 },
}

impl PathPiece {
    pub fn point(&self, s: f64) -> Complex64 {
        match *self {
            PathPiece::Segment { from, to } => from + (to - from) * s,
            PathPiece::Arc { center, radius, start, sweep } => center + Complex64::from_polar(radius, start + s * sweep),
        }
    }

    pub fn velocity(&self, s: f64) -> Complex64 {
        match *self {
            PathPiece::Segment { from, to } => to - from,
            PathPiece::Arc { radius, start, sweep, .. } => {
                Complex64::new(0.0, sweep) * Complex64::from_polar(radius, start + s * sweep)
            }
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex64 {
        match *self {
            PathPiece::Segment { to, .. } => to,
            _ => self.point(1.0),
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            PathPiece::Segment { from, to } => (to - from).norm(),
            PathPiece::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn reversed(&self) -> Self {
        match *self {
            PathPiece::Segment { from, to } => PathPiece::Segment { from: to, to: from },
            PathPiece::Arc { center, radius, start, sweep } => {
                PathPiece::Arc { center, radius, start: start + sweep, sweep: -sweep }
            }
        }
    }

    /// Exact distance from `p` to the piece.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        match *self {
            PathPiece::Segment { from, to } => {
                let d = to - from;
                let l2 = d.norm_sqr();
                if l2 == 0.0 {
                    return (p - from).norm();
                }
                let t = (((p - from) * d.conj()).re / l2).clamp(0.0, 1.0);
                (p - (from + d * t)).norm()
            }
            PathPiece::Arc { center, radius, start, sweep } => {
                let v = p - center;
                let radial = (v.norm() - radius).abs();
                if sweep.abs() >= 2.0 * PI || v.norm() == 0.0 {
                    return radial;
                }
                let (lo, hi) = if sweep >= 0.0 { (start, start + sweep) } else { (start + sweep, start) };
                let ang = v.arg();
                let k = ((lo - ang) / (2.0 * PI)).ceil();
                if ang + 2.0 * PI * k <= hi {
                    radial
                } else {
                    (p - self.start()).norm().min((p - self.end()).norm())
                }
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Path {
    pub pieces: Vec<PathPiece>,
}

impl Path {
    pub fn new(pieces: Vec<PathPiece>) -> Self {
        Self { pieces }
    }

    pub fn segment(from: Complex64, to: Complex64) -> Self {
        Self::new(vec![PathPiece::Segment { from, to }])
    }

    /// Segment from `base` to `center + radius·e^{iθ}`, a full positively
    /// oriented circle and the segment back.
    pub fn lasso(base: Complex64, center: Complex64, radius: f64, theta: f64) -> Self {
        let touch = center + Complex64::from_polar(radius, theta);
        Self::new(vec![
            PathPiece::Segment { from: base, to: touch },
            PathPiece::Arc { center, radius, start: theta, sweep: 2.0 * PI },
            PathPiece::Segment { from: touch, to: base },
        ])
    }

    /// Lasso whose approach runs through the given waypoints.
    pub fn lasso_via(base: Complex64, via: &[Complex64], center: Complex64, radius: f64, theta: f64) -> Self {
        let touch = center + Complex64::from_polar(radius, theta);
        let mut pts = vec![base];
        pts.extend_from_slice(via);
        pts.push(touch);
        let mut pieces: Vec<PathPiece> = pts.windows(2).map(|w| PathPiece::Segment { from: w[0], to: w[1] }).collect();
        pieces.push(PathPiece::Arc { center, radius, start: theta, sweep: 2.0 * PI });
        let back: Vec<PathPiece> = pieces[..pieces.len() - 1].iter().rev().map(|p| p.reversed()).collect();
        pieces.extend(back);
        Self::new(pieces)
    }

    pub fn start(&self) -> Option<Complex64> {
        self.pieces.first().map(|p| p.start())
    }

    pub fn end(&self) -> Option<Complex64> {
        self.pieces.last().map(|p| p.end())
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(|p| p.length()).sum()
    }

    pub fn reversed(&self) -> Self {
        Self::new(self.pieces.iter().rev().map(|p| p.reversed()).collect())
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Path) -> Self {
        let mut pieces = self.pieces.clone();
        pieces.extend_from_slice(&other.pieces);
        Self::new(pieces)
    }

    pub fn distance_to(&self, p: Complex64) -> f64 {
        self.pieces.iter().map(|q| q.distance_to(p)).fold(f64::INFINITY, f64::min)
    }

    /// Nearest approach to any of `points`, with the offending point.
    pub fn closest_approach(&self, points: &[Complex64]) -> (f64, Option<Complex64>) {
        let mut best = (f64::INFINITY, None);
        for &p in points {
            let d = self.distance_to(p);
            if d < best.0 {
                best = (d, Some(p));
            }
        }
        best
    }

    pub fn check_clearance(&self, points: &[Complex64], clearance: f64) -> Result<()> {
        match self.closest_approach(points) {
            (d, Some(point)) if d < clearance => Err(Error::SingularPathPoint { point, distance: d, clearance }),
            _ => Ok(()),
        }
    }

    /// Approximate winding number around `p`.
    pub fn winding_number(&self, p: Complex64) -> f64 {
        let mut total = 0.0;
        for piece in &self.pieces {
            let n = 64;
            for k in 0..n {
                let a = piece.point(k as f64 / n as f64) - p;
                let b = piece.point((k + 1) as f64 / n as f64) - p;
                total += (b / a).arg();
            }
        }
        total / (2.0 * PI)
    }
}

/// Minimum pairwise distance within `points`.
pub fn min_pairwise_distance(points: &[Complex64]) -> f64 {
    let mut d = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            d = d.min((points[i] - points[j]).norm());
        }
    }
    d
}

/// Loops generating the fundamental group of `ℂ ∖ {0, 1}` based at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPlan {
    pub base_point: Complex64,
    /// `[around 0, around 1]`, both positively oriented
    pub loops: [Path; 2],
    pub clearance: f64,
    pub singular: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanOptions {
    pub base_point: Option<Complex64>,
    /// loop radius as a fraction of the distance to the nearest other singular point
    pub radius_fraction: f64,
    /// clearance as a fraction of the minimum pairwise singular distance
    pub clearance_fraction: f64,
}

impl Default for PlanOptions {
    fn default() -> Self {
        Self { base_point: None, radius_fraction: 0.25, clearance_fraction: 0.05 }
    }
}

pub const DEFAULT_BASE_POINT: Complex64 = Complex64::new(0.5, 0.5);

/// A lasso around `singular[target]` starting at `base`, or `None` if no
/// candidate keeps the clearance.
pub fn lasso_around(
    base: Complex64,
    singular: &[Complex64],
    target: usize,
    radius_fraction: f64,
    clearance: f64,
) -> Option<Path> {
    let center = singular[target];
    let nearest = singular
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != target)
        .map(|(_, p)| p).map(|p| (p - center).norm()).fold(f64::INFINITY, f64::min);
    let radius = radius_fraction * nearest;
    if radius < clearance || (base - center).norm() < radius + clearance {
        return None;
    }
    let direct = (base - center).arg();
    let offsets = [0.0, 0.25, -0.25, 0.5, -0.5, 1.0, -1.0, 1.5, -1.5, 2.0, -2.0, 2.5, -2.5, PI];
    let ok = |p: &Path| p.check_clearance(singular, clearance).is_ok();
    for off in offsets {
        let path = Path::lasso(base, center, radius, direct + off);
        if ok(&path) {
            return Some(path);
        }
    }
    // one waypoint on a ring around the target
    let mut best: Option<Path> = None;
    for ring in [2.0, 3.0, 5.0] {
        for k in 0..24 {
            let theta = 2.0 * PI * k as f64 / 24.0;
            let via = center + Complex64::from_polar(radius * ring, theta);
            let path = Path::lasso_via(base, &[via], center, radius, theta);
            if ok(&path) && best.as_ref().is_none_or(|b| path.length() < b.length()) {
                best = Some(path);
            }
        }
    }
    best
}

fn plan_at(base: Complex64, singular: &[Complex64], opts: &PlanOptions, clearance: f64) -> Option<PathPlan> {
    if singular.iter().any(|p| (p - base).norm() < clearance) {
        return None;
    }
    let l0 = lasso_around(base, singular, 0, opts.radius_fraction, clearance)?;
    let l1 = lasso_around(base, singular, 1, opts.radius_fraction, clearance)?;
    Some(PathPlan { base_point: base, loops: [l0, l1], clearance, singular: singular.to_vec() })
}

/// Generators around `0` and `1`; `singular` must start with `0, 1` and list
/// every other finite point to avoid.
pub fn plan_loops(singular: &[Complex64], opts: &PlanOptions) -> Result<PathPlan> {
    if singular.len() < 2 {
        return Err(Error::NoPathPlan);
    }
    let clearance = opts.clearance_fraction * min_pairwise_distance(singular);
    if let Some(b) = opts.base_point {
        return plan_at(b, singular, opts, clearance).ok_or(Error::NoPathPlan);
    }
    if let Some(p) = plan_at(DEFAULT_BASE_POINT, singular, opts, clearance) {
        return Ok(p);
    }
    let mut best: Option<(f64, PathPlan)> = None;
    let n = 31;
    for i in 0..n {
        for j in 0..n {
            let z = Complex64::new(-1.0 + 3.0 * i as f64 / (n - 1) as f64, -1.5 + 3.0 * j as f64 / (n - 1) as f64);
            let margin = singular.iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min);
            if best.as_ref().is_some_and(|(m, _)| margin <= *m) {
                continue;
            }
            if let Some(plan) = plan_at(z, singular, opts, clearance) {
                best = Some((margin, plan));
            }
        }
    }
    best.map(|(_, p)| p).ok_or(Error::NoPathPlan)
}
