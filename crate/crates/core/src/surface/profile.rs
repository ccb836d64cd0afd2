//! Planar sections of the mesh and the order-three symmetry of the surface.

use std::collections::HashMap;

use num_complex::Complex64;

use super::mesh::{position, SurfaceMesh};
use super::transport::frame_along;
use crate::algebra::{H3Point, Mat2C};
use crate::error::{Error, Result};
use crate::fuchsian::{default_clearance, Path};
use crate::trinoid_data::TrinoidData;

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn unit(a: [f64; 3]) -> Option<[f64; 3]> {
    let n = dot(a, a).sqrt();
    (n > 0.0 && n.is_finite()).then(|| a.map(|x| x / n))
}

/// Orthonormal basis `(e₁, e₂)` of the plane through the origin with normal `n`.
pub fn plane_basis(normal: [f64; 3]) -> Option<([f64; 3], [f64; 3])> {
    let n = unit(normal)?;
    let helper = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = unit(cross(n, helper))?;
    let e2 = cross(n, e1);
    Some((e1, e2))
}

/// The longest connected component of the intersection of the mesh with the
/// plane through the ball origin with normal `normal`, as `(t, [x, y])` with
/// `t` the normalized arclength and `(x, y)` plane coordinates.
///
/// `resolution` > 0 resamples the polyline to that many points at equal
/// arclength; `0` keeps the raw crossing points.
pub fn profile_curve(mesh: &SurfaceMesh, normal: [f64; 3], resolution: usize) -> Result<Vec<(f64, [f64; 2])>> {
    let n = unit(normal).ok_or(Error::EmptyIntersection)?;
    let (e1, e2) = plane_basis(n).ok_or(Error::EmptyIntersection)?;
    let side: Vec<f64> = mesh.positions.iter().map(|p| dot(p.ball, n)).collect();
    // crossing point on each mesh edge, keyed by the sorted vertex pair
    let crossing = |a: usize, b: usize| -> Option<[f64; 3]> {
        let (sa, sb) = (side[a], side[b]);
        if (sa > 0.0) == (sb > 0.0) {
            return None;
        }
        let t = sa / (sa - sb);
        let (pa, pb) = (mesh.positions[a].ball, mesh.positions[b].ball);
        Some(std::array::from_fn(|k| pa[k] + t * (pb[k] - pa[k])))
    };
    let mut points: Vec<[f64; 3]> = Vec::new();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut adj: Vec<Vec<usize>> = Vec::new();
    for f in &mesh.faces {
        let mut ends = Vec::with_capacity(2);
        for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
            let key = (a.min(b), a.max(b));
            if let Some(p) = crossing(key.0, key.1) {
                let id = *index.entry(key).or_insert_with(|| {
                    points.push(p);
                    adj.push(Vec::new());
                    points.len() - 1
                });
                ends.push(id);
            }
        }
        if let [u, v] = ends[..] {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    // walk every component; a chain starts at a degree-1 point if it has one
    let mut seen = vec![false; points.len()];
    let mut best: Vec<usize> = Vec::new();
    let mut best_len = -1.0;
    let mut starts: Vec<usize> = (0..points.len()).filter(|&i| adj[i].len() == 1).collect();
    starts.extend(0..points.len());
    let dist = |a: [f64; 3], b: [f64; 3]| {
        let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
        dot(d, d).sqrt()
    };
    for s in starts {
        if seen[s] {
            continue;
        }
        let mut chain = vec![s];
        seen[s] = true;
        let mut cur = s;
        while let Some(&next) = adj[cur].iter().find(|&&w| !seen[w]) {
            seen[next] = true;
            chain.push(next);
            cur = next;
        }
        if adj[cur].contains(&s) && chain.len() > 2 {
            chain.push(s);
        }
        let len: f64 = chain.windows(2).map(|w| dist(points[w[0]], points[w[1]])).sum();
        if len > best_len {
            best_len = len;
            best = chain;
        }
    }
    let mut cum = vec![0.0];
    for w in best.windows(2) {
        let last = *cum.last().unwrap();
        cum.push(last + dist(points[w[0]], points[w[1]]));
    }
    let total = *cum.last().unwrap();
    let planar = |p: [f64; 3]| [dot(p, e1), dot(p, e2)];
    let raw: Vec<(f64, [f64; 2])> = best
        .iter()
        .zip(&cum)
        .map(|(&i, &c)| (if total > 0.0 { c / total } else { 0.0 }, planar(points[i])))
        .collect();
    if resolution == 0 || raw.len() < 2 {
        return Ok(raw);
    }
    let mut out = Vec::with_capacity(resolution);
    let mut seg = 0;
    for k in 0..resolution {
        let t = if resolution == 1 { 0.0 } else { k as f64 / (resolution - 1) as f64 };
        while seg + 2 < raw.len() && raw[seg + 1].0 < t {
            seg += 1;
        }
        let (t0, p0) = raw[seg];
        let (t1, p1) = raw[seg + 1];
        let u = if t1 > t0 { ((t - t0) / (t1 - t0)).clamp(0.0, 1.0) } else { 0.0 };
        out.push((t, [p0[0] + u * (p1[0] - p0[0]), p0[1] + u * (p1[1] - p0[1])]));
    }
    Ok(out)
}

/// The order-three deck symmetry `z ↦ 1/(1 − z)` of `ℂ∖{0, 1}`, which
/// cycles `0 → 1 → ∞ → 0`.
pub fn rotate_punctures(z: Complex64) -> Complex64 {
    1.0 / (1.0 - z)
}

/// Möbius map `[[w₂−w₃, −w₁(w₂−w₃)], [w₂−w₁, −w₃(w₂−w₁)]]` sending
/// `w₁, w₂, w₃` to `0, 1, ∞`.
fn to_standard(w: [Complex64; 3]) -> Mat2C {
    let [w1, w2, w3] = w;
    Mat2C::new(w2 - w3, -w1 * (w2 - w3), w2 - w1, -w3 * (w2 - w1))
}

fn mobius(m: &Mat2C, z: Complex64) -> Complex64 {
    (m.a11 * z + m.a12) / (m.a21 * z + m.a22)
}

/// The `T ∈ SL(2, ℂ)` with `G∘σ = T⋆G`, where `σ` is [`rotate_punctures`],
/// or `None` if the Gauss map has no such symmetry.
pub fn gauss_symmetry(data: &TrinoidData) -> Option<Mat2C> {
    let zs = [Complex64::new(0.31, 0.47), Complex64::new(-0.6, 0.9), Complex64::new(1.7, -0.4), Complex64::new(0.2, -1.3)];
    let src: [Complex64; 4] = zs.map(|z| data.gauss.value(z));
    let dst: [Complex64; 4] = zs.map(|z| data.gauss.value(rotate_punctures(z)));
    if src.iter().chain(&dst).any(|w| !w.is_finite()) {
        return None;
    }
    let t = to_standard([dst[0], dst[1], dst[2]]).inverse()? * to_standard([src[0], src[1], src[2]]);
    let t = t.normalize_det()?;
    let check = mobius(&t, src[3]);
    ((check - dst[3]).norm() < 1e-8 * dst[3].norm().max(1.0)).then_some(t)
}

/// A clear path from `from` to `to`: the segment, or two segments through a
/// waypoint on a coarse grid.
fn connect(data: &TrinoidData, from: Complex64, to: Complex64) -> Result<Path> {
    let sing = data.singular_points();
    let clearance = default_clearance(data);
    let direct = Path::segment(from, to);
    if direct.check_clearance(&sing, clearance).is_ok() {
        return Ok(direct);
    }
    let mut best: Option<Path> = None;
    for i in -12..=12 {
        for j in -12..=12 {
            let via = Complex64::new(0.5 + 0.25 * i as f64, 0.25 * j as f64 + 0.125);
            let p = Path::segment(from, via).then(&Path::segment(via, to));
            if p.check_clearance(&sing, clearance).is_ok() && best.as_ref().is_none_or(|b| p.length() < b.length()) {
                best = Some(p);
            }
        }
    }
    best.ok_or(Error::NoPathPlan)
}

/// `max d_H³(f(σz), T·f(z))` over points `z` near the base point, where
/// `T` realizes the symmetry of the Gauss map. It vanishes exactly when the
/// surface `π̂(F a⁻¹)` is invariant under the isometry `T`, the only
/// candidate compatible with the Gauss map. `None` when the Gauss map has
/// no such symmetry (unequal angles).
pub fn threefold_symmetry_defect(
    data: &TrinoidData,
    base_point: Complex64,
    conjugator: &Mat2C,
    tol: f64,
) -> Result<Option<f64>> {
    let Some(t) = gauss_symmetry(data) else {
        return Ok(None);
    };
    let offsets = [Complex64::new(0.0, 0.0), Complex64::new(0.05, 0.0), Complex64::new(0.0, 0.05), Complex64::new(-0.04, -0.03)];
    let mut worst = 0.0f64;
    for o in offsets {
        let z = base_point + o;
        let fz = frame_along(data, &connect(data, base_point, z)?, tol)?;
        let w = rotate_punctures(z);
        let fw = frame_along(data, &connect(data, base_point, w)?, tol)?;
        let x = position(&fz, conjugator)?.hermitian();
        let y = position(&fw, conjugator)?;
        let moved = H3Point::from_hermitian(&(t * x * t.adjoint()));
        worst = worst.max(moved.distance(&y));
    }
    Ok(Some(worst))
}
