use num_complex::Complex64;

use super::grid::{Region, SampleGrid};
use super::transport::{frame_along, FrameField};
use super::weierstrass::WeierstrassSample;
use crate::algebra::{project_h3, H3Point, Mat2C};
use crate::error::{Error, Result};
use crate::fuchsian::{Path, PathPlan};
use crate::trinoid_data::TrinoidData;

/// Per-vertex diagnostics carried by the mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexDiagnostics {
    pub g_abs: f64,
    /// conformal factor of `ds²`
    pub metric: f64,
    pub q_abs: f64,
    /// `|ω·dg − Q̂|/|Q̂|`
    pub hopf_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh {
    pub positions: Vec<H3Point>,
    pub faces: Vec<[usize; 3]>,
    pub diagnostics: Vec<VertexDiagnostics>,
}

impl SurfaceMesh {
    pub fn max_ball_norm(&self) -> f64 {
        self.positions.iter().map(H3Point::ball_norm).fold(0.0, f64::max)
    }

    pub fn ball_positions(&self) -> impl Iterator<Item = [f64; 3]> + '_ {
        self.positions.iter().map(|p| p.ball)
    }
}

fn h3(f: &Mat2C) -> Result<H3Point> {
    // the transported frame drifts off det 1 by at most the integration error;
    // after rescaling, det is only known to about ε‖F‖²
    let f = f.normalize_det().ok_or(Error::NonSL2Input(f64::INFINITY))?;
    project_h3(&f, 1e-8 * f.norm().powi(2).max(1.0))
}

/// Position `π̂(F a⁻¹)` of a frame value for the conjugator `a`.
pub fn position(frame: &Mat2C, conjugator: &Mat2C) -> Result<H3Point> {
    h3(&(*frame * conjugator.sl2_inverse()))
}

/// The sampled immersion `π̂(F a⁻¹)` where `a ρ a⁻¹ ⊂ SU(2)`.
pub fn build_mesh(
    grid: &SampleGrid,
    frames: &FrameField,
    samples: &[WeierstrassSample],
    conjugator: &Mat2C,
) -> Result<SurfaceMesh> {
    let positions = frames.values.iter().map(|f| position(f, conjugator)).collect::<Result<Vec<_>>>()?;
    let diagnostics = samples
        .iter()
        .map(|s| VertexDiagnostics {
            g_abs: s.g.norm(),
            metric: s.metric_factor(),
            q_abs: s.q.norm(),
            hopf_residual: s.hopf_residual,
        })
        .collect();
    Ok(SurfaceMesh { positions, faces: grid.faces.clone(), diagnostics })
}

/// Outcome of continuing the frame to a vertex along a second path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchTest {
    pub vertex: usize,
    /// which generator loop (0 or 1) was run before the tree path
    pub generator: usize,
    /// number of times the loop was run
    pub winding: usize,
    /// Euclidean distance of the two ball points
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WellDefinedness {
    pub tests: Vec<BranchTest>,
}

impl WellDefinedness {
    pub fn max_discrepancy(&self) -> f64 {
        self.tests.iter().map(|t| t.discrepancy).fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_discrepancy() < tol
    }
}

/// Continues `F` to `count` vertices along a generator loop (run once or
/// twice) followed by the tree path, and compares the resulting ball points
/// with the tree values. The vertices are spread evenly over the grid.
pub fn well_definedness(
    data: &TrinoidData,
    grid: &SampleGrid,
    frames: &FrameField,
    plan: &PathPlan,
    conjugator: &Mat2C,
    count: usize,
    tol: f64,
) -> Result<WellDefinedness> {
    if (plan.base_point - grid.base_point).norm() > 0.0 {
        return Err(Error::NoPathPlan);
    }
    let n = grid.vertices.len();
    let count = count.min(n);
    let mut tests = Vec::with_capacity(count);
    for k in 0..count {
        let v = (k * n) / count.max(1) + (n / count.max(1)) / 2;
        let v = v.min(n - 1);
        let generator = k % 2;
        let winding = 1 + (k / 2) % 2;
        let mut path = Path::new(Vec::new());
        for _ in 0..winding {
            path = path.then(&plan.loops[generator]);
        }
        path = path.then(&Path::new(grid.tree_path(v)));
        let f = frame_along(data, &path, tol)?;
        let a = position(&f, conjugator)?;
        let b = position(&frames.values[v], conjugator)?;
        tests.push(BranchTest { vertex: v, generator, winding, discrepancy: a.ball_dist(&b) });
    }
    Ok(WellDefinedness { tests })
}

/// `lim |Q̂|·|z − p|²` at `0`, `1` and `lim |Q̂|·|z|²` at `∞`, averaged
/// over the innermost ring of each end annulus.
pub fn end_hopf_limits(data: &TrinoidData, grid: &SampleGrid) -> [f64; 3] {
    let centers = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    let mut sums = [0.0; 3];
    let mut counts = [0usize; 3];
    for (z, r) in grid.vertices.iter().zip(&grid.region) {
        if let Region::End { end, ring: 0, .. } = *r {
            let q = data.hopf.eval(*z).norm();
            let w = if end < 2 { (z - centers[end]).norm_sqr() } else { z.norm_sqr() };
            sums[end] += q * w;
            counts[end] += 1;
        }
    }
    std::array::from_fn(|j| sums[j] / counts[j].max(1) as f64)
}

/// Ball norms along each end's rings, innermost (nearest the end) first;
/// averaged over the sectors.
pub fn end_ball_profiles(grid: &SampleGrid, mesh: &SurfaceMesh) -> [Vec<f64>; 3] {
    let mut acc: [Vec<(f64, usize)>; 3] = Default::default();
    for (p, r) in mesh.positions.iter().zip(&grid.region) {
        if let Region::End { end, ring, .. } = *r {
            if acc[end].len() <= ring {
                acc[end].resize(ring + 1, (0.0, 0));
            }
            acc[end][ring].0 += p.ball_norm();
            acc[end][ring].1 += 1;
        }
    }
    acc.map(|v| v.into_iter().map(|(s, c)| s / c.max(1) as f64).collect())
}

/// `∫ dσ²` over the sampled region, by the vertex-averaged trapezoid rule
/// on each face. This is the absolute total curvature of the sampled part.
pub fn total_curvature(grid: &SampleGrid, samples: &[WeierstrassSample]) -> f64 {
    grid.faces
        .iter()
        .map(|f| {
            let (a, b, c) = (grid.vertices[f[0]], grid.vertices[f[1]], grid.vertices[f[2]]);
            let area = 0.5 * ((b - a).conj() * (c - a)).im.abs();
            let mean = f.iter().map(|&i| samples[i].dual_metric_factor()).sum::<f64>() / 3.0;
            area * mean
        })
        .sum()
}
