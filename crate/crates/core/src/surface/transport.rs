use rayon::prelude::*;

use super::grid::SampleGrid;
use crate::algebra::Mat2C;
use crate::error::{Error, Result};
use crate::fuchsian::{integrate_matrix_ode, integrate_sheared, shear, OdeOptions, Path, StepStats};
use crate::trinoid_data::TrinoidData;

/// `F` at every grid vertex, continued along the spanning tree from
/// `F(base point) = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameField {
    pub values: Vec<Mat2C>,
    /// `U⁻¹F` with `U = [[1, G], [0, 1]]`, the variable actually transported
    pub sheared: Vec<Mat2C>,
    /// `|det F − 1|` at each vertex
    pub det_drift: Vec<f64>,
    pub stats: StepStats,
}

impl FrameField {
    pub fn max_det_drift(&self) -> f64 {
        self.det_drift.iter().copied().fold(0.0, f64::max)
    }
}

fn edge_opts(tol: f64) -> OdeOptions {
    // edges were validated when the grid was built
    OdeOptions { tol, clearance: Some(0.0) }
}

/// Transports the frame over the tree, one depth level at a time; vertices
/// of the same level are independent.
pub fn transport_frame(data: &TrinoidData, grid: &SampleGrid, tol: f64) -> Result<FrameField> {
    let n = grid.vertices.len();
    let opts = edge_opts(tol);
    let mut sheared = vec![Mat2C::identity(); n];
    let y_base = shear(data, grid.base_point).sl2_inverse();
    let mut stats = StepStats::default();
    let mut levels: Vec<Vec<usize>> = Vec::new();
    for &v in &grid.order {
        let d = grid.depth[v];
        if levels.len() <= d {
            levels.resize(d + 1, Vec::new());
        }
        levels[d].push(v);
    }
    for level in &levels {
        let results: Vec<(usize, Result<(Mat2C, StepStats)>)> = level
            .par_iter()
            .map(|&v| {
                let (from, y0) = match grid.parent[v] {
                    Some(p) => (grid.vertices[p], sheared[p]),
                    None => (grid.base_point, y_base),
                };
                let r = integrate_sheared(data, &Path::segment(from, grid.vertices[v]), &y0, &opts)
                    .map(|t| (t.value, t.stats));
                (v, r)
            })
            .collect();
        for (v, r) in results {
            let (f, st) = r.map_err(|e| Error::Edge { edge: v, source: Box::new(e) })?;
            sheared[v] = f;
            stats.merge(&st);
        }
    }
    let values: Vec<Mat2C> = sheared.iter().zip(&grid.vertices).map(|(y, &z)| shear(data, z) * *y).collect();
    let det_drift = sheared.iter().map(|y| (y.det() - 1.0).norm()).collect();
    Ok(FrameField { values, sheared, det_drift, stats })
}

/// `F` at the end of `path`, which must start at the base point.
pub fn frame_along(data: &TrinoidData, path: &Path, tol: f64) -> Result<Mat2C> {
    Ok(integrate_matrix_ode(data, path, &Mat2C::identity(), &edge_opts(tol))?.value)
}
