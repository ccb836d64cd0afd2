//! The immersion `f = π̂(F a⁻¹)` sampled on a grid, with the Weierstrass
//! consistency checks and mesh export.

pub mod export;
pub mod grid;
pub mod mesh;
pub mod profile;
pub mod transport;
pub mod weierstrass;

use num_complex::Complex64;

use crate::algebra::Mat2C;
use crate::error::Result;
use crate::trinoid_data::TrinoidData;

pub use export::{write_obj, write_ply, write_profile_csv};
pub use grid::{GridOptions, Region, SampleGrid};
pub use mesh::{build_mesh, well_definedness, SurfaceMesh, VertexDiagnostics, WellDefinedness};
pub use profile::{profile_curve, threefold_symmetry_defect};
pub use transport::{transport_frame, FrameField};
pub use weierstrass::{recover_weierstrass, ResidualSummary, WeierstrassSample};

/// Pointwise threshold of the Weierstrass residuals.
pub const RESIDUAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    pub grid: SampleGrid,
    pub frames: FrameField,
    pub samples: Vec<WeierstrassSample>,
    pub mesh: SurfaceMesh,
}

/// Aggregate residuals of a sampled surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceDiagnostics {
    pub hopf: ResidualSummary,
    pub gauss: ResidualSummary,
    pub conformal: ResidualSummary,
    pub max_null_defect: f64,
    pub max_det_drift: f64,
    pub max_ball_norm: f64,
    pub end_hopf_limits: [f64; 3],
    /// `∫ dσ²` over the sampled region; reported only
    pub total_curvature: f64,
}

impl Surface {
    pub fn build(data: &TrinoidData, base_point: Complex64, conjugator: &Mat2C, grid: &GridOptions, tol: f64) -> Result<Self> {
        let grid = SampleGrid::new(data, base_point, grid)?;
        let frames = transport_frame(data, &grid, tol)?;
        let samples = recover_weierstrass(data, &grid, &frames, tol)?;
        let mesh = build_mesh(&grid, &frames, &samples, conjugator)?;
        Ok(Self { grid, frames, samples, mesh })
    }

    /// The mesh for another conjugator on the same frames.
    pub fn remesh(&self, conjugator: &Mat2C) -> Result<SurfaceMesh> {
        build_mesh(&self.grid, &self.frames, &self.samples, conjugator)
    }

    pub fn diagnostics(&self, data: &TrinoidData) -> SurfaceDiagnostics {
        let s = &self.samples;
        SurfaceDiagnostics {
            hopf: ResidualSummary::new(s.iter().map(|x| x.hopf_residual), RESIDUAL_TOL),
            gauss: ResidualSummary::new(s.iter().map(|x| x.gauss_residual), RESIDUAL_TOL),
            conformal: ResidualSummary::new(s.iter().map(|x| x.conformal_residual()), RESIDUAL_TOL),
            max_null_defect: s.iter().map(|x| x.null_defect).fold(0.0, f64::max),
            max_det_drift: self.frames.max_det_drift(),
            max_ball_norm: self.mesh.max_ball_norm(),
            end_hopf_limits: mesh::end_hopf_limits(data, &self.grid),
            total_curvature: mesh::total_curvature(&self.grid, s),
        }
    }
}
