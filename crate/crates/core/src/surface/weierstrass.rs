//! Recovery of the Weierstrass data `(g, ω)` from the transported frame and
//! the pointwise consistency checks that come with it.

use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::SampleGrid;
use super::transport::FrameField;
use crate::algebra::Mat2C;
use crate::error::{Error, Result};
use crate::fuchsian::{integrate_sheared, shear, OdeOptions, Path};
use crate::trinoid_data::TrinoidData;

/// Relative defect of `A₁₂ = −g²A₂₁`, `A₂₂ = −gA₂₁` above which a vertex
/// counts as violating the null structure.
pub const NULL_DEFECT_TOL: f64 = 1e-7;
/// Fraction of violating vertices tolerated before giving up.
pub const NULL_VIOLATION_FRACTION: f64 = 0.05;

/// Weierstrass data and residuals at one vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeierstrassSample {
    /// secondary Gauss map
    pub g: Complex64,
    /// `ω = ω_density dz`
    pub omega: Complex64,
    pub dg: Complex64,
    /// Hopf differential `Q̂` at the vertex
    pub q: Complex64,
    /// `|ω·dg − Q̂| / |Q̂|`
    pub hopf_residual: f64,
    /// `|dF₁₁/dF₂₁ − G| / |G|`
    pub gauss_residual: f64,
    /// relative defect of the null structure of `F⁻¹dF`
    pub null_defect: f64,
}

impl WeierstrassSample {
    /// Conformal factor of `ds² = (1+|g|²)²|ω|²`.
    pub fn metric_factor(&self) -> f64 {
        let s = 1.0 + self.g.norm_sqr();
        s * s * self.omega.norm_sqr()
    }

    /// Conformal factor of `dσ² = 4|g′|²/(1+|g|²)²`.
    pub fn dual_metric_factor(&self) -> f64 {
        let s = 1.0 + self.g.norm_sqr();
        4.0 * self.dg.norm_sqr() / (s * s)
    }

    /// `h = −Q − Q̄ + ds²` as `(h₁₁, h₁₂, h₂₂)` in the coordinates `z = x + iy`.
    pub fn second_fundamental_form(&self) -> [f64; 3] {
        second_fundamental_form(self.metric_factor(), self.q)
    }

    /// `|ds²·dσ² − 4|Q̂|²| / 4|Q̂|²`.
    pub fn conformal_residual(&self) -> f64 {
        let qq = 4.0 * self.q.norm_sqr();
        (self.metric_factor() * self.dual_metric_factor() - qq).abs() / qq
    }
}

/// `h = −Q dz² − Q̄ dz̄² + λ|dz|²` as `(h₁₁, h₁₂, h₂₂)`; with
/// `dz² = dx² − dy² + 2i dx dy`, `−2Re(Q dz²) = −2Re Q (dx² − dy²) + 4 Im Q dx dy`.
pub fn second_fundamental_form(lambda: f64, q: Complex64) -> [f64; 3] {
    [lambda - 2.0 * q.re, 2.0 * q.im, lambda + 2.0 * q.re]
}

/// Fourth-order central difference weights at offsets `−2h, −h, h, 2h`.
fn fd4(v: [Mat2C; 4], h: f64) -> Mat2C {
    let w = [1.0 / 12.0, -2.0 / 3.0, 2.0 / 3.0, -1.0 / 12.0];
    let mut s = Mat2C::zero();
    for (m, wk) in v.iter().zip(w) {
        s = s + m.scale(Complex64::new(wk / h, 0.0));
    }
    s
}

fn fd4_scalar(v: [Complex64; 4], h: f64) -> Complex64 {
    (v[0] - 8.0 * v[1] + 8.0 * v[2] - v[3]) / (12.0 * h)
}

/// `g = A₁₁/A₂₁` for `A = F⁻¹ A_dual F`, the analytic `F⁻¹dF`.
fn g_from_frame(data: &TrinoidData, z: Complex64, f: &Mat2C) -> Complex64 {
    let a = f.sl2_inverse() * data.dual_coefficient(z) * *f;
    a.a11 / a.a21
}

fn sample_at(data: &TrinoidData, z: Complex64, y: &Mat2C, tol: f64) -> Result<WeierstrassSample> {
    let sing = data.singular_points();
    let d = sing.iter().map(|p| (z - p).norm()).fold(f64::INFINITY, f64::min);
    let h = 1e-3 * d;
    let opts = OdeOptions { tol, clearance: Some(0.0) };
    let offsets = [-2.0, -1.0, 1.0, 2.0];
    let mut nb = [Mat2C::zero(); 4];
    for (slot, o) in nb.iter_mut().zip(offsets) {
        let w = z + Complex64::new(o * h, 0.0);
        *slot = shear(data, w) * integrate_sheared(data, &Path::segment(z, w), y, &opts)?.value;
    }
    let f = &(shear(data, z) * *y);
    let df = fd4(nb, h);
    let a = f.sl2_inverse() * df;
    let omega = a.a21;
    let g = a.a11 / a.a21;
    let scale = a.norm().max(f64::MIN_POSITIVE);
    let null_defect = ((a.a12 + g * g * a.a21).norm() + (a.a22 + g * a.a21).norm()) / scale;
    let gs: [Complex64; 4] =
        std::array::from_fn(|k| g_from_frame(data, z + Complex64::new(offsets[k] * h, 0.0), &nb[k]));
    let dg = fd4_scalar(gs, h);
    let q = data.hopf.eval(z);
    let big_g = data.gauss.value(z);
    Ok(WeierstrassSample {
        g,
        omega,
        dg,
        q,
        hopf_residual: (omega * dg - q).norm() / q.norm(),
        gauss_residual: (df.a11 / df.a21 - big_g).norm() / big_g.norm(),
        null_defect,
    })
}

/// Weierstrass data at every grid vertex.
///
/// `F⁻¹dF` is formed from fourth-order central differences of `F` along
/// the real direction, so the checks compare the transported frame with the
/// closed-form data rather than with itself.
pub fn recover_weierstrass(
    data: &TrinoidData,
    grid: &SampleGrid,
    frames: &FrameField,
    tol: f64,
) -> Result<Vec<WeierstrassSample>> {
    let samples: Vec<WeierstrassSample> = (0..grid.vertices.len())
        .into_par_iter()
        .map(|v| sample_at(data, grid.vertices[v], &frames.sheared[v], tol).map_err(|e| Error::Edge { edge: v, source: Box::new(e) }))
        .collect::<Result<_>>()?;
    let bad = samples.iter().filter(|s| !(s.null_defect <= NULL_DEFECT_TOL)).count();
    if bad as f64 > NULL_VIOLATION_FRACTION * samples.len() as f64 {
        return Err(Error::NullStructureViolation(bad, samples.len()));
    }
    Ok(samples)
}

/// Summary of a residual over all vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSummary {
    pub max: f64,
    pub median: f64,
    /// fraction of vertices with residual below `threshold`
    pub fraction_below: f64,
    pub threshold: f64,
}

impl ResidualSummary {
    pub fn new(values: impl IntoIterator<Item = f64>, threshold: f64) -> Self {
        let mut v: Vec<f64> = values.into_iter().map(|x| if x.is_nan() { f64::INFINITY } else { x }).collect();
        if v.is_empty() {
            return Self { max: 0.0, median: 0.0, fraction_below: 1.0, threshold };
        }
        v.sort_by(f64::total_cmp);
        let below = v.iter().filter(|&&x| x < threshold).count();
        Self {
            max: *v.last().unwrap(),
            median: v[v.len() / 2],
            fraction_below: below as f64 / v.len() as f64,
            threshold,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::AngleTriple;
    use crate::surface::grid::GridOptions;
    use crate::surface::transport::transport_frame;
    use crate::tolerances::Tolerances;

    fn samples(a: f64, b: f64, c: f64) -> (TrinoidData, SampleGrid, Vec<WeierstrassSample>) {
        let d = TrinoidData::new(AngleTriple::from_pi_multiples(a, b, c).unwrap(), &Tolerances::default()).unwrap();
        let opts = GridOptions { rings: 4, sectors: 12, ..Default::default() };
        let g = SampleGrid::new(&d, Complex64::new(0.5, 0.5), &opts).unwrap();
        let f = transport_frame(&d, &g, 1e-12).unwrap();
        let s = recover_weierstrass(&d, &g, &f, 1e-12).unwrap();
        (d, g, s)
    }

    #[test]
    fn hopf_and_gauss_map_are_recovered() {
        let (_, _, s) = samples(2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0);
        let hopf = ResidualSummary::new(s.iter().map(|x| x.hopf_residual), 1e-6);
        let gauss = ResidualSummary::new(s.iter().map(|x| x.gauss_residual), 1e-6);
        assert!(hopf.fraction_below >= 0.95, "{hopf:?}");
        assert!(gauss.fraction_below >= 0.95, "{gauss:?}");
    }

    #[test]
    fn metric_is_positive_and_conformal_identity_holds() {
        let (_, _, s) = samples(0.5, 0.3, 0.7);
        for x in &s {
            assert!(x.metric_factor() > 0.0);
        }
        let conf = ResidualSummary::new(s.iter().map(|x| x.conformal_residual()), 1e-6);
        assert!(conf.fraction_below >= 0.95, "{conf:?}");
    }

    #[test]
    fn second_fundamental_form_components() {
        let q = Complex64::new(0.3, -0.2);
        let h = second_fundamental_form(2.0, q);
        assert_eq!(h, [2.0 - 0.6, -0.4, 2.0 + 0.6]);
        // umbilic: h is the metric
        assert_eq!(second_fundamental_form(1.5, Complex64::new(0.0, 0.0)), [1.5, 0.0, 1.5]);
    }

    #[test]
    fn near_umbilic_vertex_has_h_close_to_metric() {
        let (d, _, _) = samples(2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0);
        let q1 = d.umbilics.q1;
        let z = q1 + Complex64::new(1e-4, 0.0);
        let qv = d.hopf.eval(z);
        let h = second_fundamental_form(1.0, qv);
        assert!((h[0] - 1.0).abs() < 1e-2 && (h[2] - 1.0).abs() < 1e-2 && h[1].abs() < 1e-2);
    }
}
