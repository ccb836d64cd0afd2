//! Analytic continuation of the trinoid ODEs along paths and their loop
//! monodromy.

mod equivalence;
pub mod integrator;
pub mod path;

use num_complex::Complex64;

use crate::algebra::{eigenvalues_2x2, Mat2C};
use crate::error::{Error, Result};
use crate::moduli::AngleTriple;
use crate::trinoid_data::{scalar_ode_coeffs_unchecked, HypergeometricParams, TrinoidData};

pub use equivalence::{projective_conjugator, projective_equivalence};
pub use integrator::{StepControl, StepStats};
pub use path::{plan_loops, Path, PathPiece, PathPlan, PlanOptions, DEFAULT_BASE_POINT};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub tol: f64,
    /// minimum distance to singular points; `None` uses the data default
    pub clearance: Option<f64>,
}

impl OdeOptions {
    pub fn new(tol: f64) -> Self {
        Self { tol, clearance: None }
    }
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self::new(1e-12)
    }
}

/// Result of transporting a 2×2 matrix along a path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transport {
    pub value: Mat2C,
    /// `max |det F(z) − det F(start)|` over accepted steps
    pub max_det_drift: f64,
    pub stats: StepStats,
}

/// Default clearance: 5% of the minimum pairwise distance of the finite
/// singular points.
pub fn default_clearance(data: &TrinoidData) -> f64 {
    0.05 * path::min_pairwise_distance(&data.singular_points())
}

fn to_state(m: &Mat2C) -> [Complex64; 4] {
    m.to_array()
}

/// Integrates `dY/dz = M(z) Y` along `path` starting from `y0`.
pub fn transport_linear<M>(coeff: M, path: &Path, y0: &Mat2C, tol: f64) -> Result<Transport>
where
    M: Fn(Complex64) -> Mat2C,
{
    let det0 = y0.det();
    let mut y = to_state(y0);
    let mut drift = 0.0f64;
    let mut stats = StepStats::default();
    let ctl = StepControl::new(tol);
    for (idx, piece) in path.pieces.iter().enumerate() {
        if piece.length() == 0.0 {
            continue;
        }
        let rhs = |s: f64, y: &[Complex64; 4]| {
            let z = piece.point(s);
            let m = coeff(z).scale(piece.velocity(s));
            let r = m * Mat2C::from_array(*y);
            r.to_array()
        };
        let (y_end, st) = integrator::integrate(rhs, y, &ctl, |_, y| {
            let d = Mat2C::from_array(*y).det();
            drift = drift.max((d - det0).norm());
        })
        .map_err(|e| match e {
            Error::StepUnderflow(s, _) => Error::StepUnderflow(s, idx),
            other => other,
        })?;
        y = y_end;
        stats.merge(&st);
    }
    Ok(Transport { value: Mat2C::from_array(y), max_det_drift: drift, stats })
}

fn check_path(data: &TrinoidData, path: &Path, opts: &OdeOptions) -> Result<()> {
    let clearance = opts.clearance.unwrap_or_else(|| default_clearance(data));
    path.check_clearance(&data.singular_points(), clearance)
}

/// `U(z) = [[1, G], [0, 1]]`, relating the frame `F = U Y` to the
/// sheared frame `Y` of [`integrate_sheared`].
pub fn shear(data: &TrinoidData, z: Complex64) -> Mat2C {
    let one = Complex64::new(1.0, 0.0);
    Mat2C::new(one, data.gauss.value(z), Complex64::new(0.0, 0.0), one)
}

/// `F` at the end of `path` for `dF F⁻¹ = A(z) dz`,
/// `A = [[G, −G²], [1, −G]] Q̂/G′`, with `F(start) = f0`.
pub fn integrate_matrix_ode(data: &TrinoidData, path: &Path, f0: &Mat2C, opts: &OdeOptions) -> Result<Transport> {
    let (Some(a), Some(b)) = (path.start(), path.end()) else {
        return Ok(Transport { value: *f0, max_det_drift: 0.0, stats: StepStats::default() });
    };
    let y0 = shear(data, a).sl2_inverse() * *f0;
    let mut t = integrate_sheared(data, path, &y0, opts)?;
    t.value = shear(data, b) * t.value;
    Ok(t)
}

/// The same equation for `Y = U⁻¹F`: `Y′ = [[0, −G′], [Q̂/G′, 0]] Y`.
///
/// `A` is nilpotent with first row nearly `G` times the second, so `A F`
/// loses digits where `Q̂/G′` is large; the sheared form avoids that.
pub fn integrate_sheared(data: &TrinoidData, path: &Path, y0: &Mat2C, opts: &OdeOptions) -> Result<Transport> {
    check_path(data, path, opts)?;
    let zero = Complex64::new(0.0, 0.0);
    transport_linear(|z| Mat2C::new(zero, -data.gauss.deriv(z), data.phi(z), zero), path, y0, opts.tol)
}

/// Transfer matrix of `X″ + r X′ + s X = 0` in the basis of initial
/// conditions `(X, X′) = (1, 0), (0, 1)` at the path start.
pub fn integrate_scalar_ode(data: &TrinoidData, path: &Path, opts: &OdeOptions) -> Result<Transport> {
    check_path(data, path, opts)?;
    transport_linear(
        |z| {
            let (r, s) = scalar_ode_coeffs_unchecked(data, z);
            Mat2C::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), -s, -r)
        },
        path,
        &Mat2C::identity(),
        opts.tol,
    )
}

/// Transfer matrix of `z(1−z)X″ + (c − (a+b+1)z)X′ − abX = 0`.
pub fn integrate_hypergeometric(params: &HypergeometricParams, path: &Path, clearance: f64, tol: f64) -> Result<Transport> {
    path.check_clearance(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)], clearance)?;
    let HypergeometricParams { a, b, c, .. } = *params;
    transport_linear(
        |z| {
            let w = z * (1.0 - z);
            let p = (c - (a + b + 1.0) * z) / w;
            let q = -a * b / w;
            Mat2C::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), -q, -p)
        },
        path,
        &Mat2C::identity(),
        tol,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonodromySource {
    MatrixOde,
    ScalarOde,
    Hypergeometric,
}

impl MonodromySource {
    pub fn name(&self) -> &'static str {
        match self {
            MonodromySource::MatrixOde => "matrix_ode",
            MonodromySource::ScalarOde => "scalar_ode",
            MonodromySource::Hypergeometric => "hypergeometric",
        }
    }
}

/// Images of the loops around `0`, `1`, `∞`; `ρ3 = (ρ1 ρ2)⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyRep {
    pub rho: [Mat2C; 3],
    pub source: MonodromySource,
}

impl MonodromyRep {
    pub fn from_generators(rho1: Mat2C, rho2: Mat2C, source: MonodromySource) -> Result<Self> {
        let rho3 = (rho1 * rho2).inverse().ok_or(Error::NonSL2Input(0.0))?;
        Ok(Self { rho: [rho1, rho2, rho3], source })
    }

    pub fn conjugated(&self, a: &Mat2C) -> Option<Self> {
        let ai = a.inverse()?;
        Some(Self { rho: self.rho.map(|r| *a * r * ai), source: self.source })
    }

    pub fn relation_defect(&self) -> f64 {
        (self.rho[0] * self.rho[1] * self.rho[2]).dist(&Mat2C::identity())
    }

    pub fn max_det_defect(&self) -> f64 {
        self.rho.iter().map(|r| (r.det() - 1.0).norm()).fold(0.0, f64::max)
    }
}

/// Distance from `eig ρ_j` to `{−e^{iB_j}, −e^{−iB_j}}` for each generator,
/// after rescaling to unit determinant and, if `projective`, up to sign.
pub fn eigenvalue_errors(rep: &MonodromyRep, angles: &AngleTriple, projective: bool) -> [f64; 3] {
    let b = angles.radians();
    std::array::from_fn(|j| {
        let m = if projective { rep.rho[j].normalize_det().unwrap_or(rep.rho[j]) } else { rep.rho[j] };
        let (l1, l2) = eigenvalues_2x2(&m);
        let e1 = -Complex64::from_polar(1.0, b[j]);
        let e2 = -Complex64::from_polar(1.0, -b[j]);
        let pair = |s: f64| {
            let d1 = ((l1 - e1 * s).norm()).max((l2 - e2 * s).norm());
            let d2 = ((l1 - e2 * s).norm()).max((l2 - e1 * s).norm());
            d1.min(d2)
        };
        if projective {
            pair(1.0).min(pair(-1.0))
        } else {
            pair(1.0)
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonodromyDiagnostics {
    pub max_det_drift: f64,
    pub stats: StepStats,
    pub eigen_errors: [f64; 3],
    pub relation_defect: f64,
    /// warning-level messages, e.g. eigenvalue mismatch
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonodromyResult {
    pub rep: MonodromyRep,
    pub diagnostics: MonodromyDiagnostics,
}

const EIGEN_WARN: f64 = 1e-4;

fn finish(rep: MonodromyRep, angles: &AngleTriple, t: [Transport; 2], projective: bool) -> MonodromyResult {
    let eigen_errors = eigenvalue_errors(&rep, angles, projective);
    let mut warnings = Vec::new();
    for (j, e) in eigen_errors.iter().enumerate() {
        if !(*e < EIGEN_WARN) {
            warnings.push(format!("eigenvalue mismatch at end {}: {e:.3e}", j + 1));
        }
    }
    let mut stats = t[0].stats;
    stats.merge(&t[1].stats);
    MonodromyResult {
        diagnostics: MonodromyDiagnostics {
            max_det_drift: t[0].max_det_drift.max(t[1].max_det_drift),
            stats,
            eigen_errors,
            relation_defect: rep.relation_defect(),
            warnings,
        },
        rep,
    }
}

/// Monodromy of the matrix or scalar trinoid equation along the plan loops.
pub fn monodromy(data: &TrinoidData, plan: &PathPlan, source: MonodromySource, opts: &OdeOptions) -> Result<MonodromyResult> {
    let opts = OdeOptions { clearance: Some(opts.clearance.unwrap_or(plan.clearance)), ..*opts };
    let run = |l: &Path| match source {
        MonodromySource::MatrixOde => integrate_matrix_ode(data, l, &Mat2C::identity(), &opts),
        MonodromySource::ScalarOde => integrate_scalar_ode(data, l, &opts),
        MonodromySource::Hypergeometric => {
            integrate_hypergeometric(&data.hyper, l, opts.clearance.unwrap_or(0.0), opts.tol)
        }
    };
    let (t0, t1) = rayon::join(|| run(&plan.loops[0]), || run(&plan.loops[1]));
    let (t0, t1) = (t0?, t1?);
    let rep = MonodromyRep::from_generators(t0.value, t1.value, source)?;
    Ok(finish(rep, &data.angles, [t0, t1], source == MonodromySource::Hypergeometric))
}

/// Monodromy of the hypergeometric equation with the given parameters.
pub fn hypergeometric_monodromy(
    params: &HypergeometricParams,
    angles: &AngleTriple,
    plan: &PathPlan,
    tol: f64,
) -> Result<MonodromyResult> {
    let run = |l: &Path| integrate_hypergeometric(params, l, plan.clearance, tol);
    let (t0, t1) = rayon::join(|| run(&plan.loops[0]), || run(&plan.loops[1]));
    let (t0, t1) = (t0?, t1?);
    let rep = MonodromyRep::from_generators(t0.value, t1.value, MonodromySource::Hypergeometric)?;
    Ok(finish(rep, angles, [t0, t1], true))
}

/// For each of `q1, q2, (q1+q2)/2`, the distance of the monodromy of a small
/// loop around it from `±I`.
pub fn apparent_singularity_defects(data: &TrinoidData, plan: &PathPlan, opts: &OdeOptions) -> Result<[f64; 3]> {
    let sing = data.singular_points();
    let opts = OdeOptions { clearance: Some(plan.clearance), ..*opts };
    let mut out = [0.0; 3];
    for (k, idx) in [2usize, 3, 4].into_iter().enumerate() {
        let l = path::lasso_around(plan.base_point, &sing, idx, 0.25, plan.clearance).ok_or(Error::NoPathPlan)?;
        let t = integrate_matrix_ode(data, &l, &Mat2C::identity(), &opts)?;
        let i = Mat2C::identity();
        out[k] = t.value.dist(&i).min(t.value.dist(&-i));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::Tolerances;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn data(a: f64, b: f64, cc: f64) -> TrinoidData {
        TrinoidData::new(AngleTriple::from_pi_multiples(a, b, cc).unwrap(), &Tolerances::default()).unwrap()
    }

    fn plan(d: &TrinoidData) -> PathPlan {
        plan_loops(&d.singular_points(), &PlanOptions::default()).unwrap()
    }

    #[test]
    fn zero_length_and_reversal() {
        let d = data(2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0);
        let opts = OdeOptions::default();
        let f0 = Mat2C::identity();
        let t = integrate_matrix_ode(&d, &Path::segment(c(0.5, 0.5), c(0.5, 0.5)), &f0, &opts).unwrap();
        assert_eq!(t.value, f0);
        let t = integrate_matrix_ode(&d, &Path::default(), &f0, &opts).unwrap();
        assert_eq!(t.value, f0);
        let p = Path::segment(c(0.5, 0.5), c(-1.0, 2.0)).then(&Path::segment(c(-1.0, 2.0), c(3.0, 1.0)));
        let there = integrate_matrix_ode(&d, &p, &f0, &opts).unwrap();
        let back = integrate_matrix_ode(&d, &p.then(&p.reversed()), &f0, &opts).unwrap();
        assert!(back.value.dist(&f0) < 1e-9);
        assert!(there.max_det_drift < 1e-9);
    }

    #[test]
    fn determinant_conserved_on_long_paths() {
        let d = data(2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0);
        let p = plan(&d);
        let long = p.loops[0].then(&p.loops[1]).then(&p.loops[0]);
        assert!(long.length() <= 20.0);
        let t = integrate_matrix_ode(&d, &long, &Mat2C::identity(), &OdeOptions::default()).unwrap();
        assert!(t.max_det_drift < 1e-9, "{}", t.max_det_drift);
    }

    #[test]
    fn rejects_paths_near_singular_points() {
        let d = data(0.5, 0.5, 0.5);
        let res = integrate_matrix_ode(&d, &Path::segment(c(-0.5, 0.01), c(0.5, 0.01)), &Mat2C::identity(), &OdeOptions::default());
        assert!(matches!(res, Err(Error::SingularPathPoint { .. })));
    }

    #[test]
    fn scalar_transport_wronskian_and_concatenation() {
        let d = data(0.5, 0.5, 0.5);
        let opts = OdeOptions::default();
        let p1 = Path::segment(c(0.5, 0.5), c(-0.6, 0.9));
        let p2 = Path::segment(c(-0.6, 0.9), c(1.7, 1.2));
        let t1 = integrate_scalar_ode(&d, &p1, &opts).unwrap().value;
        let t2 = integrate_scalar_ode(&d, &p2, &opts).unwrap().value;
        let t12 = integrate_scalar_ode(&d, &p1.then(&p2), &opts).unwrap().value;
        assert!(t12.dist(&(t2 * t1)) < 1e-8);

        // Abel: det W(end) = det W(start)·exp(−∫ r dz)
        let p = p1.then(&p2);
        let mut integral = c(0.0, 0.0);
        for piece in &p.pieces {
            let (y, _) = integrator::integrate(
                |s, _: &[Complex64; 1]| [-scalar_ode_coeffs_unchecked(&d, piece.point(s)).0 * piece.velocity(s)],
                [c(0.0, 0.0)],
                &StepControl::new(1e-13),
                |_, _| {},
            )
            .unwrap();
            integral += y[0];
        }
        assert!((t12.det() - integral.exp()).norm() < 1e-8);
        let zero = integrate_scalar_ode(&d, &Path::default(), &opts).unwrap();
        assert_eq!(zero.value, Mat2C::identity());
    }

    #[test]
    fn second_row_of_frame_solves_scalar_equation() {
        // X = (F21, F22) transported by the matrix ODE matches the scalar transfer
        let d = data(2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0);
        let opts = OdeOptions::default();
        let z0 = c(0.5, 0.5);
        let p = Path::segment(z0, c(-0.8, 1.4));
        let f = integrate_matrix_ode(&d, &p, &Mat2C::identity(), &opts).unwrap().value;
        let ts = integrate_scalar_ode(&d, &p, &opts).unwrap().value;
        let phi = d.phi(z0);
        let g = d.gauss.value(z0);
        // initial (X, X′) for X = F21 and X = F22 at F = I
        let init = Mat2C::new(c(0.0, 0.0), c(1.0, 0.0), phi, -phi * g);
        let x_end = ts * init;
        assert!((x_end.a11 - f.a21).norm() < 1e-9);
        assert!((x_end.a12 - f.a22).norm() < 1e-9);
    }

    #[test]
    fn symmetric_traces() {
        let opts = OdeOptions::default();
        for (x, tr) in [(2.0 / 3.0, 1.0), (0.5, 0.0)] {
            let d = data(x, x, x);
            let m = monodromy(&d, &plan(&d), MonodromySource::MatrixOde, &opts).unwrap();
            for r in &m.rep.rho {
                assert!((r.trace() - tr).norm() < 1e-6, "{}", r.trace());
                assert!((r.det() - 1.0).norm() < 1e-8);
            }
            assert!(m.diagnostics.warnings.is_empty());
            assert!(m.rep.relation_defect() < 1e-7);
        }
    }

    #[test]
    fn loop_radius_does_not_matter() {
        let d = data(0.5, 0.5, 0.5);
        let opts = OdeOptions::default();
        let p1 = plan(&d);
        let p2 = plan_loops(&d.singular_points(), &PlanOptions { radius_fraction: 0.15, ..Default::default() }).unwrap();
        let m1 = monodromy(&d, &p1, MonodromySource::MatrixOde, &opts).unwrap();
        let m2 = monodromy(&d, &p2, MonodromySource::MatrixOde, &opts).unwrap();
        assert!(m1.rep.rho[0].dist(&m2.rep.rho[0]) < 1e-8);
    }

    #[test]
    fn apparent_singularities_are_trivial() {
        let d = data(2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0);
        let defects = apparent_singularity_defects(&d, &plan(&d), &OdeOptions::default()).unwrap();
        assert!(defects.iter().all(|&x| x < 1e-6), "{defects:?}");
    }

    #[test]
    fn hypergeometric_local_exponent() {
        let d = data(0.5, 0.5, 0.5);
        let m = hypergeometric_monodromy(&d.hyper, &d.angles, &plan(&d), 1e-12).unwrap();
        let (l1, l2) = eigenvalues_2x2(&m.rep.rho[0]);
        let target = Complex64::from_polar(1.0, 2.0 * PI * (1.0 - d.hyper.c));
        let best = [l1, l2].iter().map(|l| (l - target).norm()).fold(f64::INFINITY, f64::min);
        assert!(best < 1e-8);
        assert!(m.rep.relation_defect() < 1e-7);
        assert!(m.diagnostics.eigen_errors.iter().all(|&e| e < 1e-6));
    }

    #[test]
    fn halving_tolerance_is_consistent() {
        let d = data(0.5, 0.5, 0.5);
        let p = plan(&d);
        let a = monodromy(&d, &p, MonodromySource::MatrixOde, &OdeOptions::new(1e-10)).unwrap();
        let b = monodromy(&d, &p, MonodromySource::MatrixOde, &OdeOptions::new(5e-11)).unwrap();
        let change = (0..2).map(|j| a.rep.rho[j].dist(&b.rep.rho[j])).fold(0.0, f64::max);
        let est = a.diagnostics.stats.error_estimate.max(1e-14);
        assert!(change < 10.0 * est.max(1e-10), "{change} vs {est}");
    }
}
