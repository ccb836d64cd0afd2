//! Conjugating a monodromy representation into `SU(2)` and describing the
//! set of all such conjugators.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{eigenvalues_2x2, project_h3, H3Point, Mat2C};
use crate::error::{Error, Result};
use crate::fuchsian::MonodromyRep;
use crate::moduli::{is_integer, AngleTriple};
use crate::tolerances::Tolerances;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn hermitian(x: &[f64]) -> Mat2C {
    Mat2C::new(c(x[0]), Complex64::new(x[1], x[2]), Complex64::new(x[1], -x[2]), c(x[3]))
}

fn hermitian_coords(m: &Mat2C) -> [f64; 4] {
    [m.a11.re, m.a12.re, m.a12.im, m.a22.re]
}

/// Smallest eigenvalue of a Hermitian 2×2 matrix.
fn min_eigenvalue(h: &Mat2C) -> f64 {
    let (l1, l2) = eigenvalues_2x2(h);
    l1.re.min(l2.re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantForm {
    /// positive definite, `tr H = 2`
    pub h: Mat2C,
    /// dimension of the real space of invariant Hermitian forms
    pub solution_dim: usize,
    /// `max_j ‖ρ_j† H ρ_j − H‖ / (‖ρ_j‖² ‖H‖)`
    pub residual: f64,
}

const RESIDUAL_MAX: f64 = 1e-9;
const PD_MARGIN: f64 = 1e-8;

/// A positive-definite `H` with `ρ_j† H ρ_j = H` for `j = 1, 2`.
pub fn invariant_hermitian_form(rep: &MonodromyRep) -> Result<InvariantForm> {
    let gens = [rep.rho[0].normalize_det().unwrap_or(rep.rho[0]), rep.rho[1].normalize_det().unwrap_or(rep.rho[1])];
    let mut m = DMatrix::<f64>::zeros(8, 4);
    for (g, r) in gens.iter().enumerate() {
        let w = 1.0 / r.norm().powi(2).max(1.0);
        for k in 0..4 {
            let mut e = [0.0; 4];
            e[k] = 1.0;
            let ek = hermitian(&e);
            let d = r.adjoint() * ek * *r - ek;
            for (row, v) in hermitian_coords(&d).into_iter().enumerate() {
                m[(4 * g + row, k)] = v * w;
            }
        }
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let mut sv: Vec<(f64, [f64; 4])> =
        (0..4).map(|r| (svd.singular_values[r], std::array::from_fn(|k| v_t[(r, k)]))).collect();
    sv.sort_by(|a, b| a.0.total_cmp(&b.0));
    // rows are scaled to O(1), so a nearly trivial representation has every
    // singular value small and all of them count as null
    let top = sv[3].0.max(1.0);
    let dim = sv.iter().filter(|(s, _)| *s <= 1e-6 * top).count().max(1);

    // orthogonal projection of the identity onto the candidate null space
    let id = [1.0, 0.0, 0.0, 1.0];
    let mut x = [0.0; 4];
    for (_, v) in sv.iter().take(dim) {
        let dot: f64 = v.iter().zip(&id).map(|(a, b)| a * b).sum();
        for k in 0..4 {
            x[k] += dot * v[k];
        }
    }
    let mut h = hermitian(&x);
    let tr = h.trace().re;
    if tr.abs() < 1e-300 {
        return Err(Error::NotUnitarizable(0.0));
    }
    h = h.scale(c(2.0 / tr));
    let lmin = min_eigenvalue(&h);
    if !(lmin >= PD_MARGIN * 2.0) {
        return Err(Error::NotUnitarizable(lmin));
    }
    let residual = gens
        .iter()
        .map(|r| (r.adjoint() * h * *r - h).norm() / (r.norm().powi(2) * h.norm()))
        .fold(0.0, f64::max);
    if !(residual < RESIDUAL_MAX) {
        return Err(Error::NotUnitarizable(lmin.min(-residual)));
    }
    Ok(InvariantForm { h, solution_dim: dim, residual })
}

/// `a = H^{1/2} / det(H)^{1/4}`, so that `a†a ∝ H` and `det a = 1`.
pub fn conjugator_from_form(h: &Mat2C) -> Result<Mat2C> {
    let herm_defect = h.dist(&h.adjoint());
    if herm_defect > 1e-12 * h.norm().max(1.0) {
        return Err(Error::NotPositiveDefinite);
    }
    let det = h.det().re;
    let tr = h.trace().re;
    if !(det > 0.0 && tr > 0.0) || min_eigenvalue(h) <= 0.0 {
        return Err(Error::NotPositiveDefinite);
    }
    let sd = det.sqrt();
    let root = (*h + Mat2C::scalar(c(sd))).scale(c(1.0 / (tr + 2.0 * sd).sqrt()));
    Ok(root.scale(c(1.0 / sd.sqrt())))
}

/// `max_j ‖(aρ_ja⁻¹)(aρ_ja⁻¹)† − I‖` over the three generators.
pub fn su2_residual(a: &Mat2C, rep: &MonodromyRep) -> f64 {
    let Some(ai) = a.inverse() else { return f64::INFINITY };
    rep.rho
        .iter()
        .map(|r| {
            let r = r.normalize_det().unwrap_or(*r);
            let u = *a * r * ai;
            (u * u.adjoint()).dist(&Mat2C::identity())
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitarizerKind {
    SinglePoint,
    GeodesicLine,
    AllOfH3,
    Empty,
}

impl UnitarizerKind {
    pub fn name(&self) -> &'static str {
        match self {
            UnitarizerKind::SinglePoint => "SinglePoint",
            UnitarizerKind::GeodesicLine => "GeodesicLine",
            UnitarizerKind::AllOfH3 => "AllOfH3",
            UnitarizerKind::Empty => "Empty",
        }
    }

    pub fn dimension(&self) -> Option<usize> {
        match self {
            UnitarizerKind::SinglePoint => Some(0),
            UnitarizerKind::GeodesicLine => Some(1),
            UnitarizerKind::AllOfH3 => Some(3),
            UnitarizerKind::Empty => None,
        }
    }
}

impl fmt::Display for UnitarizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The conjugators `a` with `a ρ a⁻¹ ⊂ SU(2)`, modulo left `SU(2)` factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitarizerSpace {
    pub kind: UnitarizerKind,
    /// normalized point of the space: minimal `‖a‖_F` on the geodesic,
    /// the identity for `AllOfH3`
    pub base_conjugator: Mat2C,
}

fn pauli() -> [Mat2C; 3] {
    let z = Complex64::new(0.0, 0.0);
    let one = c(1.0);
    let i = Complex64::new(0.0, 1.0);
    [Mat2C::new(z, one, one, z), Mat2C::new(z, -i, i, z), Mat2C::new(one, z, z, -one)]
}

impl UnitarizerSpace {
    pub fn dimension(&self) -> usize {
        self.kind.dimension().unwrap_or(0)
    }

    /// The conjugator at parameter `p` (`p.len()` equal to the dimension).
    ///
    /// Geodesic: `diag(e^{t/2}, e^{−t/2})·a₀`. Full space: `exp(p·σ/2)·a₀`.
    pub fn conjugator(&self, p: &[f64]) -> Result<Mat2C> {
        let d = self.dimension();
        if p.len() != d {
            return Err(Error::DeformationArity { expected: d, got: p.len() });
        }
        Ok(match self.kind {
            UnitarizerKind::SinglePoint | UnitarizerKind::Empty => self.base_conjugator,
            UnitarizerKind::GeodesicLine => {
                let e = (p[0] / 2.0).exp();
                Mat2C::diag(c(e), c(1.0 / e)) * self.base_conjugator
            }
            UnitarizerKind::AllOfH3 => {
                let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                let mut m = Mat2C::scalar(c((r / 2.0).cosh()));
                if r > 0.0 {
                    let s = (r / 2.0).sinh() / r;
                    for (pk, sk) in p.iter().zip(pauli()) {
                        m = m + sk.scale(c(s * pk));
                    }
                }
                m * self.base_conjugator
            }
        })
    }

    /// `count` parameter vectors drawn uniformly from `[−radius, radius]^d`
    /// with a seeded generator, with their conjugators.
    pub fn sample(&self, count: usize, radius: f64, seed: u64) -> Result<Vec<(Vec<f64>, Mat2C)>> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let p: Vec<f64> = (0..self.dimension()).map(|_| rng.random_range(-radius..=radius)).collect();
                let a = self.conjugator(&p)?;
                Ok((p, a))
            })
            .collect()
    }

    /// Point of `H³` represented by the conjugator at `p`.
    pub fn point(&self, p: &[f64]) -> Result<H3Point> {
        let a = self.conjugator(p)?;
        project_h3(&a.sl2_inverse(), 1e-8)
    }
}

/// Kind read off the representation alone.
pub fn representation_kind(rep: &MonodromyRep, tol: &Tolerances) -> UnitarizerKind {
    let gens: Vec<Mat2C> = rep.rho.iter().map(|r| r.normalize_det().unwrap_or(*r)).collect();
    let trivial = gens.iter().all(|r| {
        let i = Mat2C::identity();
        r.dist(&i).min(r.dist(&-i)) < tol.equivalence * r.norm().max(1.0)
    });
    if trivial {
        return UnitarizerKind::AllOfH3;
    }
    let comm = gens[0].commutator(&gens[1]).norm() / (gens[0].norm() * gens[1].norm()).max(1.0);
    if comm < tol.commutator {
        UnitarizerKind::GeodesicLine
    } else {
        UnitarizerKind::SinglePoint
    }
}

/// Kind predicted by the angles.
pub fn expected_kind(angles: &AngleTriple, tol: &Tolerances) -> UnitarizerKind {
    let ints = angles.pi_multiples().iter().filter(|x| is_integer(**x, tol.integer)).count();
    match ints {
        0 => UnitarizerKind::SinglePoint,
        3 => UnitarizerKind::AllOfH3,
        _ => UnitarizerKind::GeodesicLine,
    }
}

/// Eigenvector basis of the first non-scalar generator, as columns.
fn eigenbasis(gens: &[Mat2C]) -> Option<Mat2C> {
    let r = gens
        .iter()
        .max_by(|a, b| {
            let da = a.dist(&Mat2C::scalar(a.trace() * 0.5));
            let db = b.dist(&Mat2C::scalar(b.trace() * 0.5));
            da.total_cmp(&db)
        })?;
    let (l1, l2) = eigenvalues_2x2(r);
    let vec_for = |l: Complex64| {
        // rows of r − l are proportional; pick the larger one
        let (a, b) = (r.a11 - l, r.a12);
        let (cc, d) = (r.a21, r.a22 - l);
        if a.norm() + b.norm() >= cc.norm() + d.norm() {
            [-b, a]
        } else {
            [-d, cc]
        }
    };
    let v1 = vec_for(l1);
    let v2 = vec_for(l2);
    let s = Mat2C::new(v1[0], v2[0], v1[1], v2[1]);
    s.inverse().map(|_| s)
}

/// The full unitarizer space of `rep`, cross-checked against the angles.
pub fn unitarizer_space(rep: &MonodromyRep, angles: &AngleTriple, tol: &Tolerances) -> Result<UnitarizerSpace> {
    let form = invariant_hermitian_form(rep)?;
    let found = representation_kind(rep, tol);
    let expected = expected_kind(angles, tol);
    if found != expected {
        return Err(Error::InconsistentKind { found: found.to_string(), expected: expected.to_string() });
    }
    let base_conjugator = match found {
        UnitarizerKind::SinglePoint | UnitarizerKind::Empty => conjugator_from_form(&form.h)?,
        UnitarizerKind::AllOfH3 => Mat2C::identity(),
        UnitarizerKind::GeodesicLine => {
            let gens: Vec<Mat2C> = rep.rho.iter().map(|r| r.normalize_det().unwrap_or(*r)).collect();
            let s = eigenbasis(&gens).ok_or(Error::NotUnitarizable(0.0))?;
            let a0 = s.inverse().and_then(|m| m.normalize_det()).ok_or(Error::NotUnitarizable(0.0))?;
            let n1 = (a0.a11.norm_sqr() + a0.a12.norm_sqr()).sqrt();
            let n2 = (a0.a21.norm_sqr() + a0.a22.norm_sqr()).sqrt();
            // minimize e^t n1² + e^{−t} n2²
            let et = n2 / n1;
            Mat2C::diag(c(et.sqrt()), c(1.0 / et.sqrt())) * a0
        }
    };
    let space = UnitarizerSpace { kind: found, base_conjugator };
    let zero = vec![0.0; space.dimension()];
    let res = su2_residual(&space.conjugator(&zero)?, rep);
    if !(res < 1e-6) {
        return Err(Error::NotUnitarizable(-res));
    }
    Ok(space)
}
