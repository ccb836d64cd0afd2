use nalgebra::DMatrix;
use num_complex::Complex64;

use super::MonodromyRep;
use crate::algebra::Mat2C;

fn entry(m: &Mat2C, i: usize, j: usize) -> Complex64 {
    m.to_array()[2 * i + j]
}

/// Null-space basis of `P ↦ (P A_j − ε_j B_j P)_j`, most nearly null first,
/// with the corresponding singular values.
fn intertwiner_candidates(a: &[Mat2C], b: &[Mat2C], eps: &[f64]) -> Vec<(f64, Mat2C)> {
    let rows = 4 * a.len();
    let mut m = DMatrix::<Complex64>::zeros(rows, 4);
    for (g, ((aj, bj), &e)) in a.iter().zip(b).zip(eps).enumerate() {
        for i in 0..2 {
            for k in 0..2 {
                let row = 4 * g + 2 * i + k;
                for j in 0..2 {
                    m[(row, 2 * i + j)] += entry(aj, j, k);
                    m[(row, 2 * j + k)] -= entry(bj, i, j) * e;
                }
            }
        }
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let mut out: Vec<(f64, Mat2C)> = (0..4)
        .map(|r| {
            let v: [Complex64; 4] = std::array::from_fn(|c| v_t[(r, c)].conj());
            (svd.singular_values[r], Mat2C::from_array(v))
        })
        .collect();
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    out
}

fn verify(p: &Mat2C, a: &[Mat2C], b: &[Mat2C], eps: &[f64], tol: f64) -> bool {
    let Some(pi) = p.inverse() else { return false };
    let cond = p.norm() * pi.norm();
    if !cond.is_finite() || cond > 1e8 {
        return false;
    }
    a.iter().zip(b).zip(eps).all(|((aj, bj), &e)| {
        let lhs = *p * *aj * pi;
        let rhs = bj.scale(Complex64::new(e, 0.0));
        lhs.dist(&rhs) < tol * bj.norm().max(1.0)
    })
}

const MIX: [[f64; 2]; 4] = [[1.0, 0.0], [0.618_033_988_7, 0.3], [-0.414_213_562_4, 0.7], [0.271_828_182_8, -0.5]];

/// A `P` with `P m1.ρ_j P⁻¹ = ±m2.ρ_j` (`j = 1, 2`) after rescaling both
/// representations to unit determinant, if one exists within `tol`.
pub fn projective_conjugator(m1: &MonodromyRep, m2: &MonodromyRep, tol: f64) -> Option<Mat2C> {
    let norm = |m: &Mat2C| m.normalize_det();
    let a = [norm(&m1.rho[0])?, norm(&m1.rho[1])?];
    let b = [norm(&m2.rho[0])?, norm(&m2.rho[1])?];
    let scale = a.iter().chain(&b).map(|m| m.norm()).fold(1.0, f64::max);
    for e1 in [1.0, -1.0] {
        for e2 in [1.0, -1.0] {
            let eps = [e1, e2];
            let cands = intertwiner_candidates(&a, &b, &eps);
            if cands[0].0 > 1e-3 * scale {
                continue;
            }
            let dim = cands.iter().filter(|c| c.0 <= 1e-3 * scale).count();
            for k in [dim, 1] {
                for w in 0..MIX.len() {
                    let mut p = Mat2C::zero();
                    for (i, (_, v)) in cands.iter().take(k).enumerate() {
                        let [re, im] = MIX[(i + w) % MIX.len()];
                        p = p + v.scale(Complex64::new(re, im));
                    }
                    if verify(&p, &a, &b, &eps, tol) {
                        return Some(p);
                    }
                }
            }
        }
    }
    None
}

/// Whether the two representations agree in `PSL(2, ℂ)` up to conjugation.
pub fn projective_equivalence(m1: &MonodromyRep, m2: &MonodromyRep, tol: f64) -> bool {
    projective_conjugator(m1, m2, tol).is_some()
}
