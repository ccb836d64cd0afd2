//! 2×2 complex matrices, the Möbius action and the projection
//! `SL(2,C) → H³ = SL(2,C)/SU(2)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CPoint {
    Finite(Complex64),
    Infinity,
}

impl CPoint {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            CPoint::Finite(z) => Some(z),
            CPoint::Infinity => None,
        }
    }
}

impl From<Complex64> for CPoint {
    fn from(z: Complex64) -> Self {
        CPoint::Finite(z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2C {
    pub a11: Complex64,
    pub a12: Complex64,
    pub a21: Complex64,
    pub a22: Complex64,
}

impl Mat2C {
    pub const fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn real(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Self::new(a11.into(), a12.into(), a21.into(), a22.into())
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub fn diag(d1: Complex64, d2: Complex64) -> Self {
        Self::new(d1, ZERO, ZERO, d2)
    }

    pub fn scalar(s: Complex64) -> Self {
        Self::diag(s, s)
    }

    pub fn from_array(e: [Complex64; 4]) -> Self {
        Self::new(e[0], e[1], e[2], e[3])
    }

    pub fn to_array(&self) -> [Complex64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn det(&self) -> Complex64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> Complex64 {
        self.a11 + self.a22
    }

    /// Inverse via the adjugate. Returns `None` for an exactly singular matrix.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == ZERO {
            return None;
        }
        let inv = d.inv();
        Some(Self::new(
            self.a22 * inv,
            -self.a12 * inv,
            -self.a21 * inv,
            self.a11 * inv,
        ))
    }

    /// Inverse of a unimodular matrix (adjugate, no division).
    pub fn sl2_inverse(&self) -> Self {
        Self::new(self.a22, -self.a12, -self.a21, self.a11)
    }

    pub fn adjoint(&self) -> Self {
        Self::new(
            self.a11.conj(),
            self.a21.conj(),
            self.a12.conj(),
            self.a22.conj(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }

    pub fn norm(&self) -> f64 {
        (self.a11.norm_sqr() + self.a12.norm_sqr() + self.a21.norm_sqr() + self.a22.norm_sqr())
            .sqrt()
    }

    pub fn dist(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }

    /// Rescale to unit determinant with the principal square root of `det`.
    pub fn normalize_det(&self) -> Option<Self> {
        let d = self.det();
        if d == ZERO {
            return None;
        }
        Some(self.scale(d.sqrt().inv()))
    }

    pub fn is_sl2(&self, tol: f64) -> bool {
        (self.det() - ONE).norm() <= tol
    }

    /// `‖M M† − I‖` in the Frobenius norm.
    pub fn unitarity_defect(&self) -> f64 {
        (*self * self.adjoint() - Self::identity()).norm()
    }

    pub fn is_su2(&self, tol_det: f64, tol_unitary: f64) -> bool {
        self.is_sl2(tol_det) && self.unitarity_defect() <= tol_unitary
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn is_finite(&self) -> bool {
        self.to_array()
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Default for Mat2C {
    fn default() -> Self {
        Self::identity()
    }
}

impl Mul for Mat2C {
    type Output = Mat2C;
    fn mul(self, b: Mat2C) -> Mat2C {
        Mat2C::new(
            self.a11 * b.a11 + self.a12 * b.a21,
            self.a11 * b.a12 + self.a12 * b.a22,
            self.a21 * b.a11 + self.a22 * b.a21,
            self.a21 * b.a12 + self.a22 * b.a22,
        )
    }
}

impl Mul<[Complex64; 2]> for Mat2C {
    type Output = [Complex64; 2];
    fn mul(self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.a11 * v[0] + self.a12 * v[1],
            self.a21 * v[0] + self.a22 * v[1],
        ]
    }
}

impl Add for Mat2C {
    type Output = Mat2C;
    fn add(self, b: Mat2C) -> Mat2C {
        Mat2C::new(
            self.a11 + b.a11,
            self.a12 + b.a12,
            self.a21 + b.a21,
            self.a22 + b.a22,
        )
    }
}

impl Sub for Mat2C {
    type Output = Mat2C;
    fn sub(self, b: Mat2C) -> Mat2C {
        Mat2C::new(
            self.a11 - b.a11,
            self.a12 - b.a12,
            self.a21 - b.a21,
            self.a22 - b.a22,
        )
    }
}

impl Neg for Mat2C {
    type Output = Mat2C;
    fn neg(self) -> Mat2C {
        Mat2C::new(-self.a11, -self.a12, -self.a21, -self.a22)
    }
}

impl fmt::Display for Mat2C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.a11, self.a12, self.a21, self.a22
        )
    }
}

/// `M ⋆ g = (a11 g + a12) / (a21 g + a22)` on the Riemann sphere.
pub fn mobius_star(m: &Mat2C, g: CPoint) -> CPoint {
    match g {
        CPoint::Infinity => {
            if m.a21 == ZERO {
                CPoint::Infinity
            } else {
                CPoint::Finite(m.a11 / m.a21)
            }
        }
        CPoint::Finite(g) => {
            let den = m.a21 * g + m.a22;
            if den == ZERO {
                CPoint::Infinity
            } else {
                CPoint::Finite((m.a11 * g + m.a12) / den)
            }
        }
    }
}

/// Roots of `λ² − tr(M) λ + det(M)`, ordered by real part then imaginary
/// part, descending.
pub fn eigenvalues_2x2(m: &Mat2C) -> (Complex64, Complex64) {
    let tr = m.trace();
    let det = m.det();
    let half = tr * 0.5;
    let disc = (half * half - det).sqrt();
    // larger-magnitude root first, the other from the product
    let l1 = if (half + disc).norm() >= (half - disc).norm() {
        half + disc
    } else {
        half - disc
    };
    let l2 = if l1 == ZERO { half - disc } else { det / l1 };
    // real parts equal up to rounding are treated as ties
    let tie = 1e-12 * (l1.norm() + l2.norm()).max(1e-300);
    let first_is_l1 = if (l1.re - l2.re).abs() <= tie {
        l1.im >= l2.im
    } else {
        l1.re > l2.re
    };
    if first_is_l1 {
        (l1, l2)
    } else {
        (l2, l1)
    }
}

/// A point of hyperbolic 3-space in the hyperboloid and Poincaré-ball models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H3Point {
    pub minkowski: [f64; 4],
    pub ball: [f64; 3],
}

impl H3Point {
    /// Build from the Hermitian matrix `X = F F†` of unit determinant.
    pub fn from_hermitian(x: &Mat2C) -> Self {
        let x0 = 0.5 * (x.a11.re + x.a22.re);
        let x1 = x.a12.re;
        let x2 = x.a12.im;
        let x3 = 0.5 * (x.a11.re - x.a22.re);
        let s = 1.0 + x0;
        Self {
            minkowski: [x0, x1, x2, x3],
            ball: [x1 / s, x2 / s, x3 / s],
        }
    }

    pub fn origin() -> Self {
        Self {
            minkowski: [1.0, 0.0, 0.0, 0.0],
            ball: [0.0; 3],
        }
    }

    /// `x0² − x1² − x2² − x3²`.
    pub fn minkowski_norm(&self) -> f64 {
        let [x0, x1, x2, x3] = self.minkowski;
        x0 * x0 - x1 * x1 - x2 * x2 - x3 * x3
    }

    pub fn ball_norm(&self) -> f64 {
        self.ball.iter().map(|b| b * b).sum::<f64>().sqrt()
    }

    /// The Hermitian matrix `[[x0 + x3, x1 + i x2], [x1 − i x2, x0 − x3]]`.
    pub fn hermitian(&self) -> Mat2C {
        let [x0, x1, x2, x3] = self.minkowski;
        Mat2C::new(
            (x0 + x3).into(),
            Complex64::new(x1, x2),
            Complex64::new(x1, -x2),
            (x0 - x3).into(),
        )
    }

    /// Hyperbolic distance, `cosh d = x0 y0 − x·y`.
    pub fn distance(&self, other: &Self) -> f64 {
        let [x0, x1, x2, x3] = self.minkowski;
        let [y0, y1, y2, y3] = other.minkowski;
        (x0 * y0 - x1 * y1 - x2 * y2 - x3 * y3).max(1.0).acosh()
    }

    pub fn ball_dist(&self, other: &Self) -> f64 {
        self.ball
            .iter()
            .zip(other.ball.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// The canonical projection `F ↦ F F†`.
pub fn project_h3(f: &Mat2C, tol_det: f64) -> Result<H3Point> {
    let dev = (f.det() - ONE).norm();
    if dev > tol_det || !dev.is_finite() {
        return Err(Error::NonSL2Input(dev));
    }
    Ok(H3Point::from_hermitian(&(*f * f.adjoint())))
}
