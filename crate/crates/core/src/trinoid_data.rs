//! Explicit holomorphic data of a catenoidal trinoid with ends at `0, 1, ∞`.

use num_complex::Complex64;

use crate::algebra::{CPoint, Mat2C};
use crate::error::{Error, Result};
use crate::moduli::{conical_data, hanbetu_holds, AngleTriple, ConicalData};
use crate::tolerances::Tolerances;

/// `Q = Q̂(z) dz²` with
/// `2 Q̂ = (c3 z² + (c2 − c3 − c1) z + c1) / (z² (z − 1)²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfDifferential {
    pub c: [f64; 3],
}

impl HopfDifferential {
    /// Coefficients `[c3, c2 − c3 − c1, c1]` of the numerator, highest first.
    pub fn numerator_coeffs(&self) -> [f64; 3] {
        let [c1, c2, c3] = self.c;
        [c3, c2 - c3 - c1, c1]
    }

    pub fn numerator(&self, z: Complex64) -> Complex64 {
        let [a, b, c] = self.numerator_coeffs();
        (z * a + b) * z + c
    }

    fn numerator_deriv(&self, z: Complex64) -> Complex64 {
        let [a, b, _] = self.numerator_coeffs();
        z * (2.0 * a) + b
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = z * (z - 1.0);
        self.numerator(z) / (w * w * 2.0)
    }

    /// `Q̂′/Q̂`.
    pub fn log_deriv(&self, z: Complex64) -> Complex64 {
        self.numerator_deriv(z) / self.numerator(z) - 2.0 / z - 2.0 / (z - 1.0)
    }

    pub fn deriv(&self, z: Complex64) -> Complex64 {
        self.eval(z) * self.log_deriv(z)
    }
}

pub fn build_hopf(angles: &AngleTriple, tol: &Tolerances) -> Result<HopfDifferential> {
    if angles
        .radians()
        .iter()
        .any(|&b| (b - std::f64::consts::PI).abs() <= 1e-12)
    {
        return Err(Error::ExcludedAngleIsPi);
    }
    let data = conical_data(angles);
    if !hanbetu_holds(&data, tol.hanbetu) {
        return Err(Error::DegenerateHanbetu);
    }
    Ok(HopfDifferential { c: data.c })
}

/// The two zeros of `Q`, ordered by real part then imaginary part, ascending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UmbilicPair {
    pub q1: Complex64,
    pub q2: Complex64,
}

impl UmbilicPair {
    pub fn midpoint(&self) -> Complex64 {
        (self.q1 + self.q2) * 0.5
    }
}

/// Roots of `a z² + b z + c` with real coefficients, `a ≠ 0`.
///
/// Real roots take the larger-magnitude one from the quadratic formula and
/// the other from `c / (a r)`, so neither suffers cancellation.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> (Complex64, Complex64) {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let q = -0.5 * (b + b.signum_nonzero() * disc.sqrt());
        if q == 0.0 {
            return (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        }
        (Complex64::new(q / a, 0.0), Complex64::new(c / q, 0.0))
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a.abs());
        (Complex64::new(re, im), Complex64::new(re, -im))
    }
}

trait SignumNonzero {
    fn signum_nonzero(self) -> f64;
}

impl SignumNonzero for f64 {
    fn signum_nonzero(self) -> f64 {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}

pub fn umbilics(q: &HopfDifferential, tol: &Tolerances) -> Result<UmbilicPair> {
    let [a, b, c] = q.numerator_coeffs();
    if a == 0.0 {
        return Err(Error::ZeroCoefficient(3));
    }
    let (r1, r2) = quadratic_roots(a, b, c);
    if (r1 - r2).norm() <= tol.root_merge {
        return Err(Error::DegenerateHanbetu);
    }
    let (q1, q2) = if (r1.re, r1.im) <= (r2.re, r2.im) {
        (r1, r2)
    } else {
        (r2, r1)
    };
    Ok(UmbilicPair { q1, q2 })
}

/// `G(z) = z + (q1 − q2)² / (2 (2z − q1 − q2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussMap {
    pub q: UmbilicPair,
    k: Complex64,
    s: Complex64,
}

impl GaussMap {
    pub fn new(q: UmbilicPair) -> Result<Self> {
        let d = q.q1 - q.q2;
        if d.norm() == 0.0 {
            return Err(Error::DegenerateHanbetu);
        }
        Ok(Self { q, k: d * d, s: q.q1 + q.q2 })
    }

    /// The pole `(q1 + q2)/2`.
    pub fn pole(&self) -> Complex64 {
        self.s * 0.5
    }

    pub fn eval(&self, z: Complex64) -> CPoint {
        let den = z * 2.0 - self.s;
        if den.norm() == 0.0 {
            CPoint::Infinity
        } else {
            CPoint::Finite(self.value(z))
        }
    }

    /// `G(z)` for `z` away from the pole.
    pub fn value(&self, z: Complex64) -> Complex64 {
        z + self.k / ((z * 2.0 - self.s) * 2.0)
    }

    pub fn deriv(&self, z: Complex64) -> Complex64 {
        let w = z * 2.0 - self.s;
        1.0 - self.k / (w * w)
    }

    pub fn second_deriv(&self, z: Complex64) -> Complex64 {
        let w = z * 2.0 - self.s;
        self.k * 4.0 / (w * w * w)
    }

    /// Coefficients `(a, b, c, d)` of `G = (a z² + b z + c)/(d z − s)` as a
    /// rational function, for degree bookkeeping.
    pub fn as_rational(&self) -> ([Complex64; 3], [Complex64; 2]) {
        // z + k/(2(2z − s)) = (4z² − 2sz + k) / (4z − 2s)
        (
            [Complex64::new(4.0, 0.0), -self.s * 2.0, self.k],
            [Complex64::new(4.0, 0.0), -self.s * 2.0],
        )
    }
}

pub fn build_gauss_map(q: &UmbilicPair) -> Result<GaussMap> {
    GaussMap::new(*q)
}

/// Real parameters of `z(1 − z)X″ + (c − (a + b + 1)z)X′ − abX = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeometricParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// the signs `s` in `s1 B1 = π(1 − c)`, `s2 B2 = π(a − b)`, `s3 B3 = π(c − a − b)`
    pub signs: [i8; 3],
}

/// Canonical resolution `c = 1 − B1/π`, `a − b = B2/π`, `c − a − b = −B3/π`.
pub fn hypergeometric_params(angles: &AngleTriple) -> HypergeometricParams {
    hypergeometric_params_with_signs(angles, [1, 1, -1])
}

pub fn hypergeometric_params_with_signs(angles: &AngleTriple, signs: [i8; 3]) -> HypergeometricParams {
    let [x1, x2, x3] = angles.pi_multiples();
    let [s1, s2, s3] = signs.map(|s| if s < 0 { -1.0 } else { 1.0 });
    let c = 1.0 - s1 * x1;
    let diff = s2 * x2;
    let sum = c - s3 * x3;
    HypergeometricParams {
        a: (sum + diff) / 2.0,
        b: (sum - diff) / 2.0,
        c,
        signs: [s1 as i8, s2 as i8, s3 as i8],
    }
}

/// All data needed to write down the trinoid ODEs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrinoidData {
    pub angles: AngleTriple,
    pub conical: ConicalData,
    pub hopf: HopfDifferential,
    pub umbilics: UmbilicPair,
    pub gauss: GaussMap,
    pub hyper: HypergeometricParams,
}

impl TrinoidData {
    pub fn new(angles: AngleTriple, tol: &Tolerances) -> Result<Self> {
        let hopf = build_hopf(&angles, tol)?;
        let umbilics = umbilics(&hopf, tol)?;
        let gauss = build_gauss_map(&umbilics)?;
        Ok(Self {
            angles,
            conical: conical_data(&angles),
            hopf,
            umbilics,
            gauss,
            hyper: hypergeometric_params(&angles),
        })
    }

    /// Finite points every path must avoid: the punctures `0, 1`, the
    /// umbilics and the pole of `G`.
    pub fn singular_points(&self) -> [Complex64; 5] {
        [
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            self.umbilics.q1,
            self.umbilics.q2,
            self.gauss.pole(),
        ]
    }

    /// `Q̂ / G′`.
    pub fn phi(&self, z: Complex64) -> Complex64 {
        self.hopf.eval(z) / self.gauss.deriv(z)
    }

    /// Coefficient of `dF F⁻¹ = A(z) dz`:
    /// `A = [[G, −G²], [1, −G]] Q̂ / G′`.
    pub fn dual_coefficient(&self, z: Complex64) -> Mat2C {
        let g = self.gauss.value(z);
        let phi = self.phi(z);
        let pg = phi * g;
        Mat2C::new(pg, -pg * g, phi, -pg)
    }

    /// `dA/dz`, analytic.
    pub fn dual_coefficient_deriv(&self, z: Complex64) -> Mat2C {
        let g = self.gauss.value(z);
        let gp = self.gauss.deriv(z);
        let gpp = self.gauss.second_deriv(z);
        let qh = self.hopf.eval(z);
        let phi = qh / gp;
        // φ′ = φ (Q̂′/Q̂ − G″/G′)
        let dphi = (self.hopf.deriv(z) - phi * gpp) / gp;
        Mat2C::new(
            dphi * g + phi * gp,
            -(dphi * g * g + phi * g * gp * 2.0),
            dphi,
            -(dphi * g + phi * gp),
        )
    }
}

/// `(r, s)` of `X″ + r X′ + s X = 0` with `r = −(log(Q̂/G′))′`, `s = Q̂`.
pub fn scalar_ode_coeffs(data: &TrinoidData, z: Complex64, min_dist: f64) -> Result<(Complex64, Complex64)> {
    for p in data.singular_points() {
        if (z - p).norm() < min_dist {
            return Err(Error::SingularPoint(z, min_dist));
        }
    }
    Ok(scalar_ode_coeffs_unchecked(data, z))
}

pub(crate) fn scalar_ode_coeffs_unchecked(data: &TrinoidData, z: Complex64) -> (Complex64, Complex64) {
    let g = &data.gauss;
    let r = -(data.hopf.log_deriv(z) - g.second_deriv(z) / g.deriv(z));
    (r, data.hopf.eval(z))
}
