//! Angle-triple arithmetic: existence and dimension of the moduli of
//! trinoids (target `H³`) and of spherical metrics with three conical
//! singularities (target `S²`), the reduced triple `B′`, the hemisphere
//! and bigon attachment moves, and the sign type of `(c1, c2, c3)`.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

/// Half conical angles at `p1 = 0`, `p2 = 1`, `p3 = ∞`, in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleTriple {
    b: [f64; 3],
}

impl AngleTriple {
    pub fn new(b1: f64, b2: f64, b3: f64) -> Result<Self> {
        Self::from_array([b1, b2, b3])
    }

    pub fn from_array(b: [f64; 3]) -> Result<Self> {
        for (j, &x) in b.iter().enumerate() {
            if !x.is_finite() || x <= 0.0 {
                return Err(Error::InvalidAngles(format!(
                    "B{} = {x} must be finite and positive",
                    j + 1
                )));
            }
        }
        Ok(Self { b })
    }

    /// Angles given as multiples of π.
    pub fn from_pi_multiples(m1: f64, m2: f64, m3: f64) -> Result<Self> {
        Self::new(m1 * PI, m2 * PI, m3 * PI)
    }

    pub fn radians(&self) -> [f64; 3] {
        self.b
    }

    pub fn get(&self, j: usize) -> f64 {
        self.b[j]
    }

    pub fn pi_multiples(&self) -> [f64; 3] {
        self.b.map(|x| x / PI)
    }

    /// `β_j = B_j/π − 1`, the conical order.
    pub fn beta(&self) -> [f64; 3] {
        self.b.map(|x| x / PI - 1.0)
    }

    fn integer_flags(&self, tol: f64) -> [bool; 3] {
        self.b.map(|x| is_integer(x / PI, tol))
    }
}

impl fmt::Display for AngleTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.pi_multiples();
        write!(f, "({a}π, {b}π, {c}π)")
    }
}

pub(crate) fn is_integer(x: f64, tol: f64) -> bool {
    (x - x.round()).abs() <= tol
}

fn nearest_integer(x: f64, tol: f64) -> Option<i64> {
    is_integer(x, tol).then(|| x.round() as i64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicalData {
    pub beta: [f64; 3],
    pub c: [f64; 3],
}

pub fn conical_data(angles: &AngleTriple) -> ConicalData {
    let beta = angles.beta();
    ConicalData {
        beta,
        c: beta.map(|b| -b * (b + 2.0) / 2.0),
    }
}

/// Non-degeneracy `(c1² + c2² + c3²)/2 ≠ c1c2 + c2c3 + c3c1`.
pub fn hanbetu_holds(data: &ConicalData, tol: f64) -> bool {
    hanbetu_defect(data).abs() > tol
}

/// Difference of the two sides of the non-degeneracy condition; a quarter of
/// the discriminant of the umbilic quadratic.
pub fn hanbetu_defect(data: &ConicalData) -> f64 {
    let [c1, c2, c3] = data.c;
    (c1 * c1 + c2 * c2 + c3 * c3) / 2.0 - (c1 * c2 + c2 * c3 + c3 * c1)
}

/// The reduced triple `B′`, returned in construction order
/// (`B′1` from the smallest `B̂`).
pub fn reduce_angles(angles: &AngleTriple) -> [f64; 3] {
    let mut hat = angles.b.map(|x| x.cos().clamp(-1.0, 1.0).acos());
    hat.sort_by(f64::total_cmp);
    if hat[1] + hat[2] <= PI {
        hat
    } else {
        [hat[0], PI - hat[1], PI - hat[2]]
    }
}

/// `cos²B1 + cos²B2 + cos²B3 + 2 cosB1 cosB2 cosB3`.
pub fn irreducibility_form(angles: &AngleTriple) -> f64 {
    let [c1, c2, c3] = angles.b.map(f64::cos);
    c1 * c1 + c2 * c2 + c3 * c3 + 2.0 * c1 * c2 * c3
}

/// Existence of an irreducible metric / trinoid: the cosine form is `< 1`.
pub fn irreducible_exists(angles: &AngleTriple) -> bool {
    irreducibility_form(angles) < 1.0
}

/// The same condition through the reduced triple: `B′1 + B′2 + B′3 > π`.
pub fn irreducible_exists_reduced(angles: &AngleTriple) -> bool {
    reduce_angles(angles).iter().sum::<f64>() > PI
}

/// Product of the four half-angle cosines, which equals a quarter of
/// (cosine form − 1).
pub fn irreducibility_product(b: [f64; 3]) -> f64 {
    let [x, y, z] = b;
    ((x + y + z) / 2.0).cos()
        * ((-x + y + z) / 2.0).cos()
        * ((x - y + z) / 2.0).cos()
        * ((x + y - z) / 2.0).cos()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    H3,
    S2,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::H3 => "H3",
            Target::S2 => "S2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModuliStatus {
    IrreducibleUnique,
    ReducibleC1,
    ReducibleC2,
    Empty,
    ExcludedAngleIsPi,
    DegenerateHanbetu,
}

impl ModuliStatus {
    pub fn name(&self) -> &'static str {
        match self {
            ModuliStatus::IrreducibleUnique => "IrreducibleUnique",
            ModuliStatus::ReducibleC1 => "ReducibleC1",
            ModuliStatus::ReducibleC2 => "ReducibleC2",
            ModuliStatus::Empty => "Empty",
            ModuliStatus::ExcludedAngleIsPi => "ExcludedAngleIsPi",
            ModuliStatus::DegenerateHanbetu => "DegenerateHanbetu",
        }
    }

    pub fn is_nonempty(&self) -> bool {
        matches!(
            self,
            ModuliStatus::IrreducibleUnique | ModuliStatus::ReducibleC1 | ModuliStatus::ReducibleC2
        )
    }

    pub fn dimension(&self) -> Option<usize> {
        match self {
            ModuliStatus::IrreducibleUnique => Some(0),
            ModuliStatus::ReducibleC1 => Some(1),
            ModuliStatus::ReducibleC2 => Some(3),
            _ => None,
        }
    }
}

impl fmt::Display for ModuliStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which of `|B2 − B3|/π`, `(B2 + B3)/π` gave the integer `m` of the first
/// reducible family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum C1Witness {
    Difference,
    Sum,
}

/// The relabeling under which the first reducible family matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct C1Match {
    /// 0-based index of the integer angle (the one playing the role of `B1`).
    pub integer_index: usize,
    pub m: i64,
    pub witness: C1Witness,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModuliClass {
    pub target: Target,
    pub status: ModuliStatus,
    /// 0, 1 or 3 when the moduli space is non-empty.
    pub dimension: Option<usize>,
    pub c1_match: Option<C1Match>,
    /// Exactly two of the `B_j/π` are integers; neither family applies.
    pub two_integer_angles: bool,
}

impl ModuliClass {
    fn new(target: Target, status: ModuliStatus) -> Self {
        Self {
            target,
            status,
            dimension: status.dimension(),
            c1_match: None,
            two_integer_angles: false,
        }
    }
}

pub fn classify(angles: &AngleTriple, target: Target, tol: &Tolerances) -> ModuliClass {
    let conical = conical_data(angles);
    if target == Target::H3 {
        if angles.b.iter().any(|&x| (x - PI).abs() <= 1e-12) {
            return ModuliClass::new(target, ModuliStatus::ExcludedAngleIsPi);
        }
        if !hanbetu_holds(&conical, tol.hanbetu) {
            return ModuliClass::new(target, ModuliStatus::DegenerateHanbetu);
        }
    }

    let ints = angles.integer_flags(tol.integer);
    match ints.iter().filter(|&&f| f).count() {
        0 => {
            let status = if irreducible_exists(angles) {
                ModuliStatus::IrreducibleUnique
            } else {
                ModuliStatus::Empty
            };
            ModuliClass::new(target, status)
        }
        1 => {
            let i = ints.iter().position(|&f| f).unwrap();
            match c1_condition(angles, i, tol.integer) {
                Some(m) => {
                    let mut class = ModuliClass::new(target, ModuliStatus::ReducibleC1);
                    class.c1_match = Some(m);
                    class
                }
                None => ModuliClass::new(target, ModuliStatus::Empty),
            }
        }
        2 => {
            let mut class = ModuliClass::new(target, ModuliStatus::Empty);
            class.two_integer_angles = true;
            class
        }
        _ => {
            let status = if c2_condition(angles, tol.integer) {
                ModuliStatus::ReducibleC2
            } else {
                ModuliStatus::Empty
            };
            ModuliClass::new(target, status)
        }
    }
}

/// First reducible family with angle `i` as the integer one. The caller
/// guarantees that the two other angles are not integer multiples of π.
fn c1_condition(angles: &AngleTriple, i: usize, tol: f64) -> Option<C1Match> {
    let n = (angles.b[i] / PI).round() as i64;
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    let (x, y) = (angles.b[j] / PI, angles.b[k] / PI);
    [(C1Witness::Difference, (x - y).abs()), (C1Witness::Sum, x + y)]
        .into_iter()
        .find_map(|(witness, v)| {
            let m = nearest_integer(v, tol)?;
            let opposite = (m - n).rem_euclid(2) == 1;
            // π m ≤ B_i − π
            let bounded = (m as f64) * PI <= angles.b[i] - PI + tol * PI;
            (opposite && bounded).then_some(C1Match {
                integer_index: i,
                m,
                witness,
            })
        })
}

/// Second reducible family: all integers, odd sum, strict triangle inequality.
fn c2_condition(angles: &AngleTriple, tol: f64) -> bool {
    let n = angles.b.map(|x| (x / PI).round() as i64);
    if !angles.b.iter().all(|&x| is_integer(x / PI, tol)) {
        return false;
    }
    let sum: i64 = n.iter().sum();
    sum.rem_euclid(2) == 1 && (0..3).all(|j| 2 * n[j] < sum)
}

/// Attach a closed hemisphere to the edge `(i, j)`:
/// `(B_i, B_j, B_k) ↦ (B_i + π, B_j + π, B_k)`. Indices are 0-based.
pub fn fh_attach_hemisphere(angles: &AngleTriple, i: usize, j: usize) -> Result<AngleTriple> {
    check_edge(i, j)?;
    let mut b = angles.b;
    b[i] += PI;
    b[j] += PI;
    AngleTriple::from_array(b)
}

/// Attach a geodesic bigon at vertex `i` along the edge towards `j`:
/// `(B_i, B_j, B_k) ↦ (π − B_i, B_j + π, B_k)`, allowed only for `B_i < π`.
pub fn fh_attach_bigon(angles: &AngleTriple, i: usize, j: usize) -> Result<AngleTriple> {
    check_edge(i, j)?;
    if angles.b[i] >= PI {
        return Err(Error::BigonRequiresAcute(angles.b[i]));
    }
    let mut b = angles.b;
    b[i] = PI - b[i];
    b[j] += PI;
    AngleTriple::from_array(b)
}

fn check_edge(i: usize, j: usize) -> Result<()> {
    if i == j || i > 2 || j > 2 {
        Err(Error::BadEdge(i, j))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypeSignature {
    /// signs of `(c1, c2, c3)` per puncture
    pub raw: [Sign; 3],
    /// the same signs sorted `+` first
    pub canonical: [Sign; 3],
}

impl fmt::Display for TypeSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.canonical;
        write!(f, "({a},{b},{c})")
    }
}

pub fn type_signature(data: &ConicalData) -> Result<TypeSignature> {
    let mut raw = [Sign::Plus; 3];
    for (j, &c) in data.c.iter().enumerate() {
        if c.abs() <= 1e-12 {
            return Err(Error::ZeroCoefficient(j + 1));
        }
        raw[j] = if c > 0.0 { Sign::Plus } else { Sign::Minus };
    }
    let mut canonical = raw;
    canonical.sort_by(|a, b| b.cmp(a));
    Ok(TypeSignature { raw, canonical })
}
