use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid angle triple: {0}")]
    InvalidAngles(String),
    #[error("matrix is not in SL(2,C): |det - 1| = {0:e}")]
    NonSL2Input(f64),
    #[error("bad edge ({0}, {1}): indices must be distinct and in 0..3")]
    BadEdge(usize, usize),
    #[error("bigon attachment needs B_i < pi, got B_i = {0}")]
    BigonRequiresAcute(f64),
    #[error("coefficient c_{0} vanishes")]
    ZeroCoefficient(usize),
    #[error("an angle equals pi; the end would not be catenoidal")]
    ExcludedAngleIsPi,
    #[error("umbilic points coincide (discriminant vanishes)")]
    DegenerateHanbetu,
    #[error("point {0} is within {1:e} of a singular point")]
    SingularPoint(Complex64, f64),
    #[error("path passes within {distance:e} of singular point {point} (clearance {clearance:e})")]
    SingularPathPoint {
        point: Complex64,
        distance: f64,
        clearance: f64,
    },
    #[error("step size underflow at parameter {0} of path piece {1}")]
    StepUnderflow(f64, usize),
    #[error("integration exceeded {0} steps")]
    TooManySteps(usize),
    #[error("no admissible base point / loop layout found")]
    NoPathPlan,
    #[error("representation is not unitarizable (min eigenvalue {0:e})")]
    NotUnitarizable(f64),
    #[error("hermitian form is not positive definite")]
    NotPositiveDefinite,
    #[error("unitarizer kind {found} contradicts the angle data ({expected})")]
    InconsistentKind { found: String, expected: String },
    #[error("wrong number of deformation parameters: expected {expected}, got {got}")]
    DeformationArity { expected: usize, got: usize },
    #[error("null structure of F^-1 dF violated at {0} of {1} vertices")]
    NullStructureViolation(usize, usize),
    #[error("moduli space is empty for these angles ({0})")]
    EmptyModuli(String),
    #[error("grid vertex {0} is not reachable from the base point")]
    Unreachable(usize),
    #[error("plane does not meet the surface")]
    EmptyIntersection,
    #[error("edge {edge}: {source}")]
    Edge { edge: usize, source: Box<Error> },
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
