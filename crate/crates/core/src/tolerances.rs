/// Every numerical threshold used by the engine, in one place.
///
/// `scaled` multiplies all of them by a common factor, which is how the CLI
/// honours `TRINOID_TOL_SCALE`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// `|det - 1|` accepted for an `SL(2,C)` element.
    pub det: f64,
    /// `‖M M† - I‖` accepted for an `SU(2)` element.
    pub unitary: f64,
    /// local error per unit arclength of the path integrator.
    pub ode: f64,
    /// distance of `B/π` to the nearest integer below which it counts as one.
    pub integer: f64,
    /// threshold on the two sides of the non-degeneracy condition.
    pub hanbetu: f64,
    /// coincidence threshold for the umbilic pair.
    pub root_merge: f64,
    /// eigenvalue mismatch that triggers a monodromy warning.
    pub eigen_warn: f64,
    /// projective-equivalence residual.
    pub equivalence: f64,
    /// commutator norm below which a representation counts as abelian.
    pub commutator: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            det: 1e-9,
            unitary: 1e-8,
            ode: 1e-10,
            integer: 1e-9,
            hanbetu: 1e-12,
            root_merge: 1e-10,
            eigen_warn: 1e-4,
            equivalence: 1e-6,
            commutator: 1e-7,
        }
    }
}

impl Tolerances {
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            det: self.det * factor,
            unitary: self.unitary * factor,
            ode: self.ode * factor,
            integer: self.integer * factor,
            hanbetu: self.hanbetu * factor,
            root_merge: self.root_merge * factor,
            eigen_warn: self.eigen_warn * factor,
            equivalence: self.equivalence * factor,
            commutator: self.commutator * factor,
        }
    }

    pub fn with_ode(mut self, tol: f64) -> Self {
        self.ode = tol;
        self
    }
}
