//! End-to-end construction: classification, data, loops, monodromy,
//! unitarization and surface.

use num_complex::Complex64;

use crate::algebra::Mat2C;
use crate::error::{Error, Result};
use crate::fuchsian::{monodromy, plan_loops, MonodromyResult, MonodromySource, OdeOptions, PathPlan, PlanOptions};
use crate::moduli::{classify, AngleTriple, ModuliClass, ModuliStatus, Target};
use crate::surface::{well_definedness, GridOptions, Surface, WellDefinedness};
use crate::tolerances::Tolerances;
use crate::trinoid_data::TrinoidData;
use crate::unitarize::{unitarizer_space, UnitarizerSpace};

/// Integration tolerance for the generator loops. The invariant form must
/// meet a relative residual of `1e-9`, which the loops only reach two orders
/// below the frame-transport tolerance.
pub fn monodromy_tol(tol: &Tolerances) -> f64 {
    1e-2 * tol.ode
}

/// A trinoid with its monodromy and unitarizer space computed.
#[derive(Debug, Clone)]
pub struct Trinoid {
    pub class: ModuliClass,
    pub data: TrinoidData,
    pub plan: PathPlan,
    pub tol: Tolerances,
    pub monodromy: MonodromyResult,
    pub unitarizer: UnitarizerSpace,
}

impl Trinoid {
    /// Fails with [`Error::EmptyModuli`] unless the angles classify into a
    /// non-empty family for `H³`.
    pub fn new(angles: AngleTriple, tol: &Tolerances, base_point: Option<Complex64>) -> Result<Self> {
        let class = classify(&angles, Target::H3, tol);
        match class.status {
            ModuliStatus::ExcludedAngleIsPi => return Err(Error::ExcludedAngleIsPi),
            ModuliStatus::DegenerateHanbetu => return Err(Error::DegenerateHanbetu),
            s if !s.is_nonempty() => return Err(Error::EmptyModuli(s.name().to_string())),
            _ => {}
        }
        let data = TrinoidData::new(angles, tol)?;
        let plan = plan_loops(&data.singular_points(), &PlanOptions { base_point, ..Default::default() })?;
        let monodromy = monodromy(&data, &plan, MonodromySource::MatrixOde, &OdeOptions::new(monodromy_tol(tol)))?;
        let unitarizer = unitarizer_space(&monodromy.rep, &angles, tol)?;
        Ok(Self { class, data, plan, tol: *tol, monodromy, unitarizer })
    }

    /// Conjugator for the deformation parameters; an empty slice picks the
    /// normalized point of the unitarizer space.
    pub fn conjugator(&self, deform: &[f64]) -> Result<Mat2C> {
        if deform.is_empty() {
            return self.unitarizer.conjugator(&vec![0.0; self.unitarizer.dimension()]);
        }
        self.unitarizer.conjugator(deform)
    }

    pub fn surface(&self, grid: &GridOptions, deform: &[f64]) -> Result<Surface> {
        Surface::build(&self.data, self.plan.base_point, &self.conjugator(deform)?, grid, self.tol.ode)
    }

    /// Doubled-path checks at `count` vertices for the given conjugator.
    pub fn well_definedness(&self, surface: &Surface, conjugator: &Mat2C, count: usize) -> Result<WellDefinedness> {
        well_definedness(&self.data, &surface.grid, &surface.frames, &self.plan, conjugator, count, self.tol.ode)
    }
}
