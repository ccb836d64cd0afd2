//! Numerical engine for CMC-1 trinoids in hyperbolic 3-space.
//!
//! Given three conical half-angles `B1, B2, B3` at the punctures `0, 1, ∞`
//! the crate decides whether a catenoidal trinoid exists and how large its
//! moduli space is ([`moduli`]), writes down the explicit holomorphic data
//! ([`trinoid_data`]), computes the monodromy of the defining Fuchsian
//! equations by numerical analytic continuation ([`fuchsian`]), conjugates
//! it into `SU(2)` ([`unitarize`]) and finally samples the immersion into the
//! Poincaré ball as a triangle mesh ([`surface`]).

// `!(x < tol)` is the NaN-rejecting form used throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod error;
pub mod fuchsian;
pub mod moduli;
pub mod pipeline;
pub mod surface;
pub mod tolerances;
pub mod trinoid_data;
pub mod unitarize;

pub use algebra::{eigenvalues_2x2, mobius_star, project_h3, CPoint, H3Point, Mat2C};
pub use error::{Error, Result};
pub use moduli::{AngleTriple, ConicalData, ModuliClass, ModuliStatus, Target};
pub use num_complex::Complex64;
pub use pipeline::Trinoid;
pub use tolerances::Tolerances;
pub use trinoid_data::TrinoidData;
