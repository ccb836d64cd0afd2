//! Shared fixtures for the pipeline benchmarks.

use trinoid_core::{AngleTriple, Tolerances, Trinoid};

/// The trinoid with three equal half-angles `2π/3`.
pub fn symmetric_trinoid() -> Trinoid {
    let angles = AngleTriple::from_pi_multiples(2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0).expect("valid angles");
    Trinoid::new(angles, &Tolerances::default(), None).expect("irreducible trinoid")
}
