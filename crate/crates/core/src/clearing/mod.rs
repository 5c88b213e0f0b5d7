//! Degree-by-degree clearing of `I - A` over `ℚ[t]`, the trace-killing
//! pipeline built from it, and the `SL(n, ℚ)` conjugation that makes a
//! nilpotent input small enough to start.

mod pipeline;
mod shrink;
mod step;

pub use pipeline::{
    certify_nilpotent, clear_traces, companion_size, shrink_target, ClearedResult, NilpotentCertificate,
};
pub use shrink::{elementary_factors, product_of_factors, shrink_norm, ElementaryFactor, ShrinkResult};
pub use step::{clear_degree_step, ClearingStepReport, IntermediateBound};

use crate::ring::Rational;

/// `4n³`, the per-step norm growth factor.
pub fn growth_factor(n: usize) -> Rational {
    Rational::from_int(4 * (n as i64).pow(3))
}

/// `1/(4n²)`, the admissible input norm for one clearing step.
pub fn step_norm_bound(n: usize) -> Rational {
    Rational::new(1, 4 * (n as i64).pow(2))
}
