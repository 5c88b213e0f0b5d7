//! Exact certificates for strong shift equivalence over subrings of ℝ.
//!
//! The crate provides
//!
//! * exact scalar rings ([`ring`]) and dense matrices over them ([`matrix`]),
//! * witness types and replay verifiers for elementary, strong and plain
//!   shift equivalence ([`sse`]),
//! * the block companion construction `A ↦ A♯`, replayable elementary
//!   operation logs over `R[t]`, and the ℚ[t²,t³,z,z⁻¹] fixture ([`sharp`]),
//! * the degree-by-degree trace clearing pipeline with certified degree and
//!   norm bounds ([`clearing`]),
//! * nonzero-spectrum checks, primitivity and the primitive block assembly
//!   ([`spectral`]),
//! * seeded generators of test matrices ([`gen`]) and the randomized
//!   self-test suites built on them ([`suite`]).
//!
//! Every routine is exact; floating point never enters a verdict.
//! Batch workloads accept an [`Exec`] and use rayon when the `parallel`
//! feature is enabled.

pub mod clearing;
pub mod error;
pub mod exec;
pub mod gen;
pub mod matrix;
pub mod ring;
pub mod sharp;
pub mod spectral;
pub mod sse;
pub mod suite;

pub use error::{Error, Result};
pub use exec::Exec;
pub use matrix::{Matrix, PolyMatrix};
pub use ring::{Laurent, Poly, Rational, Ring};
