//! Exact coefficient rings.
//!
//! Everything else in the crate is generic over [`Ring`]. Two concrete
//! scalar rings exist: [`Rational`] (the ordered field used for every
//! norm-based construction) and [`Laurent`], which hosts the symbolic ring
//! ℚ[t²,t³,z,z⁻¹] used by the bad-ring fixture. [`Poly`] lifts any ring to
//! its polynomial ring in one variable.

mod laurent;
mod poly;
mod rational;

use std::fmt;

pub use laurent::{Laurent, LaurentTerm};
pub use poly::Poly;
pub use rational::{interval_sample, Rational};

/// A commutative ring with 1 and exact, canonical equality.
pub trait Ring: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Ring name used in the JSON matrix encoding.
    const TAG: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplicative inverse if `self` is a unit of the ring.
    fn unit_inverse(&self) -> Option<Self>;

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self = self.plus(rhs);
    }
}

/// Marker for rings in which every nonzero element is a unit.
pub trait Field: Ring {
    fn divide(&self, rhs: &Self) -> Option<Self> {
        rhs.unit_inverse().map(|inv| self.times(&inv))
    }
}

/// Rings admitting exact division when the quotient exists.
pub trait ExactDiv: Ring {
    fn div_exact(&self, rhs: &Self) -> Option<Self>;
}

/// Absolute value where the ring is ordered; `None` for symbolic rings so
/// that norm routines can report an unsupported ring instead of failing to
/// compile.
pub trait MaybeOrdered: Ring {
    fn try_abs(&self) -> Option<Rational>;
}
