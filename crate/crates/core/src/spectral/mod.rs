//! Nonzero-spectrum conditions, exact Perron test, primitivity and the
//! primitive block assembly.

mod assembly;
mod orbits;
mod perron;
mod traces;

pub use assembly::{is_primitive, primitive_assembly, Assembly, PrimitivityCertificate};
pub use orbits::{count_least_period_points, count_least_period_points_with, MAX_PERIOD};
pub use perron::{has_perron_value, pair_product_poly, sturm_count, sturm_sequence, Verdict};
pub use traces::{check_spectral_conditions, moebius, net_trace, net_traces, Mode, SpectralReport, DEFAULT_K_MAX};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{Poly, Rational, Ring};
use crate::sse::nonzero_spectrum_poly;

/// Nonzero spectrum `Δ = (d_1, …, d_k)` encoded by `∏(t - d_i)`, ascending
/// coefficients. Monic with nonzero constant term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpectrumRepr", into = "SpectrumRepr")]
pub struct SpectrumDescriptor {
    poly: Poly<Rational>,
}

#[derive(Serialize, Deserialize)]
struct SpectrumRepr {
    coeffs: Vec<Rational>,
}

impl TryFrom<SpectrumRepr> for SpectrumDescriptor {
    type Error = Error;
    fn try_from(r: SpectrumRepr) -> Result<Self> {
        SpectrumDescriptor::new(r.coeffs)
    }
}

impl From<SpectrumDescriptor> for SpectrumRepr {
    fn from(s: SpectrumDescriptor) -> Self {
        SpectrumRepr { coeffs: s.poly.into_coeffs() }
    }
}

impl SpectrumDescriptor {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        Self::from_poly(Poly::new(coeffs))
    }

    pub fn from_poly(poly: Poly<Rational>) -> Result<Self> {
        if !poly.is_monic() {
            return Err(Error::Domain("spectrum polynomial must be monic".into()));
        }
        if poly.coeff(0).is_zero() {
            return Err(Error::Domain("zero is not part of a nonzero spectrum".into()));
        }
        Ok(SpectrumDescriptor { poly })
    }

    /// `∏(t - d_i)` for the listed entries.
    pub fn from_roots(roots: &[Rational]) -> Result<Self> {
        let poly = roots
            .iter()
            .fold(Poly::one(), |acc: Poly<Rational>, d| acc.times(&Poly::new(vec![d.negated(), Rational::one()])));
        Self::from_poly(poly)
    }

    /// Nonzero spectrum of a square matrix.
    pub fn of_matrix(a: &Matrix<Rational>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Shape("spectrum of a non-square matrix".into()));
        }
        Self::from_poly(nonzero_spectrum_poly(a))
    }

    pub fn poly(&self) -> &Poly<Rational> {
        &self.poly
    }

    pub fn coeffs(&self) -> &[Rational] {
        self.poly.coeffs()
    }

    /// Number of entries with multiplicity.
    pub fn len(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `tr(Δ^m)` for `m = 1..=n_max`.
    pub fn power_traces(&self, n_max: usize) -> Vec<Rational> {
        crate::matrix::power_sums(&self.poly, n_max).expect("monic by construction")
    }
}
