//! Certified rational bracketing of the spectral radius of a nonnegative
//! matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::error::{Error, Result};
use crate::ring::{Rational, Ring};

/// Bracket `lower <= λ <= upper`; `converged` when `upper - lower <= tol`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusBound {
    pub lower: Rational,
    pub upper: Rational,
    pub converged: bool,
}

const MAX_ITERS: usize = 20_000;
const ROUND_BITS: u32 = 64;
const ROW_SUM_SQUARINGS: u32 = 5;

/// Upper bound on the spectral radius of a nonnegative rational matrix.
///
/// Combines Collatz–Wielandt ratios along a shifted power iteration with
/// `(max row sum of A^k)^(1/k)` bounds whose roots are bracketed by rational
/// bisection. Iteration vectors are rounded to dyadic rationals between
/// steps; any positive vector yields valid bounds, so rounding never
/// compromises the certificate.
pub fn spectral_radius_upper(a: &Matrix<Rational>, tol: &Rational) -> Result<RadiusBound> {
    if !tol.is_positive() {
        return Err(Error::InvalidTolerance(Box::new(tol.clone())));
    }
    if !a.is_square() {
        return Err(Error::Shape("spectral radius of a non-square matrix".into()));
    }
    if !a.is_nonnegative() {
        return Err(Error::Precondition("spectral radius bracketing needs a nonnegative matrix".into()));
    }
    let n = a.rows();
    if a.is_nilpotent_fast() {
        return Ok(RadiusBound { lower: Rational::zero(), upper: Rational::zero(), converged: true });
    }

    let mut upper = row_sum_bound(a, tol)?;
    let mut lower = Rational::zero();
    let shifted = a.add(&Matrix::identity(n))?;
    let mut x: Vec<Rational> = vec![Rational::one(); n];
    for _ in 0..MAX_ITERS {
        let ax = mat_vec(a, &x);
        let (lo, hi) = collatz_wielandt(&ax, &x);
        if hi < upper {
            upper = hi;
        }
        if lo > lower {
            lower = lo;
        }
        if let Some(sub) = support_lower_bound(a, &x) {
            if sub > lower {
                lower = sub;
            }
        }
        if &upper - &lower <= *tol {
            return Ok(RadiusBound { lower, upper, converged: true });
        }
        x = round_positive(&mat_vec(&shifted, &x));
    }
    log::warn!("spectral radius bracketing stopped at width {}", &upper - &lower);
    Ok(RadiusBound { lower, upper, converged: false })
}

fn mat_vec(a: &Matrix<Rational>, x: &[Rational]) -> Vec<Rational> {
    (0..a.rows()).map(|i| a.row(i).iter().zip(x).fold(Rational::zero(), |acc, (m, v)| acc + m * v)).collect()
}

/// `(min_i, max_i)` of `(Ax)_i / x_i` for a positive vector `x`.
fn collatz_wielandt(ax: &[Rational], x: &[Rational]) -> (Rational, Rational) {
    let ratios: Vec<Rational> = ax.iter().zip(x).map(|(a, v)| a / v).collect();
    let lo = ratios.iter().min().cloned().unwrap_or_else(Rational::zero);
    let hi = ratios.iter().max().cloned().unwrap_or_else(Rational::zero);
    (lo, hi)
}

/// For nonnegative `y` with `Ay >= μy` we have `λ >= μ`. Zeroing the small
/// entries of `x` isolates dominant components of reducible matrices.
fn support_lower_bound(a: &Matrix<Rational>, x: &[Rational]) -> Option<Rational> {
    let max = x.iter().max()?.clone();
    let mut best: Option<Rational> = None;
    for shift in [4i32, 16, 32] {
        let cut = &max / &Rational::from_bigints(BigInt::one() << shift as usize, BigInt::one());
        let y: Vec<Rational> = x.iter().map(|v| if *v >= cut { v.clone() } else { Rational::zero() }).collect();
        let ay = mat_vec(a, &y);
        let mu = y.iter().zip(&ay).filter(|(v, _)| !v.is_zero()).map(|(v, w)| w / v).min()?;
        if best.as_ref().is_none_or(|b| mu > *b) {
            best = Some(mu);
        }
    }
    best
}

fn round_positive(x: &[Rational]) -> Vec<Rational> {
    let max = x.iter().max().cloned().unwrap_or_else(Rational::one);
    let scale = BigInt::one() << ROUND_BITS as usize;
    x.iter()
        .map(|v| {
            let r = v / &max * Rational::from(scale.clone());
            let (q, rem) = r.numer().div_rem(r.denom());
            let ceil = if rem.is_zero() { q } else { q + 1 };
            Rational::from_bigints(ceil, scale.clone())
        })
        .collect()
}

/// `min_j (max row sum of A^(2^j))^(1/2^j)` with each root bracketed from above.
fn row_sum_bound(a: &Matrix<Rational>, tol: &Rational) -> Result<Rational> {
    let mut best: Option<Rational> = None;
    let mut power = a.clone();
    let mut k: u32 = 1;
    for _ in 0..=ROW_SUM_SQUARINGS {
        let s = (0..power.rows())
            .map(|i| power.row(i).iter().fold(Rational::zero(), |acc, v| acc + v))
            .max()
            .unwrap_or_else(Rational::zero);
        let root = root_upper(&s, k, tol);
        if best.as_ref().is_none_or(|b| root < *b) {
            best = Some(root);
        }
        power = power.mul(&power)?;
        k *= 2;
    }
    Ok(best.unwrap_or_else(Rational::zero))
}

/// Rational `r >= s^(1/k)` within `tol / 4` of the true root.
fn root_upper(s: &Rational, k: u32, tol: &Rational) -> Rational {
    if s.is_zero() {
        return Rational::zero();
    }
    let mut lo = Rational::zero();
    let mut hi = if *s > Rational::one() { s.clone() } else { Rational::one() };
    let width = tol / &Rational::from_int(4);
    while &hi - &lo > width {
        let mid = (&lo + &hi) / Rational::from_int(2);
        if mid.pow(k as i32) >= *s {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
