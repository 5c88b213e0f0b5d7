//! Determinants, characteristic polynomials and power sums.
//!
//! The generic routes are division-free (Berkowitz), so they work over any
//! commutative ring including the Laurent ring. Fraction-free Bareiss
//! elimination is available where exact division exists and is used as a
//! second, independent route in the tests.

use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::error::{Error, Result};
use crate::ring::{ExactDiv, Poly, Ring};

/// Result of a nilpotency test; `index` is the least `k` with `M^k = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nilpotency {
    pub nilpotent: bool,
    pub index: Option<usize>,
}

impl<R: Ring> Matrix<R> {
    /// Monic `det(xI - M)`, coefficients indexed by degree.
    pub fn char_poly(&self) -> Poly<R> {
        assert!(self.is_square(), "char_poly of a non-square matrix");
        let n = self.rows();
        // Berkowitz: fold Toeplitz factors from the trailing 1x1 corner outwards.
        let mut vec: Vec<R> = vec![R::one()];
        for start in (0..n).rev() {
            let m = n - start;
            let a = &self[(start, start)];
            // diags = [1, -a, -R C, -R A C, ..., -R A^{m-2} C]
            let mut diags = Vec::with_capacity(m + 1);
            diags.push(R::one());
            diags.push(a.negated());
            let mut col: Vec<R> = (start + 1..n).map(|i| self[(i, start)].clone()).collect();
            for step in 0..m.saturating_sub(1) {
                if step > 0 {
                    col = (start + 1..n)
                        .map(|i| {
                            (start + 1..n).zip(&col).fold(R::zero(), |acc, (j, c)| acc.plus(&self[(i, j)].times(c)))
                        })
                        .collect();
                }
                let rc = (start + 1..n).zip(&col).fold(R::zero(), |acc, (j, c)| acc.plus(&self[(start, j)].times(c)));
                diags.push(rc.negated());
            }
            // Toeplitz (m+1) x m times vec (length m).
            let next: Vec<R> = (0..=m)
                .map(|i| (0..m.min(i + 1)).fold(R::zero(), |acc, j| acc.plus(&diags[i - j].times(&vec[j]))))
                .collect();
            vec = next;
        }
        vec.reverse();
        Poly::new(vec)
    }

    /// Exact determinant over any commutative ring.
    pub fn det(&self) -> R {
        let n = self.rows();
        let c0 = self.char_poly().coeff(0);
        if n % 2 == 1 {
            c0.negated()
        } else {
            c0
        }
    }

    /// Nilpotency with the least vanishing power.
    pub fn nilpotency(&self) -> Nilpotency {
        assert!(self.is_square(), "nilpotency of a non-square matrix");
        let n = self.rows();
        let mut power = self.clone();
        for k in 1..=n.max(1) {
            if power.is_zero() {
                return Nilpotency { nilpotent: true, index: Some(k) };
            }
            if k < n {
                power = power.mul(self).expect("square");
            }
        }
        Nilpotency { nilpotent: false, index: None }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nilpotency().nilpotent
    }

    /// Nilpotency by repeated squaring; cheaper for large matrices but
    /// without the least index.
    pub fn is_nilpotent_fast(&self) -> bool {
        let n = self.rows();
        let mut power = self.clone();
        let mut reach = 1;
        while reach < n {
            power = power.mul(&power).expect("square");
            reach *= 2;
        }
        power.is_zero()
    }
}

impl<R: ExactDiv> Matrix<R> {
    /// Fraction-free Bareiss elimination.
    pub fn det_bareiss(&self) -> R {
        assert!(self.is_square(), "det of a non-square matrix");
        let n = self.rows();
        if n == 0 {
            return R::one();
        }
        let mut m = self.clone();
        let mut sign = false;
        let mut prev = R::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return R::zero();
                };
                for j in 0..n {
                    let tmp = m[(k, j)].clone();
                    m[(k, j)] = m[(p, j)].clone();
                    m[(p, j)] = tmp;
                }
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[(i, j)].times(&m[(k, k)]).minus(&m[(i, k)].times(&m[(k, j)]));
                    m[(i, j)] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
                m[(i, k)] = R::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        if sign {
            d.negated()
        } else {
            d
        }
    }
}

/// Power sums `p_1..p_{n_max}` of the roots of a monic polynomial, by
/// Newton's identities (no root extraction).
pub fn power_sums<R: Ring>(charpoly: &Poly<R>, n_max: usize) -> Result<Vec<R>> {
    if !charpoly.is_monic() {
        return Err(Error::Precondition("power sums need a monic polynomial".into()));
    }
    let k = charpoly.degree().unwrap_or(0);
    // Write the polynomial as x^k + e_1 x^{k-1} + ... + e_k, e_i = c_{k-i}.
    let e = |i: usize| -> R {
        if i <= k {
            charpoly.coeff(k - i)
        } else {
            R::zero()
        }
    };
    let mut p: Vec<R> = Vec::with_capacity(n_max);
    for m in 1..=n_max {
        // p_m = -(m e_m + sum_{i=1}^{m-1} e_i p_{m-i})
        let mut acc = if m <= k { e(m).times(&R::from_int(m as i64)) } else { R::zero() };
        for i in 1..m.min(k + 1) {
            acc.add_assign_ref(&e(i).times(&p[m - i - 1]));
        }
        p.push(acc.negated());
    }
    Ok(p)
}
