//! Elementary, strong and plain shift equivalence witnesses.
//!
//! Verification always recomputes the products; stored endpoints are never
//! trusted.

use std::collections::BTreeSet;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::matrix::Matrix;
use crate::ring::{Rational, Ring};

/// `(U, V)` certifying `A = UV`, `B = VU`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "R: Serialize", deserialize = "R: DeserializeOwned"))]
pub struct EsseWitness<R: Ring> {
    #[serde(rename = "U")]
    pub u: Matrix<R>,
    #[serde(rename = "V")]
    pub v: Matrix<R>,
}

/// Chain of elementary steps `A_0 ~ A_1 ~ ... ~ A_ℓ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "R: Serialize", deserialize = "R: DeserializeOwned"))]
pub struct SseChain<R: Ring> {
    pub endpoints: Vec<Matrix<R>>,
    pub steps: Vec<EsseWitness<R>>,
}

/// Lag-ℓ shift equivalence `A^ℓ = UV, B^ℓ = VU, AU = UB, BV = VA`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "R: Serialize", deserialize = "R: DeserializeOwned"))]
pub struct SeWitness<R: Ring> {
    #[serde(rename = "U")]
    pub u: Matrix<R>,
    #[serde(rename = "V")]
    pub v: Matrix<R>,
    pub lag: u32,
}

impl<R: Ring> EsseWitness<R> {
    pub fn new(u: Matrix<R>, v: Matrix<R>) -> Self {
        EsseWitness { u, v }
    }

    /// `(UV, VU)`.
    pub fn endpoints(&self) -> Result<(Matrix<R>, Matrix<R>)> {
        Ok((self.u.mul(&self.v)?, self.v.mul(&self.u)?))
    }

    /// The same factorization read in the other direction.
    pub fn reversed(&self) -> Self {
        EsseWitness { u: self.v.clone(), v: self.u.clone() }
    }
}

/// True iff `a = UV` and `b = VU` exactly.
pub fn verify_esse<R: Ring>(a: &Matrix<R>, b: &Matrix<R>, w: &EsseWitness<R>) -> Result<bool> {
    let (p, q) = (w.u.rows(), w.u.cols());
    if w.v.rows() != q || w.v.cols() != p || a.rows() != p || a.cols() != p || b.rows() != q || b.cols() != q {
        return Err(Error::Shape(format!(
            "ESSE shapes: A {}x{}, B {}x{}, U {}x{}, V {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols(),
            p,
            q,
            w.v.rows(),
            w.v.cols()
        )));
    }
    Ok(w.u.mul(&w.v)? == *a && w.v.mul(&w.u)? == *b)
}

impl<R: Ring> SseChain<R> {
    /// Builds a chain from its steps, deriving the endpoints from the first
    /// step's `UV` and every step's `VU`. Consistency between consecutive
    /// steps is left to [`verify_sse_chain`].
    pub fn from_steps(steps: Vec<EsseWitness<R>>) -> Result<Self> {
        let first = steps.first().ok_or_else(|| Error::InvalidWitness("empty chain".into()))?;
        let mut endpoints = vec![first.u.mul(&first.v)?];
        for s in &steps {
            endpoints.push(s.v.mul(&s.u)?);
        }
        Ok(SseChain { endpoints, steps })
    }

    pub fn lag(&self) -> usize {
        self.steps.len()
    }

    pub fn source(&self) -> &Matrix<R> {
        &self.endpoints[0]
    }

    pub fn target(&self) -> &Matrix<R> {
        self.endpoints.last().expect("nonempty chain")
    }

    /// Appends `other`, whose source must equal this chain's target.
    pub fn extend(&mut self, other: SseChain<R>) -> Result<()> {
        if other.source() != self.target() {
            return Err(Error::InvalidWitness("chains do not meet".into()));
        }
        self.endpoints.extend(other.endpoints.into_iter().skip(1));
        self.steps.extend(other.steps);
        Ok(())
    }
}

/// True iff every step verifies against its stored endpoints.
pub fn verify_sse_chain<R: Ring>(c: &SseChain<R>) -> bool {
    !c.steps.is_empty()
        && c.endpoints.len() == c.steps.len() + 1
        && c.steps
            .iter()
            .enumerate()
            .all(|(i, w)| matches!(verify_esse(&c.endpoints[i], &c.endpoints[i + 1], w), Ok(true)))
}

/// Verifies independent chains as a batch.
pub fn verify_sse_chains<R: Ring>(chains: &[SseChain<R>], exec: Exec) -> Vec<bool> {
    exec.map(chains.iter().collect(), verify_sse_chain)
}

/// Checks the four lag-ℓ equations exactly.
pub fn verify_se<R: Ring>(a: &Matrix<R>, b: &Matrix<R>, w: &SeWitness<R>) -> Result<bool> {
    if w.lag == 0 {
        return Err(Error::InvalidLag);
    }
    if !a.is_square() || !b.is_square() {
        return Err(Error::Shape("SE endpoints must be square".into()));
    }
    let (p, q) = (a.rows(), b.rows());
    if w.u.rows() != p || w.u.cols() != q || w.v.rows() != q || w.v.cols() != p {
        return Err(Error::Shape(format!(
            "SE shapes: A {p}x{p}, B {q}x{q}, U {}x{}, V {}x{}",
            w.u.rows(),
            w.u.cols(),
            w.v.rows(),
            w.v.cols()
        )));
    }
    Ok(a.pow(w.lag)? == w.u.mul(&w.v)?
        && b.pow(w.lag)? == w.v.mul(&w.u)?
        && a.mul(&w.u)? == w.u.mul(b)?
        && b.mul(&w.v)? == w.v.mul(a)?)
}

/// Williams' conversion: `U = U_1···U_ℓ`, `V = V_ℓ···V_1`.
pub fn sse_to_se<R: Ring>(c: &SseChain<R>) -> Result<SeWitness<R>> {
    if !verify_sse_chain(c) {
        return Err(Error::InvalidWitness("chain does not verify".into()));
    }
    let mut u = c.steps[0].u.clone();
    let mut v = c.steps[0].v.clone();
    for s in &c.steps[1..] {
        u = u.mul(&s.u)?;
        v = s.v.mul(&v)?;
    }
    Ok(SeWitness { u, v, lag: c.lag() as u32 })
}

/// Similarity `A ↦ u⁻¹Au` as the single step `(u, u⁻¹A)`.
pub fn similarity_move<R: Ring>(a: &Matrix<R>, u: &Matrix<R>) -> Result<(Matrix<R>, EsseWitness<R>)> {
    if !a.is_square() || !u.is_square() || a.rows() != u.rows() {
        return Err(Error::Shape("similarity needs square matrices of equal size".into()));
    }
    let u_inv = u.inverse()?;
    let v = u_inv.mul(a)?;
    let b = v.mul(u)?;
    Ok((b, EsseWitness::new(u.clone(), v)))
}

/// Which corner the nilpotent extension occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `[[A, X], [0, 0]]`, `X` has `A`'s row count.
    Upper,
    /// `[[0, X], [0, A]]`, `X` has `A`'s column count.
    Lower,
}

/// Extends `a` by the block `x`; the witness certifies `(extended, a)`.
pub fn nilpotent_extension_move<R: Ring>(
    a: &Matrix<R>,
    x: &Matrix<R>,
    side: Side,
) -> Result<(Matrix<R>, EsseWitness<R>)> {
    if !a.is_square() {
        return Err(Error::Shape("extension of a non-square matrix".into()));
    }
    let p = a.rows();
    match side {
        Side::Upper => {
            if x.rows() != p {
                return Err(Error::Shape(format!("X has {} rows, expected {p}", x.rows())));
            }
            let r = x.cols();
            let zr = Matrix::zeros(r, p);
            let u = Matrix::from_blocks(&[vec![&Matrix::identity(p)], vec![&zr]])?;
            let v = Matrix::from_blocks(&[vec![a, x]])?;
            Ok((u.mul(&v)?, EsseWitness::new(u, v)))
        }
        Side::Lower => {
            if x.cols() != p {
                return Err(Error::Shape(format!("X has {} columns, expected {p}", x.cols())));
            }
            let r = x.rows();
            let u = Matrix::from_blocks(&[vec![x], vec![a]])?;
            let v = Matrix::from_blocks(&[vec![&Matrix::zeros(p, r), &Matrix::identity(p)]])?;
            Ok((u.mul(&v)?, EsseWitness::new(u, v)))
        }
    }
}

/// Permutation `order` such that `N(order[k], order[l]) != 0` only for `k < l`.
/// Kahn's algorithm with smallest-index tie breaking; `None` on a cycle.
pub fn topological_order<R: Ring>(n: &Matrix<R>) -> Option<Vec<usize>> {
    let size = n.rows();
    let mut indeg = vec![0usize; size];
    for i in 0..size {
        for j in 0..size {
            if !n[(i, j)].is_zero() {
                indeg[j] += 1;
            }
        }
    }
    let mut ready: BTreeSet<usize> = (0..size).filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(size);
    while let Some(i) = ready.pop_first() {
        order.push(i);
        for j in 0..size {
            if !n[(i, j)].is_zero() {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.insert(j);
                }
            }
        }
    }
    (order.len() == size).then_some(order)
}

/// Permutation matrix `P` with `P e_k = e_{order[k]}`, so that
/// `(P⁻¹NP)(k,l) = N(order[k], order[l])`.
pub fn permutation_matrix<R: Ring>(order: &[usize]) -> Matrix<R> {
    Matrix::from_fn(order.len(), order.len(), |i, k| if order[k] == i { R::one() } else { R::zero() })
}

/// Chain from a nonnegative nilpotent matrix to `[0]`: one permutation
/// similarity to strictly upper triangular form, then one step per row
/// peeling the zero last row via `[[X, Y], [0, 0]] = [I; 0]·[X Y]`.
pub fn reduce_nonneg_nilpotent(n: &Matrix<Rational>) -> Result<SseChain<Rational>> {
    if !n.is_square() {
        return Err(Error::Shape("nilpotent reduction needs a square matrix".into()));
    }
    if !n.is_nonnegative() {
        return Err(Error::Precondition("matrix has a negative entry".into()));
    }
    if !n.is_nilpotent() {
        return Err(Error::Precondition("matrix is not nilpotent".into()));
    }
    let order =
        topological_order(n).ok_or_else(|| Error::Invariant("nilpotent nonnegative matrix with a cycle".into()))?;
    let p = permutation_matrix(&order);
    let (mut t, first) = similarity_move(n, &p)?;
    let mut steps = vec![first];
    while t.rows() > 1 {
        let m = t.rows();
        let top = t.block(0, 0, m - 1, m)?;
        let u = Matrix::from_blocks(&[vec![&Matrix::identity(m - 1)], vec![&Matrix::zeros(1, m - 1)]])?;
        debug_assert_eq!(u.mul(&top)?, t);
        let next = top.mul(&u)?;
        steps.push(EsseWitness::new(u, top));
        t = next;
    }
    let chain = SseChain::from_steps(steps)?;
    debug_assert!(verify_sse_chain(&chain));
    Ok(chain)
}

/// Characteristic polynomial with every factor of `x` removed.
pub fn nonzero_spectrum_poly<R: Ring>(a: &Matrix<R>) -> crate::ring::Poly<R> {
    let chi = a.char_poly();
    let v = chi.valuation().unwrap_or(0);
    crate::ring::Poly::new(chi.coeffs()[v..].to_vec())
}
