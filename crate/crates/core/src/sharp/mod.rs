//! The block companion `A ↦ A♯` for matrices over `tR[t]`, its inverse
//! direction `A ↦ tA`, replayable elementary-operation logs over `R[t]`,
//! and the ℚ[t²,t³,z,z⁻¹] fixture.

mod badring;
mod oplog;

pub use badring::{badring_fixture, BadRingFixture, FixtureCheck};
pub use oplog::{apply_oplog, det_certificate, ElOp, ElOpLog, WorkMatrix};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, PolyMatrix};
use crate::ring::Ring;

/// Block companion with first block row `A_1 .. A_k` (each padded to
/// `n x n`) and identity blocks on the subdiagonal.
pub fn sharp_of<R: Ring>(a: &PolyMatrix<R>, k: usize, n: usize) -> Result<Matrix<R>> {
    if k == 0 || n == 0 {
        return Err(Error::Precondition("block count and block size must be positive".into()));
    }
    if !a.coeff(0).is_zero() {
        return Err(Error::Precondition("constant coefficient must vanish (matrix over tR[t])".into()));
    }
    if a.size() > n {
        return Err(Error::Precondition(format!("matrix size {} exceeds block size {n}", a.size())));
    }
    if a.degree() > k {
        return Err(Error::Precondition(format!("degree {} exceeds block count {k}", a.degree())));
    }
    let mut out = Matrix::zeros(n * k, n * k);
    for b in 1..=k.min(a.coeffs().len().saturating_sub(1)) {
        let c = &a.coeffs()[b];
        for i in 0..a.size() {
            for j in 0..a.size() {
                out[(i, (b - 1) * n + j)] = c[(i, j)].clone();
            }
        }
    }
    for b in 1..k {
        for i in 0..n {
            out[(b * n + i, (b - 1) * n + i)] = R::one();
        }
    }
    Ok(out)
}

/// `sharp_of` with the smallest admissible `k` and `n`.
pub fn sharp_minimal<R: Ring>(a: &PolyMatrix<R>) -> Result<Matrix<R>> {
    sharp_of(a, a.degree().max(1), a.size())
}

/// `A ↦ tA`, the finite part of `I - tA`.
pub fn embed_as_pencil<R: Ring>(a: &Matrix<R>) -> Result<PolyMatrix<R>> {
    PolyMatrix::monomial(a.clone(), 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::PolyMatrix;
    use crate::ring::Rational;
    use crate::sse::{nilpotent_extension_move, permutation_matrix, similarity_move, verify_sse_chain, Side, SseChain};
    use proptest::prelude::*;

    #[test]
    fn single_block_is_identity_map() {
        let n = Matrix::from_ints(&[&[0, 1], &[0, 0]]);
        let a = embed_as_pencil(&n).unwrap();
        assert_eq!(sharp_of(&a, 1, 2).unwrap(), n);
        assert!(embed_as_pencil(&Matrix::<Rational>::zeros(1, 1)).unwrap().is_zero());
        let f = Matrix::from_ints(&[&[1, 1], &[1, 0]]);
        assert_eq!(embed_as_pencil(&f).unwrap().coeff(1), f);
    }

    #[test]
    fn two_block_layout() {
        let a1 = Matrix::from_ints(&[&[1, 2], &[3, 4]]);
        let a2 = Matrix::from_ints(&[&[5, 6], &[7, 8]]);
        let a = PolyMatrix::new(2, vec![Matrix::zeros(2, 2), a1.clone(), a2.clone()]).unwrap();
        let s = sharp_of(&a, 2, 2).unwrap();
        let i = Matrix::identity(2);
        let z = Matrix::zeros(2, 2);
        assert_eq!(s, Matrix::from_blocks(&[vec![&a1, &a2], vec![&i, &z]]).unwrap());
    }

    #[test]
    fn rejects_constant_term() {
        let a = PolyMatrix::monomial(Matrix::from_ints(&[&[1]]), 0).unwrap();
        assert!(matches!(sharp_of(&a, 1, 1), Err(Error::Precondition(_))));
        let b = PolyMatrix::monomial(Matrix::from_ints(&[&[1]]), 3).unwrap();
        assert!(sharp_of(&b, 2, 1).is_err());
    }

    #[test]
    fn padding_is_a_nilpotent_extension() {
        // With a zero block appended, A♯ = [[S, 0], [X, 0]]. Moving the last
        // block to the front gives the lower extension [[0, X], [0, S]].
        let a1 = Matrix::from_ints(&[&[1, 2], &[0, 1]]);
        let a2 = Matrix::from_ints(&[&[0, 3], &[1, 0]]);
        let a = PolyMatrix::new(2, vec![Matrix::zeros(2, 2), a1, a2]).unwrap();
        let small = sharp_of(&a, 2, 2).unwrap();
        let big = sharp_of(&a, 3, 2).unwrap();
        let x = big.block(4, 0, 2, 4).unwrap();
        let p: Matrix<Rational> = permutation_matrix(&[4, 5, 0, 1, 2, 3]);
        let (moved, w1) = similarity_move(&big, &p).unwrap();
        let (ext, w2) = nilpotent_extension_move(&small, &x, Side::Lower).unwrap();
        assert_eq!(moved, ext);
        let chain = SseChain::from_steps(vec![w1, w2]).unwrap();
        assert!(verify_sse_chain(&chain));
        assert_eq!(chain.source(), &big);
        assert_eq!(chain.target(), &small);
    }

    fn arb_poly_matrix() -> impl Strategy<Value = (PolyMatrix<Rational>, usize)> {
        (1usize..3, 1usize..4).prop_flat_map(|(n, k)| {
            prop::collection::vec(-2i64..3, n * n * k).prop_map(move |v| {
                let mut coeffs = vec![Matrix::zeros(n, n)];
                for c in v.chunks(n * n) {
                    coeffs.push(Matrix::from_vec(n, n, c.iter().map(|&x| Rational::from_int(x)).collect()).unwrap());
                }
                (PolyMatrix::new(n, coeffs).unwrap(), k)
            })
        })
    }

    proptest! {
        #[test]
        fn companion_determinant_identity((a, k) in arb_poly_matrix()) {
            let n = a.size();
            let s = sharp_of(&a, k, n).unwrap();
            let lhs = PolyMatrix::monomial(s, 1).unwrap().det_identity_minus();
            let rhs = a.det_identity_minus();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pencil_round_trip(v in prop::collection::vec(-4i64..5, 9)) {
            let m = Matrix::from_vec(3, 3, v.into_iter().map(Rational::from_int).collect()).unwrap();
            prop_assert_eq!(sharp_of(&embed_as_pencil(&m).unwrap(), 1, 3).unwrap(), m);
        }
    }
}
