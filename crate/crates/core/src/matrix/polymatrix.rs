use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Matrix;
use crate::error::{Error, Result};
use crate::ring::{MaybeOrdered, Poly, Rational, Ring};

/// Square matrix over `R[s]` stored by degree: `coeffs[i]` is the
/// coefficient matrix of `s^i`. Trailing zero coefficients are trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyMatrix<R: Ring> {
    size: usize,
    coeffs: Vec<Matrix<R>>,
}

impl<R: Ring> PolyMatrix<R> {
    pub fn zero(size: usize) -> Self {
        PolyMatrix { size, coeffs: Vec::new() }
    }

    pub fn new(size: usize, coeffs: Vec<Matrix<R>>) -> Result<Self> {
        if coeffs.iter().any(|c| c.rows() != size || c.cols() != size) {
            return Err(Error::Shape(format!("coefficients of a size-{size} polynomial matrix must be {size}x{size}")));
        }
        let mut pm = PolyMatrix { size, coeffs };
        pm.trim();
        Ok(pm)
    }

    /// `s^k · m`.
    pub fn monomial(m: Matrix<R>, k: usize) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Shape("polynomial matrices are square".into()));
        }
        let size = m.rows();
        let mut coeffs = vec![Matrix::zeros(size, size); k];
        coeffs.push(m);
        Self::new(size, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Matrix::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn coeffs(&self) -> &[Matrix<R>] {
        &self.coeffs
    }

    /// Coefficient matrix of `s^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Matrix<R> {
        self.coeffs.get(k).cloned().unwrap_or_else(|| Matrix::zeros(self.size, self.size))
    }

    /// Maximum entry degree; zero for the zero matrix.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when every coefficient of degree below `k` vanishes.
    pub fn vanishes_below(&self, k: usize) -> bool {
        self.coeffs.iter().take(k).all(Matrix::is_zero)
    }

    /// Entrywise view as a matrix of polynomials.
    pub fn to_entry_matrix(&self) -> Matrix<Poly<R>> {
        Matrix::from_fn(self.size, self.size, |i, j| Poly::new(self.coeffs.iter().map(|c| c[(i, j)].clone()).collect()))
    }

    pub fn from_entry_matrix(m: &Matrix<Poly<R>>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Shape("polynomial matrices are square".into()));
        }
        let n = m.rows();
        let len = m.entries().iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
        let coeffs = (0..len).map(|k| Matrix::from_fn(n, n, |i, j| m[(i, j)].coeff(k))).collect();
        Self::new(n, coeffs)
    }

    /// `I - self` as a matrix of polynomials.
    pub fn identity_minus(&self) -> Matrix<Poly<R>> {
        let mut m = self.to_entry_matrix().neg();
        for i in 0..self.size {
            m[(i, i)] = Poly::<R>::one().plus(&m[(i, i)]);
        }
        m
    }

    /// Inverse of [`identity_minus`](Self::identity_minus).
    pub fn from_identity_minus(w: &Matrix<Poly<R>>) -> Result<Self> {
        let mut m = w.neg();
        for i in 0..w.rows().min(w.cols()) {
            m[(i, i)] = Poly::<R>::one().plus(&m[(i, i)]);
        }
        Self::from_entry_matrix(&m)
    }

    /// `det(I - self)` as a polynomial in `s`.
    pub fn det_identity_minus(&self) -> Poly<R> {
        self.identity_minus().det()
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.size != rhs.size {
            return Err(Error::Shape("polynomial matrix sizes differ".into()));
        }
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k).add(&rhs.coeff(k))).collect::<Result<Vec<_>>>()?;
        Self::new(self.size, coeffs)
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = PolyMatrix { size: self.size, coeffs: self.coeffs.iter().map(|m| m.scale(c)).collect() };
        out.trim();
        out
    }
}

impl<R: MaybeOrdered> PolyMatrix<R> {
    /// `max_{k>0} max_{i,j} |m_ijk|`: the constant coefficient is ignored.
    pub fn poly_norm(&self) -> Result<Rational> {
        if R::zero().try_abs().is_none() {
            return Err(Error::UnsupportedRing("poly_norm"));
        }
        let mut best = Rational::zero();
        for c in self.coeffs.iter().skip(1) {
            let v = c.sup_norm()?;
            if v > best {
                best = v;
            }
        }
        Ok(best)
    }
}

#[derive(Serialize, Deserialize)]
struct PolyMatrixRepr<C> {
    size: usize,
    coeffs: C,
}

impl<R: Ring + Serialize> Serialize for PolyMatrix<R> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyMatrixRepr { size: self.size, coeffs: &self.coeffs }.serialize(s)
    }
}

impl<'de, R: Ring + DeserializeOwned> Deserialize<'de> for PolyMatrix<R> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyMatrixRepr::<Vec<Matrix<R>>>::deserialize(d)?;
        if repr.size == 0 {
            return Err(serde::de::Error::custom("polynomial matrix size must be positive"));
        }
        PolyMatrix::new(repr.size, repr.coeffs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Laurent;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn norm_skips_constant_term() {
        let m = PolyMatrix::new(
            2,
            vec![Matrix::zeros(2, 2), Matrix::from_ints(&[&[0, 3], &[0, 0]]), Matrix::from_ints(&[&[-4, 0], &[0, 0]])],
        )
        .unwrap();
        assert_eq!(m.poly_norm().unwrap(), q(4, 1));
        assert_eq!(PolyMatrix::monomial(Matrix::from_ints(&[&[7]]), 0).unwrap().poly_norm().unwrap(), q(0, 1));
        let small = PolyMatrix::monomial(Matrix::from_rows(vec![vec![q(1, 4)]]).unwrap(), 1).unwrap();
        assert_eq!(small.poly_norm().unwrap(), q(1, 4));
        let lm = PolyMatrix::monomial(Matrix::<Laurent>::identity(1), 1).unwrap();
        assert!(matches!(lm.poly_norm(), Err(Error::UnsupportedRing(_))));
    }

    #[test]
    fn degree_convention() {
        let a1 = Matrix::from_ints(&[&[1, 0], &[0, 0]]);
        let a3 = Matrix::from_ints(&[&[0, 0], &[2, 0]]);
        let m = PolyMatrix::monomial(a1, 1).unwrap().add(&PolyMatrix::monomial(a3, 3).unwrap()).unwrap();
        assert_eq!(m.degree(), 3);
        assert_eq!(PolyMatrix::<Rational>::zero(3).degree(), 0);
        assert_eq!(PolyMatrix::monomial(Matrix::from_ints(&[&[5]]), 0).unwrap().degree(), 0);
        // explicit trailing zeros are trimmed
        let padded = PolyMatrix::new(1, vec![Matrix::from_ints(&[&[1]]), Matrix::zeros(1, 1)]).unwrap();
        assert_eq!(padded.coeffs().len(), 1);
    }

    #[test]
    fn entry_view_round_trip() {
        let m = PolyMatrix::new(
            2,
            vec![Matrix::zeros(2, 2), Matrix::from_ints(&[&[1, 2], &[3, 4]]), Matrix::from_ints(&[&[0, 0], &[0, 9]])],
        )
        .unwrap();
        assert_eq!(PolyMatrix::from_entry_matrix(&m.to_entry_matrix()).unwrap(), m);
        assert_eq!(PolyMatrix::from_identity_minus(&m.identity_minus()).unwrap(), m);
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<PolyMatrix<Rational>>(&js).unwrap(), m);
    }

    fn arb_pm() -> impl Strategy<Value = PolyMatrix<Rational>> {
        prop::collection::vec(-6i64..7, 12).prop_map(|v| {
            let mats = v
                .chunks(4)
                .map(|c| Matrix::from_vec(2, 2, c.iter().map(|&x| Rational::new(x, 3)).collect()).unwrap())
                .collect();
            PolyMatrix::new(2, mats).unwrap()
        })
    }

    proptest! {
        #[test]
        fn norms_subadditive_and_homogeneous(a in arb_pm(), b in arb_pm(), c in -5i64..6) {
            let c = Rational::new(c, 2);
            let sum = a.add(&b).unwrap();
            prop_assert!(sum.poly_norm().unwrap() <= a.poly_norm().unwrap() + b.poly_norm().unwrap());
            prop_assert_eq!(a.scale(&c).poly_norm().unwrap(), c.abs() * a.poly_norm().unwrap());
            let (x, y) = (a.coeff(1), b.coeff(2));
            prop_assert!(x.add(&y).unwrap().sup_norm().unwrap() <= x.sup_norm().unwrap() + y.sup_norm().unwrap());
            prop_assert_eq!(x.scale(&c).sup_norm().unwrap(), c.abs() * x.sup_norm().unwrap());
        }
    }
}
