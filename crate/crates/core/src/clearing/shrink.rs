use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{Rational, Ring};

/// `I + c·e_i e_jᵀ` with `i ≠ j` (zero-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementaryFactor {
    pub i: usize,
    pub j: usize,
    pub c: Rational,
}

impl ElementaryFactor {
    pub fn to_matrix(&self, n: usize) -> Matrix<Rational> {
        let mut m = Matrix::identity(n);
        m[(self.i, self.j)] = self.c.clone();
        m
    }

    pub fn inverse(&self) -> Self {
        ElementaryFactor { i: self.i, j: self.j, c: self.c.negated() }
    }

    fn left_apply(&self, x: &mut Matrix<Rational>) {
        for col in 0..x.cols() {
            let d = self.c.times(&x[(self.j, col)]);
            if !d.is_zero() {
                x[(self.i, col)].add_assign_ref(&d);
            }
        }
    }
}

/// Conjugation `V⁻¹ N V` with `det V = 1` bringing a nilpotent `N` below a
/// sup-norm threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShrinkResult {
    #[serde(rename = "V")]
    pub v: Matrix<Rational>,
    pub conjugated: Matrix<Rational>,
    /// `V` equals the product of these, left to right.
    pub factors: Vec<ElementaryFactor>,
    /// Scaling base `c`; entries of the triangular form shrink by at least `c⁻²`.
    pub scale: Rational,
    pub delta: Rational,
    pub norm: Rational,
}

/// Product of the factors, left to right.
pub fn product_of_factors(n: usize, factors: &[ElementaryFactor]) -> Matrix<Rational> {
    let mut out = Matrix::identity(n);
    for f in factors.iter().rev() {
        f.left_apply(&mut out);
    }
    out
}

/// Writes `v ∈ SL(n, ℚ)` as a product of elementary matrices.
pub fn elementary_factors(v: &Matrix<Rational>) -> Result<Vec<ElementaryFactor>> {
    if !v.is_square() {
        return Err(Error::Shape("elementary factorization of a non-square matrix".into()));
    }
    let n = v.rows();
    if !v.det_bareiss().is_one() {
        return Err(Error::Precondition("determinant must be 1".into()));
    }
    let mut x = v.clone();
    let mut left: Vec<ElementaryFactor> = Vec::new();
    let mut apply = |x: &mut Matrix<Rational>, f: ElementaryFactor| {
        f.left_apply(x);
        left.push(f);
    };
    for col in 0..n {
        if x[(col, col)].is_zero() {
            let r = (col + 1..n).find(|&r| !x[(r, col)].is_zero()).ok_or(Error::NotAUnit)?;
            apply(&mut x, ElementaryFactor { i: col, j: r, c: Rational::one() });
        }
        let pivot = x[(col, col)].clone();
        for r in 0..n {
            if r != col && !x[(r, col)].is_zero() {
                let c = (&x[(r, col)] / &pivot).negated();
                apply(&mut x, ElementaryFactor { i: r, j: col, c });
            }
        }
    }
    // left_k ⋯ left_1 · v = diag(d), so v = left_1⁻¹ ⋯ left_k⁻¹ · diag(d).
    let mut factors: Vec<ElementaryFactor> = left.iter().map(ElementaryFactor::inverse).collect();
    let mut prefix = Rational::one();
    for i in 0..n.saturating_sub(1) {
        prefix = prefix.times(&x[(i, i)]);
        factors.extend(diagonal_pair(i, &prefix));
    }
    factors.retain(|f| !f.c.is_zero());
    if product_of_factors(n, &factors) != *v {
        return Err(Error::Invariant("elementary factorization does not reproduce the matrix".into()));
    }
    Ok(factors)
}

/// `diag(u, 1/u)` on positions `i, i+1` as four elementary factors.
fn diagonal_pair(i: usize, u: &Rational) -> Vec<ElementaryFactor> {
    if u.is_one() {
        return Vec::new();
    }
    let inv = u.recip().expect("nonzero pivot");
    let one = Rational::one();
    vec![
        ElementaryFactor { i, j: i + 1, c: u - &one },
        ElementaryFactor { i: i + 1, j: i, c: one.clone() },
        ElementaryFactor { i, j: i + 1, c: &inv - &one },
        ElementaryFactor { i: i + 1, j: i, c: u.negated() },
    ]
}

/// Basis `P` (as columns) with `P⁻¹ N P` strictly upper triangular, taken
/// along the kernel chain of `N`, `N²`, ….
fn flag_basis(nm: &Matrix<Rational>) -> Result<Matrix<Rational>> {
    let n = nm.rows();
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    let mut power = nm.clone();
    for _ in 0..n {
        for v in power.kernel() {
            let mut trial = basis.clone();
            trial.push(v);
            if Matrix::from_rows(trial.clone())?.rank() == trial.len() {
                basis = trial;
            }
        }
        if basis.len() == n {
            break;
        }
        power = power.mul(nm)?;
    }
    if basis.len() != n {
        return Err(Error::Precondition("matrix is not nilpotent".into()));
    }
    Ok(Matrix::from_rows(basis)?.transpose())
}

/// Conjugates a nilpotent `N` by some `V ∈ SL(n, ℚ)` so that the result has
/// sup norm strictly below `delta`.
pub fn shrink_norm(nm: &Matrix<Rational>, delta: &Rational) -> Result<ShrinkResult> {
    if !nm.is_square() {
        return Err(Error::Shape("shrink_norm needs a square matrix".into()));
    }
    if !delta.is_positive() {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    if !nm.is_nilpotent() {
        return Err(Error::Precondition("matrix is not nilpotent".into()));
    }
    let n = nm.rows();
    let norm = nm.sup_norm()?;
    if &norm < delta {
        return Ok(ShrinkResult {
            v: Matrix::identity(n),
            conjugated: nm.clone(),
            factors: Vec::new(),
            scale: Rational::one(),
            delta: delta.clone(),
            norm,
        });
    }

    let mut p = flag_basis(nm)?;
    let det = p.det_bareiss();
    let fix = det.recip().ok_or(Error::NotAUnit)?;
    for r in 0..n {
        p[(r, n - 1)] = p[(r, n - 1)].times(&fix);
    }
    let p_inv = p.inverse()?;
    let t = p_inv.mul(nm)?.mul(&p)?;
    if (0..n).any(|i| (0..=i).any(|j| !t[(i, j)].is_zero())) {
        return Err(Error::Invariant("flag basis did not triangularize".into()));
    }

    let t_norm = t.sup_norm()?;
    let mut c = Rational::one();
    while &t_norm / &(&c * &c) >= *delta {
        c = &c * &Rational::from_int(2);
    }
    let exps: Vec<i32> = (0..n).map(|i| n as i32 - 1 - 2 * i as i32).collect();
    let d = Matrix::from_fn(n, n, |i, j| if i == j { c.pow(exps[i]) } else { Rational::zero() });
    let d_inv = Matrix::from_fn(n, n, |i, j| if i == j { c.pow(-exps[i]) } else { Rational::zero() });
    let v = p.mul(&d)?;
    let conjugated = d_inv.mul(&t)?.mul(&d)?;

    if !v.det_bareiss().is_one() {
        return Err(Error::Invariant("conjugator does not have determinant 1".into()));
    }
    if v.mul(&conjugated)? != nm.mul(&v)? {
        return Err(Error::Invariant("conjugation identity fails".into()));
    }
    let out_norm = conjugated.sup_norm()?;
    if &out_norm >= delta {
        return Err(Error::Invariant(format!("conjugated norm {out_norm} not below {delta}")));
    }
    let factors = elementary_factors(&v)?;
    Ok(ShrinkResult { v, conjugated, factors, scale: c, delta: delta.clone(), norm: out_norm })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jordan_block_shrinks() {
        let n = Matrix::from_ints(&[&[0, 1], &[0, 0]]);
        let r = shrink_norm(&n, &Rational::new(1, 10)).unwrap();
        assert!(r.conjugated.sup_norm().unwrap() < Rational::new(1, 10));
        assert!(r.v.det_bareiss().is_one());
        assert_eq!(r.conjugated.char_poly(), n.char_poly());
        assert_eq!(product_of_factors(2, &r.factors), r.v);
        assert!(r.factors.iter().all(|f| f.i != f.j));
    }

    #[test]
    fn small_input_untouched() {
        let n = Matrix::from_fn(2, 2, |i, j| if i == 0 && j == 1 { Rational::new(1, 100) } else { Rational::zero() });
        let r = shrink_norm(&n, &Rational::new(1, 10)).unwrap();
        assert_eq!(r.v, Matrix::identity(2));
        assert!(r.factors.is_empty());
    }

    #[test]
    fn rejects_non_nilpotent() {
        assert!(matches!(shrink_norm(&Matrix::identity(2), &Rational::new(1, 2)), Err(Error::Precondition(_))));
    }

    #[test]
    fn lower_triangular_nilpotent() {
        let n = Matrix::from_ints(&[&[0, 0, 0], &[3, 0, 0], &[-2, 5, 0]]);
        let delta = Rational::new(1, 1000);
        let r = shrink_norm(&n, &delta).unwrap();
        assert!(r.norm < delta);
        assert_eq!(r.v.mul(&r.conjugated).unwrap(), n.mul(&r.v).unwrap());
    }

    #[test]
    fn factorization_with_zero_pivot() {
        let v = Matrix::from_ints(&[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 1]]);
        let f = elementary_factors(&v).unwrap();
        assert_eq!(product_of_factors(3, &f), v);
        let w = Matrix::from_ints(&[&[2, 0], &[0, 1]]);
        assert!(elementary_factors(&w).is_err());
    }
}
