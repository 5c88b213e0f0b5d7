//! Dense exact matrices over a [`Ring`] and over its polynomial ring.

mod det;
mod polymatrix;
mod radius;

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ring::{Field, MaybeOrdered, Rational, Ring};

pub use det::{power_sums, Nilpotency};
pub use polymatrix::PolyMatrix;
pub use radius::{spectral_radius_upper, RadiusBound};

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<R: Ring> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

/// Products with at least this many scalar multiplications are split across
/// rows when running in parallel mode.
const PAR_MUL_WORK: usize = 32 * 32 * 32;

impl<R: Ring> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, R::one())
    }

    pub fn scalar(n: usize, c: R) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<R>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries cannot fill a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(R::is_zero)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    fn same_shape(&self, rhs: &Self, what: &str) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Shape(format!("{what}: {}x{} vs {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs, "add")?;
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.plus(b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs, "sub")?;
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.minus(b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn neg(&self) -> Self {
        self.map(R::negated)
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|a| a.times(c))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.mul_with(rhs, Exec::default())
    }

    pub fn mul_with(&self, rhs: &Self, exec: Exec) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!("mul: {}x{} times {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        let work = self.rows * self.cols * rhs.cols;
        let exec = if work >= PAR_MUL_WORK { exec } else { Exec::Sequential };
        let rows = exec.map_range(self.rows, |i| self.row_times(i, rhs));
        Ok(Matrix { rows: self.rows, cols: rhs.cols, data: rows.into_iter().flatten().collect() })
    }

    fn row_times(&self, i: usize, rhs: &Self) -> Vec<R> {
        let mut out = vec![R::zero(); rhs.cols];
        for (k, a) in self.row(i).iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(rhs.row(k)) {
                if !b.is_zero() {
                    o.add_assign_ref(&a.times(b));
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn trace(&self) -> R {
        (0..self.rows.min(self.cols)).fold(R::zero(), |acc, i| acc.plus(&self[(i, i)]))
    }

    /// Copy of the `rows x cols` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Result<Self> {
        if r0 + rows > self.rows || c0 + cols > self.cols {
            return Err(Error::Shape(format!(
                "block {rows}x{cols} at ({r0},{c0}) outside {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone()))
    }

    /// Assembles a block matrix from a grid; blocks in a grid row share a row
    /// count and blocks in a grid column share a column count.
    pub fn from_blocks(grid: &[Vec<&Self>]) -> Result<Self> {
        let Some(first) = grid.first() else {
            return Ok(Self::zeros(0, 0));
        };
        let heights: Vec<usize> = grid.iter().map(|row| row.first().map_or(0, |b| b.rows)).collect();
        let widths: Vec<usize> = first.iter().map(|b| b.cols).collect();
        for (bi, row) in grid.iter().enumerate() {
            if row.len() != widths.len() {
                return Err(Error::Shape("ragged block grid".into()));
            }
            for (bj, b) in row.iter().enumerate() {
                if b.rows != heights[bi] || b.cols != widths[bj] {
                    return Err(Error::Shape(format!("block ({bi},{bj}) has incompatible shape")));
                }
            }
        }
        let total_r: usize = heights.iter().sum();
        let total_c: usize = widths.iter().sum();
        let mut out = Self::zeros(total_r, total_c);
        let mut r0 = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                    }
                }
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        Ok(out)
    }

    /// Block diagonal `diag(self, other)`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Copy with the final row and column removed.
    pub fn drop_last(&self) -> Result<Self> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Shape("cannot shrink an empty matrix".into()));
        }
        self.block(0, 0, self.rows - 1, self.cols - 1)
    }

    /// Inverse over the ring, via Cayley–Hamilton; needs `det` to be a unit.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let chi = self.char_poly();
        // chi(A) = A^n + c_{n-1}A^{n-1} + ... + c_0 I = 0
        // => A * (A^{n-1} + ... + c_1 I) = -c_0 I
        let c0 = chi.coeff(0);
        let inv_c0 = c0.negated().unit_inverse().ok_or(Error::NotAUnit)?;
        let mut acc = Self::identity(n);
        for k in (1..n).rev() {
            acc = self.mul(&acc)?;
            let ck = chi.coeff(k);
            for i in 0..n {
                acc[(i, i)].add_assign_ref(&ck);
            }
        }
        let inv = acc.scale(&inv_c0);
        debug_assert!(self.mul(&inv).map(|p| p == Self::identity(n)).unwrap_or(false));
        Ok(inv)
    }
}

impl<R: MaybeOrdered> Matrix<R> {
    /// `|M|(i,j) = |M(i,j)|`.
    pub fn entrywise_abs(&self) -> Result<Matrix<Rational>> {
        let data = self
            .data
            .iter()
            .map(|a| a.try_abs().ok_or(Error::UnsupportedRing("entrywise_abs")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    /// `max |m_ij|`, zero for the zero matrix.
    pub fn sup_norm(&self) -> Result<Rational> {
        let mut best = Rational::zero();
        for a in &self.data {
            let v = a.try_abs().ok_or(Error::UnsupportedRing("sup_norm"))?;
            if v > best {
                best = v;
            }
        }
        Ok(best)
    }
}

impl Matrix<Rational> {
    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|a| !a.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        self.data.iter().all(Rational::is_positive)
    }

    /// Convenience constructor from integer rows.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| Rational::from_int(v)).collect()).collect())
            .expect("rectangular literal")
    }
}

impl<R: Field> Matrix<R> {
    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].unit_inverse().expect("field");
            for j in 0..m.cols {
                m[(r, j)] = m[(r, j)].times(&inv);
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in 0..m.cols {
                        let d = f.times(&m[(r, j)]);
                        m[(i, j)] = m[(i, j)].minus(&d);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one column vector per entry.
    pub fn kernel(&self) -> Vec<Vec<R>> {
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![R::zero(); self.cols];
                v[f] = R::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = m[(r, f)].negated();
                }
                v
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<R: Ring> Index<(usize, usize)> for Matrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl<R: Ring> IndexMut<(usize, usize)> for Matrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<R: Ring> fmt::Display for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            f.write_str("[")?;
            for (j, a) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

impl<R: Ring> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} ", self.rows, self.cols)?;
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr<R> {
    rows: usize,
    cols: usize,
    ring: String,
    entries: Vec<Vec<R>>,
}

impl<R: Ring + Serialize> Serialize for Matrix<R> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr { rows: self.rows, cols: self.cols, ring: R::TAG.to_string(), entries: self.to_rows() }.serialize(s)
    }
}

impl<'de, R: Ring + DeserializeOwned> Deserialize<'de> for Matrix<R> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MatrixRepr::<R>::deserialize(d)?;
        if repr.ring != R::TAG {
            return Err(D::Error::custom(format!("expected ring {:?}, found {:?}", R::TAG, repr.ring)));
        }
        if repr.rows == 0 || repr.cols == 0 {
            return Err(D::Error::custom("matrix dimensions must be positive"));
        }
        if repr.entries.len() != repr.rows || repr.entries.iter().any(|r| r.len() != repr.cols) {
            return Err(D::Error::custom(format!("entries do not form a {}x{} array", repr.rows, repr.cols)));
        }
        Ok(Matrix { rows: repr.rows, cols: repr.cols, data: repr.entries.into_iter().flatten().collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Laurent;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn products() {
        let nil = Matrix::from_ints(&[&[0, 1], &[0, 0]]);
        assert!(nil.pow(2).unwrap().is_zero());
        let a = Matrix::from_ints(&[&[3, -1], &[2, 5]]);
        assert_eq!(Matrix::identity(2).mul(&a).unwrap(), a);
        let fib = Matrix::from_ints(&[&[1, 1], &[1, 0]]);
        assert_eq!(fib.pow(2).unwrap(), Matrix::from_ints(&[&[2, 1], &[1, 1]]));
        assert!(matches!(a.mul(&Matrix::zeros(3, 1)), Err(Error::Shape(_))));
        assert!(matches!(a.add(&Matrix::zeros(2, 3)), Err(Error::Shape(_))));
    }

    #[test]
    fn parallel_product_matches() {
        let a = Matrix::from_fn(40, 40, |i, j| Rational::new((i * 7 + j) as i64 % 5 - 2, 1 + (i % 3) as i64));
        let b = a.transpose();
        assert_eq!(a.mul_with(&b, Exec::Parallel).unwrap(), a.mul_with(&b, Exec::Sequential).unwrap());
    }

    #[test]
    fn blocks() {
        let a = Matrix::from_ints(&[&[1, 2], &[3, 4]]);
        let i = Matrix::identity(2);
        let z = Matrix::zeros(2, 2);
        let big = Matrix::from_blocks(&[vec![&a, &i], vec![&z, &a]]).unwrap();
        assert_eq!(big.block(2, 2, 2, 2).unwrap(), a);
        assert_eq!(big.block(0, 2, 2, 2).unwrap(), i);
        assert_eq!(a.direct_sum(&i).block(2, 2, 2, 2).unwrap(), i);
        assert_eq!(big.drop_last().unwrap().rows(), 3);
        assert!(Matrix::from_blocks(&[vec![&a, &Matrix::zeros(3, 1)]]).is_err());
    }

    #[test]
    fn norms() {
        let m = Matrix::from_ints(&[&[-1, 2], &[0, -3]]);
        assert_eq!(m.entrywise_abs().unwrap(), Matrix::from_ints(&[&[1, 2], &[0, 3]]));
        let nn = Matrix::from_ints(&[&[1, 0], &[2, 7]]);
        assert_eq!(nn.entrywise_abs().unwrap(), nn);
        let lm: Matrix<Laurent> = Matrix::identity(2);
        assert!(matches!(lm.entrywise_abs(), Err(Error::UnsupportedRing(_))));
        assert!(matches!(lm.sup_norm(), Err(Error::UnsupportedRing(_))));
        let s = Matrix::from_rows(vec![vec![q(1, 2), q(-3, 4)], vec![q(0, 1), q(1, 8)]]).unwrap();
        assert_eq!(s.sup_norm().unwrap(), q(3, 4));
        assert_eq!(Matrix::<Rational>::zeros(3, 3).sup_norm().unwrap(), q(0, 1));
        assert_eq!(Matrix::from_ints(&[&[-5]]).sup_norm().unwrap(), q(5, 1));
    }

    #[test]
    fn inverse_and_kernel() {
        let a = Matrix::from_ints(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.inverse().unwrap(), Matrix::from_ints(&[&[1, -1], &[-1, 2]]));
        assert!(matches!(Matrix::from_ints(&[&[0]]).inverse(), Err(Error::NotAUnit)));
        let n = Matrix::from_ints(&[&[1, 2], &[2, 4]]);
        let k = n.kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(n.rank(), 1);
        // z^-1 is a unit of the Laurent ring
        let u = Matrix::<Laurent>::scalar(2, Laurent::z());
        assert_eq!(u.inverse().unwrap(), Matrix::scalar(2, Laurent::z_inv()));
    }

    #[test]
    fn json_shape() {
        let a = Matrix::from_rows(vec![vec![q(1, 2), q(0, 1)]]).unwrap();
        let js = serde_json::to_string(&a).unwrap();
        assert_eq!(js, r#"{"rows":1,"cols":2,"ring":"Q","entries":[["1/2","0/1"]]}"#);
        assert_eq!(serde_json::from_str::<Matrix<Rational>>(&js).unwrap(), a);
        assert!(serde_json::from_str::<Matrix<Laurent>>(&js).is_err());
        assert!(
            serde_json::from_str::<Matrix<Rational>>(r#"{"rows":2,"cols":2,"ring":"Q","entries":[["1"]]}"#).is_err()
        );
    }
}
