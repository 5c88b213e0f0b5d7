//! Seeded random inputs for the property suites.
//!
//! Every generator is driven by a ChaCha stream, so a `(seed, case)` pair
//! always reproduces the same input regardless of scheduling.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::Matrix;
use crate::ring::{Rational, Ring};
use crate::sse::{nilpotent_extension_move, similarity_move, EsseWitness, Side, SseChain};

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Independent stream for case `case` of a suite seeded with `seed`.
    pub fn for_case(seed: u64, case: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(case as u64 + 1);
        Gen { rng }
    }

    pub fn usize_in(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// `a/b` with `|a| ≤ max_num`, `1 ≤ b ≤ max_den`.
    pub fn rational(&mut self, max_num: i64, max_den: i64) -> Rational {
        Rational::new(self.int_in(-max_num, max_num), self.int_in(1, max_den))
    }

    /// Rational strictly inside `(lo, hi)`.
    pub fn rational_between(&mut self, lo: &Rational, hi: &Rational) -> Rational {
        let steps = 64;
        let k = self.int_in(1, steps - 1);
        lo + &(&(hi - lo) * &Rational::new(k, steps))
    }

    fn fill(
        &mut self,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(&mut Self, usize, usize) -> Rational,
    ) -> Matrix<Rational> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(self, i, j));
            }
        }
        Matrix::from_vec(rows, cols, data).expect("sized")
    }

    pub fn int_matrix(&mut self, rows: usize, cols: usize, lo: i64, hi: i64) -> Matrix<Rational> {
        self.fill(rows, cols, |g, _, _| Rational::from_int(g.int_in(lo, hi)))
    }

    pub fn rational_matrix(&mut self, rows: usize, cols: usize, max_num: i64, max_den: i64) -> Matrix<Rational> {
        self.fill(rows, cols, |g, _, _| g.rational(max_num, max_den))
    }

    /// Strictly upper triangular with random rational entries (some zero).
    pub fn strictly_upper(&mut self, n: usize, max_num: i64, max_den: i64) -> Matrix<Rational> {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                if self.chance(0.8) {
                    m[(i, j)] = self.rational(max_num, max_den);
                }
            }
        }
        m
    }

    /// `I + c·e_i e_jᵀ` together with its inverse.
    pub fn elementary(&mut self, n: usize, max_num: i64, max_den: i64) -> (Matrix<Rational>, Matrix<Rational>) {
        let i = self.usize_in(0, n - 1);
        let mut j = self.usize_in(0, n - 2);
        if j >= i {
            j += 1;
        }
        let c = self.rational(max_num, max_den);
        let mut e = Matrix::identity(n);
        let mut inv = Matrix::identity(n);
        e[(i, j)] = c.clone();
        inv[(i, j)] = c.negated();
        (e, inv)
    }

    /// Product of `count` elementary matrices and its inverse.
    pub fn sl_matrix(&mut self, n: usize, count: usize) -> (Matrix<Rational>, Matrix<Rational>) {
        let mut u = Matrix::identity(n);
        let mut u_inv = Matrix::identity(n);
        if n < 2 {
            return (u, u_inv);
        }
        for _ in 0..count {
            let (e, e_inv) = self.elementary(n, 3, 2);
            u = u.mul(&e).expect("square");
            u_inv = e_inv.mul(&u_inv).expect("square");
        }
        (u, u_inv)
    }

    /// Nilpotent `U T U⁻¹` with `T` strictly upper triangular.
    pub fn nilpotent(&mut self, n: usize) -> Matrix<Rational> {
        let t = self.strictly_upper(n, 5, 4);
        let count = self.usize_in(2, 5);
        let (u, u_inv) = self.sl_matrix(n, count);
        u.mul(&t).and_then(|m| m.mul(&u_inv)).expect("square")
    }

    /// Nonnegative nilpotent integer matrix: permuted strictly upper triangular.
    pub fn nonneg_nilpotent(&mut self, n: usize) -> Matrix<Rational> {
        let mut t = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                t[(i, j)] = Rational::from_int(self.int_in(0, 2));
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut self.rng);
        Matrix::from_fn(n, n, |i, j| t[(perm[i], perm[j])].clone())
    }

    /// Entrywise positive rational matrix.
    pub fn positive(&mut self, n: usize) -> Matrix<Rational> {
        self.fill(n, n, |g, _, _| Rational::new(g.int_in(1, 9), g.int_in(1, 3)))
    }

    /// `M₀` with `|3M₀| ≤ C` entrywise.
    pub fn dominated(&mut self, c: &Matrix<Rational>) -> Matrix<Rational> {
        self.fill(c.rows(), c.cols(), |g, i, j| {
            let r = Rational::new(g.int_in(-6, 6), 18);
            &c[(i, j)] * &r
        })
    }

    /// Random 0/1 matrix that is primitive.
    pub fn primitive_01(&mut self, n: usize) -> Matrix<Rational> {
        loop {
            let m = self.int_matrix(n, n, 0, 1);
            if crate::spectral::is_primitive(&m).map(|c| c.primitive).unwrap_or(false) {
                return m;
            }
        }
    }

    /// SSE chain of `lag` random similarity and nilpotent-extension steps.
    pub fn chain(&mut self, lag: usize) -> SseChain<Rational> {
        let n = self.usize_in(1, 3);
        let mut a = self.int_matrix(n, n, -2, 2);
        let mut steps: Vec<EsseWitness<Rational>> = Vec::with_capacity(lag);
        for _ in 0..lag {
            let size = a.rows();
            let grow = size < 5 && (size < 2 || self.chance(0.5));
            let (next, w) = if grow {
                let r = self.usize_in(1, 2);
                if self.chance(0.5) {
                    let x = self.int_matrix(size, r, -2, 2);
                    let (ext, w) = nilpotent_extension_move(&a, &x, Side::Upper).expect("shapes");
                    (ext, w.reversed())
                } else {
                    let x = self.int_matrix(r, size, -2, 2);
                    let (ext, w) = nilpotent_extension_move(&a, &x, Side::Lower).expect("shapes");
                    (ext, w.reversed())
                }
            } else {
                let count = self.usize_in(1, 3);
                let (u, _) = self.sl_matrix(size, count);
                similarity_move(&a, &u).expect("invertible")
            };
            steps.push(w);
            a = next;
        }
        SseChain::from_steps(steps).expect("consistent steps")
    }
}
