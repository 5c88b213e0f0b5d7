#![allow(dead_code)]

use sseq_core::matrix::Matrix;
use sseq_core::ring::Ring;

/// Determinant by the permutation expansion.
pub fn leibniz_det<R: Ring>(m: &Matrix<R>) -> R {
    let n = m.rows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = R::zero();
    permute(&mut perm, 0, &mut |p| {
        let mut term = R::one();
        for (i, &j) in p.iter().enumerate() {
            term = term.times(&m[(i, j)]);
            if term.is_zero() {
                return;
            }
        }
        if inversions(p) % 2 == 1 {
            term = term.negated();
        }
        total.add_assign_ref(&term);
    });
    total
}

fn inversions(p: &[usize]) -> usize {
    (0..p.len()).map(|i| (i + 1..p.len()).filter(|&j| p[i] > p[j]).count()).sum()
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Schoolbook product.
pub fn naive_mul<R: Ring>(a: &Matrix<R>, b: &Matrix<R>) -> Matrix<R> {
    let mut out: Matrix<R> = Matrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for k in 0..a.cols() {
            if a[(i, k)].is_zero() {
                continue;
            }
            for j in 0..b.cols() {
                let t = a[(i, k)].times(&b[(k, j)]);
                out[(i, j)].add_assign_ref(&t);
            }
        }
    }
    out
}

/// Least `k` with `a^k = 0`, by repeated schoolbook products.
pub fn nilpotency_index<R: Ring>(a: &Matrix<R>) -> Option<usize> {
    let mut p = a.clone();
    for k in 1..=a.rows() {
        if p.entries().iter().all(R::is_zero) {
            return Some(k);
        }
        p = naive_mul(&p, a);
    }
    None
}

/// Whether the support digraph of `a` has a closed walk of length at most
/// `max_len`, by depth-first enumeration from every vertex.
pub fn has_short_cycle<R: Ring>(a: &Matrix<R>, max_len: usize) -> bool {
    let n = a.rows();
    let adj: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| !a[(i, j)].is_zero()).collect()).collect();
    fn walk(adj: &[Vec<usize>], start: usize, at: usize, depth: usize, max_len: usize) -> bool {
        adj[at].iter().any(|&nx| (nx == start) || (depth + 1 < max_len && walk(adj, start, nx, depth + 1, max_len)))
    }
    (0..n).any(|s| max_len > 0 && walk(&adj, s, s, 0, max_len))
}

/// The four shift-equivalence equations checked directly.
pub fn se_equations<R: Ring>(a: &Matrix<R>, b: &Matrix<R>, u: &Matrix<R>, v: &Matrix<R>, lag: u32) -> bool {
    let pow = |m: &Matrix<R>| {
        let mut p = Matrix::identity(m.rows());
        for _ in 0..lag {
            p = naive_mul(&p, m);
        }
        p
    };
    u.rows() == a.rows()
        && v.rows() == b.rows()
        && pow(a) == naive_mul(u, v)
        && pow(b) == naive_mul(v, u)
        && naive_mul(a, u) == naive_mul(u, b)
        && naive_mul(b, v) == naive_mul(v, a)
}
