use std::collections::VecDeque;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{Rational, Ring};
use crate::sse::{similarity_move, verify_sse_chain, SseChain};

/// Primitivity verdict with either a witnessing power or the obstruction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitivityCertificate {
    pub primitive: bool,
    /// Least `k ≤ (n-1)² + 1` with `A^k > 0`.
    pub witness_power: Option<usize>,
    /// Gcd of cycle lengths, when the digraph is strongly connected and has a cycle.
    pub period: Option<usize>,
    pub strongly_connected: bool,
}

fn pattern(a: &Matrix<Rational>) -> Vec<Vec<bool>> {
    (0..a.rows()).map(|i| a.row(i).iter().map(|v| !v.is_zero()).collect()).collect()
}

fn reach_all(adj: &[Vec<bool>], reverse: bool) -> bool {
    let n = adj.len();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        for v in 0..n {
            let edge = if reverse { adj[v][u] } else { adj[u][v] };
            if edge && !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn bool_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).any(|k| a[i][k] && b[k][j])).collect()).collect()
}

/// Strong connectivity plus aperiodicity of the digraph of nonzero entries.
pub fn is_primitive(a: &Matrix<Rational>) -> Result<PrimitivityCertificate> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::Shape("primitivity needs a non-empty square matrix".into()));
    }
    if !a.is_nonnegative() {
        return Err(Error::Precondition("matrix has a negative entry".into()));
    }
    let adj = pattern(a);
    let n = adj.len();
    let strongly_connected = reach_all(&adj, false) && reach_all(&adj, true);
    if !strongly_connected {
        return Ok(PrimitivityCertificate { primitive: false, witness_power: None, period: None, strongly_connected });
    }
    let mut level = vec![usize::MAX; n];
    level[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        for v in 0..n {
            if adj[u][v] && level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut g = 0usize;
    for u in 0..n {
        for v in 0..n {
            if adj[u][v] {
                g = g.gcd(&(level[u] + 1).abs_diff(level[v]));
            }
        }
    }
    let period = (g > 0).then_some(g);
    if g != 1 {
        return Ok(PrimitivityCertificate { primitive: false, witness_power: None, period, strongly_connected });
    }
    let wielandt = (n - 1) * (n - 1) + 1;
    let mut power = adj.clone();
    for k in 1..=wielandt {
        if power.iter().all(|r| r.iter().all(|&b| b)) {
            return Ok(PrimitivityCertificate { primitive: true, witness_power: Some(k), period, strongly_connected });
        }
        power = bool_mul(&power, &adj);
    }
    Err(Error::Invariant("aperiodic irreducible matrix without a positive power".into()))
}

/// The block matrix `G` built from a primitive `C` and a small `M₀`, with the
/// two similarities that produce it from `C ⊕ M₀`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assembly {
    #[serde(rename = "G")]
    pub g: Matrix<Rational>,
    /// `[[C, ε(C - M₀)], [0, M₀]]`.
    pub triangular: Matrix<Rational>,
    /// `C ⊕ M₀ → triangular → G`, one similarity per step.
    pub chain: SseChain<Rational>,
    pub identities_ok: bool,
    pub conjugators_ok: bool,
    pub nonnegative: bool,
    pub primitivity: PrimitivityCertificate,
}

/// Conjugates `C ⊕ M₀` by `[[I, εI], [0, I]]` and then `[[I, 0], [-I, I]]`.
pub fn primitive_assembly(c: &Matrix<Rational>, m0: &Matrix<Rational>, eps: &Rational) -> Result<Assembly> {
    if !c.is_square() || c.rows() == 0 || m0.rows() != c.rows() || m0.cols() != c.cols() {
        return Err(Error::Shape("C and M0 must be square of the same size".into()));
    }
    let third = Rational::new(1, 3);
    let two_thirds = Rational::new(2, 3);
    if !(eps > &third && eps < &two_thirds) {
        return Err(Error::Precondition(format!("epsilon {eps} outside (1/3, 2/3)")));
    }
    if !c.is_nonnegative() {
        return Err(Error::Precondition("C has a negative entry".into()));
    }
    let three = Rational::from_int(3);
    for (i, (mv, cv)) in m0.entries().iter().zip(c.entries()).enumerate() {
        if (&three * &mv.abs()) > *cv {
            let n = c.cols();
            return Err(Error::Precondition(format!(
                "|3 M0| exceeds C at ({}, {}): nonnegativity not guaranteed",
                i / n,
                i % n
            )));
        }
    }

    let n = c.rows();
    let id = Matrix::identity(n);
    let zero = Matrix::zeros(n, n);
    let eps_i = id.scale(eps);
    let one = Rational::one();
    let co_eps = &one - eps;
    let diff = c.sub(m0)?;

    let p1 = Matrix::from_blocks(&[vec![&id, &eps_i], vec![&zero, &id]])?;
    let p1_inv = Matrix::from_blocks(&[vec![&id, &eps_i.neg()], vec![&zero, &id]])?;
    let q = Matrix::from_blocks(&[vec![&id, &zero], vec![&id.neg(), &id]])?;
    let q_inv = Matrix::from_blocks(&[vec![&id, &zero], vec![&id, &id]])?;
    let id2 = Matrix::identity(2 * n);
    let conjugators_ok =
        p1.mul(&p1_inv)? == id2 && q.mul(&q_inv)? == id2 && p1.det_bareiss().is_one() && q.det_bareiss().is_one();

    let start = c.direct_sum(m0);
    let triangular = Matrix::from_blocks(&[vec![c, &diff.scale(eps)], vec![&zero, m0]])?;
    let g = Matrix::from_blocks(&[
        vec![&c.scale(&co_eps).add(&m0.scale(eps))?, &diff.scale(eps)],
        vec![&diff.scale(&co_eps), &c.scale(eps).add(&m0.scale(&co_eps))?],
    ])?;
    let first_ok = p1_inv.mul(&start)?.mul(&p1)? == triangular;
    let second_ok = q_inv.mul(&triangular)?.mul(&q)? == g;

    let (mid, w1) = similarity_move(&start, &p1)?;
    let (end, w2) = similarity_move(&mid, &q)?;
    let chain = SseChain::from_steps(vec![w1, w2])?;
    let identities_ok = first_ok && second_ok && mid == triangular && end == g && verify_sse_chain(&chain);
    if !identities_ok || !conjugators_ok {
        return Err(Error::Invariant("assembly identities fail".into()));
    }
    let nonnegative = g.is_nonnegative();
    let primitivity = if nonnegative {
        is_primitive(&g)?
    } else {
        PrimitivityCertificate { primitive: false, witness_power: None, period: None, strongly_connected: false }
    };
    Ok(Assembly { g, triangular, chain, identities_ok, conjugators_ok, nonnegative, primitivity })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitivity_examples() {
        let r = is_primitive(&Matrix::from_ints(&[&[0, 1], &[1, 1]])).unwrap();
        assert!(r.primitive);
        assert_eq!(r.witness_power, Some(2));
        let r = is_primitive(&Matrix::from_ints(&[&[0, 1], &[1, 0]])).unwrap();
        assert!(!r.primitive);
        assert_eq!(r.period, Some(2));
        let r = is_primitive(&Matrix::from_ints(&[&[1, 0], &[0, 1]])).unwrap();
        assert!(!r.primitive && !r.strongly_connected);
        assert!(is_primitive(&Matrix::from_ints(&[&[1, -1], &[1, 1]])).is_err());
        assert!(!is_primitive(&Matrix::from_ints(&[&[0]])).unwrap().primitive);
    }

    #[test]
    fn wielandt_extremal() {
        // Wielandt's matrix attains (n-1)^2 + 1.
        let w = Matrix::from_ints(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 1, 0, 0]]);
        assert_eq!(is_primitive(&w).unwrap().witness_power, Some(10));
    }

    #[test]
    fn one_by_one_assembly() {
        let c = Matrix::from_ints(&[&[1]]);
        let m0 = Matrix::from_ints(&[&[0]]);
        let a = primitive_assembly(&c, &m0, &Rational::new(1, 2)).unwrap();
        let h = Rational::new(1, 2);
        assert_eq!(a.g, Matrix::from_rows(vec![vec![h.clone(), h.clone()], vec![h.clone(), h]]).unwrap());
        assert!(a.primitivity.primitive);
        assert_eq!(
            a.triangular,
            Matrix::from_rows(vec![
                vec![Rational::one(), Rational::new(1, 2)],
                vec![Rational::zero(), Rational::zero()]
            ])
            .unwrap()
        );
    }

    #[test]
    fn assembly_preconditions() {
        let c = Matrix::from_ints(&[&[1, 2], &[3, 1]]);
        assert!(primitive_assembly(&c, &c, &Rational::new(1, 2)).is_err());
        let m0 = Matrix::zeros(2, 2);
        assert!(primitive_assembly(&c, &m0, &Rational::new(1, 3)).is_err());
        assert!(primitive_assembly(&c, &m0, &Rational::new(2, 3)).is_err());
        assert!(primitive_assembly(&c, &Matrix::zeros(3, 3), &Rational::new(1, 2)).is_err());
        let m0 = Matrix::from_rows(vec![
            vec![Rational::new(-1, 3), Rational::new(1, 2)],
            vec![Rational::zero(), Rational::new(1, 3)],
        ])
        .unwrap();
        let a = primitive_assembly(&c, &m0, &Rational::new(1, 2)).unwrap();
        assert!(a.nonnegative && a.primitivity.primitive);
    }
}
