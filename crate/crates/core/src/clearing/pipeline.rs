use serde::{Deserialize, Serialize};

use super::{clear_degree_step, growth_factor, shrink_norm, step_norm_bound, ClearingStepReport, ShrinkResult};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, PolyMatrix};
use crate::ring::{Poly, Rational, Ring};
use crate::sharp::{embed_as_pencil, sharp_of};

/// Output of the trace-killing recursion `B_0 = tN, B_k = clear(B_{k-1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClearedResult {
    /// `sharp_of(B_K, d, n)`.
    #[serde(rename = "M")]
    pub m: Matrix<Rational>,
    #[serde(rename = "J")]
    pub j: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub n: usize,
    /// Block count `1 + 3K(K+1)/2`.
    pub d: usize,
    pub steps: Vec<ClearingStepReport>,
    #[serde(rename = "B_K")]
    pub b_k: PolyMatrix<Rational>,
    /// `tr(M^k)` for `k = 1..=K`.
    pub traces: Vec<Rational>,
    /// `tr(|M|^k)` for `k = 1..=K`.
    pub abs_traces: Vec<Rational>,
    /// `poly_norm(B_k)` for `k = 0..=K`.
    pub norm_chain: Vec<Rational>,
    pub norm_chain_ok: bool,
    /// `det(I - B_K) = 1`, equivalently `det(I - sM) = 1`.
    pub det_one: bool,
    pub nilpotent: bool,
    pub sup_norm: Rational,
}

impl ClearedResult {
    pub fn traces_vanish(&self) -> bool {
        self.traces.iter().chain(&self.abs_traces).all(Rational::is_zero)
    }
}

/// Full pipeline: shrink, then clear.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilpotentCertificate {
    pub delta: Rational,
    pub shrink: ShrinkResult,
    pub cleared: ClearedResult,
}

/// `J = n(1 + 3K(K+1)/2)`.
pub fn companion_size(n: usize, k: usize) -> usize {
    n * (1 + 3 * k * (k + 1) / 2)
}

/// `(1/(4n²))·(4n³)^{-K}`: inputs below this survive `K` clearing steps.
pub fn shrink_target(n: usize, k: usize) -> Rational {
    let g = growth_factor(n).pow(-(k as i32));
    &step_norm_bound(n) * &g
}

/// Runs `K` clearing steps on `tN` and forms the companion `M`.
pub fn clear_traces(nm: &Matrix<Rational>, k_max: usize) -> Result<ClearedResult> {
    if k_max == 0 {
        return Err(Error::Domain("K must be positive".into()));
    }
    if !nm.is_square() || nm.rows() == 0 {
        return Err(Error::Shape("clear_traces needs a non-empty square matrix".into()));
    }
    if !nm.is_nilpotent() {
        return Err(Error::Precondition("matrix is not nilpotent".into()));
    }
    let n = nm.rows();
    let mut b = embed_as_pencil(nm)?;
    let base_norm = b.poly_norm()?;
    let mut norm_chain = vec![base_norm.clone()];
    let mut steps = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let report = clear_degree_step(&b, k)?;
        b = report.output.clone();
        norm_chain.push(report.output_norm.clone());
        steps.push(report);
    }
    let g = growth_factor(n);
    let norm_chain_ok = norm_chain.iter().enumerate().all(|(k, v)| v <= &(&g.pow(k as i32) * &base_norm));

    let d = 1 + 3 * k_max * (k_max + 1) / 2;
    let m = sharp_of(&b, d, n)?;
    let abs = m.entrywise_abs()?;
    let mut traces = Vec::with_capacity(k_max);
    let mut abs_traces = Vec::with_capacity(k_max);
    let (mut p, mut pa) = (m.clone(), abs.clone());
    for k in 1..=k_max {
        if k > 1 {
            p = p.mul(&m)?;
            pa = pa.mul(&abs)?;
        }
        traces.push(p.trace());
        abs_traces.push(pa.trace());
    }
    let det_one = b.det_identity_minus() == Poly::one();
    let nilpotent = m.is_nilpotent_fast();
    let result = ClearedResult {
        sup_norm: m.sup_norm()?,
        j: m.rows(),
        m,
        k: k_max,
        n,
        d,
        steps,
        b_k: b,
        traces,
        abs_traces,
        norm_chain,
        norm_chain_ok,
        det_one,
        nilpotent,
    };
    if result.j != companion_size(n, k_max) || !result.norm_chain_ok || !result.det_one || !result.nilpotent {
        return Err(Error::Invariant("cleared result fails its certificates".into()));
    }
    if !result.traces_vanish() {
        return Err(Error::Invariant("low-order traces of the companion do not vanish".into()));
    }
    Ok(result)
}

/// Shrinks `N` below the schedule `shrink_target(n, K)` and clears `K` traces.
pub fn certify_nilpotent(nm: &Matrix<Rational>, k_max: usize) -> Result<NilpotentCertificate> {
    if !nm.is_square() || nm.rows() == 0 {
        return Err(Error::Shape("certify_nilpotent needs a non-empty square matrix".into()));
    }
    if !nm.is_nilpotent() {
        return Err(Error::Precondition("matrix is not nilpotent".into()));
    }
    let delta = shrink_target(nm.rows(), k_max);
    let shrink = shrink_norm(nm, &delta)?;
    let cleared = clear_traces(&shrink.conjugated, k_max)?;
    Ok(NilpotentCertificate { delta, shrink, cleared })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(companion_size(2, 2), 20);
        assert_eq!(companion_size(2, 1), 8);
        assert_eq!(companion_size(3, 3), 57);
    }

    #[test]
    fn zero_input() {
        let r = clear_traces(&Matrix::zeros(1, 1), 3).unwrap();
        assert_eq!(r.j, 19);
        assert!(r.b_k.is_zero());
        assert!((0..19).all(|j| r.m[(0, j)].is_zero()));
        assert_eq!(r.m.entries().iter().filter(|e| e.is_one()).count(), 18);
        assert!(r.traces_vanish());
    }

    #[test]
    fn needs_shrinking() {
        let n = Matrix::from_fn(2, 2, |i, j| if i == 0 && j == 1 { Rational::new(1, 2) } else { Rational::zero() });
        match clear_traces(&n, 2) {
            Err(Error::NeedsShrinking { step: 1, norm, bound }) => {
                assert_eq!(*norm, Rational::new(1, 2));
                assert_eq!(*bound, Rational::new(1, 16));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn jordan_block_pipeline() {
        let r = certify_nilpotent(&Matrix::from_ints(&[&[0, 1], &[0, 0]]), 1).unwrap();
        assert_eq!(r.cleared.j, 8);
        assert_eq!(r.cleared.abs_traces, vec![Rational::zero()]);
        assert!(r.shrink.norm < r.delta);
    }

    #[test]
    fn rejects_non_nilpotent() {
        assert!(matches!(certify_nilpotent(&Matrix::from_ints(&[&[0, 1], &[1, 0]]), 1), Err(Error::Precondition(_))));
    }
}
