use serde::{Deserialize, Serialize};

use super::{growth_factor, step_norm_bound};
use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::ring::{Poly, Rational, Ring};
use crate::sharp::{apply_oplog, det_certificate, ElOp, ElOpLog, WorkMatrix};

/// Inequality between the norms of two intermediate matrices of a step.
/// These are reported, not enforced; the final bounds are enforced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntermediateBound {
    pub name: String,
    pub value: Rational,
    pub bound: Rational,
    pub ok: bool,
}

/// One clearing step `A ↦ B` with its certificate and checked bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClearingStepReport {
    pub k: usize,
    pub n: usize,
    pub input: PolyMatrix<Rational>,
    pub output: PolyMatrix<Rational>,
    pub log: ElOpLog<Rational>,
    pub input_degree: usize,
    pub output_degree: usize,
    pub degree_bound: usize,
    pub degree_bound_ok: bool,
    pub input_norm: Rational,
    pub output_norm: Rational,
    pub norm_bound: Rational,
    pub norm_bound_ok: bool,
    pub vanishing_ok: bool,
    pub replay_ok: bool,
    pub det_certificate: bool,
    pub intermediate: Vec<IntermediateBound>,
}

impl ClearingStepReport {
    pub fn all_ok(&self) -> bool {
        self.degree_bound_ok && self.norm_bound_ok && self.vanishing_ok && self.replay_ok && self.det_certificate
    }
}

struct Recorder {
    w: WorkMatrix<Rational>,
    ops: Vec<ElOp<Rational>>,
}

impl Recorder {
    fn push(&mut self, op: ElOp<Rational>) -> Result<()> {
        if let ElOp::RowAdd { p, .. } | ElOp::ColAdd { p, .. } = &op {
            if p.is_zero() {
                return Ok(());
            }
        }
        op.apply(&mut self.w, self.ops.len())?;
        self.ops.push(op);
        Ok(())
    }

    /// Coefficient of `t^k` in entry `(i, j)` of the current `A`.
    fn a_coeff(&self, i: usize, j: usize, k: usize) -> Rational {
        self.w[(i, j)].coeff(k).negated()
    }

    fn norm(&self) -> Result<Rational> {
        PolyMatrix::from_identity_minus(&self.w)?.poly_norm()
    }
}

fn tk(c: Rational, k: usize) -> Poly<Rational> {
    Poly::monomial(c, k)
}

/// Turns `A` over `t^k ℚ[t]` with traceless `t^k` part into `B` over
/// `t^{k+1} ℚ[t]` with `I - A ~ I - B`, recording every operation.
pub fn clear_degree_step(a: &PolyMatrix<Rational>, k: usize) -> Result<ClearingStepReport> {
    if k == 0 {
        return Err(Error::Domain("clearing degree must be positive".into()));
    }
    let n = a.size();
    if n == 0 {
        return Err(Error::Shape("empty matrix".into()));
    }
    if !a.vanishes_below(k) {
        return Err(Error::Precondition(format!("coefficients below degree {k} must vanish")));
    }
    let trace_k = a.coeff(k).trace();
    if !trace_k.is_zero() {
        return Err(Error::TracePrecondition { k, sum: Box::new(trace_k) });
    }
    let input_norm = a.poly_norm()?;
    let admissible = step_norm_bound(n);
    if input_norm > admissible {
        return Err(Error::NeedsShrinking { step: k, norm: Box::new(input_norm), bound: Box::new(admissible) });
    }

    let mut rec = Recorder { w: a.identity_minus(), ops: Vec::new() };
    let mut intermediate = Vec::new();
    let mut note = |name: &str, value: Rational, bound: Rational| {
        let ok = value <= bound;
        if !ok {
            log::warn!("clearing step {k}: intermediate bound {name} fails ({value} > {bound})");
        }
        intermediate.push(IntermediateBound { name: name.into(), value, bound, ok });
    };
    let nr = Rational::from_int(n as i64);
    let two = Rational::from_int(2);

    if !a.is_zero() {
        let diag: Vec<Rational> = (0..n).map(|i| a.coeff(k)[(i, i)].clone()).collect();
        let border = n;

        rec.push(ElOp::Stabilize)?;
        for (i, d) in diag.iter().enumerate() {
            rec.push(ElOp::RowAdd { i, j: border, p: tk(d.clone(), k) })?;
        }
        for j in 0..n {
            rec.push(ElOp::ColAdd { i: j, j: border, p: Poly::one() })?;
        }
        let a2 = rec.norm()?;
        note("|A2| <= 2|A|", a2.clone(), &two * &input_norm);

        for i in 0..n {
            rec.push(ElOp::RowAdd { i: border, j: i, p: Poly::constant(Rational::from_int(-1)) })?;
        }
        let a3 = rec.norm()?;
        note("|A3| <= n|A2|", a3.clone(), &nr * &a2);

        for (i, d) in diag.iter().enumerate() {
            rec.push(ElOp::RowAdd { i, j: border, p: tk(d.negated(), k) })?;
        }
        for j in 0..n {
            let x = rec.w[(border, j)].clone();
            rec.push(ElOp::ColAdd { i: j, j: border, p: x.negated() })?;
        }
        rec.push(ElOp::Destabilize)?;
        let a5 = rec.norm()?;
        note("|A5| <= 2|A3|", a5.clone(), &two * &a3);

        for i in 0..n.saturating_sub(1) {
            for j in i + 1..n {
                let b = rec.a_coeff(i, j, k);
                rec.push(ElOp::RowAdd { i, j, p: tk(b, k) })?;
            }
        }
        let a6 = rec.norm()?;
        note("|A6| <= n|A5|", a6.clone(), &nr * &a5);

        for i in 0..n.saturating_sub(1) {
            for j in i + 1..n {
                let c = rec.a_coeff(j, i, k);
                rec.push(ElOp::ColAdd { i, j, p: tk(c, k) })?;
            }
        }
        let b = rec.norm()?;
        note("|B| <= n|A6|", b, &nr * &a6);
    }

    let output = PolyMatrix::from_identity_minus(&rec.w)?;
    let log = ElOpLog { initial: a.clone(), ops: rec.ops, final_: output.clone() };
    let (_, replay_ok) = apply_oplog(&log)?;
    let det_ok = det_certificate(&log);

    let output_norm = output.poly_norm()?;
    let norm_bound = &growth_factor(n) * &input_norm;
    let input_degree = a.degree();
    let degree_bound = input_degree + 3 * k;
    let report = ClearingStepReport {
        k,
        n,
        input: a.clone(),
        output_degree: output.degree(),
        degree_bound_ok: output.degree() <= degree_bound,
        vanishing_ok: output.vanishes_below(k + 1),
        norm_bound_ok: output_norm <= norm_bound,
        output,
        log,
        input_degree,
        degree_bound,
        input_norm,
        output_norm,
        norm_bound,
        replay_ok,
        det_certificate: det_ok,
        intermediate,
    };
    if !report.all_ok() {
        return Err(Error::Invariant(format!(
            "clearing step {k}: degree {} , norm {}, vanishing {}, replay {}, det {}",
            report.degree_bound_ok, report.norm_bound_ok, report.vanishing_ok, report.replay_ok, report.det_certificate
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn small_upper_triangular() {
        let a =
            PolyMatrix::monomial(Matrix::from_rows(vec![vec![q(0, 1), q(1, 100)], vec![q(0, 1), q(0, 1)]]).unwrap(), 1)
                .unwrap();
        let r = clear_degree_step(&a, 1).unwrap();
        assert!(r.output.vanishes_below(2));
        assert!(r.output_degree <= 4);
        assert!(r.output_norm <= q(32, 100));
        assert_eq!(r.output.det_identity_minus(), Poly::one());
        assert!(r.intermediate.iter().all(|b| b.ok));
    }

    #[test]
    fn zero_input() {
        let r = clear_degree_step(&PolyMatrix::zero(2), 1).unwrap();
        assert!(r.output.is_zero());
        assert!(r.log.ops.is_empty());
    }

    #[test]
    fn traced_input_rejected() {
        let a = PolyMatrix::monomial(Matrix::from_rows(vec![vec![q(1, 100)]]).unwrap(), 1).unwrap();
        assert_eq!(clear_degree_step(&a, 1), Err(Error::TracePrecondition { k: 1, sum: Box::new(q(1, 100)) }));
    }

    #[test]
    fn large_input_rejected() {
        let a =
            PolyMatrix::monomial(Matrix::from_rows(vec![vec![q(0, 1), q(1, 2)], vec![q(0, 1), q(0, 1)]]).unwrap(), 1)
                .unwrap();
        assert!(matches!(clear_degree_step(&a, 1), Err(Error::NeedsShrinking { step: 1, .. })));
    }

    #[test]
    fn low_degree_rejected() {
        let a =
            PolyMatrix::monomial(Matrix::from_rows(vec![vec![q(0, 1), q(1, 100)], vec![q(0, 1), q(0, 1)]]).unwrap(), 1)
                .unwrap();
        assert!(matches!(clear_degree_step(&a, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn traceless_diagonal_cleared() {
        let m = Matrix::from_rows(vec![
            vec![q(1, 100), q(1, 200), q(0, 1)],
            vec![q(-1, 300), q(-1, 100), q(1, 100)],
            vec![q(1, 50), q(0, 1), q(0, 1)],
        ])
        .unwrap();
        let a = PolyMatrix::new(3, vec![Matrix::zeros(3, 3), m.clone(), m.scale(&q(1, 3))]).unwrap();
        let r = clear_degree_step(&a, 1).unwrap();
        assert!(r.all_ok());
        assert_eq!(r.input.det_identity_minus(), r.output.det_identity_minus());
    }
}
