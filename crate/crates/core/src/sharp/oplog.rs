use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, PolyMatrix};
use crate::ring::{Poly, Ring};

/// Finite corner of `I - A_∞`, entries in `R[t]`.
pub type WorkMatrix<R> = Matrix<Poly<R>>;

/// Basic elementary operation on `I - A` over `R[t]`, or a change of the
/// finite corner size. Indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[serde(bound(serialize = "R: Serialize", deserialize = "R: DeserializeOwned"))]
pub enum ElOp<R: Ring> {
    /// Row `i` += `p` · row `j`.
    RowAdd { i: usize, j: usize, p: Poly<R> },
    /// Column `i` += `p` · column `j`.
    ColAdd { i: usize, j: usize, p: Poly<R> },
    /// Grow the corner by one row and column with a diagonal 1.
    Stabilize,
    /// Drop a final row and column that equal the identity's.
    Destabilize,
}

/// Replayable certificate that `I - initial` and `I - final` are
/// `El(R[t])`-equivalent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "R: Serialize", deserialize = "R: DeserializeOwned"))]
pub struct ElOpLog<R: Ring> {
    pub initial: PolyMatrix<R>,
    pub ops: Vec<ElOp<R>>,
    #[serde(rename = "final")]
    pub final_: PolyMatrix<R>,
}

impl<R: Ring> ElOp<R> {
    /// Applies the operation in place.
    pub fn apply(&self, w: &mut WorkMatrix<R>, index: usize) -> Result<()> {
        let n = w.rows();
        let invalid = |reason: String| Error::InvalidOp { index, reason };
        match self {
            ElOp::RowAdd { i, j, p } | ElOp::ColAdd { i, j, p } => {
                let (i, j) = (*i, *j);
                if i == j {
                    return Err(invalid(format!("source and target coincide ({i})")));
                }
                if i >= n || j >= n {
                    return Err(invalid(format!("index out of range for size {n}")));
                }
                if p.is_zero() {
                    return Ok(());
                }
                if matches!(self, ElOp::RowAdd { .. }) {
                    for c in 0..n {
                        if !w[(j, c)].is_zero() {
                            let d = p.times(&w[(j, c)]);
                            w[(i, c)].add_assign_ref(&d);
                        }
                    }
                } else {
                    for r in 0..n {
                        if !w[(r, j)].is_zero() {
                            let d = w[(r, j)].times(p);
                            w[(r, i)].add_assign_ref(&d);
                        }
                    }
                }
            }
            ElOp::Stabilize => {
                let mut grown = Matrix::zeros(n + 1, n + 1);
                for r in 0..n {
                    for c in 0..n {
                        grown[(r, c)] = w[(r, c)].clone();
                    }
                }
                grown[(n, n)] = Poly::one();
                *w = grown;
            }
            ElOp::Destabilize => {
                if n < 2 {
                    return Err(invalid("cannot destabilize below size 1".into()));
                }
                let last = n - 1;
                let border_ok =
                    (0..last).all(|k| w[(last, k)].is_zero() && w[(k, last)].is_zero()) && w[(last, last)].is_one();
                if !border_ok {
                    return Err(invalid("final row/column is not an identity border".into()));
                }
                *w = w.drop_last()?;
            }
        }
        Ok(())
    }
}

impl<R: Ring> ElOpLog<R> {
    /// Empty log starting (and ending) at `initial`.
    pub fn start(initial: PolyMatrix<R>) -> Self {
        ElOpLog { final_: initial.clone(), initial, ops: Vec::new() }
    }
}

/// Replays the log on `I - initial`; returns the resulting `B` with
/// `I - B` the final corner, and whether it equals `log.final_`.
pub fn apply_oplog<R: Ring>(log: &ElOpLog<R>) -> Result<(PolyMatrix<R>, bool)> {
    let mut w = log.initial.identity_minus();
    for (index, op) in log.ops.iter().enumerate() {
        op.apply(&mut w, index)?;
    }
    let b = PolyMatrix::from_identity_minus(&w)?;
    let ok = b == log.final_;
    Ok((b, ok))
}

/// `det(I - initial) == det(I - final)`: every basic elementary matrix and
/// every stabilization has determinant one.
pub fn det_certificate<R: Ring>(log: &ElOpLog<R>) -> bool {
    log.initial.det_identity_minus() == log.final_.det_identity_minus()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn sample() -> PolyMatrix<Rational> {
        PolyMatrix::monomial(Matrix::from_rows(vec![vec![q(0, 1), q(1, 3)], vec![q(1, 2), q(0, 1)]]).unwrap(), 1)
            .unwrap()
    }

    #[test]
    fn empty_log_replays() {
        let log = ElOpLog::start(sample());
        let (b, ok) = apply_oplog(&log).unwrap();
        assert!(ok);
        assert_eq!(b, sample());
        assert!(det_certificate(&log));
    }

    #[test]
    fn replay_and_tamper() {
        let t = Poly::monomial(q(2, 1), 1);
        let mut log = ElOpLog::start(sample());
        log.ops = vec![
            ElOp::Stabilize,
            ElOp::RowAdd { i: 0, j: 2, p: t.clone() },
            ElOp::ColAdd { i: 2, j: 1, p: t.clone() },
            ElOp::ColAdd { i: 2, j: 1, p: t.negated() },
            ElOp::RowAdd { i: 0, j: 2, p: t.negated() },
            ElOp::Destabilize,
            ElOp::RowAdd { i: 1, j: 0, p: Poly::constant(q(5, 1)) },
        ];
        let (b, _) = apply_oplog(&log).unwrap();
        log.final_ = b;
        let (_, ok) = apply_oplog(&log).unwrap();
        assert!(ok);
        assert!(det_certificate(&log));

        let mut tampered = log.clone();
        tampered.final_ = tampered.final_.add(&sample()).unwrap();
        assert!(!apply_oplog(&tampered).unwrap().1);
        assert!(!det_certificate(&tampered));
    }

    #[test]
    fn invalid_ops() {
        let mut log = ElOpLog::start(sample());
        log.ops = vec![ElOp::RowAdd { i: 0, j: 5, p: Poly::one() }];
        assert!(matches!(apply_oplog(&log), Err(Error::InvalidOp { index: 0, .. })));
        log.ops = vec![ElOp::Destabilize];
        assert!(matches!(apply_oplog(&log), Err(Error::InvalidOp { .. })));
        log.ops = vec![ElOp::Stabilize, ElOp::RowAdd { i: 2, j: 0, p: Poly::one() }, ElOp::Destabilize];
        assert!(matches!(apply_oplog(&log), Err(Error::InvalidOp { index: 2, .. })));
        log.ops = vec![ElOp::ColAdd { i: 1, j: 1, p: Poly::one() }];
        assert!(apply_oplog(&log).is_err());
    }

    #[test]
    fn json_encoding() {
        let op: ElOp<Rational> = ElOp::RowAdd { i: 0, j: 1, p: Poly::new(vec![q(0, 1), q(-1, 2)]) };
        let js = serde_json::to_string(&op).unwrap();
        assert_eq!(js, r#"{"kind":"row_add","i":0,"j":1,"p":["0/1","-1/2"]}"#);
        assert_eq!(serde_json::to_string(&ElOp::<Rational>::Stabilize).unwrap(), r#"{"kind":"stabilize"}"#);
        let log = ElOpLog::start(sample());
        let back: ElOpLog<Rational> = serde_json::from_str(&serde_json::to_string(&log).unwrap()).unwrap();
        assert_eq!(back, log);
    }
}
