use serde::{Deserialize, Serialize};

use super::SpectrumDescriptor;
use crate::error::{Error, Result};
use crate::matrix::power_sums;
use crate::ring::{Poly, Rational, Ring};

/// Three-valued answer of a bracketing decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    True,
    False,
    /// Not separated at the requested tolerance; retry with a smaller one.
    Indeterminate,
}

impl Verdict {
    pub fn is_true(self) -> bool {
        self == Verdict::True
    }
}

/// Sturm sequence of a squarefree polynomial.
pub fn sturm_sequence(f: &Poly<Rational>) -> Vec<Poly<Rational>> {
    let mut seq = vec![f.clone()];
    if f.degree().unwrap_or(0) == 0 {
        return seq;
    }
    seq.push(f.derivative());
    loop {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]).expect("nonzero divisor");
        if r.is_zero() {
            break;
        }
        seq.push(r.negated());
    }
    seq
}

fn sign_changes(seq: &[Poly<Rational>], x: &Rational) -> usize {
    let mut last: Option<bool> = None;
    let mut changes = 0;
    for p in seq {
        let v = p.eval(x);
        if v.is_zero() {
            continue;
        }
        let pos = v.is_positive();
        if last.is_some_and(|l| l != pos) {
            changes += 1;
        }
        last = Some(pos);
    }
    changes
}

/// Distinct real roots in `(a, b]` of the polynomial heading `seq`.
pub fn sturm_count(seq: &[Poly<Rational>], a: &Rational, b: &Rational) -> usize {
    if a >= b {
        return 0;
    }
    sign_changes(seq, a).saturating_sub(sign_changes(seq, b))
}

/// `1 + max |c_i|` for a monic polynomial bounds every root modulus.
fn cauchy_bound(p: &Poly<Rational>) -> Rational {
    let k = p.degree().unwrap_or(0);
    let m = p.coeffs()[..k].iter().map(Rational::abs).max().unwrap_or_else(Rational::zero);
    &m + &Rational::one()
}

/// `∏_{i,j} (u - z_i z_j)` over all ordered pairs of roots of `p` (monic),
/// from the power sums `(Σ z_i^m)²` and Newton's identities.
pub fn pair_product_poly(p: &Poly<Rational>) -> Poly<Rational> {
    let k = p.degree().unwrap_or(0);
    let big = k * k;
    if big == 0 {
        return Poly::one();
    }
    let ps = power_sums(p, big).expect("monic");
    let sq: Vec<Rational> = ps.iter().map(|v| v.times(v)).collect();
    let mut e = vec![Rational::one()];
    for m in 1..=big {
        let mut acc = Rational::zero();
        for i in 1..=m {
            let term = e[m - i].times(&sq[i - 1]);
            if i % 2 == 1 {
                acc.add_assign_ref(&term);
            } else {
                acc = acc.minus(&term);
            }
        }
        e.push(&acc / &Rational::from_int(m as i64));
    }
    let mut coeffs = vec![Rational::zero(); big + 1];
    for (m, em) in e.into_iter().enumerate() {
        coeffs[big - m] = if m % 2 == 1 { em.negated() } else { em };
    }
    Poly::new(coeffs)
}

/// Does `Δ` have an entry `ρ > 0` with `ρ > |d|` for every other entry `d`?
///
/// Real roots are isolated with Sturm sequences. Complex moduli are handled
/// exactly through the polynomial whose roots are all pairwise products
/// `z_i z_j`: `|z|² = z·z̄` is one of them, so `ρ` dominates iff `ρ²` is a
/// simple root of that polynomial and nothing larger is.
pub fn has_perron_value(delta: &SpectrumDescriptor, tol: &Rational) -> Result<Verdict> {
    if !tol.is_positive() {
        return Err(Error::InvalidTolerance(Box::new(tol.clone())));
    }
    let p = delta.poly();
    if delta.is_empty() {
        return Ok(Verdict::False);
    }
    let s = p.squarefree();
    let seq_s = sturm_sequence(&s);
    let bound = cauchy_bound(p);
    let zero = Rational::zero();
    if sturm_count(&seq_s, &zero, &bound) == 0 {
        return Ok(Verdict::False);
    }
    let half = Rational::new(1, 2);
    let (mut lo, mut hi) = (zero, bound);
    while sturm_count(&seq_s, &lo, &hi) > 1 {
        let mid = &(&lo + &hi) * &half;
        if sturm_count(&seq_s, &mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let g = p.gcd(&p.derivative());
    if g.degree().unwrap_or(0) > 0 && sturm_count(&sturm_sequence(&g.squarefree()), &lo, &hi) > 0 {
        return Ok(Verdict::False);
    }

    let r = pair_product_poly(p);
    let seq_r = sturm_sequence(&r.squarefree());
    let r_bound = cauchy_bound(&r);
    let gr = r.gcd(&r.derivative());
    let seq_gr = (gr.degree().unwrap_or(0) > 0).then(|| sturm_sequence(&gr.squarefree()));
    loop {
        let (lo2, hi2) = (&lo * &lo, &hi * &hi);
        if sturm_count(&seq_r, &hi2, &r_bound) > 0 {
            return Ok(Verdict::False);
        }
        if sturm_count(&seq_r, &lo2, &hi2) == 1 {
            let multiple = seq_gr.as_ref().is_some_and(|sq| sturm_count(sq, &lo2, &hi2) > 0);
            return Ok(if multiple { Verdict::False } else { Verdict::True });
        }
        if &(&hi - &lo) <= tol {
            return Ok(Verdict::Indeterminate);
        }
        let mid = &(&lo + &hi) * &half;
        if sturm_count(&seq_s, &mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}
