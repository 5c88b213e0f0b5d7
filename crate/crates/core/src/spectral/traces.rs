use serde::{Deserialize, Serialize};

use super::{has_perron_value, SpectrumDescriptor, Verdict};
use crate::error::{Error, Result};
use crate::ring::{Rational, Ring};

/// Default range for the dense-ring implication `tr(Δⁿ) > 0 ⇒ tr(Δⁿᵏ) > 0`.
pub const DEFAULT_K_MAX: usize = 12;

/// Möbius function by trial division.
pub fn moebius(n: u64) -> Result<i8> {
    if n == 0 {
        return Err(Error::Domain("Möbius function needs n >= 1".into()));
    }
    let mut m = n;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return Ok(0);
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    Ok(sign)
}

fn mobius_sum(power: &[Rational], n: usize) -> Rational {
    let mut acc = Rational::zero();
    for d in (1..=n).filter(|&d| n.is_multiple_of(d)) {
        match moebius((n / d) as u64).expect("positive") {
            1 => acc.add_assign_ref(&power[d - 1]),
            -1 => acc = acc.minus(&power[d - 1]),
            _ => {}
        }
    }
    acc
}

/// `tr_n(Δ) = Σ_{d|n} μ(n/d) tr(Δ^d)`.
pub fn net_trace(delta: &SpectrumDescriptor, n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Domain("net trace needs n >= 1".into()));
    }
    Ok(mobius_sum(&delta.power_traces(n), n))
}

/// `tr_1(Δ) .. tr_{n_max}(Δ)`.
pub fn net_traces(delta: &SpectrumDescriptor, n_max: usize) -> Vec<Rational> {
    let power = delta.power_traces(n_max);
    (1..=n_max).map(|n| mobius_sum(&power, n)).collect()
}

/// Which form of the trace condition applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// `R = ℤ`: every net trace is nonnegative.
    #[serde(rename = "integer-ring")]
    Integer,
    /// Dense `R`: `tr(Δⁿ) ≥ 0`, and `tr(Δⁿ) > 0 ⇒ tr(Δⁿᵏ) > 0`.
    #[serde(rename = "dense-ring")]
    Dense,
}

/// Outcome of the three nonzero-spectrum conditions over a finite range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub mode: Mode,
    pub perron: Verdict,
    pub perron_ok: bool,
    pub coeffs_in_ring_ok: bool,
    pub trace_conditions_ok: bool,
    pub power_traces: Vec<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub net_traces: Option<Vec<Rational>>,
    pub n_max: usize,
    pub k_max: usize,
    /// Always true: the trace conditions quantify over all `n` and are
    /// checked only up to `n_max` (and `k_max`).
    pub range_limited: bool,
    pub failures: Vec<String>,
}

impl SpectralReport {
    pub fn all_ok(&self) -> bool {
        self.perron_ok && self.coeffs_in_ring_ok && self.trace_conditions_ok
    }
}

pub fn check_spectral_conditions(
    delta: &SpectrumDescriptor,
    mode: Mode,
    n_max: usize,
    k_max: usize,
    tol: &Rational,
) -> Result<SpectralReport> {
    if n_max == 0 || k_max == 0 {
        return Err(Error::Domain("n_max and k_max must be positive".into()));
    }
    let mut failures = Vec::new();
    let perron = has_perron_value(delta, tol)?;
    match perron {
        Verdict::True => {}
        Verdict::False => failures.push("no Perron value".to_string()),
        Verdict::Indeterminate => failures.push(format!("Perron value not separated at tolerance {tol}")),
    }

    let coeffs_in_ring_ok = match mode {
        Mode::Integer => delta.coeffs().iter().all(Rational::is_integer),
        Mode::Dense => true,
    };
    if !coeffs_in_ring_ok {
        failures.push("coefficients are not integers".into());
    }

    let (power_traces, net, trace_ok) = match mode {
        Mode::Integer => {
            let power = delta.power_traces(n_max);
            let net: Vec<Rational> = (1..=n_max).map(|n| mobius_sum(&power, n)).collect();
            for (i, v) in net.iter().enumerate() {
                if v.is_negative() {
                    failures.push(format!("tr_{}(Δ) = {v} < 0", i + 1));
                }
            }
            let ok = net.iter().all(|v| !v.is_negative());
            (power, Some(net), ok)
        }
        Mode::Dense => {
            let all = delta.power_traces(n_max * k_max);
            let mut ok = true;
            for n in 1..=n_max {
                let p = &all[n - 1];
                if p.is_negative() {
                    ok = false;
                    failures.push(format!("tr(Δ^{n}) = {p} < 0"));
                }
                if p.is_positive() {
                    if let Some(k) = (1..=k_max).find(|k| !all[n * k - 1].is_positive()) {
                        ok = false;
                        failures.push(format!("tr(Δ^{n}) > 0 but tr(Δ^{}) <= 0", n * k));
                    }
                }
            }
            (all[..n_max].to_vec(), None, ok)
        }
    };

    Ok(SpectralReport {
        mode,
        perron_ok: perron.is_true(),
        perron,
        coeffs_in_ring_ok,
        trace_conditions_ok: trace_ok,
        power_traces,
        net_traces: net,
        n_max,
        k_max,
        range_limited: true,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn roots(r: &[i64]) -> SpectrumDescriptor {
        SpectrumDescriptor::from_roots(&r.iter().map(|&v| q(v)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn moebius_values() {
        let want = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (n, w) in (1..=12).zip(want) {
            assert_eq!(moebius(n).unwrap(), w, "mu({n})");
        }
        assert!(moebius(0).is_err());
        assert_eq!(moebius(30).unwrap(), -1);
        assert_eq!(moebius(49).unwrap(), 0);
    }

    #[test]
    fn net_trace_examples() {
        assert_eq!(net_traces(&roots(&[2]), 3), vec![q(2), q(2), q(6)]);
        assert_eq!(net_traces(&roots(&[1]), 6), vec![q(1), q(0), q(0), q(0), q(0), q(0)]);
        assert_eq!(net_traces(&roots(&[2, -1]), 3), vec![q(1), q(4), q(6)]);
        assert_eq!(net_trace(&roots(&[2, -1]), 3).unwrap(), q(6));
        assert!(net_trace(&roots(&[2]), 0).is_err());
    }

    #[test]
    fn report_examples() {
        let tol = Rational::new(1, 1000);
        let r = check_spectral_conditions(&roots(&[2, -1]), Mode::Integer, 12, DEFAULT_K_MAX, &tol).unwrap();
        assert!(r.all_ok(), "{:?}", r.failures);
        assert!(r.range_limited);
        assert_eq!(r.net_traces.as_ref().unwrap().len(), 12);

        let r = check_spectral_conditions(&roots(&[1, 1]), Mode::Integer, 6, 2, &tol).unwrap();
        assert!(!r.perron_ok);
        let r = check_spectral_conditions(&roots(&[-2, 1]), Mode::Dense, 6, 4, &tol).unwrap();
        assert!(!r.perron_ok);
        assert!(!r.trace_conditions_ok);
    }

    #[test]
    fn integer_mode_needs_integer_coefficients() {
        let d = SpectrumDescriptor::from_roots(&[Rational::new(3, 2)]).unwrap();
        let tol = Rational::new(1, 1000);
        let r = check_spectral_conditions(&d, Mode::Integer, 4, 2, &tol).unwrap();
        assert!(!r.coeffs_in_ring_ok);
        let r = check_spectral_conditions(&d, Mode::Dense, 4, 2, &tol).unwrap();
        assert!(r.all_ok());
    }

    #[test]
    fn dense_implication_failure() {
        // (t - 1)(t² - t + 2/3): tr Δ = 2, tr Δ² = 2/3, tr Δ³ = 0
        let quad = crate::ring::Poly::new(vec![Rational::new(2, 3), q(-1), q(1)]);
        let poly = quad.times(&crate::ring::Poly::new(vec![q(-1), q(1)]));
        let d = SpectrumDescriptor::from_poly(poly).unwrap();
        assert_eq!(d.power_traces(3), vec![q(2), Rational::new(2, 3), q(0)]);
        let tol = Rational::new(1, 100);
        let r = check_spectral_conditions(&d, Mode::Dense, 2, 3, &tol).unwrap();
        assert!(!r.trace_conditions_ok);
        assert!(r.failures.iter().any(|f| f.contains("tr(Δ^3)")));
        let r = check_spectral_conditions(&d, Mode::Dense, 2, 2, &tol).unwrap();
        assert!(r.trace_conditions_ok);
    }
}
