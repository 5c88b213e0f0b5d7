//! Randomized property suites shared by the acceptance tests, the CLI
//! `selftest` command and the execution-mode benchmark.

use serde::{Deserialize, Serialize};

use crate::clearing::{certify_nilpotent, clear_traces, companion_size, growth_factor, shrink_norm, shrink_target};
use crate::exec::Exec;
use crate::gen::Gen;
use crate::matrix::Matrix;
use crate::ring::{Poly, Rational, Ring};
use crate::sharp::{apply_oplog, badring_fixture};
use crate::spectral::{
    count_least_period_points_with, is_primitive, net_trace, primitive_assembly, SpectrumDescriptor,
};
use crate::sse::{nonzero_spectrum_poly, reduce_nonneg_nilpotent, sse_to_se, verify_se, verify_sse_chain};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub passed: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.cases > 0 && self.passed == self.cases
    }
}

type Case = std::result::Result<(), String>;

fn run<F>(name: &str, seed: u64, cases: usize, exec: Exec, f: F) -> SuiteReport
where
    F: Fn(&mut Gen, usize) -> Case + Sync + Send,
{
    let results = exec.map_range(cases, |i| f(&mut Gen::for_case(seed, i), i));
    let failures: Vec<String> =
        results.into_iter().enumerate().filter_map(|(i, r)| r.err().map(|e| format!("case {i}: {e}"))).collect();
    SuiteReport { name: name.into(), cases, passed: cases - failures.len(), failures }
}

fn ensure(cond: bool, what: &str) -> Case {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

/// The ℚ[t²,t³,z,z⁻¹] fixture checks, one case per check.
pub fn fixture_suite() -> SuiteReport {
    let checks = badring_fixture().checks();
    let failures: Vec<String> =
        checks.iter().filter(|c| !c.pass).map(|c| format!("{}: {}", c.name, c.detail)).collect();
    SuiteReport { name: "fixture".into(), cases: checks.len(), passed: checks.len() - failures.len(), failures }
}

/// Clearing steps on shrunk random nilpotent inputs, each bound rechecked
/// from the raw matrices.
pub fn clearing_suite(seed: u64, cases: usize, exec: Exec) -> SuiteReport {
    run("clearing-bounds", seed, cases, exec, |g, _| {
        let n = g.usize_in(1, 4);
        let k_max = 2;
        let nm = g.nilpotent(n);
        let shrunk = shrink_norm(&nm, &shrink_target(n, k_max)).map_err(|e| e.to_string())?;
        let res = clear_traces(&shrunk.conjugated, k_max).map_err(|e| e.to_string())?;
        for s in &res.steps {
            let (a, b, k) = (&s.input, &s.output, s.k);
            ensure(b.degree() <= a.degree() + 3 * k, "degree bound")?;
            let an = a.poly_norm().map_err(|e| e.to_string())?;
            let bn = b.poly_norm().map_err(|e| e.to_string())?;
            ensure(bn <= &growth_factor(n) * &an, "norm bound")?;
            ensure(b.vanishes_below(k + 1), "output not over t^{k+1}")?;
            ensure(a.det_identity_minus() == b.det_identity_minus(), "det(I - A) != det(I - B)")?;
            let (replayed, same) = apply_oplog(&s.log).map_err(|e| e.to_string())?;
            ensure(same && &replayed == b, "log replay")?;
        }
        Ok(())
    })
}

/// `certify_nilpotent` over `n ∈ {1,2,3}`, `K ∈ {1,2,3}`.
pub fn certify_suite(seed: u64, exec: Exec) -> SuiteReport {
    run("certify-nilpotent", seed, 9, exec, |g, i| {
        let (n, k_max) = (i / 3 + 1, i % 3 + 1);
        let nm = g.nilpotent(n);
        let r = certify_nilpotent(&nm, k_max).map_err(|e| e.to_string())?;
        let m = &r.cleared.m;
        ensure(m.rows() == companion_size(n, k_max), "J")?;
        let abs = m.entrywise_abs().map_err(|e| e.to_string())?;
        let (mut p, mut pa) = (m.clone(), abs.clone());
        for k in 1..=k_max {
            if k > 1 {
                p = p.mul(m).map_err(|e| e.to_string())?;
                pa = pa.mul(&abs).map_err(|e| e.to_string())?;
            }
            ensure(p.trace().is_zero(), "tr(M^k) != 0")?;
            ensure(pa.trace().is_zero(), "tr(|M|^k) != 0")?;
        }
        ensure(r.cleared.b_k.det_identity_minus() == Poly::one(), "det(I - B_K) != 1")
    })
}

/// Net traces of random nonnegative integer matrices against brute-force
/// least-period point counts.
pub fn orbit_suite(seed: u64, cases: usize, max_period: usize, exec: Exec) -> SuiteReport {
    run("net-trace-orbits", seed, cases, exec, |g, _| {
        let n = g.usize_in(1, 4);
        let a = g.int_matrix(n, n, 0, 2);
        let delta = SpectrumDescriptor::of_matrix(&a).map_err(|e| e.to_string())?;
        for p in 1..=max_period {
            let net = net_trace(&delta, p).map_err(|e| e.to_string())?;
            let count = count_least_period_points_with(&a, p, Exec::Sequential).map_err(|e| e.to_string())?;
            ensure(net == Rational::from_int(count as i64), &format!("period {p}: {net} vs {count}"))?;
        }
        Ok(())
    })
}

/// Block assembly from random positive `C` and dominated `M₀`.
pub fn assembly_suite(seed: u64, cases: usize, exec: Exec) -> SuiteReport {
    run("primitive-assembly", seed, cases, exec, |g, _| {
        let n = g.usize_in(1, 3);
        let c = g.positive(n);
        let m0 = g.dominated(&c);
        let eps = g.rational_between(&Rational::new(1, 3), &Rational::new(2, 3));
        let a = primitive_assembly(&c, &m0, &eps).map_err(|e| e.to_string())?;
        ensure(a.identities_ok && a.conjugators_ok, "identities")?;
        ensure(a.g.is_nonnegative(), "G not nonnegative")?;
        let cert = is_primitive(&a.g).map_err(|e| e.to_string())?;
        ensure(cert.primitive, "G not primitive")?;
        let k = cert.witness_power.ok_or("no witness power")?;
        ensure(a.g.pow(k as u32).map_err(|e| e.to_string())?.is_positive(), "witness power not positive")
    })
}

/// Chains of similarity and extension moves turned into shift equivalences.
pub fn williams_suite(seed: u64, cases: usize, exec: Exec) -> SuiteReport {
    run("williams", seed, cases, exec, |g, _| {
        let lag = g.usize_in(1, 4);
        let chain = g.chain(lag);
        ensure(verify_sse_chain(&chain), "chain does not verify")?;
        let se = sse_to_se(&chain).map_err(|e| e.to_string())?;
        ensure(se.lag as usize == lag, "lag")?;
        let ok = verify_se(chain.source(), chain.target(), &se).map_err(|e| e.to_string())?;
        ensure(ok, "SE equations")?;
        ensure(nonzero_spectrum_poly(chain.source()) == nonzero_spectrum_poly(chain.target()), "nonzero spectra differ")
    })
}

/// Nonnegative nilpotent matrices reduced to `[0]`.
pub fn nilpotent_reduction_suite(seed: u64, cases: usize, exec: Exec) -> SuiteReport {
    run("nilpotent-reduction", seed, cases, exec, |g, _| {
        let n = g.usize_in(1, 5);
        let nm = g.nonneg_nilpotent(n);
        let chain = reduce_nonneg_nilpotent(&nm).map_err(|e| e.to_string())?;
        ensure(chain.source() == &nm, "source")?;
        ensure(verify_sse_chain(&chain), "chain does not verify")?;
        ensure(chain.target() == &Matrix::zeros(1, 1), "target is not [0]")
    })
}
