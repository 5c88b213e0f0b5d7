mod common;

use common::{has_short_cycle, leibniz_det, naive_mul};
use proptest::prelude::*;
use sseq_core::clearing::{clear_degree_step, clear_traces, shrink_norm, shrink_target};
use sseq_core::gen::Gen;
use sseq_core::matrix::{Matrix, PolyMatrix};
use sseq_core::ring::{Poly, Rational, Ring};
use sseq_core::spectral::{
    check_spectral_conditions, has_perron_value, is_primitive, Mode, SpectrumDescriptor, Verdict,
};
use sseq_core::suite;
use sseq_core::Exec;

fn small_tol() -> Rational {
    Rational::new(1, 1 << 20)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn determinants_match_permutation_expansion(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let n = g.usize_in(1, 5);
        let m = g.rational_matrix(n, n, 6, 4);
        let want = leibniz_det(&m);
        prop_assert_eq!(m.det(), want.clone());
        prop_assert_eq!(m.det_bareiss(), want);
    }

    #[test]
    fn primitivity_matches_wielandt_powers(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let n = g.usize_in(1, 5);
        let a = g.int_matrix(n, n, 0, 1);
        let cert = is_primitive(&a).unwrap();
        let mut p = a.clone();
        let mut found = None;
        for k in 1..=(n - 1) * (n - 1) + 1 {
            if p.is_positive() {
                found = Some(k);
                break;
            }
            p = naive_mul(&p, &a);
        }
        prop_assert_eq!(cert.primitive, found.is_some());
        prop_assert_eq!(cert.witness_power, found);
    }

    #[test]
    fn perron_matches_rational_roots(roots in prop::collection::vec((-6i64..=6, 1i64..=3), 1..5)) {
        let rs: Vec<Rational> = roots.iter().filter(|(a, _)| *a != 0).map(|&(a, b)| Rational::new(a, b)).collect();
        prop_assume!(!rs.is_empty());
        let d = SpectrumDescriptor::from_roots(&rs).unwrap();
        let top = rs.iter().max().unwrap();
        let dominant = top.is_positive()
            && rs.iter().filter(|r| *r == top).count() == 1
            && rs.iter().filter(|r| *r != top).all(|r| &r.abs() < top);
        let want = if dominant { Verdict::True } else { Verdict::False };
        prop_assert_eq!(has_perron_value(&d, &small_tol()).unwrap(), want);
    }

    #[test]
    fn primitive_spectra_pass_the_conditions(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let n = g.usize_in(1, 4);
        let a = g.primitive_01(n);
        let d = SpectrumDescriptor::of_matrix(&a).unwrap();
        prop_assert_eq!(has_perron_value(&d, &small_tol()).unwrap(), Verdict::True);
        for mode in [Mode::Integer, Mode::Dense] {
            let r = check_spectral_conditions(&d, mode, 8, 4, &small_tol()).unwrap();
            prop_assert!(r.all_ok(), "{:?}", r.failures);
        }
    }

    #[test]
    fn shrinking_is_a_det_one_similarity(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let n = g.usize_in(1, 4);
        let nm = g.nilpotent(n);
        let delta = Rational::new(1, g.int_in(1, 5000));
        let r = shrink_norm(&nm, &delta).unwrap();
        prop_assert!(leibniz_det(&r.v).is_one());
        prop_assert!(r.conjugated.sup_norm().unwrap() < delta);
        prop_assert_eq!(naive_mul(&r.v, &r.conjugated), naive_mul(&nm, &r.v));
    }

    #[test]
    fn single_steps_keep_the_determinant(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let n = g.usize_in(1, 4);
        let bound = Rational::new(1, 8 * (n * n) as i64);
        let t = g.strictly_upper(n, 5, 4);
        let scale = match t.sup_norm().unwrap() {
            s if s.is_zero() => Rational::one(),
            s => &bound / &s,
        };
        let (u, u_inv) = g.sl_matrix(n, 3);
        let conj = naive_mul(&naive_mul(&u_inv, &t.scale(&scale)), &u);
        let r = match shrink_norm(&conj, &bound) {
            Ok(s) => s,
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let a = PolyMatrix::monomial(r.conjugated, 1).unwrap();
        let step = clear_degree_step(&a, 1).unwrap();
        prop_assert_eq!(leibniz_det(&a.identity_minus()), leibniz_det(&step.output.identity_minus()));
        prop_assert!(step.output.vanishes_below(2));
    }
}

#[test]
fn appended_zero_eigenvalue_is_rejected() {
    let d = SpectrumDescriptor::from_roots(&[Rational::from_int(2)]).unwrap();
    let with_zero = d.poly().times(&Poly::x());
    assert!(SpectrumDescriptor::from_poly(with_zero).is_err());
}

#[test]
fn companion_has_no_short_cycles() {
    let nm = Matrix::from_ints(&[&[0, 1, 2], &[0, 0, -1], &[0, 0, 0]]);
    for k_max in 1..=2 {
        let small = shrink_norm(&nm, &shrink_target(3, k_max)).unwrap().conjugated;
        let r = clear_traces(&small, k_max).unwrap();
        assert!(!has_short_cycle(&r.m.entrywise_abs().unwrap(), k_max));
    }
}

#[test]
fn suites_agree_across_execution_modes() {
    for exec in [Exec::Sequential, Exec::Parallel] {
        assert!(suite::orbit_suite(5, 10, 6, exec).ok());
    }
    assert_eq!(suite::assembly_suite(9, 12, Exec::Sequential), suite::assembly_suite(9, 12, Exec::Parallel));
    assert_eq!(suite::clearing_suite(9, 6, Exec::Sequential), suite::clearing_suite(9, 6, Exec::Parallel));
}
