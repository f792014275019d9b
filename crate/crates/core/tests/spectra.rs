mod common;

use ncdyn_core::eigenlists::{interaction_lower_bound, l1_distance, tensor_product, EigenvalueList};
use ncdyn_core::opalg::{conjugacy_shift, eig_descending, trace_norm};
use ncdyn_core::random;
use ncdyn_core::ComplexMatrix;
use proptest::prelude::*;

fn list_strategy(max_len: usize) -> impl Strategy<Value = EigenvalueList> {
    prop::collection::vec(0.0f64..1.0, 1..=max_len).prop_filter_map("positive mass", |raw| {
        let s: f64 = raw.iter().sum();
        (s > 1e-3).then(|| EigenvalueList::normalized(raw.iter().map(|x| x / s).collect()).ok()).flatten()
    })
}

fn same_list(a: &EigenvalueList, b: &EigenvalueList, tol: f64) -> bool {
    a.len() == b.len() && l1_distance(a, b) <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eig_is_sorted_and_sums_to_trace(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = common::rng(seed);
        let a = random::hermitian(&mut rng, n);
        let s = eig_descending(&a).unwrap();
        prop_assert!(s.values.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!((s.values.iter().sum::<f64>() - a.trace().re).abs() < 1e-10);
        let d = ComplexMatrix::from_real_diag(&s.values);
        let rec = &(&s.vectors * &d) * &s.vectors.adjoint();
        prop_assert!(rec.max_diff(&a) < 1e-10);
    }

    #[test]
    fn trace_norm_is_unitarily_invariant(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = common::rng(seed);
        let a = common::matrix(&mut rng, n);
        let u = random::unitary(&mut rng, n);
        let v = random::unitary(&mut rng, n);
        let rotated = &(&u * &a) * &v;
        prop_assert!((trace_norm(&rotated).unwrap() - trace_norm(&a).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn conjugacy_recovers_shift(seed in any::<u64>(), n in 1usize..5, lambda in -5.0f64..5.0) {
        let mut rng = common::rng(seed);
        let x = random::hermitian(&mut rng, n);
        let w = random::unitary(&mut rng, n);
        let shifted = &x + &ComplexMatrix::identity(n).scale_real(lambda);
        let y = (&(&w * &shifted) * &w.adjoint()).hermitian_part();
        let got = conjugacy_shift(&x, &y).unwrap().expect("conjugate by construction");
        prop_assert!((got - lambda).abs() < 1e-10);
        let back = conjugacy_shift(&y, &x).unwrap().expect("symmetric");
        prop_assert!((back + got).abs() < 1e-12);
        prop_assert_eq!(conjugacy_shift(&x, &x).unwrap(), Some(0.0));
    }

    #[test]
    fn weyl_inequality(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let rho = random::density(&mut rng, 4);
        let sigma = random::density(&mut rng, 4);
        let d = l1_distance(&rho.eigenvalue_list().unwrap(), &sigma.eigenvalue_list().unwrap());
        let t = trace_norm(&(rho.matrix() - sigma.matrix())).unwrap();
        prop_assert!(d <= t + 1e-12);
    }

    #[test]
    fn tensor_commutative_and_associative(a in list_strategy(5), b in list_strategy(5), c in list_strategy(4)) {
        let ab = tensor_product(&a, &b, None).unwrap();
        let ba = tensor_product(&b, &a, None).unwrap();
        prop_assert!(same_list(&ab, &ba, 1e-12));
        let left = tensor_product(&ab, &c, None).unwrap();
        let right = tensor_product(&a, &tensor_product(&b, &c, None).unwrap(), None).unwrap();
        prop_assert!(same_list(&left, &right, 1e-12));
        prop_assert!((ab.sum() - a.sum() * b.sum()).abs() < 1e-12);
    }

    #[test]
    fn l1_is_a_metric(a in list_strategy(6), b in list_strategy(6), c in list_strategy(6)) {
        prop_assert_eq!(l1_distance(&a, &b), l1_distance(&b, &a));
        prop_assert!(l1_distance(&a, &c) <= l1_distance(&a, &b) + l1_distance(&b, &c) + 1e-15);
    }

    #[test]
    fn tensor_square_separates(a in list_strategy(6), b in list_strategy(6)) {
        prop_assume!(l1_distance(&a, &b) > 1e-6);
        prop_assert!(interaction_lower_bound(&a, &b).unwrap() > 0.0);
    }
}

#[test]
fn strong_interaction_formula() {
    for q in 2..=12usize {
        for p in 1..q {
            let b = interaction_lower_bound(&EigenvalueList::uniform(p), &EigenvalueList::uniform(q)).unwrap();
            let want = 2.0 - 2.0 * (p * p) as f64 / (q * q) as f64;
            assert!((b - want).abs() <= 1e-12, "p={p} q={q} got {b}");
        }
    }
}
