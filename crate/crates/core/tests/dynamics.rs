mod common;

use ncdyn_core::cpdyn::{
    compress, evolve, evolve_state, generator_with_spectrum, is_completely_positive, stationary_state, DiscreteSemigroup, GklsSemigroup,
};
use ncdyn_core::dilation::{kraus_word_expectation, projection_class, stinespring};
use ncdyn_core::moments::{moment, moment_with_split, ordered_moment, Semigroup};
use ncdyn_core::opalg::trace_norm;
use ncdyn_core::{linalg, random, ComplexMatrix, C64};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evolution_is_unital_and_cp(seed in any::<u64>(), n in 2usize..4, t in 0.0f64..10.0) {
        let mut rng = common::rng(seed);
        let gen = random::gkls_generator(&mut rng, n, 2, 0.5);
        let p = evolve(&gen, t).unwrap();
        prop_assert!(p.image_of_identity().max_diff(&ComplexMatrix::identity(n)) < 1e-10);
        prop_assert!(is_completely_positive(&p, 1e-9));
    }

    #[test]
    fn spectrum_generator_is_absorbing(seed in any::<u64>(), n in 2usize..5) {
        let mut rng = common::rng(seed);
        let lam = random::positive_list(&mut rng, n, 0.1);
        let gen = generator_with_spectrum(&lam, n).unwrap();
        let omega = stationary_state(&gen).unwrap();
        let got = omega.eigenvalue_list().unwrap();
        for k in 0..n {
            prop_assert!((got.get(k) - lam.get(k)).abs() < 1e-8);
        }
        let rho = random::density(&mut rng, n);
        let mut prev = f64::INFINITY;
        for t in 0..=50 {
            let d = trace_norm(&(&evolve_state(&gen, rho.matrix(), t as f64).unwrap() - omega.matrix())).unwrap();
            prop_assert!(d <= prev + 1e-10);
            prev = d;
        }
        prop_assert!(prev < 1e-6);
    }

    #[test]
    fn coinvariant_compression(seed in any::<u64>(), r in 1usize..4) {
        let mut rng = common::rng(seed);
        let (alpha, p) = common::coinvariant_map(&mut rng, 3, 2, r);
        let class = projection_class(&alpha, &p).unwrap();
        prop_assert!(class.coinvariant);
        let compressed = compress(&alpha, &p).unwrap();
        let a = common::matrix(&mut rng, 3);
        let lhs = compressed.apply(&(&(&p * &a) * &p)).unwrap();
        let rhs = &(&p * &alpha.apply(&a).unwrap()) * &p;
        prop_assert!(lhs.max_diff(&rhs) < 1e-12);
    }

    #[test]
    fn increasing_implies_coinvariant(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let alpha = random::unital_cp_map(&mut rng, 3, 2);
        let v = random::isometry(&mut rng, 3, 1);
        let p = &v * &v.adjoint();
        let q = &ComplexMatrix::identity(3) - &p;
        let gain = linalg::min_eigenvalue(&(&alpha.apply(&p).unwrap() - &p)).unwrap();
        let loss = linalg::min_eigenvalue(&(&q - &alpha.apply(&q).unwrap())).unwrap();
        if gain >= -1e-12 {
            prop_assert!(loss >= -1e-12);
        }
        prop_assert!((gain - loss).abs() < 1e-12);
    }

    #[test]
    fn moment_symmetry_and_norm(seed in any::<u64>(), k in 1usize..6) {
        let mut rng = common::rng(seed);
        let gen = random::gkls_generator(&mut rng, 2, 2, 0.7);
        let sg = GklsSemigroup::new(&gen);
        let times: Vec<f64> = (0..k).map(|_| rng.gen_range(0..5) as f64 * 0.5).collect();
        let mats: Vec<ComplexMatrix> = (0..k).map(|_| common::matrix(&mut rng, 2)).collect();
        let m = moment(&sg, &times, &mats).unwrap();
        let rt: Vec<f64> = times.iter().rev().copied().collect();
        let rm: Vec<ComplexMatrix> = mats.iter().rev().map(|a| a.adjoint()).collect();
        prop_assert!(moment(&sg, &rt, &rm).unwrap().max_diff(&m.adjoint()) < 1e-10);
        let bound: f64 = mats.iter().map(|a| a.op_norm()).product();
        prop_assert!(m.op_norm() <= bound + 1e-9);
    }

    #[test]
    fn moment_is_multilinear_and_shift_covariant(seed in any::<u64>(), k in 1usize..5, s in 0.0f64..2.0) {
        let mut rng = common::rng(seed);
        let gen = random::gkls_generator(&mut rng, 2, 1, 1.0);
        let sg = GklsSemigroup::new(&gen);
        let times: Vec<f64> = (0..k).map(|_| rng.gen_range(0..4) as f64).collect();
        let mats: Vec<ComplexMatrix> = (0..k).map(|_| common::matrix(&mut rng, 2)).collect();
        let slot = rng.gen_range(0..k);
        let b = common::matrix(&mut rng, 2);
        let (x, y) = (C64::new(0.3, -1.1), C64::new(2.0, 0.5));
        let mut mixed = mats.clone();
        mixed[slot] = &mats[slot].scale(x) + &b.scale(y);
        let mut with_b = mats.clone();
        with_b[slot] = b;
        let lhs = moment(&sg, &times, &mixed).unwrap();
        let rhs = &moment(&sg, &times, &mats).unwrap().scale(x) + &moment(&sg, &times, &with_b).unwrap().scale(y);
        prop_assert!(lhs.max_diff(&rhs) < 1e-11);
        let shifted: Vec<f64> = times.iter().map(|t| t + s).collect();
        let via_p = sg.apply(s, &moment(&sg, &times, &mats).unwrap()).unwrap();
        prop_assert!(moment(&sg, &shifted, &mats).unwrap().max_diff(&via_p) < 1e-10);
    }

    #[test]
    fn split_position_is_irrelevant(seed in any::<u64>(), k in 2usize..6) {
        let mut rng = common::rng(seed);
        let gen = random::gkls_generator(&mut rng, 2, 2, 0.5);
        let sg = GklsSemigroup::new(&gen);
        let times: Vec<f64> = (0..k).map(|_| rng.gen_range(0..3) as f64).collect();
        let mats: Vec<ComplexMatrix> = (0..k).map(|_| common::matrix(&mut rng, 2)).collect();
        let first = moment_with_split(&sg, &times, &mats, |z| z[0]).unwrap();
        let last = moment_with_split(&sg, &times, &mats, |z| z[z.len() - 1]).unwrap();
        let middle = moment_with_split(&sg, &times, &mats, |z| z[z.len() / 2]).unwrap();
        prop_assert!(first.max_diff(&last) < 1e-10);
        prop_assert!(first.max_diff(&middle) < 1e-10);
    }

    #[test]
    fn oracle_triangle(seed in any::<u64>(), r in 1usize..4) {
        let mut rng = common::rng(seed);
        let phi = random::unital_cp_map(&mut rng, 2, r);
        let ints = common::sorted_ints(&mut rng, 3, 4);
        let times: Vec<f64> = ints.iter().map(|&t| t as f64).collect();
        let mats: Vec<ComplexMatrix> = ints.iter().map(|_| common::matrix(&mut rng, 2)).collect();
        let sg = DiscreteSemigroup::new(phi.clone());
        let a = moment(&sg, &times, &mats).unwrap();
        let b = ordered_moment(&sg, &times, &mats).unwrap();
        let c = kraus_word_expectation(&phi, &ints, &mats).unwrap();
        prop_assert!(a.max_diff(&b) < 1e-9);
        prop_assert!(a.max_diff(&c) < 1e-9);
    }

    #[test]
    fn stinespring_is_minimal(seed in any::<u64>(), r in 1usize..5) {
        let mut rng = common::rng(seed);
        let phi = random::unital_cp_map(&mut rng, 2, r);
        let s = stinespring(&phi, true).unwrap();
        let choi_rank = linalg::hermitian_eigenvalues(&phi.choi()).unwrap().iter().filter(|&&x| x > 1e-9).count();
        prop_assert_eq!(s.rep_rank, choi_rank);
        prop_assert!(s.residual(&phi.to_linear_map()) < 1e-9);
        let a = common::matrix(&mut rng, 2);
        let b = common::matrix(&mut rng, 2);
        let nested = s.compress(&(&a * &s.compress(&b)));
        let words = kraus_word_expectation(&phi, &[1, 2], &[a, b]).unwrap();
        prop_assert!(nested.max_diff(&words) < 1e-9);
    }
}
