use catlab::csla::{
    closed_form_coefficients, fidelity_gain, label_oracle, max_reuse_rounds_distill, IndexPair,
    LabelDistribution,
};
use catlab::ThresholdConfig;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

#[test]
fn oracle_matches_closed_form_exactly() {
    for n in 2..=5u64 {
        let snaps = label_oracle(n, 5).unwrap();
        for snap in &snaps {
            let (r, t) = closed_form_coefficients(n, snap.round as u32).unwrap();
            assert_eq!(snap.main, LabelDistribution::new(r, t), "n={n} r={}", snap.round);
        }
    }
}

#[test]
fn earlier_main_slots_scale_by_n() {
    for n in 2..=5u64 {
        let snaps = label_oracle(n, 5).unwrap();
        let n_big = BigUint::from(n);
        for pair in snaps.windows(2) {
            let (prev, next) = (&pair[0], &pair[1]);
            for (i, before) in prev.main_pairs.iter().enumerate() {
                assert_eq!(next.main_pairs[i], &n_big * before, "n={n} slot {} round {}", i + 1, next.round);
            }
        }
    }
}

#[test]
fn labels_are_conserved() {
    for n in 2..=5u64 {
        for snap in label_oracle(n, 5).unwrap() {
            let t = snap.round as u64;
            let mut total = snap.catalyst.total();
            for pair in &snap.main_pairs {
                total += pair.total();
            }
            assert_eq!(total, BigUint::from(n).pow(t as u32) * BigUint::from(t + n - 1));
        }
    }
}

#[test]
fn mixtures_stay_normalized() {
    for n in 2..=5u64 {
        for snap in label_oracle(n, 5).unwrap() {
            assert_eq!(snap.mixture.total_weight(), BigRational::one());
            assert!(snap.distinct_branches as u64 <= n.pow(snap.round as u32));
        }
    }
}

#[test]
fn catalyst_pair_matches_formula() {
    for n in 2..=5u64 {
        for snap in label_oracle(n, 5).unwrap() {
            let t = snap.round as u32;
            let x2 = BigUint::from(n - 1).pow(t);
            let x1 = BigUint::from(n).pow(t) - &x2;
            let expected = &BigUint::from(n - 1) * &IndexPair { x1, x2 };
            assert_eq!(snap.catalyst, expected);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reuse_bound_is_tight(eps in 0.001f64..0.5, gap in 0.001f64..1.0, n in 2u64..200) {
        let f_rho = (1.0 - gap) / 2.0;
        let thr = ThresholdConfig::new(eps, f_rho, f_rho + gap).unwrap();
        let b = max_reuse_rounds_distill(&thr, n).unwrap();
        let tol = thr.boundary_tol();
        if b.rounds > 0 {
            prop_assert!(fidelity_gain(&thr, n, b.rounds) - eps > tol);
        }
        prop_assert!(fidelity_gain(&thr, n, b.rounds + 1) - eps <= tol);
    }

    #[test]
    fn gain_is_decreasing_in_rounds(gap in 0.001f64..1.0, n in 2u64..100, r in 1u64..500) {
        let thr = ThresholdConfig::new(0.05, 0.0, gap).unwrap();
        prop_assert!(fidelity_gain(&thr, n, r + 1) < fidelity_gain(&thr, n, r));
    }
}
