mod common;

use catlab::quantum::{
    entanglement_fidelity, isotropic_state, max_relative_entropy, partial_trace, purified_distance,
    trace_distance,
};
use catlab::{DensityMatrix, HilbertDim};
use common::{density, full_rank_diagonal, max_abs};
use proptest::prelude::*;

const Q: HilbertDim = HilbertDim::QUBIT;

proptest! {
    #[test]
    fn entanglement_fidelity_is_affine(a in density(4), b in density(4)) {
        let (fa, fb) = (entanglement_fidelity(&a, Q).unwrap(), entanglement_fidelity(&b, Q).unwrap());
        for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let mix = DensityMatrix::convex(&[(p, &a), (1.0 - p, &b)]).unwrap();
            let f = entanglement_fidelity(&mix, Q).unwrap();
            prop_assert!((f - (p * fa + (1.0 - p) * fb)).abs() <= 1e-12);
        }
    }

    #[test]
    fn isotropic_round_trip(d in 2usize..5, u in 0.0f64..=1.0) {
        let d = HilbertDim::new(d).unwrap();
        let lo = 1.0 / (d.get() * d.get()) as f64;
        let target = lo + u * (1.0 - lo);
        let state = isotropic_state(target, d).unwrap();
        prop_assert!((entanglement_fidelity(&state, d).unwrap() - target).abs() <= 1e-12);
    }

    #[test]
    fn distances_are_symmetric_and_ordered(a in density(4), b in density(4)) {
        let td = trace_distance(&a, &b).unwrap();
        let pd = purified_distance(&a, &b).unwrap();
        prop_assert!((td - trace_distance(&b, &a).unwrap()).abs() <= 1e-12);
        prop_assert!((pd - purified_distance(&b, &a).unwrap()).abs() <= 1e-7);
        prop_assert!((0.0..=1.0).contains(&td) && (0.0..=1.0).contains(&pd));
        prop_assert!(td <= pd + 1e-9, "trace distance {td} above purified distance {pd}");
        prop_assert!(trace_distance(&a, &a).unwrap() <= 1e-12);
        prop_assert!(purified_distance(&a, &a).unwrap() <= 1e-6);
    }

    #[test]
    fn max_relative_entropy_of_commuting_pairs(rho in full_rank_diagonal(4), tau in full_rank_diagonal(4)) {
        let k = max_relative_entropy(&rho, &tau).unwrap();
        let close = max_abs(&(rho.matrix() - tau.matrix())) <= 1e-10;
        prop_assert_eq!(k <= 1e-10, close);
        prop_assert!(max_relative_entropy(&tau, &tau).unwrap() <= 1e-10);
        let gap = tau.matrix() - rho.matrix().map(|z| z * 2f64.powf(-k));
        prop_assert!(gap.symmetric_eigen().eigenvalues.min() >= -1e-10);
    }

    #[test]
    fn operator_inequality_for_general_pairs(rho in density(3), tau in full_rank_diagonal(3)) {
        let k = max_relative_entropy(&rho, &tau).unwrap();
        prop_assert!(k >= 0.0);
        let gap = tau.matrix() - rho.matrix().map(|z| z * 2f64.powf(-k));
        prop_assert!(gap.symmetric_eigen().eigenvalues.min() >= -1e-10);
    }

    #[test]
    fn partial_trace_composes(state in density(8)) {
        let dims = [2, 2, 2];
        let joint = partial_trace(&state, &dims, &[1]).unwrap();
        let step = partial_trace(&state, &dims, &[0, 1]).unwrap();
        let step = partial_trace(&step, &[2, 2], &[1]).unwrap();
        prop_assert!(max_abs(&(joint.matrix() - step.matrix())) <= 1e-12);
        let other = partial_trace(&state, &dims, &[1, 2]).unwrap();
        let other = partial_trace(&other, &[2, 2], &[0]).unwrap();
        prop_assert!(max_abs(&(joint.matrix() - other.matrix())) <= 1e-12);
        prop_assert!((joint.trace().re - 1.0).abs() <= 1e-12);
    }
}
