use proptest::prelude::*;

use joint_schmidt::bloch::{gell_mann_basis, sector_contributions_with};
use joint_schmidt::decomp::{joint_decompose, joint_svd, schmidt};
use joint_schmidt::linalg::max_abs_diff;
use joint_schmidt::majorization::{inequality_chain, majorization_witness};
use joint_schmidt::partial_trace::partial_trace;
use joint_schmidt::purity;
use joint_schmidt::random::HaarSampler;
use joint_schmidt::state::{apply_local, outer, reduce_rank1, Side};

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=5, 1usize..=5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn schmidt_round_trip(seed in any::<u64>(), (da, db) in dims()) {
        let psi = HaarSampler::new(seed).state(da, db).unwrap();
        let s = schmidt(&psi);
        prop_assert!(max_abs_diff(&s.reconstruct_grid(), psi.amplitudes()) < 1e-10);
        prop_assert!(s.lambdas.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!((s.purity() - psi.purity(Side::TracedOverB)).abs() < 1e-12);
    }

    #[test]
    fn reduction_matches_explicit_partial_trace(seed in any::<u64>(), (da, db) in dims()) {
        let mut rng = HaarSampler::new(seed);
        let (psi, phi) = (rng.state(da, db).unwrap(), rng.state(da, db).unwrap());
        let op = outer(&psi, &phi).unwrap();
        for side in [Side::TracedOverB, Side::TracedOverA] {
            let fast = reduce_rank1(&psi, &phi, side).unwrap().matrix;
            let slow = partial_trace(&op, da, db, side).unwrap();
            prop_assert!(max_abs_diff(&fast, &slow) < 1e-13);
        }
    }

    #[test]
    fn joint_decomposition_reconstructs(seed in any::<u64>(), (da, db) in dims()) {
        let mut rng = HaarSampler::new(seed);
        let (psi, phi) = (rng.state(da, db).unwrap(), rng.state(da, db).unwrap());
        let (p, f) = joint_decompose(&psi, &phi).unwrap().reconstruct();
        prop_assert!(max_abs_diff(p.amplitudes(), psi.amplitudes()) < 1e-9);
        prop_assert!(max_abs_diff(f.amplitudes(), phi.amplitudes()) < 1e-9);
    }

    #[test]
    fn joint_svd_both_sides(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = HaarSampler::new(seed);
        let (psi, phi) = (rng.state(d, d).unwrap(), rng.state(d, d).unwrap());
        for side in [Side::TracedOverB, Side::TracedOverA] {
            let dec = joint_svd(&psi, &phi, side).unwrap();
            prop_assert!(dec.duality_residual() < 1e-9);
            prop_assert!(dec.q.iter().all(|q| *q >= 0.0));
        }
    }

    #[test]
    fn purity_identities_hold(seed in any::<u64>(), (da, db) in dims()) {
        let mut rng = HaarSampler::new(seed);
        let t: Vec<_> = (0..4).map(|_| rng.state(da, db).unwrap()).collect();
        prop_assert!(purity::reduction_square_identity(&t[0], &t[1]).unwrap().holds);
        prop_assert!(purity::cross_purity_identity(&t[0], &t[1]).unwrap().holds);
        prop_assert!(purity::four_state_identity(&t[0], &t[1], &t[2], &t[3]).unwrap().holds);
    }

    #[test]
    fn sector_lengths_are_local_invariants(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = HaarSampler::new(seed);
        let basis = gell_mann_basis(d).unwrap();
        let psi = rng.state(d, d).unwrap();
        let (ua, ub) = rng.local_pair(d, d).unwrap();
        let a = sector_contributions_with(&psi, &basis, "a").unwrap();
        let b = sector_contributions_with(&apply_local(&psi, &ua, &ub).unwrap(), &basis, "b").unwrap();
        prop_assert!(a.lengths().max_diff(&b.lengths()) < 1e-9);
        prop_assert!((a.contribution_total() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn diagonals_are_majorized_and_chain_holds(seed in any::<u64>(), d in 2usize..=4) {
        let psi = HaarSampler::new(seed).state(d, d).unwrap();
        for side in [Side::TracedOverB, Side::TracedOverA] {
            let w = majorization_witness(&psi, side).unwrap();
            prop_assert!(w.majorizes);
            prop_assert!(w.s2_lam <= w.s2_h + 1e-12);
        }
        prop_assert!(inequality_chain(&psi).unwrap().holds);
    }
}
