use entshare::channels::{self, apply_one_sided};
use entshare::measures::{self, fef, fef_ceiling, fef_channel_output, negativity, FefOptions};
use entshare::random::{haar_state, haar_unitary, random_dilation_channel, rng_for};
use entshare::states;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn negativity_is_local_unitary_invariant(d in 2usize..=4, seed in any::<u64>()) {
        let mut rng = rng_for(seed, 0);
        let ch = random_dilation_channel(d, &mut rng);
        let rho = apply_one_sided(&ch, &haar_state(d, &mut rng)).unwrap();
        let u = haar_unitary(d, &mut rng);
        let v = haar_unitary(d, &mut rng);
        let rotated = rho.conjugate_local(&u, &v).unwrap();
        prop_assert!((negativity(&rho) - negativity(&rotated)).abs() < 1e-9);
    }

    #[test]
    fn fef_sandwich_and_route_agreement(d in 2usize..=4, seed in any::<u64>()) {
        let mut rng = rng_for(seed, 1);
        let ch = random_dilation_channel(d, &mut rng);
        let psi = haar_state(d, &mut rng);
        let rho = apply_one_sided(&ch, &psi).unwrap();
        let opts = FefOptions { seed, ..FefOptions::default() };
        let res = fef(&rho, &opts).unwrap();
        let phi = states::max_entangled(d).unwrap();
        prop_assert!(res.value >= states::fidelity_with(&rho, &phi).unwrap() - 1e-12);
        prop_assert!(res.value <= fef_ceiling(&rho).unwrap() + 1e-9);
        let dual = fef_channel_output(&psi, &ch, &opts).unwrap();
        prop_assert!((dual.value - res.value).abs() < 1e-7);
    }

    #[test]
    fn top_dual_eigenvector_attains_lambda_max(d in 2usize..=4, seed in any::<u64>()) {
        let ch = random_dilation_channel(d, &mut rng_for(seed, 2));
        let top = channels::top_choi_eigenpair(&ch.dual()).unwrap();
        let out = apply_one_sided(&ch, &top.vector).unwrap();
        let res = fef(&out, &FefOptions::default()).unwrap();
        let lambda = channels::choi_operator(&ch).unwrap().lambda_max();
        prop_assert!((res.value - lambda).abs() < 1e-6);
    }

    #[test]
    fn fstar_bound_dominates_fef(d in 2usize..=4, seed in any::<u64>()) {
        let mut rng = rng_for(seed, 3);
        let ch = random_dilation_channel(d, &mut rng);
        let rho = apply_one_sided(&ch, &haar_state(d, &mut rng)).unwrap();
        let res = fef(&rho, &FefOptions::default()).unwrap();
        prop_assert!(res.value <= measures::fstar_upper_bound(&rho).unwrap() + 1e-9);
    }
}
