use entshare::channels;
use entshare::linalg;
use entshare::measures::negativity;
use entshare::omega::*;
use entshare::states::{partial_transpose, Subsystem};
use proptest::prelude::*;

fn strict_params() -> impl Strategy<Value = OmegaParams> {
    (3usize..=6)
        .prop_flat_map(|d| (Just(d), proptest::collection::vec(0.001f64..0.999, d - 1)))
        .prop_filter_map("needs a distinct pair", |(d, x)| OmegaParams::new(d, x).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn closed_forms_match_numerics(p in strict_params()) {
        let choi = channels::choi_state(&omega_channel(&p).unwrap()).unwrap();
        prop_assert!((omega_lambda_max(&p) - choi.rho.lambda_max()).abs() < 1e-10);
        prop_assert!((omega_negativity_phiplus(&p) - negativity(&choi.rho)).abs() < 1e-10);
        let numeric = linalg::eigvalsh(&partial_transpose(&choi.rho, Subsystem::Second));
        let closed = omega_pt_spectrum(&p);
        prop_assert_eq!(numeric.len(), closed.len());
        for (a, b) in numeric.iter().zip(&closed) {
            prop_assert!((a - b).abs() < 1e-10);
        }
        prop_assert!((closed.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gap_is_positive_and_equals_pairwise_squares(p in strict_params()) {
        let x = p.x();
        let mut pairwise = 0.0;
        for i in 0..x.len() {
            for j in i + 1..x.len() {
                pairwise += (x[i] - x[j]).powi(2);
            }
        }
        let gap = omega_gap(&p);
        prop_assert!(gap > 0.0);
        prop_assert!((gap - pairwise).abs() < 1e-12);
        let bound = (1.0 + 2.0 * omega_negativity_phiplus(&p)) / p.d() as f64;
        prop_assert!(omega_lambda_max(&p) > bound);
    }
}

#[test]
fn scaling_towards_identity_is_monotone() {
    for d in 3..=6 {
        let base: Vec<f64> = (1..d).map(|k| k as f64 / d as f64).collect();
        let mut last = (0.0, 0.0);
        for step in 0..=20 {
            let t = step as f64 / 20.0;
            let x: Vec<f64> = base.iter().map(|b| b + t * (1.0 - b)).collect();
            let p = OmegaParams::relaxed(d, x).unwrap();
            let now = (omega_lambda_max(&p), omega_negativity_phiplus(&p));
            assert!(now.0 > last.0 && now.1 > last.1);
            last = now;
        }
        assert!((last.0 - 1.0).abs() < 1e-15);
        assert!((last.1 - (d as f64 - 1.0) / 2.0).abs() < 1e-12);
    }
}
