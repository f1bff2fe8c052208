mod common;

use common::{density, dim, hermitian, pure_state};
use proptest::prelude::*;
use qbattery::array::speed_limit_bounds;
use qbattery::quantum::{fs_angle, HermitianOperator, Propagator, PureState};

fn instance() -> impl Strategy<Value = (HermitianOperator, PureState)> {
    dim().prop_flat_map(|d| (hermitian(d), pure_state(d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn unitary_evolution_preserves_invariants(
        (h, rho) in dim().prop_flat_map(|d| (hermitian(d), density(d))),
        t in 0.0f64..10.0,
    ) {
        let out = Propagator::new(&h).evolve_density(t, &rho).unwrap();
        prop_assert!((out.trace() - 1.0).abs() < 1e-10);
        prop_assert!((out.purity() - rho.purity()).abs() < 1e-10);
        prop_assert!((out.expectation(&h).unwrap() - rho.expectation(&h).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn evolution_preserves_norm((h, psi) in instance(), t in 0.0f64..10.0) {
        let out = Propagator::new(&h).evolve(t, &psi).unwrap();
        prop_assert!((out.amplitudes().norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn no_state_is_reached_faster_than_the_speed_limits((h, psi) in instance()) {
        let prop = Propagator::new(&h);
        for k in 1..=20 {
            let t = 0.25 * k as f64;
            let reached = prop.evolve(t, &psi).unwrap();
            let limits = speed_limit_bounds(&h, &psi, &reached).unwrap();
            prop_assert!(limits.max() <= t + 1e-9, "t={} mt={} ml={}", t, limits.mt, limits.ml);
        }
    }

    #[test]
    fn angle_is_a_metric(
        (a, b, c) in dim().prop_flat_map(|d| (pure_state(d), pure_state(d), pure_state(d)))
    ) {
        let ab = fs_angle(&a, &b).unwrap();
        prop_assert!((ab - fs_angle(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!(ab <= fs_angle(&a, &c).unwrap() + fs_angle(&c, &b).unwrap() + 1e-12);
    }
}
