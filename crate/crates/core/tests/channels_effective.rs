//! Effective-loss analysis: round trips, closed-form agreement, the mimicry
//! property, and the behavior at degenerate parameter limits.

use cvswap_core::channels::{
    effective_decomposition, effective_params_after_swap, lossy_tmss, swap_lossy,
    total_effective_transmittivity, ChannelSpec,
};
use cvswap_core::state::SimpleFormParams;
use cvswap_core::Error;

#[test]
fn mimicry_swapped_state_equals_direct_transmission() {
    // Any entangled swapped state is reproduced exactly by direct
    // transmission with the effective parameters.
    for &(r, ta, tb) in &[(0.8, 1.0, 0.7), (1.5, 0.9, 0.85), (2.2, 0.8, 0.95)] {
        let spec = ChannelSpec::new(r, ta, tb).unwrap();
        let swapped = swap_lossy(&spec);
        let d = effective_params_after_swap(&spec).unwrap();
        let mimic = lossy_tmss(&ChannelSpec::new(d.r_eff, d.tau_a_eff, d.tau_b_eff).unwrap());
        assert!((mimic.a - swapped.a).abs() < 1e-9, "a: {} vs {}", mimic.a, swapped.a);
        assert!((mimic.b - swapped.b).abs() < 1e-9);
        assert!((mimic.c - swapped.c).abs() < 1e-9);
    }
}

#[test]
fn asymmetric_arm_outputs_stay_entangled() {
    // tau_a = 1: both the direct and the swapped state are entangled for any
    // positive input squeezing.
    for i in 1..=30 {
        let r = 0.1 * i as f64;
        for &tb in &[0.9, 0.5, 0.2, 0.05] {
            let direct = lossy_tmss(&ChannelSpec::new(r, 1.0, tb).unwrap());
            assert!(!direct.is_separable().unwrap(), "direct separable at r={r}, tb={tb}");
            let swapped = swap_lossy(&ChannelSpec::new(r, 1.0, tb).unwrap());
            assert!(!swapped.is_separable().unwrap(), "swapped separable at r={r}, tb={tb}");
        }
    }
}

#[test]
fn low_transmittivity_swap_disentangles() {
    // tau_a + tau_b <= 1 makes the swapped state separable (the effective
    // transmittivities would have to become negative).
    for &(r, ta, tb) in &[(0.5, 0.4, 0.5), (2.0, 0.3, 0.3), (1.0, 0.5, 0.5)] {
        let spec = ChannelSpec::new(r, ta, tb).unwrap();
        assert!(swap_lossy(&spec).is_separable().unwrap(), "unexpected entanglement at {spec:?}");
        assert!(matches!(effective_params_after_swap(&spec), Err(Error::NotEntangled)));
    }
}

#[test]
fn zero_squeezing_limit_errors_as_not_entangled() {
    let spec = ChannelSpec::new(0.0, 0.9, 0.9).unwrap();
    assert!(matches!(effective_params_after_swap(&spec), Err(Error::NotEntangled)));
    assert!(matches!(total_effective_transmittivity(&spec), Err(Error::NotEntangled)));
}

#[test]
fn vacuum_boundary_with_correlations_is_degenerate() {
    let p = SimpleFormParams::new(1.0, 2.0, 0.3);
    assert!(matches!(effective_decomposition(&p), Err(Error::DegenerateState(_))));
}

#[test]
fn channel_spec_validation() {
    assert!(ChannelSpec::new(-0.1, 0.5, 0.5).is_err());
    assert!(ChannelSpec::new(1.0, 1.2, 0.5).is_err());
    assert!(ChannelSpec::new(1.0, 0.5, -0.01).is_err());
    assert!(ChannelSpec::new(f64::NAN, 0.5, 0.5).is_err());
}

#[test]
fn round_trip_grid() {
    for i in 1..=8 {
        let r = 0.35 * i as f64;
        for j in 0..6 {
            let ta = 0.55 + 0.09 * j as f64;
            for k in 0..6 {
                let tb = 0.55 + 0.09 * k as f64;
                let spec = ChannelSpec::new(r, ta, tb).unwrap();
                let d = effective_decomposition(&lossy_tmss(&spec)).unwrap();
                assert!((d.r_eff - r).abs() < 1e-9 * (1.0 + r));
                assert!((d.tau_a_eff - ta).abs() < 1e-9);
                assert!((d.tau_b_eff - tb).abs() < 1e-9);
            }
        }
    }
}
