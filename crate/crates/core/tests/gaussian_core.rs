//! Property tests for the state module: standard-form reduction, physicality,
//! and the PPT criterion must agree across their independent formulations.

use cvswap_core::state::{
    rotation, squeeze, tmss, to_standard_form, SimpleFormParams, StandardFormParams,
};
use proptest::prelude::*;

prop_compose! {
    /// Physical simple-form parameters via the closed-form cap on |c|.
    fn simple()(a in 1.0f64..4.0, b in 1.0f64..4.0, f in 0.0f64..0.999) -> SimpleFormParams {
        let cap = ((a - 1.0) * (b + 1.0)).min((a + 1.0) * (b - 1.0)).max(0.0).sqrt();
        SimpleFormParams::new(a, b, f * cap)
    }
}

prop_compose! {
    /// Physical standard-form parameters; the minor correlation shrinks until
    /// the full symplectic condition holds.
    fn standard()(
        a in 1.0f64..4.0,
        b in 1.0f64..4.0,
        f in 0.0f64..0.999,
        g in -1.0f64..1.0,
    ) -> StandardFormParams {
        let cap = ((a - 1.0) * (b + 1.0)).min((a + 1.0) * (b - 1.0)).max(0.0).sqrt();
        let c_plus = f * cap;
        let mut c_minus = g * c_plus;
        let mut p = StandardFormParams::new(a, b, c_plus, c_minus);
        for _ in 0..60 {
            if p.is_physical() {
                break;
            }
            c_minus *= 0.8;
            p = StandardFormParams::new(a, b, c_plus, c_minus);
        }
        p
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reduction_is_local_invariant(p in standard(), t1 in -3.1f64..3.1, t4 in -3.1f64..3.1,
                                    s1 in -0.8f64..0.8, s4 in -0.8f64..0.8) {
        prop_assume!(p.is_physical());
        let st = p.to_state().apply_local(
            &(rotation(t1) * squeeze(s1)),
            &(rotation(t4) * squeeze(s4)),
        );
        let q = to_standard_form(&st).unwrap();
        let scale = 1.0 + p.a.abs() + p.b.abs();
        prop_assert!((q.a - p.a).abs() < 1e-9 * scale, "a: {} vs {}", q.a, p.a);
        prop_assert!((q.b - p.b).abs() < 1e-9 * scale);
        prop_assert!((q.c_plus - p.c_plus).abs() < 1e-9 * scale, "c+: {} vs {}", q.c_plus, p.c_plus);
        prop_assert!((q.c_minus - p.c_minus).abs() < 1e-9 * scale);
    }

    #[test]
    fn determinant_survives_reduction(p in standard(), t1 in -3.1f64..3.1, t4 in -3.1f64..3.1) {
        prop_assume!(p.is_physical());
        let st = p.to_state().apply_local(&rotation(t1), &rotation(t4));
        let q = to_standard_form(&st).unwrap();
        let rel = (q.det() - st.det()).abs() / st.det().abs().max(1e-30);
        prop_assert!(rel < 1e-9, "det drift {rel:e}");
    }

    #[test]
    fn physical_states_have_nu_at_least_one(p in standard()) {
        prop_assume!(p.is_physical());
        let (nu_min, _) = p.to_state().symplectic_eigenvalues();
        prop_assert!(nu_min >= 1.0 - 1e-9, "nu_min = {nu_min}");
    }

    #[test]
    fn ppt_routes_agree(p in simple()) {
        prop_assume!(p.is_physical());
        let separable = p.is_separable().unwrap();
        let (nt_min, _) = p.to_state().ptranspose_eigenvalues();
        if !separable {
            prop_assert!(nt_min < 1.0 + 1e-9, "entangled but nu~- = {nt_min}");
        } else {
            prop_assert!(nt_min >= 1.0 - 1e-9, "separable but nu~- = {nt_min}");
        }
    }

    #[test]
    fn standard_form_inequalities_are_necessary(p in standard()) {
        prop_assume!(p.is_physical());
        for c in [p.c_plus, p.c_minus] {
            prop_assert!((p.a - 1.0) * (p.b + 1.0) - c * c >= -1e-9);
            prop_assert!((p.a + 1.0) * (p.b - 1.0) - c * c >= -1e-9);
        }
    }
}

#[test]
fn tmss_hits_eq15_pattern() {
    let p = tmss(0.8);
    let r = to_standard_form(&p.to_state()).unwrap();
    assert!((r.a - p.a).abs() < 1e-12);
    assert!((r.c_plus - p.c).abs() < 1e-12);
    assert!((r.c_minus + p.c).abs() < 1e-12);
}

#[test]
fn simple_form_canonicalizes_negative_c() {
    // c < 0 is locally equivalent to |c| with the sign convention applied.
    let p = SimpleFormParams::new(2.0, 1.8, -1.1);
    let r = to_standard_form(&p.to_state()).unwrap();
    assert!((r.c_plus - 1.1).abs() < 1e-12);
    assert!((r.c_minus + 1.1).abs() < 1e-12);
}
