//! Lossy-channel state preparation and the effective-loss analysis.
//!
//! A two-mode squeezed state with squeezing r whose arms pass pure-loss
//! channels with transmittivities tau_a, tau_b ends up in the simple standard
//! form with a,b = 1 + tau_{a,b}(cosh 2r - 1) and
//! c = sqrt(tau_a tau_b) sinh 2r. Conversely, every entangled simple-form
//! state can be written as such a lossy two-mode squeezed state; the
//! effective parameters of the optimally swapped state quantify how much
//! transmittivity the swap costs.

use crate::error::{Error, Result};
use crate::state::{SimpleFormParams, PHYS_TOL};

/// Input squeezing and arm transmittivities of a lossy two-mode-squeezed
/// link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub r: f64,
    pub tau_a: f64,
    pub tau_b: f64,
}

impl ChannelSpec {
    pub fn new(r: f64, tau_a: f64, tau_b: f64) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::DegenerateState(format!("squeezing r = {r} out of range")));
        }
        for (name, t) in [("tau_a", tau_a), ("tau_b", tau_b)] {
            if !(t.is_finite() && (0.0..=1.0).contains(&t)) {
                return Err(Error::DegenerateState(format!("{name} = {t} not in [0, 1]")));
            }
        }
        Ok(Self { r, tau_a, tau_b })
    }
}

/// Effective re-expression of an entangled simple-form state as a lossy
/// two-mode squeezed state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveDecomposition {
    pub r_eff: f64,
    pub tau_a_eff: f64,
    pub tau_b_eff: f64,
}

/// Simple-form parameters of the lossy two-mode squeezed state:
/// a,b = 1 + tau_{a,b}(cosh 2r - 1), c = sqrt(tau_a tau_b) sinh 2r.
pub fn lossy_tmss(spec: &ChannelSpec) -> SimpleFormParams {
    let ch = (2.0 * spec.r).cosh();
    let sh = (2.0 * spec.r).sinh();
    SimpleFormParams::new(
        1.0 + spec.tau_a * (ch - 1.0),
        1.0 + spec.tau_b * (ch - 1.0),
        (spec.tau_a * spec.tau_b).sqrt() * sh,
    )
}

/// Output of the optimal swap of two identical lossy two-mode squeezed
/// states, in closed form:
/// c_opt = tau_a tau_b sinh^2(2r) / (2 - tau_a - tau_b + (tau_a+tau_b) cosh 2r),
/// a_opt, b_opt = 1 + 2 tau_{a,b} sinh^2 r - c_opt.
pub fn swap_lossy(spec: &ChannelSpec) -> SimpleFormParams {
    let ch = (2.0 * spec.r).cosh();
    let sh = (2.0 * spec.r).sinh();
    let s2 = spec.r.sinh().powi(2);
    let denom = 2.0 - spec.tau_a - spec.tau_b + (spec.tau_a + spec.tau_b) * ch;
    let c_opt = spec.tau_a * spec.tau_b * sh * sh / denom;
    SimpleFormParams::new(
        1.0 + 2.0 * spec.tau_a * s2 - c_opt,
        1.0 + 2.0 * spec.tau_b * s2 - c_opt,
        c_opt,
    )
}

/// Re-expresses an entangled simple-form state as a lossy two-mode squeezed
/// state: cosh(2 r_eff) = (c^2 + (a-1)(b-1)) / (c^2 - (a-1)(b-1)) and
/// tau_{a,b,eff} = (a,b - 1)/(cosh(2 r_eff) - 1). Entanglement is exactly the
/// validity condition: separable inputs have no such representation.
pub fn effective_decomposition(p: &SimpleFormParams) -> Result<EffectiveDecomposition> {
    let big_a = p.a - 1.0;
    let big_b = p.b - 1.0;
    let c2 = p.c * p.c;
    if big_a <= PHYS_TOL || big_b <= PHYS_TOL {
        // a = 1 or b = 1 is the vacuum boundary: c = 0 is forced there for
        // physical states and the decomposition degenerates (r_eff -> 0 with
        // an undetermined transmittivity).
        if c2 > PHYS_TOL {
            return Err(Error::DegenerateState(format!(
                "a or b at the vacuum boundary with c = {} != 0",
                p.c
            )));
        }
        return Err(Error::NotEntangled);
    }
    if !p.is_physical() {
        return Err(Error::NonPhysicalState {
            nu_min: p.to_standard().symplectic_eigenvalues().0,
        });
    }
    if p.is_separable()? {
        return Err(Error::NotEntangled);
    }
    let margin = c2 - big_a * big_b;
    if margin <= 0.0 {
        return Err(Error::NotEntangled);
    }
    // cosh(2 r_eff) - 1 = 2 A B / (c^2 - A B); log1p-stable arccosh.
    let u = 2.0 * big_a * big_b / margin;
    let r_eff = 0.5 * (u + (u * (u + 2.0)).sqrt()).ln_1p();
    Ok(EffectiveDecomposition {
        r_eff,
        tau_a_eff: clamp_unit(big_a / u),
        tau_b_eff: clamp_unit(big_b / u),
    })
}

/// Transmittivities are bounded by 1 for entangled states; shave off
/// floating-point excursions just above.
fn clamp_unit(tau: f64) -> f64 {
    if tau > 1.0 && tau <= 1.0 + 1e-9 {
        1.0
    } else {
        tau
    }
}

/// Effective parameters of the optimally swapped state as closed forms in the
/// input squeezing and transmittivities.
pub fn effective_params_after_swap(spec: &ChannelSpec) -> Result<EffectiveDecomposition> {
    let out = swap_lossy(spec);
    if out.is_separable()? {
        return Err(Error::NotEntangled);
    }
    let (ta, tb) = (spec.tau_a, spec.tau_b);
    let ch2 = (2.0 * spec.r).cosh();
    let ch4 = (4.0 * spec.r).cosh();
    let s2 = spec.r.sinh().powi(2);
    let num = 2.0 * (ta - ta * ta + tb - tb * tb) * ch2 + ta * tb * ch4 + 7.0 * ta * tb
        - 6.0 * (ta + tb)
        + 2.0 * (ta * ta + tb * tb)
        + 4.0;
    let den = 2.0 * (ta + tb - 1.0) * ((ta + tb) * ch2 - ta - tb + 2.0);
    let cosh2reff = num / den;
    if cosh2reff.is_nan() || cosh2reff < 1.0 {
        return Err(Error::NotEntangled);
    }
    let r_eff = 0.5 * (cosh2reff + (cosh2reff * cosh2reff - 1.0).max(0.0).sqrt()).ln();
    let tau_a_eff = -2.0 * ta * (ta + tb - 1.0) * s2 / (2.0 * ta + tb - tb * ch2 - 2.0);
    let tau_b_eff = -2.0 * tb * (ta + tb - 1.0) * s2 / (-ch2 * ta + ta + 2.0 * tb - 2.0);
    Ok(EffectiveDecomposition {
        r_eff,
        tau_a_eff: clamp_unit(tau_a_eff),
        tau_b_eff: clamp_unit(tau_b_eff),
    })
}

/// Total effective transmittivity tau_a_eff * tau_b_eff of the optimally
/// swapped state. The closed form is re-derived from the per-arm effective
/// transmittivities,
/// 4 tau_a tau_b (tau_a + tau_b - 1)^2 sinh^4 r /
/// [(2 tau_a + tau_b - tau_b cosh 2r - 2)(2 tau_b + tau_a - tau_a cosh 2r - 2)],
/// and satisfies tau_a_eff * tau_b_eff <= tau_a^2 tau_b^2 whenever the
/// swapped state is entangled, with equality only at tau_a = tau_b = 1.
pub fn total_effective_transmittivity(spec: &ChannelSpec) -> Result<f64> {
    let out = swap_lossy(spec);
    if out.is_separable()? {
        return Err(Error::NotEntangled);
    }
    let (ta, tb) = (spec.tau_a, spec.tau_b);
    let ch2 = (2.0 * spec.r).cosh();
    let s = spec.r.sinh();
    let num = 4.0 * ta * tb * (ta + tb - 1.0).powi(2) * s.powi(4);
    let den =
        (2.0 * ta + tb - tb * ch2 - 2.0) * (2.0 * tb + ta - ta * ch2 - 2.0);
    Ok(num / den)
}
