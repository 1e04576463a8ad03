//! Continuous-variable Bell-measurement entanglement swapping.
//!
//! Two identical two-mode states sit on modes (1,2) and (3,4). Modes 2 and 3
//! interfere on a 50:50 beam splitter, q of one output port and p of the
//! other are measured by homodyne detection, and modes 1 and 4 are displaced
//! by the measurement record scaled with gain factors. Everything here is
//! closed-form covariance algebra; the `oracle` module re-derives the same
//! moments by Monte Carlo sampling, and [`beam_splitter_cm`] /
//! [`condition_on_homodyne`] provide a constructive 8x8 route so the
//! conditional-state formula is checked rather than assumed.

use nalgebra::{Matrix2, Matrix4, SMatrix, Vector2, Vector4};

use crate::error::{Error, Result};
use crate::state::{SimpleFormParams, StandardFormParams, TwoModeState, PHYS_TOL};

/// Which output mode a one-sided displacement acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    One,
    Four,
}

/// Displacement gain strategy for the two kept modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainSetting {
    /// One scalar gain applied to both modes.
    SymmetricScalar(f64),
    /// Independent gains for modes 1 and 4.
    PerMode { g1: f64, g4: f64 },
    /// Quadrature-resolved gains.
    PerQuadrature { g1q: f64, g1p: f64, g4q: f64, g4p: f64 },
    /// Displace only one mode; sugar for PerMode with the other gain zero.
    OneSided { g: f64, mode: Mode },
}

impl GainSetting {
    /// Canonical quadrature-resolved gains (g1q, g1p, g4q, g4p).
    pub fn per_quadrature(&self) -> (f64, f64, f64, f64) {
        match *self {
            GainSetting::SymmetricScalar(g) => (g, g, g, g),
            GainSetting::PerMode { g1, g4 } => (g1, g1, g4, g4),
            GainSetting::PerQuadrature { g1q, g1p, g4q, g4p } => (g1q, g1p, g4q, g4p),
            GainSetting::OneSided { g, mode: Mode::One } => (g, g, 0.0, 0.0),
            GainSetting::OneSided { g, mode: Mode::Four } => (0.0, 0.0, g, g),
        }
    }

    /// Per-mode gains when the setting is phase-independent.
    pub fn per_mode(&self) -> Option<(f64, f64)> {
        let (g1q, g1p, g4q, g4p) = self.per_quadrature();
        if g1q == g1p && g4q == g4p {
            Some((g1q, g4q))
        } else {
            None
        }
    }

    pub fn is_finite(&self) -> bool {
        let (a, b, c, d) = self.per_quadrature();
        a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite()
    }
}

/// A Bell measurement record (q_u', p_v').
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellOutcome {
    pub qu: f64,
    pub pv: f64,
}

impl BellOutcome {
    pub fn new(qu: f64, pv: f64) -> Self {
        Self { qu, pv }
    }
}

fn require_physical(input: &StandardFormParams) -> Result<()> {
    if !input.is_physical() {
        return Err(Error::NonPhysicalState { nu_min: input.symplectic_eigenvalues().0 });
    }
    Ok(())
}

fn require_finite_gains(gains: &GainSetting) -> Result<()> {
    if !gains.is_finite() {
        return Err(Error::NonFinite("gain setting"));
    }
    Ok(())
}

/// Covariance matrix of the conditional output state on modes (1,4). It does
/// not depend on the measurement record: diagonals a - c±²/(a+b) and
/// b - c±²/(a+b), off-diagonals +c₊²/(a+b) in q and -c₋²/(a+b) in p.
pub fn conditional_cm(input: &StandardFormParams) -> Result<Matrix4<f64>> {
    require_physical(input)?;
    let s = input.a + input.b;
    let kp = input.c_plus * input.c_plus / s;
    let km = input.c_minus * input.c_minus / s;
    Ok(Matrix4::new(
        input.a - kp, 0.0, kp, 0.0,
        0.0, input.a - km, 0.0, -km,
        kp, 0.0, input.b - kp, 0.0,
        0.0, -km, 0.0, input.b - km,
    ))
}

/// First moments of the displaced conditional state for a given record and
/// gain setting, from Gaussian conditioning of the post-beam-splitter state
/// plus the displacement rule
/// q1 -> q1 - √2 g1q q_u', p1 -> p1 + √2 g1p p_v',
/// q4 -> q4 + √2 g4q q_u', p4 -> p4 + √2 g4p p_v'.
pub fn conditional_mean(
    input: &StandardFormParams,
    outcome: &BellOutcome,
    gains: &GainSetting,
) -> Result<Vector4<f64>> {
    require_physical(input)?;
    require_finite_gains(gains)?;
    let s = input.a + input.b;
    let (g1q, g1p, g4q, g4p) = gains.per_quadrature();
    let rt2 = std::f64::consts::SQRT_2;
    Ok(Vector4::new(
        rt2 * outcome.qu * (input.c_plus / s - g1q),
        rt2 * outcome.pv * (input.c_minus / s + g1p),
        rt2 * outcome.qu * (-input.c_plus / s + g4q),
        rt2 * outcome.pv * (input.c_minus / s + g4p),
    ))
}

/// Coefficients of the linear term in the exponent of the displaced
/// conditional Wigner function. The first moments relate to this vector v by
/// mean = conditional_cm * v, which the tests use as a cross-check on
/// [`conditional_mean`].
pub fn conditional_linear_coefficients(
    input: &StandardFormParams,
    outcome: &BellOutcome,
    gains: &GainSetting,
) -> Result<Vector4<f64>> {
    require_physical(input)?;
    let (a, b) = (input.a, input.b);
    let (cp, cm) = (input.c_plus, input.c_minus);
    let s = a + b;
    let dp = s * (a * b - cp * cp);
    let dm = s * (a * b - cm * cm);
    let (g1q, g1p, g4q, g4p) = gains.per_quadrature();
    let rt2 = std::f64::consts::SQRT_2;
    Ok(Vector4::new(
        -rt2 * outcome.qu * (g1q * b * b + (a * g1q - cp) * b + cp * cp * (g4q - g1q)) / dp,
        rt2 * outcome.pv * (g1p * b * b + (cm + a * g1p) * b + cm * cm * (g4p - g1p)) / dm,
        rt2 * outcome.qu * (g4q * a * a + (b * g4q - cp) * a + cp * cp * (g1q - g4q)) / dp,
        rt2 * outcome.pv * (g4p * a * a + (cm + b * g4p) * a + cm * cm * (g1p - g4p)) / dm,
    ))
}

/// Ensemble-average covariance matrix after averaging the displaced
/// conditional states over all measurement records.
pub fn ensemble_cm(input: &StandardFormParams, gains: &GainSetting) -> Result<Matrix4<f64>> {
    require_physical(input)?;
    require_finite_gains(gains)?;
    let (a, b) = (input.a, input.b);
    let (cp, cm) = (input.c_plus, input.c_minus);
    let s = a + b;
    let (g1q, g1p, g4q, g4p) = gains.per_quadrature();
    let qq = cp * (g1q + g4q) - g1q * g4q * s;
    let pp = cm * (g1p + g4p) + g1p * g4p * s;
    Ok(Matrix4::new(
        a + s * g1q * g1q - 2.0 * cp * g1q, 0.0, qq, 0.0,
        0.0, a + s * g1p * g1p + 2.0 * cm * g1p, 0.0, pp,
        qq, 0.0, b + s * g4q * g4q - 2.0 * cp * g4q, 0.0,
        0.0, pp, 0.0, b + s * g4p * g4p + 2.0 * cm * g4p,
    ))
}

/// Ensemble CM of a simple-form input stays in simple form for any per-mode
/// gains; this returns the output parameters directly.
pub fn ensemble_simple(input: &SimpleFormParams, g1: f64, g4: f64) -> SimpleFormParams {
    let s = input.a + input.b;
    SimpleFormParams::new(
        input.a + s * g1 * g1 - 2.0 * input.c * g1,
        input.b + s * g4 * g4 - 2.0 * input.c * g4,
        input.c * (g1 + g4) - g1 * g4 * s,
    )
}

/// Gains that cancel the record-dependent displacement for simple-form
/// inputs: g1 = g4 = c/(a+b).
pub fn optimal_gains(input: &SimpleFormParams) -> Result<GainSetting> {
    let std = input.to_standard();
    require_physical(&std)?;
    let g = input.c / (input.a + input.b);
    Ok(GainSetting::PerMode { g1: g, g4: g })
}

/// Quadrature-resolved gains that cancel the displacement even when
/// c_plus != -c_minus: g_q = c_plus/(a+b), g_p = -c_minus/(a+b) on both modes.
pub fn optimal_gains_general(input: &StandardFormParams) -> Result<GainSetting> {
    require_physical(input)?;
    let s = input.a + input.b;
    Ok(GainSetting::PerQuadrature {
        g1q: input.c_plus / s,
        g1p: -input.c_minus / s,
        g4q: input.c_plus / s,
        g4p: -input.c_minus / s,
    })
}

/// Optimal swapped state for simple-form inputs:
/// (a - c²/(a+b), b - c²/(a+b), c²/(a+b)). Equals the ensemble CM at the
/// optimal gains and the conditional CM.
pub fn swap_optimal(input: &SimpleFormParams) -> Result<SimpleFormParams> {
    let std = input.to_standard();
    require_physical(&std)?;
    let k = input.c * input.c / (input.a + input.b);
    Ok(SimpleFormParams::new(input.a - k, input.b - k, k))
}

/// The best one-sided displacement: scans the single gain on each mode for
/// the setting that minimizes the optimized EPR variance of the ensemble
/// output. One-sided displacements cannot cancel the record-dependent terms,
/// so the winner is still strictly worse than [`optimal_gains`]'s two-sided
/// setting on entangled inputs.
pub fn best_one_sided_gains(input: &SimpleFormParams) -> Result<(GainSetting, f64)> {
    let std = input.to_standard();
    require_physical(&std)?;
    let mut best: Option<(GainSetting, f64)> = None;
    for mode in [Mode::One, Mode::Four] {
        let value_at = |g: f64| -> f64 {
            let gains = GainSetting::OneSided { g, mode };
            let ens = ensemble_cm(&std, &gains).expect("physical input");
            let state = TwoModeState::from_cm(ens).expect("symmetric");
            crate::measures::epr_opt(&state).map(|r| r.value).unwrap_or(f64::INFINITY)
        };
        let (g, value) = crate::optim::scan_golden(value_at, -1.5, 1.5, 61, 60);
        if best.as_ref().is_none_or(|b| value < b.1) {
            best = Some((GainSetting::OneSided { g, mode }, value));
        }
    }
    Ok(best.expect("two modes scanned"))
}

/// The path in the (g1, g4) plane along which the output logarithmic
/// negativity is critical (and constant):
/// g1(t) = c/(a+b) + (a² - b² + sqrt(4c⁴ + (a² - b²)²)) t,
/// g4(t) = c/(a+b) - 2c² t.
pub fn critical_gain_path(input: &SimpleFormParams, t: f64) -> Result<GainSetting> {
    if input.is_separable()? {
        return Err(Error::NotEntangled);
    }
    let g0 = input.c / (input.a + input.b);
    let d = input.a * input.a - input.b * input.b;
    let root = (4.0 * input.c.powi(4) + d * d).sqrt();
    Ok(GainSetting::PerMode {
        g1: g0 + (d + root) * t,
        g4: g0 - 2.0 * input.c * input.c * t,
    })
}

/// Product covariance matrix of two identical copies of the input on modes
/// (1,2) and (3,4), ordering (q1,p1,...,q4,p4).
pub fn product_input_cm(input: &StandardFormParams) -> SMatrix<f64, 8, 8> {
    let four = input.to_state();
    let cm = four.cm();
    let mut out = SMatrix::<f64, 8, 8>::zeros();
    out.fixed_view_mut::<4, 4>(0, 0).copy_from(cm);
    out.fixed_view_mut::<4, 4>(4, 4).copy_from(cm);
    out
}

/// Applies the 50:50 beam splitter a_u = (a2 - a3)/√2, a_v = (a2 + a3)/√2 to
/// modes 2 and 3 of a four-mode covariance matrix. The returned ordering is
/// (q1,p1,q_u,p_u,q_v,p_v,q4,p4).
pub fn beam_splitter_cm(four_mode_cm: &SMatrix<f64, 8, 8>) -> SMatrix<f64, 8, 8> {
    let mut s = SMatrix::<f64, 8, 8>::identity();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    // q_u = (q2 - q3)/√2, p_u = (p2 - p3)/√2
    // q_v = (q2 + q3)/√2, p_v = (p2 + p3)/√2
    s[(2, 2)] = r;
    s[(2, 4)] = -r;
    s[(3, 3)] = r;
    s[(3, 5)] = -r;
    s[(4, 2)] = r;
    s[(4, 4)] = r;
    s[(5, 3)] = r;
    s[(5, 5)] = r;
    s * four_mode_cm * s.transpose()
}

/// Gaussian-conditions the post-beam-splitter state on a homodyne record
/// (q_u, p_v). Returns the conditional two-mode state on (1,4), including the
/// record-dependent first moments at zero gain, together with the 2x2
/// covariance of the measured pair that parameterizes pr(q_u', p_v').
pub fn condition_on_homodyne(
    bs_cm: &SMatrix<f64, 8, 8>,
    outcome: &BellOutcome,
) -> Result<(TwoModeState, Matrix2<f64>)> {
    const KEPT: [usize; 4] = [0, 1, 6, 7];
    const MEASURED: [usize; 2] = [2, 5]; // q_u, p_v

    let mut skk = Matrix4::<f64>::zeros();
    let mut skm = SMatrix::<f64, 4, 2>::zeros();
    let mut smm = Matrix2::<f64>::zeros();
    for (i, &ki) in KEPT.iter().enumerate() {
        for (j, &kj) in KEPT.iter().enumerate() {
            skk[(i, j)] = bs_cm[(ki, kj)];
        }
        for (j, &mj) in MEASURED.iter().enumerate() {
            skm[(i, j)] = bs_cm[(ki, mj)];
        }
    }
    for (i, &mi) in MEASURED.iter().enumerate() {
        for (j, &mj) in MEASURED.iter().enumerate() {
            smm[(i, j)] = bs_cm[(mi, mj)];
        }
    }
    let det = smm.determinant();
    if det.abs() < PHYS_TOL {
        return Err(Error::SingularConditioning(det));
    }
    let smm_inv = smm.try_inverse().ok_or(Error::SingularConditioning(det))?;
    let cond = skk - skm * smm_inv * skm.transpose();
    let mean = skm * smm_inv * Vector2::new(outcome.qu, outcome.pv);
    Ok((TwoModeState::new(cond, mean)?, smm))
}
