//! Parameter scans over the input squeezing for direct vs swapping-based
//! distribution, emitting one row of measures per grid point.

use cvswap_core::channels::{effective_decomposition, lossy_tmss, ChannelSpec};
use cvswap_core::measures::{eof_params, epr_opt, log_negativity_params, purity_params};
use cvswap_core::state::{SimpleFormParams, TwoModeState};
use cvswap_core::swap::{best_one_sided_gains, ensemble_cm, optimal_gains, GainSetting};

use crate::output::ScanRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Direct,
    Swap,
    Both,
}

impl std::str::FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "direct" => Ok(Scheme::Direct),
            "swap" => Ok(Scheme::Swap),
            "both" => Ok(Scheme::Both),
            other => Err(format!("unknown scheme '{other}' (expected direct, swap or both)")),
        }
    }
}

/// Displacement-gain strategy for the swapping scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainStrategy {
    Optimal,
    OptimalPerQuadrature,
    OneSided,
    Custom { g1: f64, g4: f64 },
}

impl std::str::FromStr for GainStrategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "optimal" => Ok(GainStrategy::Optimal),
            "optimal-pq" => Ok(GainStrategy::OptimalPerQuadrature),
            "one-sided" => Ok(GainStrategy::OneSided),
            other => {
                let rest = other
                    .strip_prefix("custom:")
                    .ok_or_else(|| format!("unknown gains '{other}' (expected optimal, optimal-pq, one-sided or custom:G1,G4)"))?;
                let (g1, g4) = rest
                    .split_once(',')
                    .ok_or_else(|| "custom gains need two comma-separated values".to_string())?;
                let g1 = g1.trim().parse::<f64>().map_err(|e| format!("bad g1: {e}"))?;
                let g4 = g4.trim().parse::<f64>().map_err(|e| format!("bad g4: {e}"))?;
                Ok(GainStrategy::Custom { g1, g4 })
            }
        }
    }
}

impl std::fmt::Display for GainStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GainStrategy::Optimal => write!(f, "optimal"),
            GainStrategy::OptimalPerQuadrature => write!(f, "optimal-pq"),
            GainStrategy::OneSided => write!(f, "one-sided"),
            GainStrategy::Custom { g1, g4 } => write!(f, "custom:{g1},{g4}"),
        }
    }
}

/// Fully resolved scan configuration.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub scheme: Scheme,
    pub r_values: Vec<f64>,
    /// Total loss l/l_a of the link.
    pub loss: f64,
    /// Arm-split fraction: tau_a = exp(-split * L), tau_b = exp(-(1-split) * L)
    /// per segment.
    pub split: f64,
    pub gains: GainStrategy,
    pub logneg_bits: bool,
}

pub fn r_grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![min];
    }
    (0..steps)
        .map(|i| min + (max - min) * i as f64 / (steps - 1) as f64)
        .collect()
}

fn swapped_state(r: f64, ta: f64, tb: f64, gains: GainStrategy) -> SimpleFormParams {
    let input = lossy_tmss(&ChannelSpec::new(r, ta, tb).expect("validated channel"));
    let std = input.to_standard();
    let setting = match gains {
        GainStrategy::Optimal => optimal_gains(&input).expect("physical input"),
        GainStrategy::OptimalPerQuadrature => {
            cvswap_core::swap::optimal_gains_general(&std).expect("physical input")
        }
        GainStrategy::OneSided => best_one_sided_gains(&input).expect("physical input").0,
        GainStrategy::Custom { g1, g4 } => GainSetting::PerMode { g1, g4 },
    };
    let cm = ensemble_cm(&std, &setting).expect("physical input");
    // Ensemble outputs of simple-form inputs stay in simple form.
    SimpleFormParams::new(cm[(0, 0)], cm[(2, 2)], cm[(0, 2)])
}

fn row_for(
    r: f64,
    scheme: &'static str,
    ta: f64,
    tb: f64,
    state: SimpleFormParams,
    direct_transmittivity: f64,
    logneg_bits: bool,
) -> ScanRow {
    let std = state.to_standard();
    let en_nats = log_negativity_params(&std);
    let epr = epr_opt(&state.to_state()).map(|r| r.value).unwrap_or(f64::NAN);
    let decomp = effective_decomposition(&state).ok();
    ScanRow {
        r,
        scheme,
        tau_a: ta,
        tau_b: tb,
        eof: eof_params(&std),
        eof_unit: "bits",
        log_negativity: if logneg_bits { en_nats / std::f64::consts::LN_2 } else { en_nats },
        logneg_unit: if logneg_bits { "bits" } else { "nats" },
        epr_opt: epr,
        purity: purity_params(&std),
        r_eff: decomp.as_ref().map(|d| d.r_eff),
        tau_a_eff: decomp.as_ref().map(|d| d.tau_a_eff),
        tau_b_eff: decomp.as_ref().map(|d| d.tau_b_eff),
        tau_eff_product: decomp.as_ref().map(|d| d.tau_a_eff * d.tau_b_eff),
        direct_transmittivity,
        physical: TwoModeState::from_cm(*std.to_state().cm())
            .map(|s| s.is_physical())
            .unwrap_or(false),
    }
}

/// Runs the scan; rows are computed in parallel chunks and returned in grid
/// order (direct rows first per r, then swap rows, matching the scheme).
pub fn run_scan(cfg: &ScanConfig) -> Vec<ScanRow> {
    #[derive(Clone, Copy)]
    struct Job {
        r: f64,
        direct: bool,
    }
    let mut jobs = Vec::new();
    for &r in &cfg.r_values {
        if matches!(cfg.scheme, Scheme::Direct | Scheme::Both) {
            jobs.push(Job { r, direct: true });
        }
        if matches!(cfg.scheme, Scheme::Swap | Scheme::Both) {
            jobs.push(Job { r, direct: false });
        }
    }
    let l = cfg.loss;
    let compute = |job: &Job| -> ScanRow {
        if job.direct {
            let ta = (-cfg.split * l).exp();
            let tb = (-(1.0 - cfg.split) * l).exp();
            let state = lossy_tmss(&ChannelSpec::new(job.r, ta, tb).expect("valid channel"));
            row_for(job.r, "direct", ta, tb, state, ta * tb, cfg.logneg_bits)
        } else {
            let ta = (-cfg.split * l / 2.0).exp();
            let tb = (-(1.0 - cfg.split) * l / 2.0).exp();
            let state = swapped_state(job.r, ta, tb, cfg.gains);
            row_for(job.r, "swap", ta, tb, state, (ta * tb) * (ta * tb), cfg.logneg_bits)
        }
    };

    let mut rows: Vec<Option<ScanRow>> = vec![None; jobs.len()];
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<&mut Option<ScanRow>>> =
        rows.iter_mut().map(std::sync::Mutex::new).collect();
    std::thread::scope(|scope| {
        for _ in 0..2 {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let row = compute(&jobs[i]);
                **slots[i].lock().unwrap() = Some(row);
            });
        }
    });
    rows.into_iter().map(|r| r.expect("all rows computed")).collect()
}
