//! Deterministic random-state generators for regression suites and the
//! verification CLI. Everything is driven by an explicit ChaCha12 generator,
//! so grids are reproducible from a single seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::state::{SimpleFormParams, StandardFormParams};
use crate::swap::{BellOutcome, GainSetting};

pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Derives an independent sub-seed from a master seed and an index
/// (splitmix64 finalizer, two rounds).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    for _ in 0..2 {
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}

/// Random physical standard-form parameters with a, b in [1, a_max].
pub fn standard_physical(rng: &mut ChaCha12Rng, a_max: f64) -> StandardFormParams {
    loop {
        let a = 1.0 + rng.random::<f64>() * (a_max - 1.0);
        let b = 1.0 + rng.random::<f64>() * (a_max - 1.0);
        let cap = ((a - 1.0) * (b + 1.0)).min((a + 1.0) * (b - 1.0)).max(0.0).sqrt();
        let c_plus = rng.random::<f64>() * cap;
        let c_minus = (2.0 * rng.random::<f64>() - 1.0) * c_plus;
        let p = StandardFormParams::new(a, b, c_plus, c_minus);
        if p.is_physical() {
            return p;
        }
    }
}

/// Random entangled standard-form parameters: physical and with the smallest
/// partial-transpose symplectic eigenvalue below 1 - margin.
pub fn standard_entangled(
    rng: &mut ChaCha12Rng,
    a_max: f64,
    margin: f64,
) -> StandardFormParams {
    loop {
        let p = standard_physical(rng, a_max);
        if p.ptranspose_eigenvalues().0 < 1.0 - margin {
            return p;
        }
    }
}

/// Random physical simple-form parameters.
pub fn simple_physical(rng: &mut ChaCha12Rng, a_max: f64) -> SimpleFormParams {
    loop {
        let a = 1.0 + rng.random::<f64>() * (a_max - 1.0);
        let b = 1.0 + rng.random::<f64>() * (a_max - 1.0);
        let cap = ((a - 1.0) * (b + 1.0)).min((a + 1.0) * (b - 1.0)).max(0.0).sqrt();
        let c = rng.random::<f64>() * cap;
        let p = SimpleFormParams::new(a, b, c);
        if p.is_physical() {
            return p;
        }
    }
}

/// Random entangled simple-form parameters, with both the input and its
/// optimally swapped output entangled by the given log-negativity margin on
/// the partial-transpose eigenvalue.
pub fn simple_entangled(rng: &mut ChaCha12Rng, a_max: f64, margin: f64) -> SimpleFormParams {
    loop {
        let p = simple_physical(rng, a_max);
        if p.is_separable().unwrap_or(true) {
            continue;
        }
        if p.to_standard().ptranspose_eigenvalues().0 < 1.0 - margin {
            return p;
        }
    }
}

/// Random per-mode gains, each uniform in [-lim, lim].
pub fn per_mode_gains(rng: &mut ChaCha12Rng, lim: f64) -> GainSetting {
    GainSetting::PerMode {
        g1: (2.0 * rng.random::<f64>() - 1.0) * lim,
        g4: (2.0 * rng.random::<f64>() - 1.0) * lim,
    }
}

/// Random Bell record, each component uniform in [-scale, scale].
pub fn outcome(rng: &mut ChaCha12Rng, scale: f64) -> BellOutcome {
    BellOutcome::new(
        (2.0 * rng.random::<f64>() - 1.0) * scale,
        (2.0 * rng.random::<f64>() - 1.0) * scale,
    )
}
