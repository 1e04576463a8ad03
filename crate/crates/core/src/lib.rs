//! Covariance-matrix toolkit for continuous-variable entanglement swapping
//! over lossy channels.
//!
//! The crate models two-mode Gaussian states by their covariance matrices
//! (vacuum variance 1), implements the Bell-measurement swapping pipeline in
//! closed form (conditional state, gain-weighted displacements, ensemble
//! averaging, optimal gains), the usual state-quality functionals (purity,
//! logarithmic negativity, optimized EPR correlations, entanglement of
//! formation), lossy-channel state preparation with the effective-loss
//! re-expression of swapped states, and an independent Monte Carlo
//! phase-space oracle that re-derives the swapping moments by sampling.
//!
//! Modules:
//! * [`state`] - state carriers, standard-form reduction, physicality and
//!   separability predicates, symplectic invariants.
//! * [`swap`] - the swapping pipeline, both as closed-form covariance algebra
//!   and as a constructive 8x8 beam-splitter + homodyne-conditioning route.
//! * [`measures`] - purity, log-negativity, EPR optimization, EoF.
//! * [`channels`] - lossy two-mode squeezed links and effective-loss
//!   analysis.
//! * [`oracle`] - seeded Monte Carlo verification of the pipeline.
//! * [`sampling`] - deterministic random-state generators for test grids.
//!
//! # Example
//!
//! Swap two lossy two-mode squeezed links and re-express the output as a
//! direct transmission:
//!
//! ```
//! use cvswap_core::channels::{effective_decomposition, lossy_tmss, ChannelSpec};
//! use cvswap_core::measures::purity_params;
//! use cvswap_core::swap::swap_optimal;
//!
//! // squeezing r = 1.0 into two arms with 10% and 40% loss
//! let link = ChannelSpec::new(1.0, 0.9, 0.6).unwrap();
//! let input = lossy_tmss(&link);
//! let output = swap_optimal(&input).unwrap();
//!
//! // optimal swapping preserves the purity of the inputs
//! let drift = purity_params(&output.to_standard()) - purity_params(&input.to_standard());
//! assert!(drift.abs() < 1e-12);
//!
//! // the swapped state is again a lossy two-mode squeezed state, with less
//! // total transmittivity than direct transmission over the full distance
//! let eff = effective_decomposition(&output).unwrap();
//! assert!(eff.tau_a_eff * eff.tau_b_eff <= (0.9f64 * 0.6).powi(2));
//! ```

pub mod channels;
pub mod error;
pub mod measures;
pub(crate) mod optim;
pub mod oracle;
pub mod sampling;
pub mod state;
pub mod swap;

pub use error::{Error, Result};
pub use state::{SimpleFormParams, StandardFormParams, TwoModeState};
