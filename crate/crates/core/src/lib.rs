//! Security analysis for continuous-variable quantum key distribution with
//! thermal (noisy) Gaussian resource states.
//!
//! The library computes secret key rates against collective Gaussian attacks
//! of the entangling-cloner type, for the four protocol variants obtained by
//! combining direct/reverse reconciliation with homodyne/heterodyne
//! detection. On top of the rate functionals it provides security-threshold
//! searches, parameter sweeps, the infinite-preparation-noise (classical)
//! limit, and wavelength-dependent security maps driven by Planck-law
//! thermal loading.
//!
//! # Conventions
//!
//! Everything is expressed in shot-noise units: the vacuum state has
//! quadrature variance 1. Covariance matrices use the interleaved quadrature
//! ordering (Q1, P1, ..., Qn, Pn). Rates and entropies are in bits (per
//! channel use).
//!
//! # Modules
//!
//! - [`gaussian`] — symplectic spectra, von Neumann entropy, measurement
//!   conditioning of Gaussian states.
//! - [`channel`] — thermal-state source and entangling-cloner channel model.
//! - [`rates`] — mutual informations, Holevo bounds and secret key rates.
//! - [`analysis`] — threshold/crossover root finding, sweeps, classical limit.
//! - [`spectrum`] — Planck-law thermal loading and entanglement-breaking
//!   bounds across the electromagnetic spectrum.
//! - [`mc_oracle`] — seeded Monte-Carlo sampler for the quadrature-level
//!   model, used to verify the Shannon layer empirically.

pub mod analysis;
pub mod channel;
mod error;
pub mod gaussian;
pub mod mc_oracle;
mod par;
pub mod rates;
pub mod spectrum;

pub use error::{Error, Result};
