//! Simulation of a weak probe pulse beating with a prepared molecular Raman
//! coherence.
//!
//! A pair of long driving fields prepares a two-level molecular medium in a
//! superposition state whose coherence oscillates at the Raman frequency
//! `ω_m`. A probe pulse sent through the prepared medium sees an
//! instantaneous susceptibility modulated at `ω_m`: its oscillation frequency
//! is multiplied by a periodic gain profile and its envelope is compressed or
//! stretched, depending on the injection time relative to the molecular
//! motion. The crate provides
//!
//! * [`core`] — units, uniform time grids, real/analytic field
//!   representations, and spectra with a fixed Fourier convention;
//! * [`medium`] — Raman polarizabilities, Stark shifts and two-photon Rabi
//!   frequencies, density-matrix evolution, and the adiabatically prepared
//!   coherence;
//! * [`analytic`] — the exact dispersionless beat engine: gain profile, time
//!   remap, conservation relations, and the Bessel-series sideband spectra;
//! * [`propagator`] — dispersive propagation in the frequency domain, over a
//!   discrete sideband comb, and in the time domain, plus the self-consistent
//!   drive cascade and the group-velocity-dispersion compression analysis;
//! * [`analysis`] — pulse and spectrum diagnostics;
//! * [`cli`] — scenario configs, presets, batch sweeps, and CSV/JSON export
//!   used by the `raman-beat` binary.
//!
//! The `examples/` directory contains one runnable program per capability;
//! start with `cargo run --example pulse_train`.

pub mod analysis;
pub mod analytic;
pub mod cli;
pub mod constants;
pub mod core;
mod error;
pub mod math;
pub mod medium;
pub mod propagator;

pub use error::{Error, Result};
