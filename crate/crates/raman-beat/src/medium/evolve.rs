//! Density-matrix evolution under Stark shifts and two-photon Rabi drive.

use super::{RabiSet, RamanCoefficients, SidebandAmplitudes, TwoLevelState};
use crate::core::{Frequency, TimeGrid, WidthConvention};
use crate::error::{Error, Result};
use crate::math::{integrate_adaptive, Tolerances};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// One driving laser line: a Gaussian envelope riding on a comb frequency.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DriveField {
    pub frequency: Frequency,
    /// Peak field amplitude, V/m.
    pub amplitude: f64,
    pub peak_time: f64,
    pub width: f64,
    pub convention: WidthConvention,
    pub phase: f64,
}

impl DriveField {
    /// Complex envelope at local time `tau`.
    pub fn envelope_at(&self, tau: f64) -> Complex64 {
        let c = match self.convention {
            WidthConvention::IntensityFwhm => {
                2.0 * std::f64::consts::LN_2 / (self.width * self.width)
            }
            WidthConvention::FieldFwhm => {
                4.0 * std::f64::consts::LN_2 / (self.width * self.width)
            }
            WidthConvention::OneOverEField => 1.0 / (self.width * self.width),
        };
        let u = tau - self.peak_time;
        Complex64::from_polar(self.amplitude * (-c * u * u).exp(), self.phase)
    }
}

/// Two-line drive with its two-photon detuning and the phenomenological
/// decay rates.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DriveConfig {
    /// Lower drive line.
    pub lower: DriveField,
    /// Upper drive line, one Raman quantum above the lower one.
    pub upper: DriveField,
    /// Two-photon detuning δ = ω_ba - ω_m, rad/s.
    pub delta: f64,
    /// Population decay rate, s⁻¹.
    pub gamma1: f64,
    /// Coherence decay rate, s⁻¹.
    pub gamma2: f64,
}

impl DriveConfig {
    /// The comb lines must sit exactly one modulation quantum apart.
    pub fn validate(&self, omega_m: f64) -> Result<()> {
        let diff = self.upper.frequency.rad_per_s() - self.lower.frequency.rad_per_s();
        if (diff - omega_m).abs() > 1e-6 * omega_m {
            return Err(Error::Validation(format!(
                "drive frequency difference {diff:.6e} is not the modulation frequency {omega_m:.6e}"
            )));
        }
        if self.gamma1 < 0.0 || self.gamma2 < 0.0 {
            return Err(Error::Validation("decay rates must be non-negative".into()));
        }
        Ok(())
    }
}

/// Right-hand side of the two-level density-matrix equations with decay:
///
/// ```text
/// ρ̇_aa =  i(Ω_ab ρ_ba - Ω_ba ρ_ab) + γ₁ ρ_bb
/// ρ̇_bb = -i(Ω_ab ρ_ba - Ω_ba ρ_ab) - γ₁ ρ_bb
/// ρ̇_ab =  i(Ω_aa - Ω_bb + δ + iγ₂) ρ_ab + i Ω_ab (ρ_bb - ρ_aa)
/// ```
fn rhs(state: &[f64; 4], rabi: &RabiSet, delta: f64, gamma1: f64, gamma2: f64) -> [f64; 4] {
    let rho_ab = Complex64::new(state[2], state[3]);
    let rho_ba = rho_ab.conj();
    let flow = (Complex64::i() * (rabi.om_ab * rho_ba - rabi.om_ba * rho_ab)).re;
    let dab = Complex64::i()
        * (Complex64::new(rabi.om_aa - rabi.om_bb + delta, gamma2) * rho_ab
            + rabi.om_ab * (state[1] - state[0]));
    [flow + gamma1 * state[1], -flow - gamma1 * state[1], dab.re, dab.im]
}

/// Integrate the density-matrix equations over the grid and return the
/// state trajectory sampled at the grid points.
///
/// `rabi` supplies the instantaneous Stark shifts and Rabi frequencies at
/// any local time; adaptive embedded stepping keeps the local truncation
/// error at the `tol` level across the ns-drive/fs-probe timescale gap.
pub fn evolve_state(
    initial: &TwoLevelState,
    delta: f64,
    gamma1: f64,
    gamma2: f64,
    mut rabi: impl FnMut(f64) -> RabiSet,
    grid: &TimeGrid,
    tol: Tolerances,
) -> Result<Vec<TwoLevelState>> {
    initial.validate()?;
    let y0 = [
        initial.rho_aa,
        initial.rho_bb,
        initial.rho_ab.re,
        initial.rho_ab.im,
    ];
    let t0 = grid.time(0);
    let t1 = grid.time(grid.len() - 1);
    let output: Vec<f64> = grid.times().skip(1).take(grid.len() - 2).collect();
    let mut trajectory = Vec::with_capacity(grid.len());
    let mut f = |t: f64, y: &[f64; 4]| rhs(y, &rabi(t), delta, gamma1, gamma2);
    integrate_adaptive(&mut f, t0, t1, y0, &output, tol, |_t, y| {
        trajectory.push(TwoLevelState {
            rho_aa: y[0],
            rho_bb: y[1],
            rho_ab: Complex64::new(y[2], y[3]),
        });
    })?;
    if trajectory.len() != grid.len() {
        return Err(Error::Grid(format!(
            "trajectory length {} does not match grid {}",
            trajectory.len(),
            grid.len()
        )));
    }
    Ok(trajectory)
}

/// Evolve the state under a two-line drive, building the Rabi set from the
/// drive envelopes at every integrator time.
pub fn evolve_with_drive(
    initial: &TwoLevelState,
    drive: &DriveConfig,
    coeffs: &dyn RamanCoefficients,
    grid: &TimeGrid,
    tol: Tolerances,
) -> Result<Vec<TwoLevelState>> {
    let omega_m = drive.upper.frequency.rad_per_s() - drive.lower.frequency.rad_per_s();
    drive.validate(omega_m)?;
    let omega_lowest = drive.lower.frequency.rad_per_s();
    let rabi = |tau: f64| {
        let comb = SidebandAmplitudes {
            omega_lowest,
            omega_m,
            amplitudes: vec![drive.lower.envelope_at(tau), drive.upper.envelope_at(tau)],
        };
        super::rabi_and_stark(&comb, coeffs)
    };
    evolve_state(initial, drive.delta, drive.gamma1, drive.gamma2, rabi, grid, tol)
}
