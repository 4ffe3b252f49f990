//! Propagation of a discrete sideband comb, with or without the envelope
//! time derivatives.
//!
//! With the medium state frozen in z the envelope system has constant
//! coefficients in τ, so in envelope-frequency space it decouples into an
//! independent tridiagonal line system per bin: the derivative terms turn
//! into the Taylor shift `x(ω_q) + x'(ω_q)·ω + x''(ω_q)·ω²/2` of every
//! coefficient at the bin offset ω. Each per-bin system is integrated with
//! RK4 in an interaction picture over its diagonal phases.

use super::{CoefficientTables, PropagationConfig};
use crate::core::fft::{bin_omegas, FftPlan};
use crate::core::{AnalyticField, TimeGrid};
use crate::error::{Error, Result};
use crate::medium::{kappa_of, SidebandAmplitudes, TwoLevelState};
use num_complex::Complex64;

/// Envelope storage of a sideband comb.
#[derive(Debug, Clone)]
pub enum Envelopes {
    /// One constant complex amplitude per line (monochromatic comb).
    Constant(Vec<Complex64>),
    /// Per-line envelopes sampled on a shared local-time grid;
    /// `data[line][sample]`.
    Sampled { grid: TimeGrid, data: Vec<Vec<Complex64>> },
}

/// Complex envelopes `E_q` on the comb `ω_q = ω₀ + q·ω_m`.
#[derive(Debug, Clone)]
pub struct SidebandSet {
    /// Comb anchor frequency (line q = 0), rad/s.
    pub omega0: f64,
    /// Comb spacing, rad/s.
    pub omega_m: f64,
    pub q_min: i32,
    pub q_max: i32,
    pub env: Envelopes,
}

impl SidebandSet {
    pub fn constant(
        omega0: f64,
        omega_m: f64,
        q_min: i32,
        q_max: i32,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        let set = Self { omega0, omega_m, q_min, q_max, env: Envelopes::Constant(amplitudes) };
        set.validate()?;
        Ok(set)
    }

    pub fn n_lines(&self) -> usize {
        (self.q_max - self.q_min + 1) as usize
    }

    pub fn omega_q(&self, q: i32) -> f64 {
        self.omega0 + q as f64 * self.omega_m
    }

    pub fn line_index(&self, q: i32) -> Option<usize> {
        if q < self.q_min || q > self.q_max {
            None
        } else {
            Some((q - self.q_min) as usize)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.q_min > self.q_max {
            return Err(Error::Domain("empty sideband range".into()));
        }
        if self.omega_q(self.q_min) <= 0.0 {
            return Err(Error::Domain(format!(
                "lowest comb line ω_{} = {:.3e} rad/s is not positive",
                self.q_min,
                self.omega_q(self.q_min)
            )));
        }
        let lines = self.n_lines();
        match &self.env {
            Envelopes::Constant(a) if a.len() != lines => Err(Error::Domain(format!(
                "expected {lines} amplitudes, got {}",
                a.len()
            ))),
            Envelopes::Sampled { grid, data } => {
                if data.len() != lines {
                    return Err(Error::Domain(format!(
                        "expected {lines} envelopes, got {}",
                        data.len()
                    )));
                }
                if data.iter().any(|e| e.len() != grid.len()) {
                    return Err(Error::Grid("envelope length does not match grid".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Photon flux `Σ_q |E_q|²/ω_q` (τ-resolved envelopes are integrated
    /// over the grid).
    pub fn photon_flux(&self) -> f64 {
        match &self.env {
            Envelopes::Constant(amps) => amps
                .iter()
                .enumerate()
                .map(|(i, a)| a.norm_sqr() / self.omega_q(self.q_min + i as i32))
                .sum(),
            Envelopes::Sampled { grid, data } => data
                .iter()
                .enumerate()
                .map(|(i, env)| {
                    let w = self.omega_q(self.q_min + i as i32);
                    env.iter().map(|a| a.norm_sqr()).sum::<f64>() * grid.dt() / w
                })
                .sum(),
        }
    }

    /// Photon flux at one local time (sampled envelopes only).
    pub fn photon_flux_at(&self, tau: f64) -> f64 {
        let amps = self.amplitudes_at(tau);
        amps.amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm_sqr() / (amps.omega_lowest + i as f64 * amps.omega_m))
            .sum()
    }

    /// Line amplitudes at a given local time, for the Rabi/Stark reduction.
    pub fn amplitudes_at(&self, tau: f64) -> SidebandAmplitudes {
        let amplitudes = match &self.env {
            Envelopes::Constant(a) => a.clone(),
            Envelopes::Sampled { grid, data } => {
                let x = (tau - grid.origin()) / grid.dt();
                let i = x.floor().clamp(0.0, (grid.len() - 2) as f64) as usize;
                let w = (x - i as f64).clamp(0.0, 1.0);
                data.iter().map(|env| env[i] * (1.0 - w) + env[i + 1] * w).collect()
            }
        };
        SidebandAmplitudes {
            omega_lowest: self.omega_q(self.q_min),
            omega_m: self.omega_m,
            amplitudes,
        }
    }

    /// Peak line magnitude over the whole set.
    pub fn peak_amplitude(&self) -> f64 {
        match &self.env {
            Envelopes::Constant(a) => a.iter().fold(0.0_f64, |m, v| m.max(v.norm())),
            Envelopes::Sampled { data, .. } => data
                .iter()
                .flat_map(|env| env.iter())
                .fold(0.0_f64, |m, v| m.max(v.norm())),
        }
    }

    /// Synthesize the positive-frequency field `Σ_q E_q e^{-iω_q τ}` on a
    /// grid.
    pub fn synthesize(&self, grid: &TimeGrid) -> AnalyticField {
        let mut samples = vec![Complex64::default(); grid.len()];
        for line in 0..self.n_lines() {
            let q = self.q_min + line as i32;
            let w = self.omega_q(q);
            match &self.env {
                Envelopes::Constant(a) => {
                    let amp = a[line];
                    for (k, t) in grid.times().enumerate() {
                        samples[k] += amp * Complex64::from_polar(1.0, -w * t);
                    }
                }
                Envelopes::Sampled { grid: egrid, data } => {
                    let env = &data[line];
                    for (k, t) in grid.times().enumerate() {
                        let x = (t - egrid.origin()) / egrid.dt();
                        let j = x.floor().clamp(0.0, (egrid.len() - 2) as f64) as usize;
                        let frac = (x - j as f64).clamp(0.0, 1.0);
                        let amp = env[j] * (1.0 - frac) + env[j + 1] * frac;
                        samples[k] += amp * Complex64::from_polar(1.0, -w * t);
                    }
                }
            }
        }
        AnalyticField::new(*grid, samples).expect("grid/sample length match")
    }
}

/// Per-line coefficient triples `(value, d1, d2)` of the diagonal and the
/// two couplings, weighted by the populations.
struct LineCoefficients {
    diag: [f64; 3],
    g: [f64; 3],
    h: [f64; 3],
}

impl LineCoefficients {
    /// Taylor shift of every coefficient to bin offset `w`.
    fn at_offset(&self, w: f64) -> (f64, f64, f64) {
        let ev = |c: &[f64; 3]| c[0] + c[1] * w + 0.5 * c[2] * w * w;
        (ev(&self.diag), ev(&self.g), ev(&self.h))
    }
}

fn line_coefficients(
    set: &SidebandSet,
    state: &TwoLevelState,
    tables: &CoefficientTables,
) -> Vec<LineCoefficients> {
    (set.q_min..=set.q_max)
        .map(|q| {
            let w = set.omega_q(q);
            let a = tables.alpha_at(w);
            let b = tables.beta_at(w);
            let g = tables.g_at(w);
            let h = tables.h_at(w);
            LineCoefficients {
                diag: [
                    a.value * state.rho_aa + b.value * state.rho_bb,
                    a.d1 * state.rho_aa + b.d1 * state.rho_bb,
                    a.d2 * state.rho_aa + b.d2 * state.rho_bb,
                ],
                g: [g.value, g.d1, g.d2],
                h: [h.value, h.d1, h.d2],
            }
        })
        .collect()
}

/// Integrate one line system `dE_q/dz = i[diag_q E_q + g_q ρ_ba(z) E_{q-1}
/// + h_q ρ_ab(z) E_{q+1}]` with RK4 in the diagonal interaction picture.
#[allow(clippy::too_many_arguments)]
fn integrate_line_system(
    amps: &mut [Complex64],
    diag: &[f64],
    g: &[f64],
    h: &[f64],
    rho_ab0: Complex64,
    kappa: f64,
    dz: f64,
    n_steps: usize,
    z_end: f64,
) {
    let n = amps.len();
    let beat_g: Vec<f64> =
        (0..n).map(|i| if i > 0 { diag[i - 1] - diag[i] + kappa } else { 0.0 }).collect();
    let beat_h: Vec<f64> =
        (0..n).map(|i| if i + 1 < n { diag[i + 1] - diag[i] - kappa } else { 0.0 }).collect();

    let rhs = |z: f64, u: &[Complex64], out: &mut [Complex64]| {
        for i in 0..n {
            let mut acc = Complex64::default();
            if i > 0 && g[i] != 0.0 {
                acc += g[i]
                    * rho_ab0.conj()
                    * Complex64::from_polar(1.0, beat_g[i] * z)
                    * u[i - 1];
            }
            if i + 1 < n && h[i] != 0.0 {
                acc += h[i] * rho_ab0 * Complex64::from_polar(1.0, beat_h[i] * z) * u[i + 1];
            }
            out[i] = Complex64::i() * acc;
        }
    };

    let mut k1 = vec![Complex64::default(); n];
    let mut k2 = vec![Complex64::default(); n];
    let mut k3 = vec![Complex64::default(); n];
    let mut k4 = vec![Complex64::default(); n];
    let mut stage = vec![Complex64::default(); n];
    for step in 0..n_steps {
        let z0 = step as f64 * dz;
        rhs(z0, amps, &mut k1);
        for i in 0..n {
            stage[i] = amps[i] + 0.5 * dz * k1[i];
        }
        rhs(z0 + 0.5 * dz, &stage, &mut k2);
        for i in 0..n {
            stage[i] = amps[i] + 0.5 * dz * k2[i];
        }
        rhs(z0 + 0.5 * dz, &stage, &mut k3);
        for i in 0..n {
            stage[i] = amps[i] + dz * k3[i];
        }
        rhs(z0 + dz, &stage, &mut k4);
        for i in 0..n {
            amps[i] += dz / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    for (i, v) in amps.iter_mut().enumerate() {
        *v *= Complex64::from_polar(1.0, diag[i] * z_end);
    }
}

/// Propagate a sideband comb through a frozen prepared state.
///
/// With `full = false` the envelopes obey the slowly-varying-envelope
/// system (no time derivatives); `full = true` adds the group-velocity and
/// GVD envelope terms and requires sampled envelopes. The coherence phase
/// `e^{-iκz}` advances analytically.
pub fn propagate_sidebands(
    set: &SidebandSet,
    state: &TwoLevelState,
    tables: &CoefficientTables,
    cfg: &PropagationConfig,
    full: bool,
) -> Result<SidebandSet> {
    set.validate()?;
    let kappa = kappa_of(&tables.params, state);
    let coeffs = line_coefficients(set, state, tables);
    let rho0 = state.rho_ab.norm();
    let rho_ab0 = state.rho_ab;

    match (&set.env, full) {
        (Envelopes::Constant(amps), false) => {
            let lambda = coeffs
                .iter()
                .map(|c| rho0 * (c.g[0].abs() + c.h[0].abs()))
                .fold(0.0_f64, f64::max)
                + 2.0 * kappa.abs();
            let (dz, n_steps) = cfg.resolve_dz(lambda)?;
            let diag: Vec<f64> = coeffs.iter().map(|c| c.diag[0]).collect();
            let g: Vec<f64> = coeffs.iter().map(|c| c.g[0]).collect();
            let h: Vec<f64> = coeffs.iter().map(|c| c.h[0]).collect();
            let mut out = amps.clone();
            integrate_line_system(
                &mut out, &diag, &g, &h, rho_ab0, kappa, dz, n_steps, cfg.z_end,
            );
            Ok(SidebandSet { env: Envelopes::Constant(out), ..set.clone() })
        }
        (Envelopes::Constant(_), true) => Err(Error::Domain(
            "envelope time derivatives require sampled envelopes".into(),
        )),
        (Envelopes::Sampled { grid, data }, _) => {
            if !grid.len().is_power_of_two() {
                return Err(Error::Grid(
                    "sampled envelopes need a power-of-two grid".into(),
                ));
            }
            let n_lines = set.n_lines();
            let nt = grid.len();
            let omega_env = grid.nyquist();
            let lambda = coeffs
                .iter()
                .map(|c| {
                    let mut l = rho0 * (c.g[0].abs() + c.h[0].abs());
                    if full {
                        l += rho0
                            * (omega_env * (c.g[1].abs() + c.h[1].abs())
                                + 0.5 * omega_env * omega_env * (c.g[2].abs() + c.h[2].abs()));
                    }
                    l
                })
                .fold(0.0_f64, f64::max)
                + 2.0 * kappa.abs();
            let (dz, n_steps) = cfg.resolve_dz(lambda)?;

            // Envelope spectra.
            let plan = FftPlan::new(nt);
            let omegas = bin_omegas(nt, grid.dt());
            let mut spectra: Vec<Vec<Complex64>> = data.clone();
            for env in spectra.iter_mut() {
                plan.dft_pos(env);
            }
            let spectral_peak = spectra
                .iter()
                .flat_map(|s| s.iter())
                .fold(0.0_f64, |m, v| m.max(v.norm()));

            // Independent line system per envelope bin; quiet bins skipped.
            let mut amps = vec![Complex64::default(); n_lines];
            let mut diag = vec![0.0; n_lines];
            let mut g = vec![0.0; n_lines];
            let mut h = vec![0.0; n_lines];
            for j in 0..nt {
                let mut occupied = false;
                for (i, s) in spectra.iter().enumerate() {
                    amps[i] = s[j];
                    occupied |= s[j].norm() > 1e-14 * spectral_peak;
                }
                if !occupied {
                    continue;
                }
                let w = if full { omegas[j] } else { 0.0 };
                for (i, c) in coeffs.iter().enumerate() {
                    let (dv, gv, hv) = c.at_offset(w);
                    diag[i] = dv;
                    g[i] = gv;
                    h[i] = hv;
                }
                integrate_line_system(
                    &mut amps, &diag, &g, &h, rho_ab0, kappa, dz, n_steps, cfg.z_end,
                );
                for (i, s) in spectra.iter_mut().enumerate() {
                    s[j] = amps[i];
                }
            }

            // Back to the time domain.
            let mut out = spectra;
            for env in out.iter_mut() {
                for v in env.iter_mut() {
                    *v /= nt as f64;
                }
                plan.dft_neg(env);
            }
            Ok(SidebandSet { env: Envelopes::Sampled { grid: *grid, data: out }, ..set.clone() })
        }
    }
}
