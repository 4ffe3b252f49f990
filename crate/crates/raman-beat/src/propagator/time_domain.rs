//! Time-domain propagation of the positive-frequency field.
//!
//! The z-stepper is an interaction-picture RK4: the constant-coefficient
//! part of the operator (phase, mean group delay, mean GVD) is diagonal in
//! frequency and applied exactly through unit-modulus exponentials, while
//! the Raman-modulated terms are integrated with classical 4th-order
//! stages. τ-derivatives are spectral throughout.

use super::{CoefficientTables, PropagationConfig, Scheme, TimeDomainCoefficients};
use crate::core::fft::{bin_omegas, FftPlan};
use crate::core::AnalyticField;
use crate::error::{Error, Result};
use crate::medium::TwoLevelState;
use num_complex::Complex64;

/// Coherence seen by the probe along z.
#[derive(Debug, Clone)]
pub enum CoherenceProfile {
    /// State frozen in z; the coherence phase advances as `e^{-iκz}`.
    Frozen { state: TwoLevelState, kappa: f64 },
    /// Sampled state profile (e.g. from a drive cascade), interpolated
    /// linearly in z; phases are already part of the samples.
    Map { z: Vec<f64>, states: Vec<TwoLevelState> },
}

impl CoherenceProfile {
    pub fn at(&self, z: f64) -> TwoLevelState {
        match self {
            CoherenceProfile::Frozen { state, kappa } => TwoLevelState {
                rho_aa: state.rho_aa,
                rho_bb: state.rho_bb,
                rho_ab: super::frozen_rho_ab(state, *kappa, z),
            },
            CoherenceProfile::Map { z: zs, states } => {
                if zs.is_empty() {
                    return TwoLevelState::ground();
                }
                let idx = zs.partition_point(|&zi| zi <= z);
                if idx == 0 {
                    return states[0];
                }
                if idx >= zs.len() {
                    return states[states.len() - 1];
                }
                let (z0, z1) = (zs[idx - 1], zs[idx]);
                let w = if z1 > z0 { (z - z0) / (z1 - z0) } else { 0.0 };
                let (s0, s1) = (states[idx - 1], states[idx]);
                TwoLevelState {
                    rho_aa: s0.rho_aa + w * (s1.rho_aa - s0.rho_aa),
                    rho_bb: s0.rho_bb + w * (s1.rho_bb - s0.rho_bb),
                    rho_ab: s0.rho_ab + (s1.rho_ab - s0.rho_ab) * w,
                }
            }
        }
    }

    pub fn max_rho0(&self) -> f64 {
        match self {
            CoherenceProfile::Frozen { state, .. } => state.rho_ab.norm(),
            CoherenceProfile::Map { states, .. } => {
                states.iter().fold(0.0_f64, |m, s| m.max(s.rho_ab.norm()))
            }
        }
    }
}

struct Workspace {
    plan: FftPlan,
    omegas: Vec<f64>,
    /// `e^{-iω_m τ_k}` per sample.
    em: Vec<Complex64>,
    ep: Vec<Complex64>,
    spec: Vec<Complex64>,
    d1: Vec<Complex64>,
    d2: Vec<Complex64>,
}

impl Workspace {
    fn new(field: &AnalyticField, omega_m: f64) -> Self {
        let n = field.grid.len();
        let omegas = bin_omegas(n, field.grid.dt());
        let em: Vec<Complex64> = field
            .grid
            .times()
            .map(|t| Complex64::from_polar(1.0, -omega_m * t))
            .collect();
        let ep = em.iter().map(|z| z.conj()).collect();
        Self {
            plan: FftPlan::new(n),
            omegas,
            em,
            ep,
            spec: vec![Complex64::default(); n],
            d1: vec![Complex64::default(); n],
            d2: vec![Complex64::default(); n],
        }
    }

    /// Spectral first and second τ-derivatives of `u` into `d1`, `d2`.
    fn derivatives(&mut self, u: &[Complex64]) {
        let n = u.len();
        self.spec.copy_from_slice(u);
        self.plan.dft_pos(&mut self.spec);
        for j in 0..n {
            let w = self.omegas[j];
            let s = self.spec[j] / n as f64;
            self.d1[j] = s * Complex64::new(0.0, -w);
            self.d2[j] = s * (-w * w);
        }
        self.plan.dft_neg(&mut self.d1);
        self.plan.dft_neg(&mut self.d2);
    }

    /// Apply a frequency-diagonal phase factor in place.
    fn apply_diagonal(&mut self, u: &mut [Complex64], phases: &[Complex64]) {
        let n = u.len();
        self.spec.copy_from_slice(u);
        self.plan.dft_pos(&mut self.spec);
        for j in 0..n {
            self.spec[j] *= phases[j] / n as f64;
        }
        self.plan.dft_neg(&mut self.spec);
        u.copy_from_slice(&self.spec);
    }
}

fn apply_toggles(c: &TimeDomainCoefficients, t: &super::TermToggles) -> TimeDomainCoefficients {
    let mut c = *c;
    if !t.phase {
        c.a = 0.0;
        c.b = 0.0;
        c.k = 0.0;
        c.q = 0.0;
    }
    if !t.group_velocity {
        c.a1 = 0.0;
        c.b1 = 0.0;
        c.k1 = 0.0;
        c.q1 = 0.0;
    }
    if !t.gvd {
        c.a2 = 0.0;
        c.b2 = 0.0;
    }
    if !t.gvd_coupling {
        c.k2 = 0.0;
        c.q2 = 0.0;
    }
    c
}

/// Modulated part of the right-hand side at depth `z`:
/// `out = i·F·u - F1·∂u - (i/2)·F2·∂²u` with the derivatives precomputed.
#[allow(clippy::too_many_arguments)]
fn modulated_rhs(
    c: &TimeDomainCoefficients,
    state: &TwoLevelState,
    em: &[Complex64],
    ep: &[Complex64],
    u: &[Complex64],
    d1: &[Complex64],
    d2: &[Complex64],
    out: &mut [Complex64],
) {
    let rho_ab = state.rho_ab;
    let rho_ba = rho_ab.conj();
    let i = Complex64::i();
    for k in 0..u.len() {
        let f0 = c.k * rho_ba * em[k] + c.q * rho_ab * ep[k];
        let f1 = c.k1 * rho_ba * em[k] + c.q1 * rho_ab * ep[k];
        let f2 = c.k2 * rho_ba * em[k] + c.q2 * rho_ab * ep[k];
        out[k] = i * f0 * u[k] - f1 * d1[k] - 0.5 * i * f2 * d2[k];
    }
}

/// Propagate an analytic probe field through a prepared medium.
///
/// The τ-grid must resolve the maximum instantaneous frequency
/// `e^{αz}·ω₀` with at least 8 points per cycle; the probe never feeds
/// back on the medium state.
pub fn propagate_time_domain(
    field: &AnalyticField,
    profile: &CoherenceProfile,
    tables: &CoefficientTables,
    cfg: &PropagationConfig,
) -> Result<AnalyticField> {
    let constants = match cfg.scheme {
        Scheme::TimeDomainFull => tables.time_domain,
        Scheme::TimeDomainOffres => tables.time_domain_reduced,
        Scheme::Dispersionless => {
            let bare = super::assemble_coefficients(
                &tables.params.without_dispersion(),
                crate::core::Frequency::from_rad_per_s(tables.omega0)?,
            );
            bare.time_domain_reduced
        }
        other => {
            return Err(Error::Domain(format!(
                "scheme {other:?} is not a time-domain scheme"
            )))
        }
    };
    let constants = apply_toggles(&constants, &cfg.toggles);
    let grid = field.grid;
    if !grid.len().is_power_of_two() {
        return Err(Error::Grid("time-domain propagation needs a power-of-two grid".into()));
    }

    // Resolution check against the highest up-shifted frequency.
    let rho0 = profile.max_rho0();
    let alpha =
        2.0 * tables.params.prefactor() * tables.params.omega_m * tables.params.d0.abs() * rho0;
    let omega_top = (alpha * cfg.z_end).exp() * tables.omega0;
    let dt_required = 2.0 * std::f64::consts::PI / (8.0 * omega_top);
    if grid.dt() > dt_required {
        return Err(Error::Grid(format!(
            "τ-grid too coarse: dt = {:.3e} s but resolving e^(αz)·ω₀ = {omega_top:.3e} rad/s \
             at 8 points per cycle needs dt ≤ {dt_required:.3e} s",
            grid.dt()
        )));
    }

    // Stability guard on the modulated terms (the diagonal is exact).
    let omega_max = grid.nyquist();
    let lambda = rho0
        * ((constants.k.abs() + constants.q.abs())
            + omega_max * (constants.k1.abs() + constants.q1.abs())
            + 0.5 * omega_max * omega_max * (constants.k2.abs() + constants.q2.abs()));
    let (dz, n_steps) = cfg.resolve_dz(lambda)?;

    let mut ws = Workspace::new(field, tables.params.omega_m);
    let n = grid.len();

    // Frequency-diagonal phase rate for given populations.
    let phase_rate = |rho_aa: f64, rho_bb: f64, w: f64| -> f64 {
        (constants.a * rho_aa + constants.b * rho_bb)
            + (constants.a1 * rho_aa + constants.b1 * rho_bb) * w
            + 0.5 * (constants.a2 * rho_aa + constants.b2 * rho_bb) * w * w
    };
    let make_half_phases = |state: &TwoLevelState, ws: &Workspace| -> Vec<Complex64> {
        ws.omegas
            .iter()
            .map(|&w| Complex64::from_polar(1.0, phase_rate(state.rho_aa, state.rho_bb, w) * dz / 2.0))
            .collect()
    };
    let populations_fixed = matches!(profile, CoherenceProfile::Frozen { .. });
    let mut half_phases = make_half_phases(&profile.at(0.0), &ws);

    let mut u = field.samples().to_vec();
    let mut u_i = vec![Complex64::default(); n];
    let mut k1 = vec![Complex64::default(); n];
    let mut k2 = vec![Complex64::default(); n];
    let mut k3 = vec![Complex64::default(); n];
    let mut k4 = vec![Complex64::default(); n];
    let mut stage = vec![Complex64::default(); n];

    for step in 0..n_steps {
        let z0 = step as f64 * dz;
        if !populations_fixed {
            half_phases = make_half_phases(&profile.at(z0 + dz / 2.0), &ws);
        }
        let s_begin = profile.at(z0);
        let s_mid = profile.at(z0 + dz / 2.0);
        let s_end = profile.at(z0 + dz);

        // uI = exp(D dz/2)·u ; k1 = exp(D dz/2)·dz·V(z0)·u
        ws.derivatives(&u);
        modulated_rhs(&constants, &s_begin, &ws.em, &ws.ep, &u, &ws.d1, &ws.d2, &mut k1);
        for v in k1.iter_mut() {
            *v *= dz;
        }
        u_i.copy_from_slice(&u);
        ws.apply_diagonal(&mut u_i, &half_phases);
        ws.apply_diagonal(&mut k1, &half_phases);

        // k2 = dz·V(z0+dz/2)·(uI + k1/2)
        for k in 0..n {
            stage[k] = u_i[k] + 0.5 * k1[k];
        }
        ws.derivatives(&stage);
        modulated_rhs(&constants, &s_mid, &ws.em, &ws.ep, &stage, &ws.d1, &ws.d2, &mut k2);
        for v in k2.iter_mut() {
            *v *= dz;
        }

        // k3 = dz·V(z0+dz/2)·(uI + k2/2)
        for k in 0..n {
            stage[k] = u_i[k] + 0.5 * k2[k];
        }
        ws.derivatives(&stage);
        modulated_rhs(&constants, &s_mid, &ws.em, &ws.ep, &stage, &ws.d1, &ws.d2, &mut k3);
        for v in k3.iter_mut() {
            *v *= dz;
        }

        // k4 = dz·V(z0+dz)·exp(D dz/2)·(uI + k3)
        for k in 0..n {
            stage[k] = u_i[k] + k3[k];
        }
        ws.apply_diagonal(&mut stage, &half_phases);
        ws.derivatives(&stage);
        modulated_rhs(&constants, &s_end, &ws.em, &ws.ep, &stage, &ws.d1, &ws.d2, &mut k4);
        for v in k4.iter_mut() {
            *v *= dz;
        }

        // u = exp(D dz/2)·(uI + k1/6 + k2/3 + k3/3) + k4/6
        for k in 0..n {
            stage[k] = u_i[k] + k1[k] / 6.0 + k2[k] / 3.0 + k3[k] / 3.0;
        }
        ws.apply_diagonal(&mut stage, &half_phases);
        for k in 0..n {
            u[k] = stage[k] + k4[k] / 6.0;
        }
    }

    AnalyticField::new(grid, u)
}
