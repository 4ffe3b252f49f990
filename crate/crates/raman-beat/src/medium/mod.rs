//! Molecular-state machinery: Raman polarizabilities, Stark shifts and
//! two-photon Rabi frequencies, density-matrix evolution, and the
//! adiabatically prepared coherence.

mod evolve;

pub use evolve::{evolve_state, evolve_with_drive, DriveConfig, DriveField};

use crate::constants::{density_prefactor, HBAR};
use crate::core::Frequency;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// One far-off-resonance upper level: detunings of the level from the two
/// Raman states and the dipole moments coupling it to them.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Level {
    /// `ω_j - ω_a`, rad/s.
    pub detuning_a: f64,
    /// `ω_j - ω_b`, rad/s.
    pub detuning_b: f64,
    /// `μ_ja`, C·m (real by assumption).
    pub mu_a: f64,
    /// `μ_jb`, C·m.
    pub mu_b: f64,
}

/// Table of upper levels used to build polarizabilities from first
/// principles.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct LevelTable {
    pub levels: Vec<Level>,
}

impl LevelTable {
    pub fn new(levels: Vec<Level>) -> Self {
        Self { levels }
    }
}

/// Value and first two frequency derivatives of a dispersion/coupling
/// coefficient.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CoeffDerivs {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Anything that can supply the `a`, `b`, `d` coefficients (with
/// derivatives) at an arbitrary frequency: a level table exactly, or
/// measured coefficients through their quadratic model.
pub trait RamanCoefficients {
    fn a_at(&self, omega: f64) -> CoeffDerivs;
    fn b_at(&self, omega: f64) -> CoeffDerivs;
    fn d_at(&self, omega: f64) -> CoeffDerivs;
}

/// Polarizability matrix entries and the symmetric combinations at one
/// frequency.
#[derive(Debug, Clone, Copy)]
pub struct Polarizability {
    /// `α_aa(ω)`, `α_bb(ω)`, `α_ab(ω)`, `α_ba(ω)` level sums.
    pub alpha_aa: f64,
    pub alpha_bb: f64,
    pub alpha_ab: f64,
    pub alpha_ba: f64,
    /// `a(ω)`, `b(ω)`, `d(ω)` with analytic frequency derivatives.
    pub a: CoeffDerivs,
    pub b: CoeffDerivs,
    pub d: CoeffDerivs,
}

fn resonance_guard(idx: usize, denom: f64, scale: f64, which: &str) -> Result<()> {
    if denom.abs() < 1e-9 * scale.abs().max(1.0) {
        return Err(Error::Resonance(format!(
            "level {idx}: probe frequency hits the {which} one-photon resonance"
        )));
    }
    Ok(())
}

/// Evaluate the Raman polarizabilities of a level table at `ω`.
///
/// The symmetric coefficients satisfy `a(ω) = a(-ω)` and `b(ω) = b(-ω)`
/// identically; derivatives come from differentiating the rational level
/// sums, not from finite differences.
pub fn polarizability(levels: &LevelTable, omega: Frequency) -> Result<Polarizability> {
    let w = omega.rad_per_s();
    let mut p = Polarizability {
        alpha_aa: 0.0,
        alpha_bb: 0.0,
        alpha_ab: 0.0,
        alpha_ba: 0.0,
        a: CoeffDerivs::default(),
        b: CoeffDerivs::default(),
        d: CoeffDerivs::default(),
    };
    for (idx, level) in levels.levels.iter().enumerate() {
        let da = level.detuning_a;
        let db = level.detuning_b;
        resonance_guard(idx, da - w, da, "a-state")?;
        resonance_guard(idx, da + w, da, "a-state")?;
        resonance_guard(idx, db - w, db, "b-state")?;
        resonance_guard(idx, db + w, db, "b-state")?;
        let maa = level.mu_a * level.mu_a;
        let mbb = level.mu_b * level.mu_b;
        let mab = level.mu_a * level.mu_b;
        p.alpha_aa += 2.0 / HBAR * maa / (da - w);
        p.alpha_bb += 2.0 / HBAR * mbb / (db - w);
        p.alpha_ab += 2.0 / HBAR * mab / (db - w);
        p.alpha_ba += 2.0 / HBAR * mab / (da - w);

        let h2 = 2.0 * HBAR * HBAR;
        // value: 1/(Δ-ω) + 1/(Δ+ω); d/dω: 1/(Δ-ω)² - 1/(Δ+ω)²; etc.
        let pair = |dm: f64, dp: f64| {
            (
                1.0 / dm + 1.0 / dp,
                1.0 / (dm * dm) - 1.0 / (dp * dp),
                2.0 / (dm * dm * dm) + 2.0 / (dp * dp * dp),
            )
        };
        let (av, a1, a2) = pair(da - w, da + w);
        p.a.value += maa / h2 * av;
        p.a.d1 += maa / h2 * a1;
        p.a.d2 += maa / h2 * a2;
        let (bv, b1, b2) = pair(db - w, db + w);
        p.b.value += mbb / h2 * bv;
        p.b.d1 += mbb / h2 * b1;
        p.b.d2 += mbb / h2 * b2;
        // d pairs the b-state resonance at +ω with the a-state one at -ω.
        let (dv, d1, d2) = pair(db - w, da + w);
        p.d.value += mab / h2 * dv;
        p.d.d1 += mab / h2 * d1;
        p.d.d2 += mab / h2 * d2;
    }
    Ok(p)
}

impl RamanCoefficients for LevelTable {
    fn a_at(&self, omega: f64) -> CoeffDerivs {
        polarizability(self, Frequency::from_rad_per_s(omega).unwrap())
            .map(|p| p.a)
            .unwrap_or_default()
    }
    fn b_at(&self, omega: f64) -> CoeffDerivs {
        polarizability(self, Frequency::from_rad_per_s(omega).unwrap())
            .map(|p| p.b)
            .unwrap_or_default()
    }
    fn d_at(&self, omega: f64) -> CoeffDerivs {
        polarizability(self, Frequency::from_rad_per_s(omega).unwrap())
            .map(|p| p.d)
            .unwrap_or_default()
    }
}

/// Medium description: density, Raman frequency, and the dispersion and
/// coupling coefficients with their first two frequency derivatives at a
/// reference frequency. All in SI.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MediumParameters {
    /// Molecular number density, m⁻³.
    pub density: f64,
    /// Raman modulation frequency, rad/s.
    pub omega_m: f64,
    /// Reference frequency the coefficients are quoted at, rad/s.
    pub reference: f64,
    pub a0: f64,
    pub b0: f64,
    pub d0: f64,
    pub a1: f64,
    pub b1: f64,
    pub d1: f64,
    pub a2: f64,
    pub b2: f64,
    pub d2: f64,
}

impl MediumParameters {
    pub fn new(
        density: f64,
        omega_m: Frequency,
        reference: Frequency,
        a: [f64; 3],
        b: [f64; 3],
        d: [f64; 3],
    ) -> Result<Self> {
        if !(density > 0.0) {
            return Err(Error::Domain(format!("density must be positive, got {density}")));
        }
        if !(omega_m.rad_per_s() > 0.0) {
            return Err(Error::Domain("omega_m must be positive".into()));
        }
        Ok(Self {
            density,
            omega_m: omega_m.rad_per_s(),
            reference: reference.rad_per_s(),
            a0: a[0],
            b0: b[0],
            d0: d[0],
            a1: a[1],
            b1: b[1],
            d1: d[1],
            a2: a[2],
            b2: b[2],
            d2: d[2],
        })
    }

    /// Compute the coefficient set from a level table at the reference
    /// frequency.
    pub fn from_level_table(
        levels: &LevelTable,
        density: f64,
        omega_m: Frequency,
        reference: Frequency,
    ) -> Result<Self> {
        let p = polarizability(levels, reference)?;
        Self::new(
            density,
            omega_m,
            reference,
            [p.a.value, p.a.d1, p.a.d2],
            [p.b.value, p.b.d1, p.b.d2],
            [p.d.value, p.d.d1, p.d.d2],
        )
    }

    /// High-density molecular hydrogen (solid-hydrogen model): the
    /// fundamental vibrational transition at 4149.7 cm⁻¹, N = 2.6·10²² cm⁻³,
    /// and published dispersion/coupling coefficients quoted at 800 nm.
    pub fn solid_hydrogen() -> Self {
        Self {
            density: 2.6e28,
            omega_m: Frequency::from_wavenumber_per_cm(4149.7).unwrap().rad_per_s(),
            reference: Frequency::from_wavelength_nm(800.0).unwrap().rad_per_s(),
            a0: 2.42e-7,
            b0: 2.63e-7,
            d0: 5.50e-8,
            a1: 3.13e-24,
            b1: 3.81e-24,
            d1: 1.25e-24,
            a2: 1.41e-39,
            b2: 1.73e-39,
            d2: 5.07e-40,
        }
    }

    /// Zero out all frequency derivatives, keeping the coefficient values:
    /// the dispersionless idealization of this medium.
    pub fn without_dispersion(mut self) -> Self {
        self.a1 = 0.0;
        self.b1 = 0.0;
        self.d1 = 0.0;
        self.a2 = 0.0;
        self.b2 = 0.0;
        self.d2 = 0.0;
        self
    }

    /// Raman period `T_m = 2π/ω_m`.
    pub fn raman_period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega_m
    }

    /// `N·ħ/(ε₀·c)` for this density.
    pub fn prefactor(&self) -> f64 {
        density_prefactor(self.density)
    }

    /// Far-off-resonance ordering checks `x0 ≫ ω₀·x1 ≫ ω₀²·x2`; returns a
    /// description per violated ordering (empty when all hold).
    ///
    /// The scale counting only holds up to O(1) combinatorial factors (the
    /// second derivative of a single-pole term carries a 2), so a violation
    /// is flagged only when a higher-order term exceeds twice the
    /// lower-order one.
    pub fn ordering_violations(&self) -> Vec<String> {
        let w = self.reference;
        let mut out = Vec::new();
        for (name, c0, c1, c2) in [
            ("a", self.a0, self.a1, self.a2),
            ("b", self.b0, self.b1, self.b2),
            ("d", self.d0, self.d1, self.d2),
        ] {
            if (w * c1).abs() > 2.0 * c0.abs() {
                out.push(format!("{name}0 not dominant over ω₀·{name}1"));
            }
            if (w * w * c2).abs() > 2.0 * (w * c1).abs() && c1 != 0.0 {
                out.push(format!("ω₀·{name}1 not dominant over ω₀²·{name}2"));
            }
        }
        out
    }
}

impl RamanCoefficients for MediumParameters {
    fn a_at(&self, omega: f64) -> CoeffDerivs {
        let x = omega - self.reference;
        CoeffDerivs {
            value: self.a0 + self.a1 * x + 0.5 * self.a2 * x * x,
            d1: self.a1 + self.a2 * x,
            d2: self.a2,
        }
    }
    fn b_at(&self, omega: f64) -> CoeffDerivs {
        let x = omega - self.reference;
        CoeffDerivs {
            value: self.b0 + self.b1 * x + 0.5 * self.b2 * x * x,
            d1: self.b1 + self.b2 * x,
            d2: self.b2,
        }
    }
    fn d_at(&self, omega: f64) -> CoeffDerivs {
        let x = omega - self.reference;
        CoeffDerivs {
            value: self.d0 + self.d1 * x + 0.5 * self.d2 * x * x,
            d1: self.d1 + self.d2 * x,
            d2: self.d2,
        }
    }
}

/// Density matrix of the effective two-level medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelState {
    pub rho_aa: f64,
    pub rho_bb: f64,
    pub rho_ab: Complex64,
}

impl TwoLevelState {
    /// Everything in `a`.
    pub fn ground() -> Self {
        Self { rho_aa: 1.0, rho_bb: 0.0, rho_ab: Complex64::new(0.0, 0.0) }
    }

    pub fn new(rho_aa: f64, rho_bb: f64, rho_ab: Complex64) -> Result<Self> {
        let state = Self { rho_aa, rho_bb, rho_ab };
        state.validate()?;
        Ok(state)
    }

    /// Pure superposition with mixing angle `θ` and coherence phase.
    pub fn pure(theta: f64, phase: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            rho_aa: c * c,
            rho_bb: s * s,
            rho_ab: Complex64::from_polar(s * c, phase),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if (self.rho_aa + self.rho_bb - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!(
                "populations must sum to 1, got {}",
                self.rho_aa + self.rho_bb
            )));
        }
        if !(-1e-9..=1.0 + 1e-9).contains(&self.rho_aa)
            || !(-1e-9..=1.0 + 1e-9).contains(&self.rho_bb)
        {
            return Err(Error::Domain("populations outside [0, 1]".into()));
        }
        if self.rho_ab.norm_sqr() > self.rho_aa * self.rho_bb + 1e-9 {
            return Err(Error::Domain(format!(
                "coherence violates positivity: |ρ_ab|² = {} > ρ_aa·ρ_bb = {}",
                self.rho_ab.norm_sqr(),
                self.rho_aa * self.rho_bb
            )));
        }
        Ok(())
    }

    pub fn rho_ba(&self) -> Complex64 {
        self.rho_ab.conj()
    }
}

/// Adiabatic parameterization of the prepared coherence: mixing angle,
/// input drive phase, phase shift per length, and coherence magnitude.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PreparedCoherence {
    /// Mixing angle θ, rad, `|θ| ≤ π/2`.
    pub theta: f64,
    /// Relative drive phase at the input, rad.
    pub phi0: f64,
    /// Phase shift per length of the coherence wave, m⁻¹.
    pub kappa: f64,
    /// `|ρ_ab| = |sinθ·cosθ|`.
    pub rho0: f64,
}

impl PreparedCoherence {
    pub fn new(theta: f64, phi0: f64, kappa: f64) -> Result<Self> {
        if theta.abs() > std::f64::consts::FRAC_PI_2 + 1e-12 {
            return Err(Error::Domain(format!("|θ| must be ≤ π/2, got {theta}")));
        }
        Ok(Self { theta, phi0, kappa, rho0: (theta.sin() * theta.cos()).abs() })
    }

    /// Signed coherence at depth `z`: `sinθ·cosθ·e^{i(φ₀ - κz)}`.
    pub fn rho_ab_at(&self, z: f64) -> Complex64 {
        Complex64::from_polar(
            self.theta.sin() * self.theta.cos(),
            self.phi0 - self.kappa * z,
        )
    }

    /// Density matrix at depth `z`.
    pub fn state_at(&self, z: f64) -> TwoLevelState {
        let c = self.theta.cos();
        let s = self.theta.sin();
        TwoLevelState { rho_aa: c * c, rho_bb: s * s, rho_ab: self.rho_ab_at(z) }
    }

    /// Sign of the mixing angle (sign of the two-photon detuning that
    /// prepared it); `sgn(0) = +1` by convention.
    pub fn sign(&self) -> f64 {
        if self.theta < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}

/// Stark shifts and two-photon Rabi frequencies, rad/s.
#[derive(Debug, Clone, Copy)]
pub struct RabiSet {
    pub om_aa: f64,
    pub om_bb: f64,
    pub om_ab: Complex64,
    pub om_ba: Complex64,
}

impl RabiSet {
    pub const ZERO: Self = Self {
        om_aa: 0.0,
        om_bb: 0.0,
        om_ab: Complex64::new(0.0, 0.0),
        om_ba: Complex64::new(0.0, 0.0),
    };
}

/// A comb of complex sideband amplitudes with spacing `ω_m`, the discrete
/// drive seen by the medium.
#[derive(Debug, Clone)]
pub struct SidebandAmplitudes {
    /// Frequency of entry 0, rad/s.
    pub omega_lowest: f64,
    /// Comb spacing, rad/s.
    pub omega_m: f64,
    /// Consecutive line amplitudes, V/m.
    pub amplitudes: Vec<Complex64>,
}

/// Stationary reduction of the Stark-shift / Rabi-frequency integrals for a
/// discrete comb:
///
/// ```text
/// Ω_aa = ½ Σ_q a(ω_q)|E_q|²          Ω_ab = ½ Σ_q d(ω_q)·E_q·E*_{q+1}
/// Ω_bb = ½ Σ_q b(ω_q)|E_q|²          Ω_ba = ½ Σ_q d(ω_q)·E*_q·E_{q+1}
/// ```
///
/// Only frequency pairs whose beat is zero (Stark) or exactly `ω_m` (Rabi)
/// survive time averaging over a Raman period; the ½ prefactor is pinned by
/// the continuous-integral quadrature oracle in the test suite.
pub fn rabi_and_stark(comb: &SidebandAmplitudes, coeffs: &dyn RamanCoefficients) -> RabiSet {
    let mut set = RabiSet::ZERO;
    let n = comb.amplitudes.len();
    for (q, amp) in comb.amplitudes.iter().enumerate() {
        let omega_q = comb.omega_lowest + q as f64 * comb.omega_m;
        let p2 = amp.norm_sqr();
        set.om_aa += 0.5 * coeffs.a_at(omega_q).value * p2;
        set.om_bb += 0.5 * coeffs.b_at(omega_q).value * p2;
        if q + 1 < n {
            let pair = amp * comb.amplitudes[q + 1].conj();
            let d = coeffs.d_at(omega_q).value;
            set.om_ab += 0.5 * d * pair;
            set.om_ba += 0.5 * d * pair.conj();
        }
    }
    set
}

/// Mixing angle of the adiabatic eigenstate:
/// `tan 2θ = |2Ω_ab / (δ + Ω_aa - Ω_bb)|·sgn(δ)`, principal branch.
pub fn adiabatic_mixing_angle(drive: &RabiSet, delta: f64) -> Result<f64> {
    let denom = delta + drive.om_aa - drive.om_bb;
    let num = 2.0 * drive.om_ab.norm();
    if num == 0.0 && denom == 0.0 {
        return Err(Error::Degenerate(
            "zero two-photon drive and zero effective detuning".into(),
        ));
    }
    let sgn_delta = if delta < 0.0 { -1.0 } else { 1.0 };
    Ok(0.5 * (num / denom.abs() * sgn_delta).atan())
}

/// Adiabatically prepared state for external drive `drive` and two-photon
/// detuning `delta`, with the coherence phase anchored to the drive phase.
pub fn adiabatic_state(
    drive: &RabiSet,
    delta: f64,
    params: &MediumParameters,
) -> Result<(PreparedCoherence, TwoLevelState)> {
    let theta = adiabatic_mixing_angle(drive, delta)?;
    let phi0 = if drive.om_ab.norm() > 0.0 { drive.om_ab.arg() } else { 0.0 };
    let c = theta.cos();
    let s = theta.sin();
    let state = TwoLevelState {
        rho_aa: c * c,
        rho_bb: s * s,
        rho_ab: Complex64::from_polar(s * c, phi0),
    };
    let kappa = kappa_of(params, &state);
    let prepared = PreparedCoherence::new(theta, phi0, kappa)?;
    Ok((prepared, state))
}

/// Phase shift per length of the prepared coherence wave:
/// `κ = (Nħ/ε₀c)·ω_m·(a₀·ρ_aa + b₀·ρ_bb)`.
pub fn kappa_of(params: &MediumParameters, state: &TwoLevelState) -> f64 {
    params.prefactor() * params.omega_m * (params.a0 * state.rho_aa + params.b0 * state.rho_bb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_level_table() -> LevelTable {
        LevelTable::new(vec![Level {
            detuning_a: 1.4e16,
            detuning_b: 1.4e16 - 7.8e14,
            mu_a: 1.0e-30,
            mu_b: 1.1e-30,
        }])
    }

    #[test]
    fn polarizability_single_level_at_zero() {
        let table = LevelTable::new(vec![Level {
            detuning_a: 2.0e16,
            detuning_b: 1.9e16,
            mu_a: 1.0e-30,
            mu_b: 0.0,
        }]);
        let p = polarizability(&table, Frequency::from_rad_per_s(0.0).unwrap()).unwrap();
        // a(0) collapses to μ²/(ħ²·Δ_a).
        let want = 1.0e-60 / (HBAR * HBAR * 2.0e16);
        assert!((p.a.value - want).abs() / want < 1e-12);
    }

    #[test]
    fn polarizability_even_in_omega() {
        let table = two_level_table();
        let w = Frequency::from_rad_per_s(2.3e15).unwrap();
        let wm = Frequency::from_rad_per_s(-2.3e15).unwrap();
        let p1 = polarizability(&table, w).unwrap();
        let p2 = polarizability(&table, wm).unwrap();
        assert_eq!(p1.a.value, p2.a.value);
        assert_eq!(p1.b.value, p2.b.value);
    }

    #[test]
    fn polarizability_derivative_matches_finite_difference() {
        let table = two_level_table();
        let w0 = 2.3e15;
        let h = 1e-6 * w0;
        let at =
            |w: f64| polarizability(&table, Frequency::from_rad_per_s(w).unwrap()).unwrap();
        let p = at(w0);
        for (analytic, num) in [
            (p.a.d1, (at(w0 + h).a.value - at(w0 - h).a.value) / (2.0 * h)),
            (p.b.d1, (at(w0 + h).b.value - at(w0 - h).b.value) / (2.0 * h)),
            (p.d.d1, (at(w0 + h).d.value - at(w0 - h).d.value) / (2.0 * h)),
        ] {
            assert!(
                (analytic - num).abs() / num.abs() < 1e-6,
                "derivative mismatch: analytic {analytic:.6e} vs fd {num:.6e}"
            );
        }
    }

    #[test]
    fn polarizability_resonance_reported() {
        let table = two_level_table();
        let w = Frequency::from_rad_per_s(1.4e16).unwrap();
        match polarizability(&table, w) {
            Err(Error::Resonance(msg)) => assert!(msg.contains("level 0")),
            other => panic!("expected resonance error, got {other:?}"),
        }
    }

    #[test]
    fn rabi_zero_for_zero_envelopes() {
        let comb = SidebandAmplitudes {
            omega_lowest: 2.0e15,
            omega_m: 7.8e14,
            amplitudes: vec![Complex64::new(0.0, 0.0); 4],
        };
        let set = rabi_and_stark(&comb, &MediumParameters::solid_hydrogen());
        assert_eq!(set.om_aa, 0.0);
        assert_eq!(set.om_ab, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn rabi_single_sideband_has_no_two_photon_drive() {
        let params = MediumParameters::solid_hydrogen();
        let comb = SidebandAmplitudes {
            omega_lowest: params.reference,
            omega_m: params.omega_m,
            amplitudes: vec![Complex64::new(2.0e7, 0.0)],
        };
        let set = rabi_and_stark(&comb, &params);
        assert_eq!(set.om_ab, Complex64::new(0.0, 0.0));
        let want = 0.5 * params.a0 * 4.0e14;
        assert!((set.om_aa - want).abs() / want < 1e-12);
    }

    #[test]
    fn rabi_conjugate_pair() {
        let params = MediumParameters::solid_hydrogen();
        let comb = SidebandAmplitudes {
            omega_lowest: params.reference,
            omega_m: params.omega_m,
            amplitudes: vec![
                Complex64::from_polar(1.0e7, 0.3),
                Complex64::from_polar(0.7e7, -1.1),
            ],
        };
        let set = rabi_and_stark(&comb, &params);
        assert!((set.om_ba - set.om_ab.conj()).norm() < 1e-12 * set.om_ab.norm());
    }

    #[test]
    fn adiabatic_uncoupled_limit() {
        let drive = RabiSet { om_ab: Complex64::new(1e-12, 0.0), ..RabiSet::ZERO };
        let theta = adiabatic_mixing_angle(&drive, 1.0e8).unwrap();
        assert!(theta.abs() < 1e-19);
    }

    #[test]
    fn adiabatic_equal_drive_and_detuning() {
        // |2Ω_ab| = |δ + ΔΩ|, δ > 0 → tan2θ = 1 → θ = π/8.
        let drive = RabiSet { om_ab: Complex64::new(0.5e8, 0.0), ..RabiSet::ZERO };
        let theta = adiabatic_mixing_angle(&drive, 1.0e8).unwrap();
        assert!((theta - std::f64::consts::FRAC_PI_8).abs() < 1e-12);
    }

    #[test]
    fn adiabatic_sign_follows_detuning() {
        let drive = RabiSet { om_ab: Complex64::new(0.5e8, 0.0), ..RabiSet::ZERO };
        let plus = adiabatic_mixing_angle(&drive, 1.0e8).unwrap();
        let minus = adiabatic_mixing_angle(&drive, -1.0e8).unwrap();
        assert!((plus + minus).abs() < 1e-15);
        assert!(plus > 0.0 && minus < 0.0);
    }

    #[test]
    fn adiabatic_degenerate_rejected() {
        let drive = RabiSet::ZERO;
        assert!(matches!(adiabatic_mixing_angle(&drive, 0.0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn antiphased_state_populations() {
        // θ = -0.4 → ρ_aa = 0.85, ρ_bb = 0.15, |ρ_ab| = 0.36 to 2 decimals.
        let state = TwoLevelState::pure(-0.4, 0.0);
        assert!((state.rho_aa - 0.85).abs() < 0.005);
        assert!((state.rho_bb - 0.15).abs() < 0.005);
        assert!((state.rho_ab.norm() - 0.36).abs() < 0.005);
    }

    #[test]
    fn kappa_solid_hydrogen() {
        // Hand arithmetic: Nħ/(ε₀c) = 1.03295e-3, ω_m = 7.81659e14,
        // a₀ρ_aa + b₀ρ_bb = 2.4515e-7 → κ = 1.979e5 m⁻¹.
        let params = MediumParameters::solid_hydrogen();
        let state = TwoLevelState::pure(-0.4, 0.0);
        let kappa = kappa_of(&params, &state);
        assert!(
            (kappa - 1.98e5).abs() / 1.98e5 < 5e-3,
            "κ = {kappa:.4e}, expected ≈ 1.98e5"
        );
    }

    #[test]
    fn kappa_zero_coefficients() {
        let mut params = MediumParameters::solid_hydrogen();
        params.a0 = 0.0;
        let state = TwoLevelState::ground();
        assert_eq!(kappa_of(&params, &state), 0.0);
    }

    #[test]
    fn kappa_linear_in_density() {
        let params = MediumParameters::solid_hydrogen();
        let mut doubled = params;
        doubled.density *= 2.0;
        let state = TwoLevelState::pure(0.3, 0.0);
        assert!(
            (kappa_of(&doubled, &state) - 2.0 * kappa_of(&params, &state)).abs()
                < 1e-9 * kappa_of(&params, &state)
        );
    }

    #[test]
    fn level_table_coefficients_round_trip() {
        // MediumParameters built from a table agree with the table exactly
        // at the reference frequency, including derivatives.
        let table = two_level_table();
        let reference = Frequency::from_rad_per_s(2.3e15).unwrap();
        let omega_m = Frequency::from_rad_per_s(7.8e14).unwrap();
        let params =
            MediumParameters::from_level_table(&table, 1e28, omega_m, reference).unwrap();
        let exact = table.a_at(reference.rad_per_s());
        let modeled = params.a_at(reference.rad_per_s());
        assert!((modeled.value - exact.value).abs() / exact.value.abs() < 1e-14);
        assert!((modeled.d1 - exact.d1).abs() / exact.d1.abs() < 1e-14);
    }

    #[test]
    fn solid_hydrogen_ordering_holds() {
        assert!(MediumParameters::solid_hydrogen().ordering_violations().is_empty());
    }
}
