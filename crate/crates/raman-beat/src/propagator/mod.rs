//! Dispersive propagation of the probe in three formulations — continuous
//! frequency domain, discrete sideband comb, and time domain — plus the
//! self-consistent drive cascade and the group-velocity-dispersion
//! compression analysis.

mod cascade;
mod freq_domain;
mod gvd;
mod sidebands;
mod time_domain;

pub use cascade::{cascade_selfconsistent, CascadeConfig, CascadeResult};
pub use freq_domain::propagate_frequency_domain;
pub use gvd::{gvd_analysis, GvdAnalysis, GvdOptimum};
pub use sidebands::{propagate_sidebands, Envelopes, SidebandSet};
pub use time_domain::{propagate_time_domain, CoherenceProfile};

use crate::core::Frequency;
use crate::error::{Error, Result};
use crate::medium::{CoeffDerivs, MediumParameters, RamanCoefficients, TwoLevelState};
use serde::{Deserialize, Serialize};

/// Linear propagation and coupling coefficients derived from the medium,
/// queryable at any frequency, together with the time-domain expansion
/// constants around the probe carrier.
#[derive(Debug, Clone)]
pub struct CoefficientTables {
    pub params: MediumParameters,
    /// Probe carrier the time-domain constants are expanded around, rad/s.
    pub omega0: f64,
    /// Exact expansion constants.
    pub time_domain: TimeDomainCoefficients,
    /// Far-off-resonance reduction (dominant terms only).
    pub time_domain_reduced: TimeDomainCoefficients,
}

/// Constants of the time-domain propagation equation
///
/// ```text
/// ∂ℰ/∂z = i[A·ρ_aa + B·ρ_bb + F(τ)]ℰ
///        - [A1·ρ_aa + B1·ρ_bb + F1(τ)]·∂ℰ/∂τ
///        - (i/2)[A2·ρ_aa + B2·ρ_bb + F2(τ)]·∂²ℰ/∂τ²,
/// F_i(τ) = K_i·ρ_ba·e^{-iω_m τ} + Q_i·ρ_ab·e^{+iω_m τ}.
/// ```
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct TimeDomainCoefficients {
    /// Phase/amplification constants, m⁻¹.
    pub a: f64,
    pub b: f64,
    pub k: f64,
    pub q: f64,
    /// Group-velocity constants, s/m.
    pub a1: f64,
    pub b1: f64,
    pub k1: f64,
    pub q1: f64,
    /// Group-velocity-dispersion constants, s²/m.
    pub a2: f64,
    pub b2: f64,
    pub k2: f64,
    pub q2: f64,
}

impl CoefficientTables {
    /// Propagation coefficient `α_ω = (Nħ/ε₀c)·ω·a(ω)` with derivatives.
    pub fn alpha_at(&self, omega: f64) -> CoeffDerivs {
        product_with_omega(self.params.prefactor(), omega, self.params.a_at(omega))
    }

    /// `β_ω = (Nħ/ε₀c)·ω·b(ω)`.
    pub fn beta_at(&self, omega: f64) -> CoeffDerivs {
        product_with_omega(self.params.prefactor(), omega, self.params.b_at(omega))
    }

    /// Down-coupling coefficient `g_ω = (Nħ/ε₀c)·ω·d(ω - ω_m)`.
    pub fn g_at(&self, omega: f64) -> CoeffDerivs {
        product_with_omega(
            self.params.prefactor(),
            omega,
            self.params.d_at(omega - self.params.omega_m),
        )
    }

    /// Up-coupling coefficient `h_ω = (Nħ/ε₀c)·ω·d(ω)`.
    pub fn h_at(&self, omega: f64) -> CoeffDerivs {
        product_with_omega(self.params.prefactor(), omega, self.params.d_at(omega))
    }

    /// Constant set for the requested scheme flavor.
    pub fn constants(&self, reduced: bool) -> &TimeDomainCoefficients {
        if reduced {
            &self.time_domain_reduced
        } else {
            &self.time_domain
        }
    }
}

/// Derivatives of `f(ω) = c·ω·x(ω)` given the derivatives of `x`.
fn product_with_omega(c: f64, omega: f64, x: CoeffDerivs) -> CoeffDerivs {
    CoeffDerivs {
        value: c * omega * x.value,
        d1: c * (x.value + omega * x.d1),
        d2: c * (2.0 * x.d1 + omega * x.d2),
    }
}

/// Build the coefficient tables for a probe carrier.
///
/// The exact constants come from the second-order expansion of `α_ω`, `β_ω`
/// around the carrier and of `g_ω`, `h_ω` around the first anti-Stokes and
/// Stokes frequencies; the reduced set keeps only the far-off-resonance
/// dominant terms. With all coefficient derivatives zero the two routes
/// coincide and `A = B = A2 = B2 = K2 = Q2 = 0` exactly.
pub fn assemble_coefficients(params: &MediumParameters, omega0: Frequency) -> CoefficientTables {
    let w0 = omega0.rad_per_s();
    let wm = params.omega_m;
    let c = params.prefactor();
    let mut tables = CoefficientTables {
        params: *params,
        omega0: w0,
        time_domain: TimeDomainCoefficients::default(),
        time_domain_reduced: TimeDomainCoefficients::default(),
    };

    // Exact route: expansion constants from the full coefficient products.
    let alpha = tables.alpha_at(w0);
    let beta = tables.beta_at(w0);
    let g1 = tables.g_at(w0 + wm);
    let hm1 = tables.h_at(w0 - wm);
    let expand = |f: CoeffDerivs| {
        (f.value - w0 * f.d1 + 0.5 * w0 * w0 * f.d2, f.d1 - w0 * f.d2, f.d2)
    };
    let (a, a1, a2) = expand(alpha);
    let (b, b1, b2) = expand(beta);
    let (k, k1, k2) = expand(g1);
    let (q, q1, q2) = expand(hm1);
    tables.time_domain = TimeDomainCoefficients { a, b, k, q, a1, b1, k1, q1, a2, b2, k2, q2 };

    // Reduced route: dominant far-off-resonance terms.
    let av = params.a_at(w0);
    let bv = params.b_at(w0);
    let dv = params.d_at(w0);
    tables.time_domain_reduced = TimeDomainCoefficients {
        a: 0.5 * c * w0.powi(3) * av.d2,
        b: 0.5 * c * w0.powi(3) * bv.d2,
        k: c * wm * dv.value,
        q: -c * wm * dv.value,
        a1: c * av.value,
        b1: c * bv.value,
        k1: c * dv.value,
        q1: c * dv.value,
        a2: 2.0 * c * av.d1,
        b2: 2.0 * c * bv.d1,
        k2: 2.0 * c * dv.d1,
        q2: 2.0 * c * dv.d1,
    };
    tables
}

/// Propagation scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Continuous spectrum, three-term coupling per frequency bin.
    FreqDomain,
    /// Discrete comb, envelopes without time derivatives.
    SidebandSvea,
    /// Discrete comb with group-velocity and GVD envelope terms.
    SidebandFull,
    /// Positive-frequency field with the exact expansion constants.
    TimeDomainFull,
    /// Positive-frequency field with the reduced constant set.
    TimeDomainOffres,
    /// Zero-dispersion limit of the time-domain equation.
    Dispersionless,
}

/// Term groups of the time-domain equation, for ablation studies.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TermToggles {
    /// Phase/amplification terms (`A`, `B`, `K`, `Q`).
    pub phase: bool,
    /// Group-velocity terms (`A1`, `B1`, `K1`, `Q1`).
    pub group_velocity: bool,
    /// GVD terms from the medium dispersion (`A2`, `B2`).
    pub gvd: bool,
    /// Time-varying GVD coupling (`K2`, `Q2`).
    pub gvd_coupling: bool,
}

impl Default for TermToggles {
    fn default() -> Self {
        Self { phase: true, group_velocity: true, gvd: true, gvd_coupling: true }
    }
}

/// z-stepping configuration shared by the propagators.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PropagationConfig {
    /// Propagation length, m.
    pub z_end: f64,
    /// Fixed step; `None` derives one from the stability guard.
    pub dz: Option<f64>,
    pub scheme: Scheme,
    /// `dz × (max modulated-term magnitude)` must stay below this.
    pub stability_guard: f64,
    pub toggles: TermToggles,
}

impl PropagationConfig {
    pub fn new(z_end: f64, scheme: Scheme) -> Self {
        Self {
            z_end,
            dz: None,
            scheme,
            stability_guard: 0.1,
            toggles: TermToggles::default(),
        }
    }

    pub fn with_dz(mut self, dz: f64) -> Self {
        self.dz = Some(dz);
        self
    }

    /// Resolve the step size against a modulated-term magnitude estimate
    /// `lambda` (rad/m); the guard is `dz·λ < stability_guard`.
    pub(crate) fn resolve_dz(&self, lambda: f64) -> Result<(f64, usize)> {
        if !(self.z_end > 0.0) {
            return Err(Error::Domain(format!("z_end must be positive, got {}", self.z_end)));
        }
        let dz_limit =
            if lambda > 0.0 { self.stability_guard / lambda } else { self.z_end };
        match self.dz {
            Some(dz) => {
                if dz * lambda >= self.stability_guard * (1.0 + 1e-12) {
                    return Err(Error::StepSize(format!(
                        "dz = {dz:.3e} m violates the stability guard (dz·λ = {:.3} ≥ {})",
                        dz * lambda,
                        self.stability_guard
                    )));
                }
                let n = (self.z_end / dz - 1e-9).ceil().max(1.0) as usize;
                Ok((self.z_end / n as f64, n))
            }
            None => {
                // Half the guard for margin.
                let dz = (0.5 * dz_limit).min(self.z_end);
                let n = (self.z_end / dz - 1e-9).ceil().max(1.0) as usize;
                Ok((self.z_end / n as f64, n))
            }
        }
    }
}

/// Coherence at depth `z` for a frozen state: the populations stay, the
/// coherence phase advances as `e^{-iκz}`.
pub(crate) fn frozen_rho_ab(
    state: &TwoLevelState,
    kappa: f64,
    z: f64,
) -> num_complex::Complex64 {
    state.rho_ab * num_complex::Complex64::from_polar(1.0, -kappa * z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::Frequency;

    fn fig4_tables() -> CoefficientTables {
        assemble_coefficients(
            &MediumParameters::solid_hydrogen(),
            Frequency::from_wavelength_nm(800.0).unwrap(),
        )
    }

    #[test]
    fn zero_coupling_kills_cross_terms() {
        let mut params = MediumParameters::solid_hydrogen();
        params.d0 = 0.0;
        params.d1 = 0.0;
        params.d2 = 0.0;
        let t = assemble_coefficients(&params, Frequency::from_wavelength_nm(800.0).unwrap());
        assert_eq!(t.time_domain.k, 0.0);
        assert_eq!(t.time_domain.q, 0.0);
        assert_eq!(t.g_at(t.omega0).value, 0.0);
        assert_eq!(t.h_at(t.omega0).value, 0.0);
    }

    #[test]
    fn solid_hydrogen_coupling_scale() {
        // K ≈ (Nħ/ε₀c)·ω_m·d₀ = 4.44e4 m⁻¹, and 2K·ρ₀ equals the beat
        // coupling parameter α.
        let t = fig4_tables();
        let k = t.time_domain_reduced.k;
        assert!((k - 4.44e4).abs() / 4.44e4 < 5e-3, "K = {k:.4e}");
        let rho0 = (0.4_f64.sin() * 0.4_f64.cos()).abs();
        let alpha = crate::analytic::coupling_alpha(&t.params, rho0).unwrap();
        assert!((2.0 * k * rho0 - alpha).abs() < 1e-9 * alpha);
    }

    #[test]
    fn dispersionless_constants_collapse() {
        let params = MediumParameters::solid_hydrogen().without_dispersion();
        let t = assemble_coefficients(&params, Frequency::from_wavelength_nm(800.0).unwrap());
        let c = params.prefactor();
        for set in [&t.time_domain, &t.time_domain_reduced] {
            assert!(set.a.abs() < 1e-20);
            assert!(set.b.abs() < 1e-20);
            assert!(set.a2.abs() < 1e-40);
            assert!(set.b2.abs() < 1e-40);
            assert!(set.k2.abs() < 1e-40);
            assert!(set.q2.abs() < 1e-40);
            let want_k = c * params.omega_m * params.d0;
            assert!((set.k - want_k).abs() < 1e-9 * want_k, "K = {}", set.k);
            assert!((set.q + want_k).abs() < 1e-9 * want_k, "Q = {}", set.q);
            assert!((set.k1 - c * params.d0).abs() < 1e-12 * set.k1.abs());
            assert!((set.q1 - c * params.d0).abs() < 1e-12 * set.q1.abs());
            assert!((set.a1 - c * params.a0).abs() < 1e-12 * set.a1.abs());
            assert!((set.b1 - c * params.b0).abs() < 1e-12 * set.b1.abs());
        }
    }

    #[test]
    fn reduced_constants_within_dropped_term_bound() {
        // The reduction drops terms one far-off-resonance order down, so
        // exact and reduced constants agree to roughly ω₀·x1/x0 ≈ a few %.
        let t = fig4_tables();
        let e = &t.time_domain;
        let r = &t.time_domain_reduced;
        for (exact, reduced) in
            [(e.a1, r.a1), (e.b1, r.b1), (e.k1, r.k1), (e.q1, r.q1), (e.k, r.k), (e.q, r.q)]
        {
            let rel = (exact - reduced).abs() / reduced.abs();
            assert!(rel < 0.15, "exact {exact:.4e} vs reduced {reduced:.4e}");
        }
    }

    #[test]
    fn guard_rejects_oversized_step() {
        let cfg = PropagationConfig::new(50e-6, Scheme::TimeDomainOffres).with_dz(1e-6);
        assert!(matches!(cfg.resolve_dz(1.0e6), Err(Error::StepSize(_))));
        let (dz, n) = cfg.resolve_dz(1.0e4).unwrap();
        assert!(dz * 1.0e4 < 0.1);
        assert_eq!(n, 50);
    }
}
