//! Group-velocity-dispersion compression analysis: the optimal medium
//! length at which the relative group delay across the generated bandwidth
//! equals the Raman half-period, and the resulting improvement factor.

use crate::core::Frequency;
use crate::error::{Error, Result};
use crate::medium::{MediumParameters, RamanCoefficients, TwoLevelState};
use serde::{Deserialize, Serialize};

/// The finite-optimum part of the analysis.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GvdOptimum {
    /// Optimal medium length, m.
    pub length: f64,
    /// Compression factor with dispersion, `Γ = 1 + 2(ω₀/ω_m)·sinh(αL)`.
    pub gamma: f64,
    /// Dispersionless compression factor `Γ₀ = e^{αL}`.
    pub gamma0: f64,
    /// Improvement `D = Γ/Γ₀`.
    pub improvement: f64,
}

/// GVD analysis result.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GvdAnalysis {
    /// Group-velocity dispersion `k''(ω₀) = (2Nħ/ε₀c)(a'·ρ_aa + b'·ρ_bb)`,
    /// s²/m.
    pub k2: f64,
    /// Large-`αL` limit of the improvement, `ω₀/ω_m`.
    pub improvement_asymptotic: f64,
    /// `None` when `k'' ≤ 0` (no finite optimal length).
    pub optimum: Option<GvdOptimum>,
}

/// Dispersion-assisted compression analysis at carrier `omega0` for a
/// medium prepared with coupling parameter `alpha`.
///
/// The optimal length solves `L·sinh(αL) = π/(2·ω_m·ω₀·k'')` by bracketed
/// bisection of the monotone left-hand side.
pub fn gvd_analysis(
    params: &MediumParameters,
    state: &TwoLevelState,
    omega0: Frequency,
    alpha: f64,
) -> Result<GvdAnalysis> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("α must be positive, got {alpha}")));
    }
    let w0 = omega0.rad_per_s();
    let a1 = params.a_at(w0).d1;
    let b1 = params.b_at(w0).d1;
    let k2 = 2.0 * params.prefactor() * (a1 * state.rho_aa + b1 * state.rho_bb);
    let ratio = w0 / params.omega_m;

    if k2 <= 0.0 {
        return Ok(GvdAnalysis { k2, improvement_asymptotic: ratio, optimum: None });
    }

    let target = std::f64::consts::PI / (2.0 * params.omega_m * w0 * k2);
    // L·sinh(αL) is strictly increasing from 0; bracket then bisect.
    let f = |length: f64| length * (alpha * length).sinh() - target;
    let mut hi = 1.0 / alpha;
    while f(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Ok(GvdAnalysis { k2, improvement_asymptotic: ratio, optimum: None });
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) < 1e-14 * hi {
            break;
        }
    }
    let length = 0.5 * (lo + hi);
    let gamma = 1.0 + 2.0 * ratio * (alpha * length).sinh();
    let gamma0 = (alpha * length).exp();
    Ok(GvdAnalysis {
        k2,
        improvement_asymptotic: ratio,
        optimum: Some(GvdOptimum { length, gamma, gamma0, improvement: gamma / gamma0 }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::coupling_alpha;

    fn antiphased() -> TwoLevelState {
        TwoLevelState::pure(-0.4, 0.0)
    }

    #[test]
    fn solid_hydrogen_optimum_near_52_um() {
        let params = MediumParameters::solid_hydrogen();
        let state = antiphased();
        let alpha = coupling_alpha(&params, state.rho_ab.norm()).unwrap();
        let w0 = Frequency::from_wavelength_nm(800.0).unwrap();
        let analysis = gvd_analysis(&params, &state, w0, alpha).unwrap();
        let opt = analysis.optimum.expect("finite optimum");
        assert!(
            (opt.length - 52e-6).abs() / 52e-6 < 0.10,
            "L_opt = {:.2} μm",
            opt.length * 1e6
        );
        // Improvement approaches ω₀/ω_m ≈ 3.0 in the αL ≫ 1 regime.
        assert!((analysis.improvement_asymptotic - 3.0).abs() < 0.05);
        assert!(
            (opt.improvement - 3.0).abs() / 3.0 < 0.05,
            "D = {}",
            opt.improvement
        );
    }

    #[test]
    fn zero_dispersion_has_no_finite_optimum() {
        let params = MediumParameters::solid_hydrogen().without_dispersion();
        let state = antiphased();
        let alpha = coupling_alpha(&params, state.rho_ab.norm()).unwrap();
        let w0 = Frequency::from_wavelength_nm(800.0).unwrap();
        let analysis = gvd_analysis(&params, &state, w0, alpha).unwrap();
        assert_eq!(analysis.k2, 0.0);
        assert!(analysis.optimum.is_none());
    }

    #[test]
    fn rejects_nonpositive_alpha() {
        let params = MediumParameters::solid_hydrogen();
        let w0 = Frequency::from_wavelength_nm(800.0).unwrap();
        assert!(gvd_analysis(&params, &antiphased(), w0, 0.0).is_err());
    }
}
