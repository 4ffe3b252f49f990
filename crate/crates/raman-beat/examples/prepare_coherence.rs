//! Resolve the prepared Raman coherence two ways: from a directly given
//! mixing angle, and adiabatically from a two-line drive.

use num_complex::Complex64;
use raman_beat::analytic::coupling_alpha;
use raman_beat::core::{Frequency, WidthConvention};
use raman_beat::medium::{
    adiabatic_state, kappa_of, rabi_and_stark, DriveConfig, DriveField, MediumParameters,
    PreparedCoherence, SidebandAmplitudes, TwoLevelState,
};

fn main() -> raman_beat::Result<()> {
    let params = MediumParameters::solid_hydrogen();
    println!("solid hydrogen: N = {:.2e} m⁻³, ω_m = {:.4e} rad/s (T_m = {:.2} fs)\n",
        params.density, params.omega_m, params.raman_period() * 1e15);

    // Route 1: the antiphased state with a directly chosen mixing angle.
    let theta = -0.4;
    let state = TwoLevelState::pure(theta, 0.0);
    let kappa = kappa_of(&params, &state);
    let coherence = PreparedCoherence::new(theta, 0.0, kappa)?;
    let alpha = coupling_alpha(&params, coherence.rho0)?;
    println!("direct: θ = {theta}");
    println!("  ρ_aa = {:.4}, ρ_bb = {:.4}, |ρ_ab| = {:.4}", state.rho_aa, state.rho_bb, coherence.rho0);
    println!("  κ = {kappa:.4e} m⁻¹, α = {alpha:.4e} m⁻¹");
    for z_um in [20.0, 30.0, 40.0, 50.0] {
        let az = alpha * z_um * 1e-6;
        println!("  z = {z_um:.0} μm → αz = {az:.3}, gain e^(αz) = {:.3}", az.exp());
    }

    // Route 2: adiabatic preparation by two driving lines detuned by
    // δ/2π = -50 MHz from the Raman resonance.
    let lower = Frequency::from_wavenumber_per_cm(24_019.0)?;
    let intensity_w_cm2 = 1.0e9;
    let amplitude = (2.0 * intensity_w_cm2 * 1e4
        / (raman_beat::constants::SPEED_OF_LIGHT * raman_beat::constants::EPSILON_0))
        .sqrt();
    let mk = |freq: f64| DriveField {
        frequency: Frequency::from_rad_per_s(freq).unwrap(),
        amplitude,
        peak_time: 0.0,
        width: 10e-9,
        convention: WidthConvention::IntensityFwhm,
        phase: 0.0,
    };
    let drive = DriveConfig {
        lower: mk(lower.rad_per_s()),
        upper: mk(lower.rad_per_s() + params.omega_m),
        delta: -2.0 * std::f64::consts::PI * 50e6,
        gamma1: 0.0,
        gamma2: 0.0,
    };
    let comb = SidebandAmplitudes {
        omega_lowest: drive.lower.frequency.rad_per_s(),
        omega_m: params.omega_m,
        amplitudes: vec![
            Complex64::from(amplitude),
            Complex64::from(amplitude),
        ],
    };
    let rabi = rabi_and_stark(&comb, &params);
    let (prepared, state) = adiabatic_state(&rabi, drive.delta, &params)?;
    println!("\nadiabatic: 416 nm + 355 nm drive at {intensity_w_cm2:.0e} W/cm², δ/2π = -50 MHz");
    println!("  Ω_ab = {:.3e} rad/s, Stark Ω_aa - Ω_bb = {:.3e} rad/s", rabi.om_ab.norm(), rabi.om_aa - rabi.om_bb);
    println!("  θ = {:.4}, ρ_aa = {:.4}, ρ_bb = {:.4}, |ρ_ab| = {:.4}",
        prepared.theta, state.rho_aa, state.rho_bb, prepared.rho0);
    println!("  κ = {:.4e} m⁻¹, α = {:.4e} m⁻¹",
        prepared.kappa, coupling_alpha(&params, prepared.rho0)?);
    Ok(())
}
