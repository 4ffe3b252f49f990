//! The zero-dispersion exact engine: time-remap solution, conservation
//! laws, compression/stretch geometry, and the Fourier/Bessel spectral
//! series.
//!
//! In the reduced local time `η = τ - κz/ω_m + φ/ω_m` the probe field obeys
//! a first-order advection equation with a sinusoidally modulated group
//! velocity. Its exact solution is a pure time remap,
//!
//! ```text
//! E(z, η) = E_in(s(η))·G(η),     tan(ω_m s/2) = e^{-αz}·tan(ω_m η/2),
//! G(η) = 1 / (e^{αz}·cos²(ω_m η/2) + e^{-αz}·sin²(ω_m η/2)),
//! ```
//!
//! which rescales the local oscillation frequency, the amplitude, and the
//! envelope duration by the same periodic profile `G`.

mod series;

pub use series::{
    bessel_spectrum, fourier_gain_series, sideband_orders, BesselSpectrum, FourierGainSeries,
    SidebandOrders, SpectrumMode, ValidityReport,
};

use crate::constants::{EPSILON_0, HBAR, SPEED_OF_LIGHT};
use crate::core::{Frequency, SampledField, TimeGrid};
use crate::error::{Error, Result};
use crate::math::{self, MonotoneCubic};
use crate::medium::{MediumParameters, PreparedCoherence};
use serde::{Deserialize, Serialize};

/// Parameters of the beat between the probe and the prepared coherence.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BeatParameters {
    /// Coupling parameter α, m⁻¹.
    pub alpha: f64,
    /// Raman modulation frequency, rad/s.
    pub omega_m: f64,
    /// Propagation length, m.
    pub z: f64,
    /// Coherence phase shift per length κ, m⁻¹ (sets the frame drift
    /// `v = ω_m/κ`).
    pub kappa: f64,
    /// Frame phase `φ = φ₀ + (π/2)·sgn(δ)`, rad.
    pub phi: f64,
}

impl BeatParameters {
    /// Bare beat with a given coupling-length product; frame drift and
    /// phase zero, so `η = τ`.
    pub fn bare(alpha_z: f64, omega_m: f64, z: f64) -> Result<Self> {
        if !(omega_m > 0.0) {
            return Err(Error::Domain("omega_m must be positive".into()));
        }
        if alpha_z < 0.0 {
            return Err(Error::Domain(format!("αz must be ≥ 0, got {alpha_z}")));
        }
        let alpha = if z == 0.0 { 0.0 } else { alpha_z / z };
        Ok(Self { alpha, omega_m, z, kappa: 0.0, phi: 0.0 })
    }

    /// Beat parameters of a probe in a prepared medium at depth `z`.
    pub fn from_medium(
        params: &MediumParameters,
        coherence: &PreparedCoherence,
        z: f64,
    ) -> Result<Self> {
        let alpha = coupling_alpha(params, coherence.rho0)?;
        Ok(Self {
            alpha,
            omega_m: params.omega_m,
            z,
            kappa: coherence.kappa,
            phi: coherence.phi0 + std::f64::consts::FRAC_PI_2 * coherence.sign(),
        })
    }

    pub fn alpha_z(&self) -> f64 {
        self.alpha * self.z
    }

    pub fn raman_period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega_m
    }

    /// Reduced-frame velocity parameter `v = ω_m/κ` (infinite for κ = 0).
    pub fn frame_velocity(&self) -> f64 {
        self.omega_m / self.kappa
    }

    /// Reduced local time of a lab-frame local time at this depth.
    pub fn eta_of_tau(&self, tau: f64) -> f64 {
        tau - self.kappa * self.z / self.omega_m + self.phi / self.omega_m
    }

    pub fn tau_of_eta(&self, eta: f64) -> f64 {
        eta + self.kappa * self.z / self.omega_m - self.phi / self.omega_m
    }

    /// n-th gain peak `η_n = (2n+1)·π/ω_m`.
    pub fn gain_peak_time(&self, n: i64) -> f64 {
        (2 * n + 1) as f64 * std::f64::consts::PI / self.omega_m
    }

    /// n-th gain dip `η = 2nπ/ω_m`.
    pub fn gain_dip_time(&self, n: i64) -> f64 {
        2.0 * n as f64 * std::f64::consts::PI / self.omega_m
    }

    pub fn with_z(mut self, z: f64) -> Self {
        self.z = z;
        self
    }
}

/// Coupling parameter `α = (2ħ/ε₀c)·N·ω_m·d₀·ρ₀`, m⁻¹.
pub fn coupling_alpha(params: &MediumParameters, rho0: f64) -> Result<f64> {
    if !(0.0..=0.5 + 1e-12).contains(&rho0) {
        return Err(Error::Domain(format!("ρ₀ must lie in [0, 1/2], got {rho0}")));
    }
    Ok(2.0 * params.prefactor() * params.omega_m * params.d0 * rho0)
}

/// Gain/compression profile `G(η)`, dimensionless, period `T_m`.
pub fn gain_profile(eta: f64, p: &BeatParameters) -> f64 {
    let az = p.alpha_z();
    let half = 0.5 * p.omega_m * eta;
    let c = half.cos();
    let s = half.sin();
    1.0 / (az.exp() * c * c + (-az).exp() * s * s)
}

/// Monotone input-time map `s(η)` with per-half-period branch matching.
pub fn time_remap(eta: f64, p: &BeatParameters) -> f64 {
    let az = p.alpha_z();
    let x = 0.5 * p.omega_m * eta;
    // s and η share the same half-period index; the principal value uses
    // atan2 so the tan pole at the half-period edge stays exact.
    let k = (x / std::f64::consts::PI).round();
    let x0 = x - k * std::f64::consts::PI;
    let principal = f64::atan2((-az).exp() * x0.sin(), x0.cos());
    2.0 / p.omega_m * (k * std::f64::consts::PI + principal)
}

/// Instantaneous oscillation frequency `ω_osc(η) = G(η)·ω₀`.
pub fn instantaneous_frequency(eta: f64, omega0: Frequency, p: &BeatParameters) -> Frequency {
    Frequency::from_rad_per_s(gain_profile(eta, p) * omega0.rad_per_s()).unwrap()
}

/// Instantaneous susceptibility `χ(η) = (2c/ω_m)·[κ + α·sin(ω_m η)]`.
pub fn susceptibility_profile(eta: f64, p: &BeatParameters, kappa: f64) -> f64 {
    2.0 * SPEED_OF_LIGHT / p.omega_m * (kappa + p.alpha * (p.omega_m * eta).sin())
}

/// The remap solution profiles sampled on a grid of reduced times.
#[derive(Debug, Clone)]
pub struct RemapSolution {
    pub grid: TimeGrid,
    /// Gain/compression profile `G(η_k)`.
    pub gain: Vec<f64>,
    /// Input-time map `s(η_k)`, strictly increasing, `ds/dη = G`.
    pub s_of_eta: Vec<f64>,
    /// `ω_osc(η_k)/ω₀ = G(η_k)`, kept separate so a carrier can be attached
    /// for reporting.
    pub omega_osc_per_omega0: Vec<f64>,
}

pub fn remap_solution(grid: &TimeGrid, p: &BeatParameters) -> RemapSolution {
    let gain: Vec<f64> = grid.times().map(|eta| gain_profile(eta, p)).collect();
    let s_of_eta: Vec<f64> = grid.times().map(|eta| time_remap(eta, p)).collect();
    RemapSolution {
        grid: *grid,
        omega_osc_per_omega0: gain.clone(),
        gain,
        s_of_eta,
    }
}

fn remap_field(
    input: &SampledField,
    p: &BeatParameters,
    frame_offset: f64,
    apply_frame: bool,
) -> Result<SampledField> {
    let grid = input.grid;
    let interp = MonotoneCubic::new(grid.origin(), grid.dt(), input.samples().to_vec());
    let peak = input.peak();
    let mut out = Vec::with_capacity(grid.len());
    for t in grid.times() {
        let eta = if apply_frame { p.eta_of_tau(t) } else { t };
        let s = time_remap(eta, p);
        let g = gain_profile(eta, p);
        let t_in = s - frame_offset;
        if interp.covers(t_in) {
            out.push(interp.eval(t_in) * g);
        } else {
            let at_edge = if t_in < interp.x_min() {
                input.samples()[0].abs()
            } else {
                input.samples()[input.samples().len() - 1].abs()
            };
            if peak == 0.0 || at_edge <= 1e-6 * peak {
                out.push(0.0);
            } else {
                return Err(Error::Coverage(format!(
                    "remapped input time {t_in:.6e} s falls outside the sampled input \
                     [{:.6e}, {:.6e}] where the field has not decayed",
                    interp.x_min(),
                    interp.x_max()
                )));
            }
        }
    }
    SampledField::new(grid, out)
}

/// Propagate a probe field through the dispersionless beat. Input and
/// output are sampled in reduced time (at z = 0 the input coordinate `s`
/// coincides with `η`); the output lives on the same grid.
///
/// Where the remapped input time leaves the sampled input, the field is
/// taken as zero if the corresponding input edge has decayed below the
/// windowing level; otherwise this is a coverage error.
pub fn propagate_dispersionless(input: &SampledField, p: &BeatParameters) -> Result<SampledField> {
    remap_field(input, p, 0.0, false)
}

/// Same beat with input and output sampled in the lab-frame local time τ:
/// the reduced-frame drift `κz/ω_m` and the frame phase `φ/ω_m` of `p` are
/// composed into the remap.
pub fn propagate_dispersionless_lab(
    input: &SampledField,
    p: &BeatParameters,
) -> Result<SampledField> {
    remap_field(input, p, p.phi / p.omega_m, true)
}

/// Paired conserved quantities of an input/output field pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConservationReport {
    /// Full-grid pulse area `∫E dt` of input and output.
    pub area_in: f64,
    pub area_out: f64,
    /// Natural area scale: the largest half-cycle area of the input.
    pub area_scale: f64,
    /// Photon number per unit area, `(cε₀/2ħ)·∫E²/ω dt`.
    pub photons_in: f64,
    pub photons_out: f64,
    /// Mean-frequency × duration products over the mapped support.
    pub product_in: f64,
    pub product_out: f64,
    /// Mean oscillation frequencies over the support, rad/s.
    pub mean_frequency_in: f64,
    pub mean_frequency_out: f64,
    /// Signed zero-crossing counts (hysteresis 1e-6 of peak).
    pub crossings_in: usize,
    pub crossings_out: usize,
}

impl ConservationReport {
    pub fn area_error(&self) -> f64 {
        if self.area_scale == 0.0 {
            0.0
        } else {
            (self.area_out - self.area_in).abs() / self.area_scale
        }
    }

    pub fn photon_error(&self) -> f64 {
        math::rel_diff(self.photons_in, self.photons_out)
    }

    pub fn product_error(&self) -> f64 {
        math::rel_diff(self.product_in, self.product_out)
    }

    pub fn oscillation_count_in(&self) -> f64 {
        self.crossings_in as f64 / 2.0
    }

    pub fn oscillation_count_out(&self) -> f64 {
        self.crossings_out as f64 / 2.0
    }
}

/// Largest half-cycle area of a sampled waveform; the natural scale for
/// area-conservation errors of an oscillatory field whose full-grid area
/// nearly cancels.
fn max_half_cycle_area(field: &SampledField) -> f64 {
    let dt = field.grid.dt();
    let mut best: f64 = 0.0;
    let mut acc = 0.0_f64;
    let mut prev = 0.0_f64;
    for &v in field.samples() {
        if prev != 0.0 && v != 0.0 && prev.signum() != v.signum() {
            best = best.max(acc.abs());
            acc = 0.0;
        }
        acc += 0.5 * dt * (prev + v);
        prev = v;
    }
    best.max(acc.abs())
}

/// Support of a field at a relative magnitude threshold, as grid indices.
fn support_indices(field: &SampledField, threshold: f64) -> Option<(usize, usize)> {
    let peak = field.peak();
    if peak == 0.0 {
        return None;
    }
    let level = threshold * peak;
    let first = field.samples().iter().position(|v| v.abs() >= level)?;
    let last = field.samples().iter().rposition(|v| v.abs() >= level)?;
    Some((first, last))
}

/// Evaluate the conservation relations on an input/output pair of the
/// dispersionless beat.
///
/// The photon number weights the output energy density by the
/// instantaneous frequency `G(η)·ω₀`, and the mean frequencies are the
/// photon-weighted means `∫E²dt / ∫(E²/ω)dt` (mean photon energy over ħ).
/// The duration × mean-frequency product compares the quadrature of
/// `ω_osc` over the output support against `ω₀` times the remapped support
/// length, and zero crossings are counted over that same mapped interval
/// pair — the remap sends zeros in `[s(η₁), s(η₂)]` one-to-one onto zeros
/// in `[η₁, η₂]`, so the restricted counts must agree exactly.
pub fn conservation_report(
    input: &SampledField,
    output: &SampledField,
    omega0: Frequency,
    p: &BeatParameters,
) -> Result<ConservationReport> {
    input.require_windowed()?;
    output.require_windowed()?;
    let w0 = omega0.rad_per_s();
    let dt_out = output.grid.dt();
    let photon_prefactor = SPEED_OF_LIGHT * EPSILON_0 / (2.0 * HBAR);

    let photons_in = photon_prefactor * input.energy_integral() / w0;
    let weighted: Vec<f64> = output
        .grid
        .times()
        .zip(output.samples())
        .map(|(eta, &e)| e * e / (gain_profile(eta, p) * w0))
        .collect();
    let photons_out = photon_prefactor * math::trapz(&weighted, dt_out);
    let mean_out = if photons_out > 0.0 {
        photon_prefactor * output.energy_integral() / photons_out
    } else {
        0.0
    };

    let (product_in, product_out, crossings_in, crossings_out) =
        match support_indices(output, 1e-3) {
            Some((i1, i2)) if i2 > i1 => {
                let eta1 = output.grid.time(i1);
                let eta2 = output.grid.time(i2);
                let s1 = time_remap(eta1, p);
                let s2 = time_remap(eta2, p);
                let gains: Vec<f64> =
                    (i1..=i2).map(|k| gain_profile(output.grid.time(k), p)).collect();
                let product_out = w0 * math::trapz(&gains, dt_out);
                let product_in = w0 * (s2 - s1);
                // Input samples covering the mapped interval [s₁, s₂].
                let dt_in = input.grid.dt();
                let j1 = ((s1 - input.grid.origin()) / dt_in).ceil().max(0.0) as usize;
                let j2 = (((s2 - input.grid.origin()) / dt_in).floor() as usize)
                    .min(input.grid.len() - 1);
                let crossings_in = if j2 > j1 {
                    math::zero_crossings(&input.samples()[j1..=j2], 1e-6)
                } else {
                    0
                };
                let crossings_out = math::zero_crossings(&output.samples()[i1..=i2], 1e-6);
                (product_in, product_out, crossings_in, crossings_out)
            }
            _ => (0.0, 0.0, 0, 0),
        };

    Ok(ConservationReport {
        area_in: input.area(),
        area_out: output.area(),
        area_scale: max_half_cycle_area(input),
        photons_in,
        photons_out,
        product_in,
        product_out,
        mean_frequency_in: w0,
        mean_frequency_out: mean_out,
        crossings_in,
        crossings_out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::WidthConvention;

    const OMEGA_M: f64 = 7.8165889e14;

    fn params(alpha_z: f64) -> BeatParameters {
        BeatParameters::bare(alpha_z, OMEGA_M, 20e-6).unwrap()
    }

    #[test]
    fn gain_extremes() {
        for &az in &[0.6, 0.8, 1.4, 1.59] {
            let p = params(az);
            let tm = p.raman_period();
            assert!((gain_profile(p.gain_peak_time(0), &p) - az.exp()).abs() < 1e-12 * az.exp());
            assert!((gain_profile(0.0, &p) - (-az).exp()).abs() < 1e-14);
            assert!((gain_profile(tm, &p) - (-az).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn gain_period_average_is_unity() {
        // ∫₀^{T_m} G dη = T_m; fine quadrature against the closed form.
        let p = params(1.3);
        let tm = p.raman_period();
        let n = 20_000;
        let dx = tm / n as f64;
        let y: Vec<f64> = (0..=n).map(|k| gain_profile(k as f64 * dx, &p)).collect();
        let integral = math::trapz(&y, dx);
        assert!((integral - tm).abs() / tm < 1e-9, "{integral:e} vs {tm:e}");
    }

    #[test]
    fn remap_fixed_points() {
        let p = params(0.8);
        let tm = p.raman_period();
        assert_eq!(time_remap(0.0, &p), 0.0);
        let s_half = time_remap(tm / 2.0, &p);
        assert!((s_half - tm / 2.0).abs() < 1e-15 * tm, "s(T_m/2) = {s_half:e}");
        // Periodicity: s(η + T_m) = s(η) + T_m.
        let eta = 0.37 * tm;
        assert!((time_remap(eta + tm, &p) - time_remap(eta, &p) - tm).abs() < 1e-14 * tm);
    }

    #[test]
    fn remap_reference_value() {
        // αz = 0.8, ω_m·η/2 = π/4 → ω_m·s/2 = atan(e^{-0.8}); high-precision
        // independent evaluation gives 0.42229575202668385 rad.
        let p = params(0.8);
        let eta = std::f64::consts::FRAC_PI_2 / p.omega_m;
        let s = time_remap(eta, &p);
        let got = 0.5 * p.omega_m * s;
        assert!((got - 0.42229575202668385).abs() < 1e-12, "ω_m·s/2 = {got}");
    }

    #[test]
    fn remap_derivative_is_gain() {
        let p = params(1.1);
        let tm = p.raman_period();
        let h = 1e-7 * tm;
        for k in -7..=7 {
            let eta = 0.23 * tm * k as f64;
            let numeric = (time_remap(eta + h, &p) - time_remap(eta - h, &p)) / (2.0 * h);
            let g = gain_profile(eta, &p);
            assert!((numeric - g).abs() / g < 1e-7, "ds/dη = {numeric} vs G = {g}");
        }
    }

    #[test]
    fn remap_strictly_increasing() {
        let p = params(1.59);
        let tm = p.raman_period();
        let n = 4096;
        let mut prev = f64::NEG_INFINITY;
        for k in 0..n {
            let eta = -4.0 * tm + 8.0 * tm * k as f64 / n as f64;
            let s = time_remap(eta, &p);
            assert!(s > prev, "not increasing at η = {eta:e}");
            prev = s;
        }
    }

    #[test]
    fn instantaneous_frequency_scales() {
        let p = params(0.8);
        let w0 = Frequency::from_rad_per_s(5.2 * OMEGA_M).unwrap();
        let peak = instantaneous_frequency(p.gain_peak_time(0), w0, &p);
        let want = 0.8_f64.exp() * w0.rad_per_s();
        assert!((peak.rad_per_s() - want).abs() < 1e-9 * want);
        let z0 = BeatParameters::bare(0.0, OMEGA_M, 1.0).unwrap();
        let flat = instantaneous_frequency(0.33e-15, w0, &z0);
        assert!((flat.rad_per_s() - w0.rad_per_s()).abs() < 1e-12 * w0.rad_per_s());
    }

    #[test]
    fn frequency_period_average_is_carrier() {
        // (1/T_m)∫ω_osc dη = ω₀, a direct consequence of ∫G = T_m.
        let p = params(0.9);
        let w0 = Frequency::from_rad_per_s(5.2 * OMEGA_M).unwrap();
        let tm = p.raman_period();
        let n = 10_000;
        let dx = tm / n as f64;
        let y: Vec<f64> = (0..=n)
            .map(|k| instantaneous_frequency(k as f64 * dx, w0, &p).rad_per_s())
            .collect();
        let mean = math::trapz(&y, dx) / tm;
        assert!((mean - w0.rad_per_s()).abs() / w0.rad_per_s() < 1e-9);
    }

    #[test]
    fn susceptibility_baseline_and_extrema() {
        // Solid-hydrogen scale: χ(α = 0) = 2cκ/ω_m ≈ 0.15.
        let p = BeatParameters { alpha: 0.0, omega_m: OMEGA_M, z: 0.0, kappa: 1.979e5, phi: 0.0 };
        let chi = susceptibility_profile(0.0, &p, 1.979e5);
        assert!((chi - 0.1518).abs() < 5e-4, "χ = {chi}");

        // χ is extremal a quarter period away from the extrema of G, and G
        // peaks on the steepest negative slope of χ.
        let p = params(0.9);
        let tm = p.raman_period();
        let h = 1e-9 * tm;
        let chi_slope = |eta: f64| {
            (susceptibility_profile(eta + h, &p, 0.0) - susceptibility_profile(eta - h, &p, 0.0))
                / (2.0 * h)
        };
        let quarter = tm / 4.0;
        assert!(chi_slope(quarter).abs() < 1e-6 * chi_slope(0.0).abs());
        assert!(chi_slope(3.0 * quarter).abs() < 1e-6 * chi_slope(0.0).abs());
        // G peaks on the steepest negative slope of χ, dips on the positive.
        assert!(chi_slope(p.gain_peak_time(0)) < 0.0);
        assert!(chi_slope(p.gain_dip_time(0)) > 0.0);
        // χ extrema sit a quarter period from the G extrema.
        assert!((p.gain_peak_time(0) - quarter - tm / 4.0).abs() < 1e-12 * tm);
    }

    #[test]
    fn coupling_alpha_solid_hydrogen() {
        let params = MediumParameters::solid_hydrogen();
        // ρ₀ from the antiphased mixing angle θ = -0.4.
        let rho0 = (0.4_f64.sin() * 0.4_f64.cos()).abs();
        let alpha = coupling_alpha(&params, rho0).unwrap();
        let az = alpha * 20e-6;
        assert!((az - 0.64).abs() < 0.02, "αz(20 μm) = {az}");
    }

    #[test]
    fn coupling_alpha_linearity_and_edges() {
        let params = MediumParameters::solid_hydrogen();
        assert_eq!(coupling_alpha(&params, 0.0).unwrap(), 0.0);
        let a1 = coupling_alpha(&params, 0.18).unwrap();
        let a2 = coupling_alpha(&params, 0.36).unwrap();
        assert!((a2 - 2.0 * a1).abs() < 1e-12 * a2);
        assert!(coupling_alpha(&params, 0.7).is_err());
    }

    fn fig2_input(n: usize, periods: f64) -> (SampledField, Frequency) {
        let tm = 2.0 * std::f64::consts::PI / OMEGA_M;
        let w0 = Frequency::from_rad_per_s(5.2 * OMEGA_M).unwrap();
        let grid = TimeGrid::centered(periods * tm, n).unwrap();
        let field = SampledField::gaussian(
            grid,
            w0,
            0.0,
            10.0 * tm,
            WidthConvention::IntensityFwhm,
            1.0,
            0.0,
        )
        .unwrap();
        (field, w0)
    }

    #[test]
    fn zero_compression_is_identity() {
        let (input, _) = fig2_input(4096, 64.0);
        let p = BeatParameters::bare(0.0, OMEGA_M, 1.0).unwrap();
        let out = propagate_dispersionless(&input, &p).unwrap();
        let worst = input
            .samples()
            .iter()
            .zip(out.samples())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(worst < 1e-12 * input.peak());
    }

    #[test]
    fn pulse_train_forms_at_gain_peaks() {
        // Long pulse, αz = 0.6: a train with period T_m, envelope maxima at
        // the gain peaks η_n, amplitude growth ≈ e^{αz}.
        let (input, _) = fig2_input(1 << 15, 64.0);
        let p = params(0.6);
        let out = propagate_dispersionless(&input, &p).unwrap();
        let tm = p.raman_period();
        for n in -2..=2 {
            let eta_n = p.gain_peak_time(n);
            let max_near = out
                .grid
                .times()
                .zip(out.samples())
                .filter(|(eta, _)| (eta - eta_n).abs() < 0.1 * tm)
                .fold(0.0_f64, |m, (_, &v)| m.max(v.abs()));
            let max_off = out
                .grid
                .times()
                .zip(out.samples())
                .filter(|(eta, _)| (eta - p.gain_dip_time(n)).abs() < 0.1 * tm)
                .fold(0.0_f64, |m, (_, &v)| m.max(v.abs()));
            assert!(
                max_near > 2.5 * max_off,
                "no train contrast at peak {n}: {max_near} vs {max_off}"
            );
        }
        let growth = out.peak() / input.peak();
        assert!((growth - 0.6_f64.exp()).abs() < 0.05, "growth {growth}");
    }

    #[test]
    fn short_pulse_at_peak_compresses_and_upshifts() {
        let p = params(0.8);
        let tm = p.raman_period();
        let w0 = Frequency::from_rad_per_s(15.2 * OMEGA_M).unwrap();
        let grid = TimeGrid::centered(8.0 * tm, 1 << 14).unwrap();
        let input = SampledField::gaussian(
            grid,
            w0,
            tm / 2.0, // gain peak
            0.1 * tm,
            WidthConvention::IntensityFwhm,
            1.0,
            0.0,
        )
        .unwrap();
        let out = propagate_dispersionless(&input, &p).unwrap();
        // Energy grows by ≈ e^{αz} while the photon number is unchanged.
        let report = conservation_report(&input, &out, w0, &p).unwrap();
        let energy_ratio = out.energy_integral() / input.energy_integral();
        assert!(
            (energy_ratio - 0.8_f64.exp()).abs() / 0.8_f64.exp() < 0.05,
            "energy ratio {energy_ratio}"
        );
        assert!(report.photon_error() < 2e-3, "photons {:.3e}", report.photon_error());
        let ratio = report.mean_frequency_out / w0.rad_per_s();
        assert!((ratio - 0.8_f64.exp()).abs() / 0.8_f64.exp() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn conservation_identity_case() {
        let (input, w0) = fig2_input(8192, 64.0);
        let p = BeatParameters::bare(0.0, OMEGA_M, 1.0).unwrap();
        let out = propagate_dispersionless(&input, &p).unwrap();
        let report = conservation_report(&input, &out, w0, &p).unwrap();
        assert!(report.area_error() < 1e-12);
        assert!(report.photon_error() < 1e-12);
        assert!(report.product_error() < 1e-12);
        assert_eq!(report.crossings_in, report.crossings_out);
    }

    #[test]
    fn conservation_fig2_scenario() {
        let (input, w0) = fig2_input(1 << 16, 64.0);
        let p = params(0.6);
        let out = propagate_dispersionless(&input, &p).unwrap();
        let report = conservation_report(&input, &out, w0, &p).unwrap();
        assert!(report.area_error() < 1e-3, "area {:.3e}", report.area_error());
        assert!(report.photon_error() < 1e-3, "photons {:.3e}", report.photon_error());
        assert!(report.product_error() < 1e-3, "product {:.3e}", report.product_error());
        assert_eq!(report.crossings_in, report.crossings_out);
    }

    #[test]
    fn short_pulse_at_dip_downshifts() {
        // Injection at the gain dip: mean-frequency ratio e^{-αz} ± 2%.
        let p = params(0.8);
        let tm = p.raman_period();
        let w0 = Frequency::from_rad_per_s(15.2 * OMEGA_M).unwrap();
        let grid = TimeGrid::centered(8.0 * tm, 1 << 14).unwrap();
        let input = SampledField::gaussian(
            grid,
            w0,
            0.0,
            0.1 * tm,
            WidthConvention::IntensityFwhm,
            1.0,
            0.0,
        )
        .unwrap();
        let out = propagate_dispersionless(&input, &p).unwrap();
        let report = conservation_report(&input, &out, w0, &p).unwrap();
        let ratio = report.mean_frequency_out / w0.rad_per_s();
        // The stretched pulse samples the rising wings of G, so any
        // energy-weighted mean sits a few percent above e^{-αz}.
        let want = (-0.8_f64).exp();
        assert!(ratio < 0.55 && (ratio - want).abs() / want < 0.10, "ratio {ratio} vs {want}");
    }

    #[test]
    fn lab_frame_reduces_to_reduced_frame_without_drift() {
        let (input, _) = fig2_input(8192, 64.0);
        let p = params(0.7);
        let a = propagate_dispersionless(&input, &p).unwrap();
        let b = propagate_dispersionless_lab(&input, &p).unwrap();
        let worst = a
            .samples()
            .iter()
            .zip(b.samples())
            .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
        assert!(worst < 1e-12 * a.peak());
    }
}
