//! Units, grids, and field representations shared by all other modules.
//!
//! Everything is SI internally; unit conversions happen only at the
//! boundary (see [`Frequency`]). Fields live on uniform power-of-two grids
//! and must decay below `1e-6` of their peak at both grid ends before any
//! spectral operation touches them — windowing is the caller's job.

pub mod fft;

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::math;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Relative edge level above which a field is considered unwindowed.
pub const WINDOW_EDGE_LEVEL: f64 = 1e-6;

/// An angular frequency in rad/s.
///
/// Constructors accept the unit systems mixed freely in the Raman
/// literature: vacuum wavelength in nm, spectroscopic wavenumber in cm⁻¹,
/// plain Hz, and rad/s.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Frequency(f64);

/// Unit tag for [`convert_frequency`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrequencyUnit {
    Nanometers,
    PerCentimeter,
    RadPerSecond,
    Hertz,
}

impl Frequency {
    pub fn from_rad_per_s(omega: f64) -> Result<Self> {
        if !omega.is_finite() {
            return Err(Error::Domain(format!("non-finite frequency {omega}")));
        }
        Ok(Self(omega))
    }

    pub fn from_hz(f: f64) -> Result<Self> {
        Self::from_rad_per_s(2.0 * std::f64::consts::PI * f)
    }

    /// From vacuum wavelength in nanometers.
    pub fn from_wavelength_nm(lambda_nm: f64) -> Result<Self> {
        if !(lambda_nm > 0.0) {
            return Err(Error::Domain(format!(
                "wavelength must be positive, got {lambda_nm} nm"
            )));
        }
        Ok(Self(2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / (lambda_nm * 1e-9)))
    }

    /// From spectroscopic wavenumber in cm⁻¹.
    pub fn from_wavenumber_per_cm(nu_cm: f64) -> Result<Self> {
        if !(nu_cm > 0.0) {
            return Err(Error::Domain(format!(
                "wavenumber must be positive, got {nu_cm} cm⁻¹"
            )));
        }
        Ok(Self(2.0 * std::f64::consts::PI * SPEED_OF_LIGHT * nu_cm * 100.0))
    }

    pub fn rad_per_s(self) -> f64 {
        self.0
    }

    pub fn hz(self) -> f64 {
        self.0 / (2.0 * std::f64::consts::PI)
    }

    pub fn wavelength_nm(self) -> f64 {
        2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / self.0 * 1e9
    }

    pub fn wavenumber_per_cm(self) -> f64 {
        self.0 / (2.0 * std::f64::consts::PI * SPEED_OF_LIGHT * 100.0)
    }
}

/// Convert `value` in the given unit to an angular frequency.
pub fn convert_frequency(value: f64, unit: FrequencyUnit) -> Result<Frequency> {
    match unit {
        FrequencyUnit::Nanometers => Frequency::from_wavelength_nm(value),
        FrequencyUnit::PerCentimeter => Frequency::from_wavenumber_per_cm(value),
        FrequencyUnit::RadPerSecond => Frequency::from_rad_per_s(value),
        FrequencyUnit::Hertz => Frequency::from_hz(value),
    }
}

/// A uniform local-time grid `τ_k = origin + k·dt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    origin: f64,
    dt: f64,
    n: usize,
}

impl TimeGrid {
    pub fn new(origin: f64, dt: f64, n: usize) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::Grid(format!("dt must be positive, got {dt}")));
        }
        if n < 2 {
            return Err(Error::Grid(format!("need at least 2 points, got {n}")));
        }
        Ok(Self { origin, dt, n })
    }

    /// Grid of `n` points centered on t = 0 spanning `span`.
    pub fn centered(span: f64, n: usize) -> Result<Self> {
        if !(span > 0.0) {
            return Err(Error::Grid(format!("span must be positive, got {span}")));
        }
        let dt = span / n as f64;
        Self::new(-0.5 * span, dt, n)
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, k: usize) -> f64 {
        self.origin + k as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.time(k))
    }

    /// Total span `(n-1)·dt`.
    pub fn span(&self) -> f64 {
        (self.n - 1) as f64 * self.dt
    }

    /// Frequency resolution `2π/(n·dt)` of the discrete spectrum.
    pub fn d_omega(&self) -> f64 {
        2.0 * std::f64::consts::PI / (self.n as f64 * self.dt)
    }

    pub fn nyquist(&self) -> f64 {
        std::f64::consts::PI / self.dt
    }

    fn require_pow2(&self) -> Result<()> {
        if self.n.is_power_of_two() {
            Ok(())
        } else {
            Err(Error::Grid(format!(
                "spectral operations need a power-of-two grid, got n = {}",
                self.n
            )))
        }
    }
}

/// Gaussian width conventions; the figures in the ultrafast literature
/// rarely state which one they use, so it is explicit here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthConvention {
    /// Full width at half maximum of the intensity profile (default).
    IntensityFwhm,
    /// Full width at half maximum of the field envelope.
    FieldFwhm,
    /// Envelope `exp(-(t/T)²)`: 1/e of the field at `t = T`.
    OneOverEField,
}

impl WidthConvention {
    /// Gaussian envelope decay constant `c` in `exp(-c·t²)` for width `t_w`.
    fn decay_constant(self, width: f64) -> f64 {
        let ln2 = std::f64::consts::LN_2;
        match self {
            WidthConvention::IntensityFwhm => 2.0 * ln2 / (width * width),
            WidthConvention::FieldFwhm => 4.0 * ln2 / (width * width),
            WidthConvention::OneOverEField => 1.0 / (width * width),
        }
    }
}

/// A real electric field sampled on a uniform local-time grid, V/m.
#[derive(Debug, Clone)]
pub struct SampledField {
    pub grid: TimeGrid,
    samples: Vec<f64>,
}

impl SampledField {
    pub fn new(grid: TimeGrid, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::Grid(format!(
                "sample count {} does not match grid ({})",
                samples.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, samples })
    }

    /// Windowed Gaussian pulse `A·exp(-c(τ-τ_p)²)·cos(ω₀(τ-τ_p) + phase)`.
    pub fn gaussian(
        grid: TimeGrid,
        carrier: Frequency,
        peak_time: f64,
        width: f64,
        convention: WidthConvention,
        amplitude: f64,
        phase: f64,
    ) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::Domain(format!("width must be positive, got {width}")));
        }
        let c = convention.decay_constant(width);
        let w0 = carrier.rad_per_s();
        let samples = grid
            .times()
            .map(|t| {
                let u = t - peak_time;
                amplitude * (-c * u * u).exp() * (w0 * u + phase).cos()
            })
            .collect();
        Self::new(grid, samples)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Largest edge sample relative to the peak; `0` for the zero field.
    pub fn edge_level(&self) -> f64 {
        let peak = self.peak();
        if peak == 0.0 {
            return 0.0;
        }
        let first = self.samples[0].abs();
        let last = self.samples[self.samples.len() - 1].abs();
        first.max(last) / peak
    }

    /// Check the edge-decay requirement for spectral operations.
    pub fn require_windowed(&self) -> Result<()> {
        let level = self.edge_level();
        if level > WINDOW_EDGE_LEVEL {
            Err(Error::Windowing(format!(
                "field edge level {level:.3e} exceeds {WINDOW_EDGE_LEVEL:.0e} of peak"
            )))
        } else {
            Ok(())
        }
    }

    /// `∫ E dτ` over the whole grid.
    pub fn area(&self) -> f64 {
        math::trapz(&self.samples, self.grid.dt())
    }

    /// `∫ E² dτ` over the whole grid (fluence up to `cε₀/2`).
    pub fn energy_integral(&self) -> f64 {
        let sq: Vec<f64> = self.samples.iter().map(|v| v * v).collect();
        math::trapz(&sq, self.grid.dt())
    }

    /// Signed zero-crossing count with the standard 1e-6 hysteresis.
    pub fn oscillation_crossings(&self) -> usize {
        math::zero_crossings(&self.samples, 1e-6)
    }
}

/// The positive-frequency companion `ℰ(τ)` of a real field,
/// `E = (ℰ + ℰ*)/2`.
#[derive(Debug, Clone)]
pub struct AnalyticField {
    pub grid: TimeGrid,
    samples: Vec<Complex64>,
}

impl AnalyticField {
    pub fn new(grid: TimeGrid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::Grid(format!(
                "sample count {} does not match grid ({})",
                samples.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, samples })
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// Reconstruct the real field `E = Re ℰ`.
    pub fn real_field(&self) -> SampledField {
        SampledField {
            grid: self.grid,
            samples: self.samples.iter().map(|z| z.re).collect(),
        }
    }

    /// Envelope magnitude `|ℰ|`.
    pub fn envelope(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.norm()).collect()
    }

    pub fn peak_envelope(&self) -> f64 {
        self.samples.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// Largest spectral magnitude at non-positive frequencies relative to
    /// the spectral peak. Small for a proper one-sided field.
    pub fn nonpositive_leakage(&self) -> Result<f64> {
        self.grid.require_pow2()?;
        let n = self.grid.len();
        let plan = fft::FftPlan::new(n);
        let mut buf = self.samples.clone();
        plan.dft_pos(&mut buf);
        let peak = buf.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
        if peak == 0.0 {
            return Ok(0.0);
        }
        let mut worst = buf[0].norm(); // DC
        for (j, z) in buf.iter().enumerate().skip(n / 2) {
            let _ = j;
            worst = worst.max(z.norm());
        }
        Ok(worst / peak)
    }
}

/// A discrete spectrum in the crate Fourier convention, stored on an
/// ascending frequency axis.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Ascending angular frequency axis, rad/s.
    pub omega: Vec<f64>,
    /// Complex spectral amplitude `E_ω`, V·s/m.
    pub amplitude: Vec<Complex64>,
    /// Grid the spectrum was computed from; retained for exact inversion.
    pub grid: TimeGrid,
}

impl Spectrum {
    /// Worst Hermitian-symmetry violation `|E_{-ω} - E_ω*|` relative to the
    /// spectral peak.
    pub fn hermitian_violation(&self) -> f64 {
        let n = self.omega.len();
        let peak = self.amplitude.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
        if peak == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0_f64;
        // position p holds ω_p = (p - n/2)·dω; its mirror is at n - p.
        for p in 1..n {
            let q = n - p;
            if q >= n {
                continue;
            }
            let diff = (self.amplitude[p] - self.amplitude[q].conj()).norm();
            worst = worst.max(diff);
        }
        worst / peak
    }

    /// Frequency-domain energy `(π/2)·Σ|E_ω|²·dω`; equals `∫E²dτ` by
    /// Parseval.
    pub fn energy_integral(&self) -> f64 {
        let d_omega = self.grid.d_omega();
        let sum: f64 = self.amplitude.iter().map(|z| z.norm_sqr()).sum();
        0.5 * std::f64::consts::PI * sum * d_omega
    }

    /// Total power `Σ|E_ω|²·dω` without the Parseval prefactor; used for
    /// normalized sideband reports.
    pub fn total_power(&self) -> f64 {
        let d_omega = self.grid.d_omega();
        self.amplitude.iter().map(|z| z.norm_sqr()).sum::<f64>() * d_omega
    }
}

/// Extract the positive-frequency companion of a windowed real field.
pub fn analytic_signal(field: &SampledField) -> Result<AnalyticField> {
    field.require_windowed()?;
    field.grid.require_pow2()?;
    let n = field.grid.len();
    let plan = fft::FftPlan::new(n);
    let mut buf: Vec<Complex64> =
        field.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    plan.dft_pos(&mut buf);
    // One-sided weights: DC and Nyquist once, positive bins twice, negative
    // bins dropped; Re(ℰ) then reconstructs E exactly.
    for (j, z) in buf.iter_mut().enumerate() {
        let w = if j == 0 || j == n / 2 {
            1.0
        } else if j < n / 2 {
            2.0
        } else {
            0.0
        };
        *z *= w / n as f64;
    }
    plan.dft_neg(&mut buf);
    AnalyticField::new(field.grid, buf)
}

/// Spectrum of a windowed real field.
pub fn spectrum_of(field: &SampledField) -> Result<Spectrum> {
    field.require_windowed()?;
    field.grid.require_pow2()?;
    let n = field.grid.len();
    let dt = field.grid.dt();
    let t0 = field.grid.origin();
    let plan = fft::FftPlan::new(n);
    let mut buf: Vec<Complex64> =
        field.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    plan.dft_pos(&mut buf);
    let scale = dt / std::f64::consts::PI;
    let omegas = fft::bin_omegas(n, dt);
    for (j, z) in buf.iter_mut().enumerate() {
        let phase = Complex64::from_polar(scale, omegas[j] * t0);
        *z *= phase;
    }
    // Reorder to ascending frequency.
    let mut omega = vec![0.0; n];
    let mut amplitude = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        let p = fft::bin_to_ascending(j, n);
        omega[p] = omegas[j];
        amplitude[p] = buf[j];
    }
    Ok(Spectrum { omega, amplitude, grid: field.grid })
}

/// Spectrum of the real field underlying an analytic field; the negative
/// side is filled in by Hermitian symmetry.
pub fn spectrum_of_analytic(field: &AnalyticField) -> Result<Spectrum> {
    field.grid.require_pow2()?;
    let n = field.grid.len();
    let dt = field.grid.dt();
    let t0 = field.grid.origin();
    let plan = fft::FftPlan::new(n);
    let mut buf = field.samples.clone();
    plan.dft_pos(&mut buf);
    let scale = dt / (2.0 * std::f64::consts::PI);
    let omegas = fft::bin_omegas(n, dt);
    let mut omega = vec![0.0; n];
    let mut amplitude = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        let p = fft::bin_to_ascending(j, n);
        omega[p] = omegas[j];
        if omegas[j] >= 0.0 {
            amplitude[p] = buf[j] * Complex64::from_polar(scale, omegas[j] * t0);
        }
    }
    // Mirror: E_{-ω} = E_ω*.
    for p in 0..n {
        if omega[p] < 0.0 {
            let q = n - p;
            if q < n {
                amplitude[p] = amplitude[q].conj();
            }
        }
    }
    Ok(Spectrum { omega, amplitude, grid: field.grid })
}

/// Invert a spectrum back to the real field on its source grid.
pub fn inverse_spectrum(spectrum: &Spectrum) -> Result<SampledField> {
    let grid = spectrum.grid;
    grid.require_pow2()?;
    let n = grid.len();
    if spectrum.amplitude.len() != n {
        return Err(Error::Grid(format!(
            "spectrum length {} does not match grid ({n})",
            spectrum.amplitude.len()
        )));
    }
    let dt = grid.dt();
    let t0 = grid.origin();
    let d_omega = grid.d_omega();
    let plan = fft::FftPlan::new(n);
    let omegas = fft::bin_omegas(n, dt);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for p in 0..n {
        let j = fft::ascending_to_bin(p, n);
        buf[j] = spectrum.amplitude[p] * Complex64::from_polar(1.0, -omegas[j] * t0);
    }
    plan.dft_neg(&mut buf);
    let scale = 0.5 * d_omega;
    let samples = buf.iter().map(|z| z.re * scale).collect();
    SampledField::new(grid, samples)
}
