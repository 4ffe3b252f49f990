//! Pulse and spectrum diagnostics: FWHM, sub-pulse trains, sideband
//! detection, and run-to-run comparison metrics.

use crate::core::{analytic_signal, AnalyticField, SampledField, Spectrum};
use crate::error::{Error, Result};
use crate::math;
use serde::{Deserialize, Serialize};

/// Scalar diagnostics of one pulse (or pulse train).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PulseMetrics {
    /// Peak of the field envelope, V/m.
    pub peak_amplitude: f64,
    /// Intensity FWHM of the dominant sub-pulse, s.
    pub intensity_fwhm: f64,
    /// Intensity-weighted centroid, s.
    pub centroid: f64,
    /// `∫E² dτ` (fluence up to cε₀/2), V²·s/m².
    pub energy: f64,
    /// Intensity-weighted mean frequency from the spectrum, rad/s.
    pub mean_frequency: f64,
    /// Input FWHM / output FWHM when paired with a reference.
    pub compression_factor: Option<f64>,
    /// Mean spacing of sub-pulse peaks, where a train exists.
    pub train_period: Option<f64>,
    /// Number of sub-pulses above half the global intensity peak.
    pub sub_pulse_count: usize,
}

impl PulseMetrics {
    /// Attach the compression factor relative to a reference (input)
    /// measurement.
    pub fn with_reference(mut self, input: &PulseMetrics) -> Self {
        self.compression_factor = Some(input.intensity_fwhm / self.intensity_fwhm);
        self
    }
}

/// One contiguous region above the half-intensity threshold.
struct SubPulse {
    peak_index: usize,
    peak_intensity: f64,
    fwhm: f64,
}

/// Segment the intensity profile at 50% of its global peak, measuring each
/// segment's own FWHM by interpolated half-crossings.
fn segment_sub_pulses(intensity: &[f64], dt: f64) -> Vec<SubPulse> {
    let peak = intensity.iter().cloned().fold(0.0_f64, f64::max);
    if peak == 0.0 {
        return Vec::new();
    }
    let threshold = 0.5 * peak;
    let mut pulses = Vec::new();
    let mut start: Option<usize> = None;
    for k in 0..=intensity.len() {
        let above = k < intensity.len() && intensity[k] >= threshold;
        match (start, above) {
            (None, true) => start = Some(k),
            (Some(s), false) => {
                let end = k - 1; // inclusive
                let (mut pk, mut pv) = (s, intensity[s]);
                for (j, &v) in intensity.iter().enumerate().take(end + 1).skip(s) {
                    if v > pv {
                        pk = j;
                        pv = v;
                    }
                }
                // Interpolated crossings of this segment's own half level.
                let half = 0.5 * pv;
                let mut left = s as f64;
                let mut j = pk;
                while j > 0 && intensity[j - 1] >= half {
                    j -= 1;
                }
                if j > 0 {
                    let (lo, hi) = (intensity[j - 1], intensity[j]);
                    left = (j - 1) as f64 + (half - lo) / (hi - lo);
                }
                let mut right = end as f64;
                let mut j = pk;
                while j + 1 < intensity.len() && intensity[j + 1] >= half {
                    j += 1;
                }
                if j + 1 < intensity.len() {
                    let (hi, lo) = (intensity[j], intensity[j + 1]);
                    right = j as f64 + (hi - half) / (hi - lo);
                }
                pulses.push(SubPulse {
                    peak_index: pk,
                    peak_intensity: pv,
                    fwhm: (right - left) * dt,
                });
                start = None;
            }
            _ => {}
        }
    }
    pulses
}

fn metrics_from_parts(
    grid: &crate::core::TimeGrid,
    envelope_intensity: &[f64],
    energy: f64,
    peak_amplitude: f64,
    mean_frequency: f64,
) -> Result<PulseMetrics> {
    let peak = envelope_intensity.iter().cloned().fold(0.0_f64, f64::max);
    if peak == 0.0 {
        return Err(Error::Domain("all-zero field has no pulse metrics".into()));
    }
    let dt = grid.dt();
    let pulses = segment_sub_pulses(envelope_intensity, dt);
    let dominant = pulses
        .iter()
        .max_by(|a, b| a.peak_intensity.total_cmp(&b.peak_intensity))
        .ok_or_else(|| Error::Domain("no sub-pulse above half intensity".into()))?;

    let weight: f64 = envelope_intensity.iter().sum();
    let centroid = envelope_intensity
        .iter()
        .zip(grid.times())
        .map(|(w, t)| w * t)
        .sum::<f64>()
        / weight;

    let train_period = if pulses.len() >= 2 {
        let spacings: Vec<f64> = pulses
            .windows(2)
            .map(|w| (w[1].peak_index - w[0].peak_index) as f64 * dt)
            .collect();
        Some(spacings.iter().sum::<f64>() / spacings.len() as f64)
    } else {
        None
    };

    Ok(PulseMetrics {
        peak_amplitude,
        intensity_fwhm: dominant.fwhm,
        centroid,
        energy,
        mean_frequency,
        compression_factor: None,
        train_period,
        sub_pulse_count: pulses.len(),
    })
}

/// Measure a real field: the envelope comes from its analytic companion,
/// the mean frequency from the positive-frequency spectral centroid.
pub fn measure_pulse(field: &SampledField) -> Result<PulseMetrics> {
    let analytic = analytic_signal(field)?;
    measure_pulse_analytic(&analytic)
}

/// Measure an analytic field directly.
pub fn measure_pulse_analytic(field: &AnalyticField) -> Result<PulseMetrics> {
    let envelope = field.envelope();
    let intensity: Vec<f64> = envelope.iter().map(|e| e * e).collect();
    let energy = 0.5 * math::trapz(&intensity, field.grid.dt());
    let spectrum = crate::core::spectrum_of_analytic(field)?;
    let mean_frequency = spectral_centroid(&spectrum);
    metrics_from_parts(
        &field.grid,
        &intensity,
        energy,
        envelope.iter().cloned().fold(0.0_f64, f64::max),
        mean_frequency,
    )
}

/// Intensity-weighted mean of the positive-frequency spectrum, rad/s.
pub fn spectral_centroid(spectrum: &Spectrum) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (w, a) in spectrum.omega.iter().zip(&spectrum.amplitude) {
        if *w > 0.0 {
            let p = a.norm_sqr();
            num += w * p;
            den += p;
        }
    }
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Power binned into one sideband window.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SidebandPower {
    pub q: i64,
    /// Window-integrated `|E_ω|²·dω`.
    pub power: f64,
}

/// Sideband decomposition of a propagated spectrum.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralReport {
    pub sidebands: Vec<SidebandPower>,
    /// Outermost orders above threshold (anti-Stokes, Stokes).
    pub q_anti_stokes: i64,
    pub q_stokes: i64,
    /// Set when the inter-sideband valleys exceed half the neighbouring
    /// peaks — the comb has washed into a continuum.
    pub continuous: bool,
    /// Detection threshold relative to the strongest sideband.
    pub threshold: f64,
}

/// Bin the positive-frequency power into windows `ω_q ± ω_m/2` and detect
/// the outermost significant orders.
///
/// `threshold` is relative to the strongest sideband power (default
/// `1e-4`); the continuum flag is raised when the valley between adjacent
/// significant sidebands stays above 50% of the smaller neighbour peak.
pub fn measure_spectrum(
    spectrum: &Spectrum,
    omega0: f64,
    omega_m: f64,
    threshold: Option<f64>,
) -> Result<SpectralReport> {
    if !(omega_m > 0.0) || !(omega0 > 0.0) {
        return Err(Error::Domain("need positive carrier and Raman frequency".into()));
    }
    let threshold = threshold.unwrap_or(1e-4);
    let d_omega = spectrum.grid.d_omega();

    // Power per sideband window and the peak within each window.
    let q_lo = (-(omega0 / omega_m) + 0.5).floor() as i64 + 1;
    let mut per_q: std::collections::BTreeMap<i64, (f64, f64)> = Default::default();
    for (w, a) in spectrum.omega.iter().zip(&spectrum.amplitude) {
        if *w <= 0.0 {
            continue;
        }
        let q = ((w - omega0) / omega_m).round() as i64;
        if q < q_lo {
            continue;
        }
        let entry = per_q.entry(q).or_insert((0.0, 0.0));
        let p = a.norm_sqr();
        entry.0 += p * d_omega;
        entry.1 = entry.1.max(p);
    }
    let max_power = per_q.values().map(|v| v.0).fold(0.0_f64, f64::max);
    if max_power == 0.0 {
        return Err(Error::Domain("empty spectrum".into()));
    }
    let significant: Vec<i64> = per_q
        .iter()
        .filter(|(_, v)| v.0 >= threshold * max_power)
        .map(|(q, _)| *q)
        .collect();
    let q_anti_stokes = significant.iter().cloned().max().unwrap_or(0);
    let q_stokes = significant.iter().cloned().min().unwrap_or(0);

    // Valley test between adjacent significant sidebands.
    let mut continuous = false;
    for pair in significant.windows(2) {
        let (qa, qb) = (pair[0], pair[1]);
        if qb - qa != 1 {
            continue;
        }
        let peak_a = per_q[&qa].1;
        let peak_b = per_q[&qb].1;
        let boundary = omega0 + (qa as f64 + 0.5) * omega_m;
        // Smallest spectral sample within a quarter window of the boundary.
        let valley = spectrum
            .omega
            .iter()
            .zip(&spectrum.amplitude)
            .filter(|(w, _)| (**w - boundary).abs() < 0.25 * omega_m)
            .map(|(_, a)| a.norm_sqr())
            .fold(f64::INFINITY, f64::min);
        if valley.is_finite() && valley > 0.5 * peak_a.min(peak_b) {
            continuous = true;
            break;
        }
    }

    Ok(SpectralReport {
        sidebands: per_q
            .into_iter()
            .map(|(q, (power, _))| SidebandPower { q, power })
            .collect(),
        q_anti_stokes,
        q_stokes,
        continuous,
        threshold,
    })
}

/// Standard normalized comparison metrics of two fields on one grid.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RunComparison {
    /// `‖a - b‖₂ / ‖b‖₂`.
    pub l2_error: f64,
    /// Peak-magnitude ratio a/b.
    pub peak_ratio: f64,
    /// Dominant sub-pulse FWHM ratio a/b.
    pub fwhm_ratio: f64,
}

/// Compare two real fields sampled on identical grids.
pub fn compare_runs(a: &SampledField, b: &SampledField) -> Result<RunComparison> {
    if a.grid != b.grid {
        return Err(Error::Domain("compared fields must share a grid".into()));
    }
    let num: f64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    let den: f64 = b.samples().iter().map(|y| y * y).sum();
    let l2_error = if den > 0.0 { (num / den).sqrt() } else { 0.0 };
    let ma = measure_pulse(a)?;
    let mb = measure_pulse(b)?;
    Ok(RunComparison {
        l2_error,
        peak_ratio: ma.peak_amplitude / mb.peak_amplitude,
        fwhm_ratio: ma.intensity_fwhm / mb.intensity_fwhm,
    })
}
