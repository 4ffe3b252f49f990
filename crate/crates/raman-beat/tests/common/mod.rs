//! Shared test oracles, independent of the library's computational paths.

use num_complex::Complex64;
use raman_beat::constants::HBAR;
use raman_beat::core::Frequency;
use raman_beat::medium::{polarizability, Level, LevelTable};

/// A continuous spectrum made of narrow Gaussian lines plus their
/// Hermitian mirrors, sampled for direct double-sum quadrature.
pub struct SampledSpectrum {
    /// (ω_i, E(ω_i)·dω) pairs covering every line and mirror.
    pub points: Vec<(f64, Complex64)>,
}

impl SampledSpectrum {
    /// `lines`: (center frequency, complex amplitude = ∫E_ω dω of the line).
    pub fn narrow_lines(lines: &[(f64, Complex64)], sigma: f64, n_per_line: usize) -> Self {
        let mut points = Vec::new();
        let half = 4.5 * sigma;
        let n = n_per_line;
        let dw = 2.0 * half / (n - 1) as f64;
        let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
        for &(center, amp) in lines {
            for k in 0..n {
                let x = -half + k as f64 * dw;
                let g = norm * (-x * x / (2.0 * sigma * sigma)).exp();
                // positive-frequency line and its Hermitian mirror
                points.push((center + x, amp * g * dw));
                points.push((-center - x, (amp * g * dw).conj()));
            }
        }
        Self { points }
    }
}

/// Raman drive terms evaluated by direct double quadrature of the
/// continuous Stark/Rabi integrals, time-averaged over one Raman period to
/// isolate the stationary components.
///
/// The average runs over 16 equally spaced local times centred on zero;
/// with the line centres on the `ω_m` comb every non-stationary beat is an
/// integer multiple of `ω_m` not divisible by 16, so it cancels exactly up
/// to the residual line width.
pub struct QuadratureRabi {
    pub om_aa: Complex64,
    pub om_bb: Complex64,
    pub om_ab: Complex64,
    pub om_ba: Complex64,
}

pub fn quadrature_rabi(
    spectrum: &SampledSpectrum,
    table: &LevelTable,
    omega_m: f64,
) -> QuadratureRabi {
    let tm = 2.0 * std::f64::consts::PI / omega_m;
    let n_tau = 16;
    let taus: Vec<f64> = (0..n_tau).map(|k| (k as f64 - 7.5) / n_tau as f64 * tm).collect();

    let alpha_at = |w: f64| {
        polarizability(table, Frequency::from_rad_per_s(w).unwrap())
            .expect("off resonance in the oracle")
    };
    // Cache the α entries per sampled frequency.
    let alphas: Vec<(f64, f64, f64, f64)> = spectrum
        .points
        .iter()
        .map(|&(w, _)| {
            let p = alpha_at(w);
            (p.alpha_aa, p.alpha_bb, p.alpha_ab, p.alpha_ba)
        })
        .collect();

    let mut om_aa = Complex64::default();
    let mut om_bb = Complex64::default();
    let mut om_ab = Complex64::default();
    let mut om_ba = Complex64::default();
    let scale = 1.0 / (8.0 * HBAR * n_tau as f64);
    for (i, &(wi, ei)) in spectrum.points.iter().enumerate() {
        let (aa_i, bb_i, ab_i, ba_i) = alphas[i];
        for &(wj, ej) in spectrum.points.iter() {
            let pair = ei * ej.conj();
            if pair.norm() == 0.0 {
                continue;
            }
            // Ω_aa, Ω_bb pair E_ω with E*_{ω'} at beat ω_i - ω_j;
            // Ω_ab pairs E_ω with E*_{ω'+ω_m} (beat ω_i - ω_j + ω_m),
            // Ω_ba with E*_{ω'-ω_m} (beat ω_i - ω_j - ω_m).
            for &tau in &taus {
                let beat0 = Complex64::from_polar(1.0, -(wi - wj) * tau);
                let beat_ab = Complex64::from_polar(1.0, -(wi - (wj - omega_m)) * tau);
                let beat_ba = Complex64::from_polar(1.0, -(wi - (wj + omega_m)) * tau);
                om_aa += scale * aa_i * pair * beat0;
                om_bb += scale * bb_i * pair * beat0;
                om_ab += scale * ab_i * pair * beat_ab;
                om_ba += scale * ba_i * pair * beat_ba;
            }
        }
    }
    QuadratureRabi { om_aa, om_bb, om_ab, om_ba }
}

/// A two-level-plus-manifold table with the upper detunings consistent
/// with a Raman splitting of exactly `ω_m` (zero two-photon detuning).
pub fn oracle_level_table(omega_m: f64) -> LevelTable {
    LevelTable::new(vec![
        Level {
            detuning_a: 100.0 * omega_m,
            detuning_b: 99.0 * omega_m,
            mu_a: 1.1e-30,
            mu_b: 0.9e-30,
        },
        Level {
            detuning_a: 160.0 * omega_m,
            detuning_b: 159.0 * omega_m,
            mu_a: 0.7e-30,
            mu_b: 1.3e-30,
        },
    ])
}

/// L2 error of `a` against reference `b`.
pub fn l2_error(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

/// Complex sideband amplitudes of a one-sided (analytic) field via direct
/// Fourier projection over an integer number of Raman periods.
///
/// With `ℰ = Σ_q ℰ_q e^{-iω_q η}` and the samples covering exactly one
/// `T_m` (rectangle rule, endpoint excluded), the comb kernels are
/// mutually orthogonal and `ℰ_q = (1/T)∫ℰ(η)e^{+iω_q η}dη` is exact up to
/// the envelope's slow variation.
pub fn project_sidebands(
    samples: &[Complex64],
    t0: f64,
    dt: f64,
    omega0: f64,
    omega_m: f64,
    q_range: std::ops::RangeInclusive<i64>,
) -> Vec<(i64, Complex64)> {
    let span = samples.len() as f64 * dt;
    q_range
        .map(|q| {
            let wq = omega0 + q as f64 * omega_m;
            let mut acc = Complex64::default();
            for (k, &e) in samples.iter().enumerate() {
                let t = t0 + k as f64 * dt;
                acc += e * Complex64::from_polar(1.0, wq * t);
            }
            (q, acc * dt / span)
        })
        .collect()
}
