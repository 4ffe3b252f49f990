//! Fourier and Bessel series of the beat: harmonic expansion of the gain
//! profile and the discrete sideband spectrum of a long probe pulse.

use super::BeatParameters;
use crate::core::Frequency;
use crate::error::{Error, Result};
use crate::math::bessel_j_row;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Cosine series of the gain profile and the integrated sine series of the
/// input-time map:
///
/// ```text
/// G(η) = 1 + 2 Σ_n (-1)ⁿ tanhⁿ(αz/2) cos(n ω_m η)
/// s(η) = η + 2 Σ_n (-1)ⁿ tanhⁿ(αz/2)/(n ω_m) sin(n ω_m η)
/// ```
#[derive(Debug, Clone)]
pub struct FourierGainSeries {
    pub omega_m: f64,
    /// `c_0 = 1`, `c_n = 2(-1)ⁿ tanhⁿ(αz/2)` for n ≥ 1.
    pub gain_cos: Vec<f64>,
    /// Sine coefficients of `s(η) - η`, seconds; entry 0 unused (zero).
    pub remap_sin: Vec<f64>,
}

impl FourierGainSeries {
    pub fn eval_gain(&self, eta: f64) -> f64 {
        self.gain_cos
            .iter()
            .enumerate()
            .map(|(n, c)| c * (n as f64 * self.omega_m * eta).cos())
            .sum()
    }

    pub fn eval_remap(&self, eta: f64) -> f64 {
        eta + self
            .remap_sin
            .iter()
            .enumerate()
            .map(|(n, b)| b * (n as f64 * self.omega_m * eta).sin())
            .sum::<f64>()
    }
}

/// Harmonic series of the gain profile up to `n_max` (inclusive).
pub fn fourier_gain_series(p: &BeatParameters, n_max: usize) -> FourierGainSeries {
    let t = (0.5 * p.alpha_z()).tanh();
    let mut gain_cos = Vec::with_capacity(n_max + 1);
    let mut remap_sin = Vec::with_capacity(n_max + 1);
    gain_cos.push(1.0);
    remap_sin.push(0.0);
    let mut tn = 1.0;
    for n in 1..=n_max {
        tn *= -t;
        gain_cos.push(2.0 * tn);
        remap_sin.push(2.0 * tn / (n as f64 * p.omega_m));
    }
    FourierGainSeries { omega_m: p.omega_m, gain_cos, remap_sin }
}

/// Raman sideband order estimates and the bandwidth parameter γ.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SidebandOrders {
    /// Anti-Stokes order `(e^{αz} - 1)·ω₀/ω_m`.
    pub q_anti_stokes: f64,
    /// Stokes order `-(1 - e^{-αz})·ω₀/ω_m`.
    pub q_stokes: f64,
    /// `γ = (ω₀/ω_m)·α`, m⁻¹.
    pub gamma: f64,
}

/// Outermost sideband orders generated by a long probe pulse.
pub fn sideband_orders(p: &BeatParameters, omega0: Frequency) -> SidebandOrders {
    let r = omega0.rad_per_s() / p.omega_m;
    let az = p.alpha_z();
    SidebandOrders {
        q_anti_stokes: (az.exp() - 1.0) * r,
        q_stokes: -(1.0 - (-az).exp()) * r,
        gamma: r * p.alpha,
    }
}

/// Which closed form to evaluate for the sideband amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumMode {
    /// Full product of Bessel harmonics folded with the gain series; exact
    /// for a monochromatic input.
    FullProduct,
    /// Dominant single-Bessel term `(-1)^q·J_q(2(ω₀/ω_m)·tanh(αz/2))`.
    SingleBessel,
    /// Weak-modulation limit `(-1)^q·J_q(γz)`.
    Linearized,
    /// Two-color input: linearized spectrum of a carrier plus one Stokes
    /// line with the given input amplitude.
    TwoColor { stokes_input: Complex64 },
}

/// Computed regime-validity ratios for the reduced modes; both must be
/// small for the single-Bessel/linearized forms to hold.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ValidityReport {
    /// `tanh(αz/2)`.
    pub tanh_half: f64,
    /// `(ω₀/ω_m)·tanh²(αz/2)`.
    pub bandwidth_ratio: f64,
    pub satisfied: bool,
}

/// Sideband amplitudes of the beaten probe.
#[derive(Debug, Clone)]
pub struct BesselSpectrum {
    pub q_min: i64,
    /// Complex amplitudes `ℰ_q` for q = q_min, q_min+1, ...
    pub amplitudes: Vec<Complex64>,
    /// Regime report for the reduced modes; `None` for the full product.
    pub validity: Option<ValidityReport>,
}

impl BesselSpectrum {
    pub fn amplitude(&self, q: i64) -> Option<Complex64> {
        let idx = q.checked_sub(self.q_min)? as usize;
        self.amplitudes.get(idx).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.amplitudes
            .iter()
            .enumerate()
            .map(move |(i, &a)| (self.q_min + i as i64, a))
    }
}

/// Bound on the Bessel order beyond which `|J_k(x)| < 1e-14`.
fn bessel_order_cutoff(x: f64) -> usize {
    let row_len = (x.abs() + 40.0 + 8.0 * x.abs().sqrt()) as usize + 2;
    let row = bessel_j_row(row_len, x);
    let mut k = row_len;
    while k > 0 && row[k].abs() < 1e-14 {
        k -= 1;
    }
    k + 1
}

/// Sideband amplitudes `ℰ_q` over `q_range` for input amplitude `e_in`.
///
/// The full-product mode truncates the harmonic index `n` once the Bessel
/// argument `2ω₀ tanhⁿ(αz/2)/(n ω_m)` drops below 1e-12 and each harmonic's
/// order set where `|J_k| < 1e-14`, giving a deterministic error bound of
/// the same magnitude. The reduced modes report their validity ratios
/// instead of refusing out-of-regime parameters.
pub fn bessel_spectrum(
    p: &BeatParameters,
    omega0: Frequency,
    q_range: std::ops::RangeInclusive<i64>,
    mode: SpectrumMode,
    e_in: Complex64,
) -> Result<BesselSpectrum> {
    if q_range.is_empty() {
        return Err(Error::Domain("empty sideband range".into()));
    }
    let q_min = *q_range.start();
    let q_max = *q_range.end();
    let r = omega0.rad_per_s() / p.omega_m;
    let az = p.alpha_z();
    let t = (0.5 * az).tanh();
    let parity = |q: i64| if q % 2 == 0 { 1.0 } else { -1.0 };

    let validity = ValidityReport {
        tanh_half: t,
        bandwidth_ratio: r * t * t,
        satisfied: t < 0.1 && r * t * t < 0.1,
    };

    let amplitudes: Vec<Complex64> = match mode {
        SpectrumMode::Linearized => {
            let gz = r * az;
            (q_min..=q_max)
                .map(|q| e_in * parity(q) * crate::math::bessel_jn(q, gz))
                .collect()
        }
        SpectrumMode::TwoColor { stokes_input } => {
            let gz = r * az;
            (q_min..=q_max)
                .map(|q| {
                    e_in * parity(q) * crate::math::bessel_jn(q, gz)
                        + stokes_input * parity(q + 1) * crate::math::bessel_jn(q + 1, gz)
                })
                .collect()
        }
        SpectrumMode::SingleBessel => {
            let x = 2.0 * r * t;
            (q_min..=q_max)
                .map(|q| e_in * parity(q) * crate::math::bessel_jn(q, x))
                .collect()
        }
        SpectrumMode::FullProduct => {
            return full_product_spectrum(p, r, q_min, q_max, e_in);
        }
    };
    let validity = match mode {
        SpectrumMode::FullProduct => None,
        _ => Some(validity),
    };
    Ok(BesselSpectrum { q_min, amplitudes, validity })
}

/// Exact monochromatic spectrum: convolution of the per-harmonic Bessel
/// combs, folded with the gain series.
fn full_product_spectrum(
    p: &BeatParameters,
    r: f64,
    q_min: i64,
    q_max: i64,
    e_in: Complex64,
) -> Result<BesselSpectrum> {
    let t = (0.5 * p.alpha_z()).tanh();

    // Harmonics n with Bessel argument above threshold.
    let mut harmonics: Vec<(usize, f64)> = Vec::new();
    let mut tn = 1.0;
    for n in 1..=2000usize {
        tn *= t;
        let x = 2.0 * r * tn / n as f64;
        if x.abs() < 1e-12 {
            break;
        }
        harmonics.push((n, x));
    }
    // Gain-series fold depth.
    let l_max = if t > 0.0 {
        ((1e-15_f64).ln() / t.ln()).ceil() as i64
    } else {
        0
    };
    // Working comb radius: full support of the product plus the fold.
    let support: i64 = harmonics
        .iter()
        .map(|&(n, x)| (n * bessel_order_cutoff(x)) as i64)
        .sum();
    let radius = q_min.abs().max(q_max.abs()) + l_max + support.min(4000) + 2;
    let size = (2 * radius + 1) as usize;
    let at = |m: i64| (m + radius) as usize;

    // P[m]: coefficient of the m-th comb harmonic of e^{iω₀s(η)}·e^{-iω₀η}.
    let mut product = vec![0.0_f64; size];
    product[at(0)] = 1.0;
    for &(n, x) in &harmonics {
        let k_cut = bessel_order_cutoff(x) as i64;
        let row = bessel_j_row(k_cut as usize, x);
        let mut next = vec![0.0_f64; size];
        let n_i = n as i64;
        let sign_n = |k: i64| {
            // (-1)^{k·n}
            if (k * n_i) % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        };
        for (m, &val) in product.iter().enumerate() {
            if val == 0.0 {
                continue;
            }
            let m_i = m as i64 - radius;
            for k in -k_cut..=k_cut {
                let jk = row[k.unsigned_abs() as usize];
                let jk = if k < 0 && k.unsigned_abs() % 2 == 1 { -jk } else { jk };
                let target = m_i + k * n_i;
                if target.abs() <= radius {
                    next[at(target)] += val * sign_n(k) * jk;
                }
            }
        }
        product = next;
    }

    // Fold with the gain series G = Σ_l (-t)^{|l|} e^{-ilω_mη}.
    let mut amplitudes = Vec::with_capacity((q_max - q_min + 1) as usize);
    for q in q_min..=q_max {
        let mut acc = 0.0;
        for l in -l_max..=l_max {
            let m = q - l;
            if m.abs() > radius {
                continue;
            }
            let tl = (-t).powi(l.unsigned_abs() as i32);
            acc += tl * product[at(m)];
        }
        amplitudes.push(e_in * acc);
    }
    Ok(BesselSpectrum { q_min, amplitudes, validity: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::gain_profile;

    const OMEGA_M: f64 = 7.8165889e14;

    fn params(az: f64) -> BeatParameters {
        BeatParameters::bare(az, OMEGA_M, 20e-6).unwrap()
    }

    #[test]
    fn series_order_zero_is_constant() {
        let s = fourier_gain_series(&params(0.9), 0);
        assert_eq!(s.gain_cos, vec![1.0]);
        assert!((s.eval_gain(0.33e-15) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn series_partial_sum_at_peak_tends_to_gain() {
        // At η_n every cosine is (-1)ⁿ, so the sum telescopes to
        // (1+t)/(1-t) = e^{αz}.
        let p = params(1.2);
        let t = (0.6_f64).tanh();
        let partial: f64 = fourier_gain_series(&p, 200)
            .gain_cos
            .iter()
            .enumerate()
            .map(|(n, c)| c * if n % 2 == 0 { 1.0 } else { -1.0 })
            .sum();
        let want = (1.0 + t) / (1.0 - t);
        assert!((partial - want).abs() < 1e-12 * want);
        assert!((want - 1.2_f64.exp()).abs() < 1e-12 * want);
    }

    #[test]
    fn series_reconstructs_gain_uniformly() {
        let p = params(1.0);
        let t = (0.5_f64).tanh();
        // Depth where the last coefficient is below 1e-12.
        let n_max = ((1e-12_f64).ln() / t.ln()).ceil() as usize;
        let series = fourier_gain_series(&p, n_max);
        let tm = p.raman_period();
        let mut worst: f64 = 0.0;
        for k in 0..512 {
            let eta = tm * k as f64 / 512.0;
            worst = worst.max((series.eval_gain(eta) - gain_profile(eta, &p)).abs());
        }
        assert!(worst < 1e-10, "series error {worst:e}");
    }

    #[test]
    fn series_remap_matches_time_remap() {
        let p = params(0.8);
        let series = fourier_gain_series(&p, 120);
        let tm = p.raman_period();
        for k in 0..64 {
            let eta = -tm + 2.0 * tm * k as f64 / 64.0;
            let want = super::super::time_remap(eta, &p);
            let got = series.eval_remap(eta);
            assert!((got - want).abs() < 1e-12 * tm, "s mismatch at η = {eta:e}");
        }
    }

    #[test]
    fn orders_zero_at_zero_compression() {
        let p = BeatParameters::bare(0.0, OMEGA_M, 1.0).unwrap();
        let w0 = Frequency::from_rad_per_s(5.2 * OMEGA_M).unwrap();
        let o = sideband_orders(&p, w0);
        assert_eq!(o.q_anti_stokes, 0.0);
        assert_eq!(o.q_stokes, 0.0);
    }

    #[test]
    fn orders_symmetric_for_weak_beat() {
        let p = params(1e-4);
        let w0 = Frequency::from_rad_per_s(5.2 * OMEGA_M).unwrap();
        let o = sideband_orders(&p, w0);
        let gz = o.gamma * p.z;
        assert!((o.q_anti_stokes - gz).abs() / gz < 1e-3);
        assert!((o.q_stokes + gz).abs() / gz < 1e-3);
    }

    #[test]
    fn orders_reference_values() {
        // αz = 1.59, ω₀/ω_m = 3.012 → q_AS ≈ 11.76, q_S ≈ -2.40.
        let p = params(1.59);
        let w0 = Frequency::from_rad_per_s(3.012 * OMEGA_M).unwrap();
        let o = sideband_orders(&p, w0);
        assert!((o.q_anti_stokes - 11.76).abs() < 0.02, "q_AS = {}", o.q_anti_stokes);
        assert!((o.q_stokes + 2.398).abs() < 0.01, "q_S = {}", o.q_stokes);
    }

    #[test]
    fn spectrum_at_zero_depth_is_input_line() {
        let p = BeatParameters::bare(0.0, OMEGA_M, 1.0).unwrap();
        let w0 = Frequency::from_rad_per_s(5.2 * OMEGA_M).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let spec =
            bessel_spectrum(&p, w0, -4..=4, SpectrumMode::FullProduct, one).unwrap();
        for (q, amp) in spec.iter() {
            if q == 0 {
                assert!((amp - one).norm() < 1e-14);
            } else {
                assert!(amp.norm() < 1e-14, "ℰ_{q} = {amp}");
            }
        }
    }

    #[test]
    fn linearized_reference_value() {
        // γz = 1 → ℰ₁/ℰ_in = -J₁(1) = -0.4400505857.
        let w0 = Frequency::from_rad_per_s(10.0 * OMEGA_M).unwrap();
        // αz = γz/(ω₀/ω_m) = 0.1.
        let p = params(0.1);
        let spec = bessel_spectrum(
            &p,
            w0,
            -2..=2,
            SpectrumMode::Linearized,
            Complex64::new(1.0, 0.0),
        )
        .unwrap();
        let e1 = spec.amplitude(1).unwrap();
        assert!((e1.re + 0.4400505857).abs() < 1e-9, "ℰ₁ = {e1}");
        assert!(spec.validity.is_some());
    }

    #[test]
    fn empty_range_rejected() {
        let p = params(0.5);
        let w0 = Frequency::from_rad_per_s(5.2 * OMEGA_M).unwrap();
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 3..=-3;
        assert!(bessel_spectrum(&p, w0, empty, SpectrumMode::Linearized, Complex64::new(1.0, 0.0))
            .is_err());
    }

    #[test]
    fn full_product_reduces_to_single_bessel_in_regime() {
        // Deep in the validity regime (t ≪ 1 and (ω₀/ω_m)·t² ≪ 1, with a
        // large frequency ratio so the leading sidebands dominate the
        // dropped O(t) fold terms) the full product and the dominant
        // single-Bessel term agree.
        let r = 100.0;
        let p = params(0.002);
        let w0 = Frequency::from_rad_per_s(r * OMEGA_M).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let full = bessel_spectrum(&p, w0, -3..=3, SpectrumMode::FullProduct, one).unwrap();
        let single = bessel_spectrum(&p, w0, -3..=3, SpectrumMode::SingleBessel, one).unwrap();
        let t = (0.5 * p.alpha_z()).tanh();
        let dropped = 3.0 * (t + r * t * t);
        for ((q, a), (_, b)) in full.iter().zip(single.iter()) {
            assert!((a - b).norm() < dropped, "q = {q}: {a} vs {b}");
        }
        // Leading sidebands agree to better than a percent.
        for q in [-1i64, 0, 1] {
            let a = full.amplitude(q).unwrap();
            let b = single.amplitude(q).unwrap();
            assert!((a - b).norm() < 0.01 * b.norm(), "q = {q}: {a} vs {b}");
        }
    }
}
