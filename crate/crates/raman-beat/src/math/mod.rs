//! Numeric building blocks: Bessel functions, shape-preserving
//! interpolation, an adaptive Runge–Kutta stepper, and small quadrature /
//! counting helpers.

mod bessel;
mod interp;
mod rk45;

pub use bessel::{bessel_j_row, bessel_jn};
pub use interp::MonotoneCubic;
pub use rk45::{integrate_adaptive, Tolerances};

/// Trapezoidal integral of uniformly sampled data.
pub fn trapz(y: &[f64], dx: f64) -> f64 {
    if y.len() < 2 {
        return 0.0;
    }
    let inner: f64 = y[1..y.len() - 1].iter().sum();
    dx * (inner + 0.5 * (y[0] + y[y.len() - 1]))
}

/// Running trapezoidal integral; `out[k] = ∫` up to sample `k`, `out[0] = 0`.
pub fn cumtrapz(y: &[f64], dx: f64) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(y.len());
    out.push(0.0);
    for w in y.windows(2) {
        acc += 0.5 * dx * (w[0] + w[1]);
        out.push(acc);
    }
    out
}

/// Count signed zero crossings of a sampled waveform with hysteresis.
///
/// A crossing is registered only when the signal moves from beyond
/// `+threshold` to beyond `-threshold` or vice versa, so grid-level noise
/// around zero is not counted. The threshold is relative to the peak
/// magnitude.
pub fn zero_crossings(y: &[f64], relative_threshold: f64) -> usize {
    let peak = y.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return 0;
    }
    let thr = relative_threshold * peak;
    let mut state: i8 = 0; // last confirmed sign
    let mut count = 0;
    for &v in y {
        let s = if v > thr {
            1
        } else if v < -thr {
            -1
        } else {
            0
        };
        if s != 0 {
            if state != 0 && s != state {
                count += 1;
            }
            state = s;
        }
    }
    count
}

/// Relative difference `|a - b| / max(|a|, |b|)`, zero when both are zero.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// FNV-1a 64-bit hash; used for deterministic scenario fingerprints.
pub fn fnv1a_64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapz_quadratic() {
        let n = 1000;
        let dx = 1.0 / n as f64;
        let y: Vec<f64> = (0..=n).map(|i| (i as f64 * dx).powi(2)).collect();
        assert!((trapz(&y, dx) - 1.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn crossings_of_sine() {
        let n = 1000;
        let y: Vec<f64> = (0..n)
            .map(|i| (2.0 * std::f64::consts::PI * 3.0 * i as f64 / n as f64).sin())
            .collect();
        // 3 full periods starting at 0⁺: crossings at π, 2π, ..., 5π (within
        // the open interval), i.e. 5 sign alternations after the first lobe.
        assert_eq!(zero_crossings(&y, 1e-6), 5);
    }

    #[test]
    fn crossings_ignore_noise() {
        let y = [1.0, 1e-9, -1e-9, 1e-9, 1.0, -1.0];
        assert_eq!(zero_crossings(&y, 1e-6), 1);
    }
}
