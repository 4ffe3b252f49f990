//! Discrete transforms in the crate-wide Fourier convention
//!
//! ```text
//! E(τ) = (1/2) ∫ E_ω e^{-iωτ} dω,      E_ω = (1/π) ∫ E(τ) e^{+iωτ} dτ,
//! ```
//!
//! with `E_{-ω} = E_ω*` for a real field. Bin `j` of an `n`-point grid with
//! step `dt` carries the signed angular frequency `j·dω` for `j < n/2` and
//! `(j-n)·dω` otherwise, `dω = 2π/(n·dt)`.

use num_complex::Complex64;
use rustfft::{Fft as RustFft, FftPlanner};
use std::sync::Arc;

/// Cached transform plans for one grid size.
pub struct FftPlan {
    n: usize,
    fwd: Arc<dyn RustFft<f64>>,
    inv: Arc<dyn RustFft<f64>>,
}

impl FftPlan {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Unnormalized `Σ_k x_k e^{+2πi jk/n}` in place.
    pub fn dft_pos(&self, x: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.n);
        self.inv.process(x);
    }

    /// Unnormalized `Σ_j X_j e^{-2πi jk/n}` in place.
    pub fn dft_neg(&self, x: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.n);
        self.fwd.process(x);
    }

    /// Signed angular frequency of FFT bin `j`.
    pub fn bin_omega(&self, j: usize, dt: f64) -> f64 {
        let n = self.n;
        let d_omega = 2.0 * std::f64::consts::PI / (n as f64 * dt);
        if j < n / 2 {
            j as f64 * d_omega
        } else {
            (j as f64 - n as f64) * d_omega
        }
    }
}

/// Signed bin frequencies for an `n`-point grid, FFT bin order.
pub fn bin_omegas(n: usize, dt: f64) -> Vec<f64> {
    let d_omega = 2.0 * std::f64::consts::PI / (n as f64 * dt);
    (0..n)
        .map(|j| {
            if j < n / 2 {
                j as f64 * d_omega
            } else {
                (j as f64 - n as f64) * d_omega
            }
        })
        .collect()
}

/// Map an ascending-frequency position `p` (0 ↔ most negative) to FFT bin.
pub fn ascending_to_bin(p: usize, n: usize) -> usize {
    (p + n / 2) % n
}

/// Map an FFT bin to its ascending-frequency position.
pub fn bin_to_ascending(j: usize, n: usize) -> usize {
    (j + n / 2) % n
}
