//! Embedded Dormand–Prince 5(4) stepper with adaptive step size.
//!
//! Used for the density-matrix equations, which are non-stiff at far-off-
//! resonance detunings but span a wide range of timescales between a
//! nanosecond drive and a femtosecond probe.

use crate::error::{Error, Result};

/// Dormand–Prince Butcher tableau (RK45, FSAL).
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
/// 5th-order weights equal the last row of `A` (FSAL); these are the
/// differences to the embedded 4th-order solution, used for error control.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Tolerances for the adaptive stepper.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rel: 1e-9, abs: 1e-12 }
    }
}

/// Integrate `dy/dt = f(t, y)` from `t0` to `t1`, calling `observe(t, y)`
/// at `t0`, at every requested output time, and at `t1`.
///
/// `output_times` must be strictly increasing and contained in `[t0, t1]`;
/// the integrator lands on each one exactly.
pub fn integrate_adaptive<const N: usize>(
    f: &mut dyn FnMut(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    t1: f64,
    y0: [f64; N],
    output_times: &[f64],
    tol: Tolerances,
    mut observe: impl FnMut(f64, &[f64; N]),
) -> Result<[f64; N]> {
    let span = t1 - t0;
    if span <= 0.0 {
        return Err(Error::Domain("integration span must be positive".into()));
    }
    let mut t = t0;
    let mut y = y0;
    let mut k0 = f(t, &y);
    observe(t, &y);
    let mut h = span / 100.0;
    let h_min = span * 1e-14;
    let mut next_out = 0usize;

    while t < t1 {
        if t1 - t <= h_min {
            break;
        }
        let mut target = t1;
        if next_out < output_times.len() {
            target = target.min(output_times[next_out]);
        }
        if target <= t + h_min {
            // Already (numerically) at the output point.
            if next_out < output_times.len() && target < t1 {
                observe(t, &y);
                next_out += 1;
                continue;
            }
        }
        let mut h_try = h.min(target - t);
        loop {
            let (y_new, k_last, err) = dp_step(f, t, &y, &k0, h_try, &tol);
            if err <= 1.0 {
                t += h_try;
                y = y_new;
                k0 = k_last;
                // Step-size growth, clipped.
                let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
                h = (h_try * fac).min(span);
                break;
            }
            let fac = (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            h_try *= fac;
            if h_try < h_min {
                return Err(Error::Stiffness(format!(
                    "step size underflow at t = {t:.6e} (h = {h_try:.3e})"
                )));
            }
        }
        while next_out < output_times.len() && t >= output_times[next_out] - h_min {
            observe(t, &y);
            next_out += 1;
        }
    }
    if output_times.last().map(|&ot| (ot - t1).abs() > h_min).unwrap_or(true) {
        observe(t, &y);
    }
    Ok(y)
}

#[allow(clippy::type_complexity)]
fn dp_step<const N: usize>(
    f: &mut dyn FnMut(f64, &[f64; N]) -> [f64; N],
    t: f64,
    y: &[f64; N],
    k0: &[f64; N],
    h: f64,
    tol: &Tolerances,
) -> ([f64; N], [f64; N], f64) {
    let mut k = [[0.0; N]; 7];
    k[0] = *k0;
    for s in 0..6 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s + 1) {
            let a = A[s][j];
            if a != 0.0 {
                for i in 0..N {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        k[s + 1] = f(t + C[s] * h, &ys);
    }
    // 5th-order solution is the s = 5 stage state (FSAL structure).
    let mut y5 = *y;
    for (j, kj) in k.iter().enumerate().take(6) {
        let a = A[5][j];
        if a != 0.0 {
            for i in 0..N {
                y5[i] += h * a * kj[i];
            }
        }
    }
    let k_last = f(t + h, &y5);
    let mut k_full = k;
    k_full[6] = k_last;
    // Scaled error norm.
    let mut err: f64 = 0.0;
    for i in 0..N {
        let mut e = 0.0;
        for (j, kj) in k_full.iter().enumerate() {
            e += E[j] * kj[i];
        }
        e *= h;
        let scale = tol.abs + tol.rel * y[i].abs().max(y5[i].abs());
        err = err.max((e / scale).abs());
    }
    (y5, k_last, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let mut f = |_t: f64, y: &[f64; 1]| [-y[0]];
        let y = integrate_adaptive(&mut f, 0.0, 3.0, [1.0], &[], Tolerances::default(), |_, _| {})
            .unwrap();
        assert!((y[0] - (-3.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn harmonic_oscillator_energy() {
        let mut f = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let y = integrate_adaptive(
            &mut f,
            0.0,
            20.0 * std::f64::consts::PI,
            [1.0, 0.0],
            &[],
            Tolerances::default(),
            |_, _| {},
        )
        .unwrap();
        assert!((y[0] - 1.0).abs() < 1e-7, "y0 = {}", y[0]);
        assert!(y[1].abs() < 1e-7);
    }

    #[test]
    fn observer_hits_requested_times() {
        let mut f = |t: f64, _y: &[f64; 1]| [t.cos()];
        let outs = [0.5, 1.0, 1.5];
        let mut seen = Vec::new();
        integrate_adaptive(&mut f, 0.0, 2.0, [0.0], &outs, Tolerances::default(), |t, y| {
            seen.push((t, y[0]));
        })
        .unwrap();
        // t0, three outputs, t1
        assert_eq!(seen.len(), 5);
        for (want, (t, y)) in outs.iter().zip(seen.iter().skip(1)) {
            assert!((t - want).abs() < 1e-9);
            assert!((y - want.sin()).abs() < 1e-9);
        }
    }
}
