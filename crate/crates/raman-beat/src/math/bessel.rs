//! Bessel functions of the first kind, integer order.
//!
//! Uses Miller's downward recurrence with the `J₀ + 2·ΣJ₂ₖ = 1` normalization,
//! which is stable for all orders at the moderate arguments (|x| ≲ 100) this
//! crate needs.

/// `J_n(x)` for all orders `0..=n_max` at once.
///
/// Returns a vector `v` with `v[n] = J_n(x)`. This is the natural shape for
/// the sideband-spectrum series, which consumes a whole row of orders per
/// harmonic.
pub fn bessel_j_row(n_max: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut v = vec![0.0; n_max + 1];
        v[0] = 1.0;
        return v;
    }
    let ax = x.abs();
    // Start the downward recurrence far enough above max(n_max, |x|) that the
    // seeded values have decayed into the asymptotic regime.
    let start = {
        let base = n_max.max(ax.ceil() as usize);
        let pad = (40.0 + 2.0 * (base as f64).sqrt() * 6.0) as usize;
        (base + pad + 1) & !1 // even
    };
    let mut jp = 0.0_f64; // J_{k+1}
    let mut j = 1e-300_f64; // J_k (arbitrary seed)
    let mut out = vec![0.0; n_max + 1];
    let mut norm = 0.0_f64; // accumulates J_0 + 2 Σ J_{2k}
    for k in (0..=start).rev() {
        let jm = (2.0 * (k as f64 + 1.0) / ax) * j - jp;
        jp = j;
        j = jm;
        // jm is now J_k
        if k <= n_max {
            out[k] = jm;
        }
        if k % 2 == 0 {
            norm += if k == 0 { jm } else { 2.0 * jm };
        }
        // Rescale to avoid overflow of the unnormalized recurrence.
        if j.abs() > 1e250 {
            let s = 1e-250;
            j *= s;
            jp *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    for v in out.iter_mut() {
        *v /= norm;
    }
    if x < 0.0 {
        for (n, v) in out.iter_mut().enumerate() {
            if n % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

/// `J_n(x)` for a single (possibly negative) integer order.
pub fn bessel_jn(n: i64, x: f64) -> f64 {
    let m = n.unsigned_abs() as usize;
    let row = bessel_j_row(m, x);
    let v = row[m];
    if n < 0 && m % 2 == 1 {
        -v
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Power-series evaluation, independent of the recurrence route.
    fn series_jn(n: usize, x: f64) -> f64 {
        let half = x / 2.0;
        let mut term = half.powi(n as i32);
        for k in 1..=n {
            term /= k as f64;
        }
        let mut sum = term;
        for m in 1..200 {
            term *= -(half * half) / (m as f64 * (m + n) as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-30) {
                break;
            }
        }
        sum
    }

    #[test]
    fn matches_power_series() {
        for &x in &[0.1_f64, 0.5, 1.0, 2.4048, 5.0, 10.0, 20.0] {
            let row = bessel_j_row(12, x);
            // The alternating series cancels down from terms of order
            // e^x/√(2πx), so its own accuracy floor grows with x.
            let tol = 1e-13 * (x.exp() / (2.0 * std::f64::consts::PI * x).sqrt()).max(10.0);
            for n in 0..=12 {
                let want = series_jn(n, x);
                assert!(
                    (row[n] - want).abs() <= tol,
                    "J_{n}({x}): got {} want {want}",
                    row[n]
                );
            }
        }
    }

    #[test]
    fn known_values() {
        // Abramowitz & Stegun tables.
        assert!((bessel_jn(0, 1.0) - 0.7651976865579666).abs() < 1e-14);
        assert!((bessel_jn(1, 1.0) - 0.4400505857449335).abs() < 1e-14);
        assert!((bessel_jn(2, 5.0) - 0.04656511627775222).abs() < 1e-13);
    }

    #[test]
    fn negative_order_and_argument() {
        let x = 3.3;
        assert_eq!(bessel_jn(-3, x), -bessel_jn(3, x));
        assert_eq!(bessel_jn(-2, x), bessel_jn(2, x));
        assert_eq!(bessel_jn(1, -x), -bessel_jn(1, x));
    }

    #[test]
    fn zero_argument_is_kronecker_delta() {
        let row = bessel_j_row(4, 0.0);
        assert_eq!(row, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
    }
}
