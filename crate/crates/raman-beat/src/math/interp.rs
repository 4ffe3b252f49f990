//! Shape-preserving (monotone) cubic interpolation on a uniform grid.
//!
//! Fritsch–Carlson slope limiting: within any interval where the data are
//! monotone the interpolant is monotone too, so it cannot manufacture
//! spurious zero crossings in an oscillatory field.

/// Monotone cubic interpolant of uniformly sampled data.
pub struct MonotoneCubic {
    x0: f64,
    dx: f64,
    y: Vec<f64>,
    slope: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x0: f64, dx: f64, y: Vec<f64>) -> Self {
        assert!(dx > 0.0 && y.len() >= 2, "need dx > 0 and at least 2 samples");
        let n = y.len();
        // Secant slopes of the n-1 intervals.
        let d: Vec<f64> = y.windows(2).map(|w| (w[1] - w[0]) / dx).collect();
        let mut slope = vec![0.0; n];
        slope[0] = d[0];
        slope[n - 1] = d[n - 2];
        for i in 1..n - 1 {
            if d[i - 1] * d[i] <= 0.0 {
                slope[i] = 0.0; // local extremum
            } else {
                // Harmonic mean keeps |slope| ≤ 3·min(|d|), the F–C bound.
                slope[i] = 2.0 * d[i - 1] * d[i] / (d[i - 1] + d[i]);
            }
        }
        Self { x0, dx, y, slope }
    }

    pub fn x_min(&self) -> f64 {
        self.x0
    }

    pub fn x_max(&self) -> f64 {
        self.x0 + self.dx * (self.y.len() - 1) as f64
    }

    /// Evaluate at `x`; clamps to the data range is **not** performed, the
    /// caller is responsible for coverage (see `covers`).
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.y.len();
        let mut i = ((x - self.x0) / self.dx).floor() as isize;
        if i < 0 {
            i = 0;
        }
        if i as usize >= n - 1 {
            i = (n - 2) as isize;
        }
        let i = i as usize;
        let t = (x - (self.x0 + i as f64 * self.dx)) / self.dx;
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (m0, m1) = (self.slope[i] * self.dx, self.slope[i + 1] * self.dx);
        // Cubic Hermite basis.
        let t2 = t * t;
        let t3 = t2 * t;
        y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + m0 * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + m1 * (t3 - t2)
    }

    pub fn covers(&self, x: f64) -> bool {
        x >= self.x_min() - 1e-9 * self.dx && x <= self.x_max() + 1e-9 * self.dx
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_nodes_exactly() {
        let y = vec![0.0, 1.0, 0.5, -0.25, 0.0];
        let f = MonotoneCubic::new(-1.0, 0.5, y.clone());
        for (i, &yi) in y.iter().enumerate() {
            let x = -1.0 + 0.5 * i as f64;
            assert!((f.eval(x) - yi).abs() < 1e-14);
        }
    }

    #[test]
    fn no_overshoot_on_monotone_data() {
        let y = vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
        let f = MonotoneCubic::new(0.0, 1.0, y);
        let mut x = 0.0;
        while x <= 5.0 {
            let v = f.eval(x);
            assert!((-1e-12..=1.0 + 1e-12).contains(&v), "overshoot at {x}: {v}");
            x += 0.01;
        }
    }

    #[test]
    fn close_to_smooth_function() {
        let n = 200;
        let dx = std::f64::consts::PI / n as f64;
        let y: Vec<f64> = (0..=n).map(|i| (i as f64 * dx).sin()).collect();
        let f = MonotoneCubic::new(0.0, dx, y);
        let mut worst: f64 = 0.0;
        for k in 0..1000 {
            let x = k as f64 * std::f64::consts::PI / 1000.0;
            worst = worst.max((f.eval(x) - x.sin()).abs());
        }
        assert!(worst < 5e-4, "worst error {worst}");
    }
}
