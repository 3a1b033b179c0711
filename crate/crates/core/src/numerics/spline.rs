//! Natural cubic spline on a strictly increasing grid.

use num_complex::Complex64;

use super::tridiag::{solve_tridiagonal, ComplexTridiagonal};
use super::NumericsError;

#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self, NumericsError> {
        let n = x.len();
        if n < 3 || y.len() != n {
            return Err(NumericsError::Dimension(format!("spline needs >= 3 matching points, got {n}")));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(NumericsError::Dimension("spline grid must increase".into()));
        }
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let k = n - 2;
        let z = |v: f64| Complex64::new(v, 0.0);
        let diag: Vec<_> = (0..k).map(|i| z(2.0 * (h[i] + h[i + 1]))).collect();
        let off: Vec<_> = (0..k.saturating_sub(1)).map(|i| z(h[i + 1])).collect();
        let rhs: Vec<_> = (0..k)
            .map(|i| z(6.0 * ((y[i + 2] - y[i + 1]) / h[i + 1] - (y[i + 1] - y[i]) / h[i])))
            .collect();
        let sys = ComplexTridiagonal::new(off.clone(), diag, off)?;
        let inner = solve_tridiagonal(&sys, &rhs)?;
        let mut m = vec![0.0; n];
        for (i, v) in inner.iter().enumerate() {
            m[i + 1] = v.re;
        }
        Ok(CubicSpline { x, y, m })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    /// Evaluates the spline; points outside the grid are clamped to the ends.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let i = match self.x.partition_point(|&xi| xi <= t) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let t = t.clamp(self.x[0], self.x[n - 1]);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_nodes_and_smooth_data() {
        let x: Vec<f64> = (0..41).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> = x.iter().map(|v| v.sin()).collect();
        let s = CubicSpline::new(x.clone(), y.clone()).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert!((s.eval(*xi) - yi).abs() < 1e-14);
        }
        assert!((s.eval(1.234) - 1.234f64.sin()).abs() < 1e-5);
    }

    #[test]
    fn rejects_unsorted() {
        assert!(CubicSpline::new(vec![0.0, 2.0, 1.0], vec![0.0; 3]).is_err());
    }
}
