//! Quadrature, principal values and tridiagonal solves shared by the physics
//! modules.

pub mod pv;
pub mod quadrature;
pub mod spline;
pub mod tridiag;

pub use pv::{integrate_pv, integrate_pv_range, integrate_pv_with};
pub use quadrature::{integrate_half_line, integrate_infinite, integrate_interval, Integrator, QuadratureSpec};
pub use spline::CubicSpline;
pub use tridiag::{solve_tridiagonal, solve_tridiagonal_report, ComplexTridiagonal};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),
    #[error("quadrature did not converge: relative error {achieved:e} (requested {requested:e}, abs {abs_error:e}) with {pieces} subintervals")]
    NonConvergence {
        achieved: f64,
        requested: f64,
        abs_error: f64,
        pieces: usize,
    },
    #[error("integrand component {component} not finite at {at}")]
    NonFinite { at: f64, component: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular or ill-conditioned system (condition estimate {condition:e})")]
    Singular { condition: f64 },
}

/// Bose-Einstein occupation `1/(e^x - 1)`.
#[inline]
pub fn bose(x: f64) -> f64 {
    1.0 / x.exp_m1()
}

/// `ln n_B(x)` for `x > 0`, accurate for large `x`.
#[inline]
pub fn ln_bose(x: f64) -> f64 {
    -x - (-(-x).exp()).ln_1p()
}

/// `w coth(w / 2T)`, even in `w`, with the limits `2T` at `w = 0` and `|w|`
/// at `T = 0`.
#[inline]
pub fn omega_coth(w: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return w.abs();
    }
    let x = w / (2.0 * t);
    if x.abs() < 1e-4 {
        // w coth(x) = 2T x coth(x), x coth x = 1 + x^2/3 - x^4/45
        let x2 = x * x;
        2.0 * t * (1.0 + x2 / 3.0 - x2 * x2 / 45.0)
    } else {
        w / x.tanh()
    }
}

/// `coth(w / 2T)`; `sign(w)` at `T = 0`.
#[inline]
pub fn coth_half(w: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return w.signum();
    }
    1.0 / (w / (2.0 * t)).tanh()
}

/// `w n_B(w / T)` with the limits `T` at `w = 0` and `max(-w, 0)` at `T = 0`.
#[inline]
pub fn omega_bose(w: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return (-w).max(0.0);
    }
    let x = w / t;
    if x.abs() < 1e-8 {
        t * (1.0 - x / 2.0)
    } else {
        w / x.exp_m1()
    }
}
