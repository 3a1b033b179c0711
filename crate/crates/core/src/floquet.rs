//! Floquet coefficients `G_mu(w)` of the oscillator with a monochromatically
//! modulated contact to bath 1 (`g1(t) = cos(Omega t)`) and a static contact
//! to bath 2.
//!
//! Only even harmonics are populated. Dividing row `mu` of the recursion by
//! `chi(w + mu Omega)` turns it into a complex-symmetric tridiagonal system in
//! `mu/2`:
//!
//! ```text
//! chi(w_mu)^-1 G_mu + c(mu-1) G_{mu-2} + c(mu+1) G_{mu+2} = delta_{mu,0}
//! c(j) = -(i/4) (w + jOmega) g1(w + jOmega)
//! ```
//!
//! closed by `G_{+-(2M+2)} = 0`.

use num_complex::Complex64;

use crate::numerics::{solve_tridiagonal_report, ComplexTridiagonal, NumericsError};
use crate::spectral::{BathConfig, SpectralDensity, SpectralError};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FloquetError {
    #[error("invalid Floquet parameter: {0}")]
    InvalidParameter(String),
    #[error("singular Floquet system at w = {omega} (condition estimate {condition:e})")]
    Singular { omega: f64, condition: f64 },
    #[error("truncation did not converge up to M = {order}: tail difference {difference:e}")]
    Truncation { order: usize, difference: f64 },
    #[error("no self-consistent resonance: {0}")]
    NoFixedPoint(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Influence kernels `k0`, `k+-2` and the dressed susceptibility `chi`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSet {
    omega0: f64,
    drive: f64,
    bath1: SpectralDensity,
    bath2: SpectralDensity,
}

impl KernelSet {
    pub fn new(omega0: f64, drive: f64, bath1: SpectralDensity, bath2: SpectralDensity) -> Result<Self, FloquetError> {
        if !(drive > 0.0) || !drive.is_finite() {
            return Err(FloquetError::InvalidParameter(format!("Omega must be > 0, got {drive}")));
        }
        if !(omega0 > 0.0) || !omega0.is_finite() {
            return Err(FloquetError::InvalidParameter(format!("omega0 must be > 0, got {omega0}")));
        }
        Ok(KernelSet {
            omega0,
            drive,
            bath1,
            bath2,
        })
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn drive(&self) -> f64 {
        self.drive
    }

    pub fn bath1(&self) -> &SpectralDensity {
        &self.bath1
    }

    pub fn bath2(&self) -> &SpectralDensity {
        &self.bath2
    }

    /// `-(i/4) w g1(w)`; then `k+2(w) = c_at(w + Omega)`, `k-2(w) = c_at(w - Omega)`.
    #[inline]
    fn c_at(&self, w: f64) -> Complex64 {
        -0.25 * I * w * self.bath1.gamma_tilde(w)
    }

    pub fn k_plus(&self, w: f64) -> Complex64 {
        self.c_at(w + self.drive)
    }

    pub fn k_minus(&self, w: f64) -> Complex64 {
        self.c_at(w - self.drive)
    }

    pub fn k0(&self, w: f64) -> Complex64 {
        -I * w * self.bath2.gamma_tilde(w) + self.k_plus(w) + self.k_minus(w)
    }

    pub fn chi(&self, w: f64) -> Complex64 {
        -1.0 / (w * w - self.omega0 * self.omega0 - self.k0(w))
    }

    /// Bare susceptibility `-1/(w^2 - w0^2 + i w g2(w))`.
    pub fn chi0(&self, w: f64) -> Complex64 {
        -1.0 / (w * w - self.omega0 * self.omega0 + I * w * self.bath2.gamma_tilde(w))
    }
}

/// `build_kernels(w0, Omega, bath1, bath2)`.
pub fn build_kernels(omega0: f64, drive: f64, bath1: &BathConfig, bath2: &BathConfig) -> Result<KernelSet, FloquetError> {
    KernelSet::new(omega0, drive, bath1.spectral.clone(), bath2.spectral.clone())
}

/// One solved column `G_mu(w)`, `mu = -2M, ..., 2M` in steps of 2.
#[derive(Debug, Clone, PartialEq)]
pub struct FloquetColumn {
    pub omega: f64,
    pub order: usize,
    coeffs: Vec<Complex64>,
    pub backward_error: f64,
}

impl FloquetColumn {
    /// `G_mu`; zero for odd or out-of-range `mu`.
    #[inline]
    pub fn get(&self, mu: i64) -> Complex64 {
        if mu % 2 != 0 {
            return ZERO;
        }
        let j = mu / 2 + self.order as i64;
        if j < 0 || j as usize >= self.coeffs.len() {
            ZERO
        } else {
            self.coeffs[j as usize]
        }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Sup norm of the difference to another column on the union of indices.
    pub fn distance(&self, other: &FloquetColumn) -> f64 {
        let m = self.order.max(other.order) as i64;
        (-m..=m).map(|k| (self.get(2 * k) - other.get(2 * k)).norm()).fold(0.0, f64::max)
    }
}

fn assemble(k: &KernelSet, w: f64, order: usize) -> ComplexTridiagonal {
    let n = 2 * order + 1;
    let m = order as i64;
    let w0sq = k.omega0 * k.omega0;
    // c(j) for odd j in [-2M-1, 2M+1]
    let c: Vec<Complex64> = (0..=n).map(|i| k.c_at(w + (2 * (i as i64 - m) - 1) as f64 * k.drive)).collect();
    let diag: Vec<Complex64> = (0..n)
        .map(|i| {
            let mu = 2 * (i as i64 - m);
            let wm = w + mu as f64 * k.drive;
            let k0 = -I * wm * k.bath2.gamma_tilde(wm) + c[i] + c[i + 1];
            -(wm * wm - w0sq - k0)
        })
        .collect();
    let off: Vec<Complex64> = c[1..n].to_vec();
    ComplexTridiagonal {
        sub: off.clone(),
        diag,
        sup: off,
    }
}

/// Solves the truncated recursion at one frequency. `order = 0` keeps only
/// `G_0` (the dressed `chi`).
pub fn solve_floquet(k: &KernelSet, w: f64, order: usize) -> Result<FloquetColumn, FloquetError> {
    let attempt = |w: f64| -> Result<FloquetColumn, NumericsError> {
        let sys = assemble(k, w, order);
        let mut rhs = vec![ZERO; 2 * order + 1];
        rhs[order] = Complex64::new(1.0, 0.0);
        let (coeffs, backward_error) = solve_tridiagonal_report(&sys, &rhs)?;
        Ok(FloquetColumn {
            omega: w,
            order,
            coeffs,
            backward_error,
        })
    };
    match attempt(w) {
        Ok(c) => Ok(c),
        Err(NumericsError::Singular { .. }) => {
            let nudged = w + 1e-9 * w.abs().max(k.omega0);
            attempt(nudged).map_err(|e| match e {
                NumericsError::Singular { condition } => FloquetError::Singular { omega: w, condition },
                other => other.into(),
            })
        }
        Err(e) => Err(e.into()),
    }
}

/// Smallest order (1, 2, 4, ...) whose column differs from the `order + 2`
/// column by less than `tol` in sup norm.
pub fn converge_truncation(k: &KernelSet, w: f64, tol: f64, max_order: usize) -> Result<(usize, FloquetColumn), FloquetError> {
    converge_truncation_from(k, w, tol, 1, max_order)
}

/// As [`converge_truncation`], doubling from `start` instead of 1.
pub fn converge_truncation_from(
    k: &KernelSet,
    w: f64,
    tol: f64,
    start: usize,
    max_order: usize,
) -> Result<(usize, FloquetColumn), FloquetError> {
    if !(tol > 0.0) {
        return Err(FloquetError::InvalidParameter(format!("tol must be > 0, got {tol}")));
    }
    let mut order = start.max(1);
    let mut last = f64::INFINITY;
    while order <= max_order {
        let a = solve_floquet(k, w, order)?;
        let b = solve_floquet(k, w, order + 2)?;
        last = a.distance(&b);
        if last < tol {
            return Ok((order, a));
        }
        order *= 2;
    }
    Err(FloquetError::Truncation {
        order: max_order,
        difference: last,
    })
}

/// Table of Floquet columns over a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FloquetSolution {
    pub order: usize,
    pub columns: Vec<FloquetColumn>,
}

impl FloquetSolution {
    pub fn on_grid(k: &KernelSet, grid: &[f64], order: usize) -> Result<Self, FloquetError> {
        let columns = grid.iter().map(|&w| solve_floquet(k, w, order)).collect::<Result<Vec<_>, _>>()?;
        Ok(FloquetSolution { order, columns })
    }

    pub fn grid(&self) -> Vec<f64> {
        self.columns.iter().map(|c| c.omega).collect()
    }

    /// `G_mu` at every grid node.
    pub fn harmonic(&self, mu: i64) -> Vec<Complex64> {
        self.columns.iter().map(|c| c.get(mu)).collect()
    }

    pub fn max_backward_error(&self) -> f64 {
        self.columns.iter().map(|c| c.backward_error).fold(0.0, f64::max)
    }
}

/// Columns at `w - Omega`, `w`, `w + Omega`; together with
/// `G_mu(-x) = conj G_{-mu}(x)` they give every coefficient the thermodynamic
/// integrands need at one node.
#[derive(Debug, Clone)]
pub struct ColumnTriple {
    cols: [FloquetColumn; 3],
}

impl ColumnTriple {
    pub fn solve(k: &KernelSet, w: f64, order: usize) -> Result<Self, FloquetError> {
        Ok(ColumnTriple {
            cols: [
                solve_floquet(k, w - k.drive, order)?,
                solve_floquet(k, w, order)?,
                solve_floquet(k, w + k.drive, order)?,
            ],
        })
    }

    /// `G_mu(w + shift Omega)` for `shift` in -1..=1.
    #[inline]
    pub fn plus(&self, mu: i64, shift: i64) -> Complex64 {
        self.cols[(shift + 1) as usize].get(mu)
    }

    /// `G_mu(-w + shift Omega)`.
    #[inline]
    pub fn minus(&self, mu: i64, shift: i64) -> Complex64 {
        self.cols[(1 - shift) as usize].get(-mu).conj()
    }

    pub fn order(&self) -> usize {
        self.cols[1].order
    }

    pub fn max_backward_error(&self) -> f64 {
        self.cols.iter().map(|c| c.backward_error).fold(0.0, f64::max)
    }
}

/// Self-consistent resonance of the dressed oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetunedResonance {
    /// Dressed oscillator frequency `w*`.
    pub omega: f64,
    /// Lorentzian peak `omega1 = w* - Omega`.
    pub omega1: f64,
    /// Drive frequency at the fixed point.
    pub drive: f64,
    /// `|w*^2 - w0^2 - Re k0(w*)|`.
    pub residual: f64,
    pub iterations: usize,
}

fn lorentzian_params(k: &KernelSet) -> Result<(f64, f64, f64), FloquetError> {
    match k.bath1 {
        SpectralDensity::Lorentzian { d1, gamma1, omega1 } => {
            Ok((d1 / (k.omega0 * k.omega0 * omega1 * omega1), gamma1, omega1))
        }
        _ => Err(FloquetError::InvalidParameter("detuned resonance needs a Lorentzian bath 1".into())),
    }
}

fn self_consistent<F>(k: &KernelSet, start: f64, build: F) -> Result<DetunedResonance, FloquetError>
where
    F: Fn(f64) -> Result<(KernelSet, f64, f64), FloquetError>,
{
    let w0sq = k.omega0 * k.omega0;
    let residual = |w: f64| -> Result<(f64, f64, f64), FloquetError> {
        let (ks, omega1, drive) = build(w)?;
        Ok((w * w - w0sq - ks.k0(w).re, omega1, drive))
    };
    let update = |w: f64| -> Result<f64, FloquetError> {
        let (ks, _, _) = build(w)?;
        let s = w0sq + ks.k0(w).re;
        if s <= 0.0 {
            return Err(FloquetError::NoFixedPoint(format!("w0^2 + Re k0 = {s} <= 0 at w = {w}")));
        }
        Ok(s.sqrt())
    };
    let mut w = start;
    let damping = 0.5;
    let mut iterations = 0;
    for _ in 0..500 {
        iterations += 1;
        let next = (1.0 - damping) * w + damping * update(w)?;
        let step = (next - w).abs();
        w = next;
        if step < 1e-13 * w.abs().max(1.0) {
            break;
        }
    }
    // secant polish on the residual itself
    let mut a = w;
    let mut b = w * (1.0 + 1e-7);
    let mut fa = residual(a)?.0;
    let mut fb = residual(b)?.0;
    for _ in 0..50 {
        if fb.abs() < 1e-14 || fb == fa {
            break;
        }
        let c = b - fb * (b - a) / (fb - fa);
        a = b;
        fa = fb;
        b = c;
        fb = residual(b)?.0;
        iterations += 1;
    }
    let (res, omega1, drive) = residual(b)?;
    if !(res.abs() < 1e-10) || !b.is_finite() {
        return Err(FloquetError::NoFixedPoint(format!("residual {res:e} at w = {b}")));
    }
    Ok(DetunedResonance {
        omega: b,
        omega1,
        drive,
        residual: res.abs(),
        iterations,
    })
}

/// Solves `w^2 - w0^2 - Re k0(w) = 0` with `omega1 = w - Omega` at fixed drive
/// and fixed `kappa` (the Lorentzian amplitude `d1 = kappa w0^2 omega1^2`
/// follows the peak). Returns the resonant peak `omega1*`.
pub fn detuned_resonance(k: &KernelSet) -> Result<DetunedResonance, FloquetError> {
    let (kappa, gamma1, _) = lorentzian_params(k)?;
    let drive = k.drive;
    self_consistent(k, k.omega0, |w| {
        let omega1 = w - drive;
        if !(omega1 > 0.0) {
            return Err(FloquetError::NoFixedPoint(format!("omega1 = {omega1} <= 0")));
        }
        let b1 = SpectralDensity::lorentzian_kappa(kappa, gamma1, omega1, k.omega0)?;
        Ok((KernelSet::new(k.omega0, drive, b1, k.bath2.clone())?, omega1, drive))
    })
}

/// Same resonance condition solved for the drive `Omega* = w* - omega1` at the
/// kernel set's fixed Lorentzian peak.
pub fn detuned_resonance_drive(k: &KernelSet) -> Result<DetunedResonance, FloquetError> {
    let (_, _, omega1) = lorentzian_params(k)?;
    let start = (k.omega0).max(omega1 * 1.001);
    self_consistent(k, start, |w| {
        let drive = w - omega1;
        if !(drive > 0.0) {
            return Err(FloquetError::NoFixedPoint(format!("Omega = {drive} <= 0")));
        }
        Ok((KernelSet::new(k.omega0, drive, k.bath1.clone(), k.bath2.clone())?, omega1, drive))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernels(kappa: f64, drive: f64, omega1: f64) -> KernelSet {
        KernelSet::new(
            1.0,
            drive,
            SpectralDensity::lorentzian_kappa(kappa, 0.02, omega1, 1.0).unwrap(),
            SpectralDensity::ohmic(0.02).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn zero_coupling_is_bare() {
        let k = kernels(0.0, 0.3, 0.7);
        for &w in &[-2.0, -0.4, 0.0, 0.9, 1.0, 3.3] {
            let col = solve_floquet(&k, w, 3).unwrap();
            assert!((col.get(0) - k.chi0(w)).norm() < 1e-15 * k.chi0(w).norm());
            assert_eq!(col.get(2), ZERO);
            assert_eq!(k.chi(w), k.chi0(w));
        }
        let (m, _) = converge_truncation(&k, 0.8, 1e-12, 64).unwrap();
        assert_eq!(m, 1);
    }

    #[test]
    fn kernel_identities() {
        let k = kernels(0.1, 0.35, 0.6);
        for &w in &[-1.3, 0.2, 0.95] {
            let kp = -0.25 * I * (w + 0.35) * k.bath1.gamma_tilde(w + 0.35);
            assert_eq!(k.k_plus(w), kp);
            assert!((k.k_minus(w) - k.k_plus(w - 0.7)).norm() < 1e-15);
            let k0 = -I * w * Complex64::new(0.02, 0.0) + k.k_plus(w) + k.k_minus(w);
            assert!((k.k0(w) - k0).norm() < 1e-15);
        }
    }

    #[test]
    fn odd_and_out_of_range_are_zero() {
        let k = kernels(0.1, 0.3, 0.7);
        let col = solve_floquet(&k, 0.6, 2).unwrap();
        assert_eq!(col.get(1), ZERO);
        assert_eq!(col.get(-3), ZERO);
        assert_eq!(col.get(6), ZERO);
        assert!(col.get(4).norm() > 0.0);
    }

    #[test]
    fn perturbative_first_harmonic() {
        let k = kernels(1e-4, 0.3, 0.7);
        for &w in &[0.15, 0.55, 0.85, 1.15, 1.45] {
            let col = solve_floquet(&k, w, 4).unwrap();
            for s in [1.0, -1.0] {
                let ws = w + s * 0.3;
                let expect = 0.25 * I * k.chi0(w + 2.0 * s * 0.3) * ws * k.bath1.gamma_tilde(ws) * k.chi0(w);
                let got = col.get(if s > 0.0 { 2 } else { -2 });
                assert!((got - expect).norm() < 1e-2 * expect.norm(), "w={w} s={s}: {got} vs {expect}");
            }
        }
    }

    #[test]
    fn detuned_weak_limit() {
        let k = kernels(1e-9, 0.3, 0.7);
        let r = detuned_resonance(&k).unwrap();
        assert!((r.omega1 - 0.7).abs() < 1e-6);
        let r = detuned_resonance_drive(&k).unwrap();
        assert!((r.drive - 0.3).abs() < 1e-6);
    }

    #[test]
    fn detuned_strong_blue_shift() {
        let k = kernels(0.1, 0.6, 0.4);
        let r = detuned_resonance(&k).unwrap();
        assert!(r.residual < 1e-10);
        assert!(r.omega > 1.0);
        assert!((r.omega1 - (r.omega - 0.6)).abs() < 1e-15);
    }

    #[test]
    fn detuned_needs_lorentzian() {
        let k = KernelSet::new(
            1.0,
            0.3,
            SpectralDensity::ohmic(0.1).unwrap(),
            SpectralDensity::ohmic(0.02).unwrap(),
        )
        .unwrap();
        assert!(detuned_resonance(&k).is_err());
    }
}
