//! Bath spectral densities `J(w)`, their complex damping transforms
//! `g(w)` (with `w Re g(w) = J(w)`), and thermal noise spectra.
//!
//! Units: `w0 = m = hbar = k_B = 1`. All densities are odd in `w`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::numerics::{self, omega_bose, omega_coth, CubicSpline, Integrator, NumericsError, QuadratureSpec};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("invalid spectral parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Power-law bath `J = gamma w |w/wbar|^(s-1)` with hard cutoff at `omega_c`
/// (which may be infinite for `s < 2`).
#[derive(Debug, Clone)]
pub struct PowerLaw {
    gamma: f64,
    s: f64,
    omega_bar: f64,
    omega_c: f64,
    kk: Option<Arc<KkCache>>,
}

impl PartialEq for PowerLaw {
    fn eq(&self, o: &Self) -> bool {
        self.gamma == o.gamma && self.s == o.s && self.omega_bar == o.omega_bar && self.omega_c == o.omega_c
    }
}

#[derive(Debug)]
struct KkCache {
    // Smooth part of Im g on [0, 2 omega_c]; the log singularity at the cutoff
    // and (for s < 2) the no-cutoff closed form are added analytically.
    smooth: CubicSpline,
}

const KK_GRID: usize = 1601;

impl PowerLaw {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn s(&self) -> f64 {
        self.s
    }
    pub fn omega_bar(&self) -> f64 {
        self.omega_bar
    }
    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    /// `J(x)/x` on `x >= 0` without the cutoff.
    fn r(&self, x: f64) -> f64 {
        self.gamma * (x / self.omega_bar).powf(self.s - 1.0)
    }

    fn build_cache(&mut self) -> Result<(), SpectralError> {
        if !self.omega_c.is_finite() {
            return Ok(());
        }
        let wc = self.omega_c;
        let rc = self.r(wc);
        let spec = QuadratureSpec {
            rel_tol: 1e-11,
            abs_tol: 1e-14 * rc.max(1e-300),
            omega_max: None,
            node_budget: 2000,
        };
        let integ = Integrator::new(spec).scale(wc).center(wc).max_initial_width(0.2);
        let low = self.s < 2.0;
        let this = self.clone();
        let smooth_at = |w: f64| -> Result<f64, NumericsError> {
            if w == 0.0 {
                return Ok(0.0);
            }
            let g = |x: f64| this.r(x) - rc;
            let removable = (w - wc).abs() < 1e-9 * wc;
            if low {
                // (2w/pi) PV int_wc^inf (R - Rc)/(x^2 - w^2)
                let u = if w > wc && !removable {
                    numerics::pv::integrate_pv_range(g, w, wc, f64::INFINITY, &integ)?
                } else {
                    integ.integrate(|x| g(x) / ((x - w) * (x + w)), wc, f64::INFINITY)?
                };
                Ok(2.0 * w / PI * u)
            } else {
                // -(2w/pi) PV int_0^wc (R - Rc)/(x^2 - w^2)
                let fin = Integrator::new(spec);
                let v = if w < wc && !removable {
                    numerics::pv::integrate_pv_range(g, w, 0.0, wc, &fin)?
                } else {
                    fin.integrate(|x| g(x) / ((x - w) * (x + w)), 0.0, wc)?
                };
                Ok(-2.0 * w / PI * v)
            }
        };
        let xs: Vec<f64> = (0..KK_GRID).map(|i| 2.0 * wc * i as f64 / (KK_GRID - 1) as f64).collect();
        let ys = xs.iter().map(|&w| smooth_at(w)).collect::<Result<Vec<_>, _>>()?;
        self.kk = Some(Arc::new(KkCache {
            smooth: CubicSpline::new(xs, ys)?,
        }));
        Ok(())
    }

    /// `Im g(w)` for `w > 0`.
    fn im_positive(&self, w: f64) -> f64 {
        let no_cut = |w: f64| self.r(w) / (PI * self.s / 2.0).tan();
        let wc = self.omega_c;
        if !wc.is_finite() {
            return no_cut(w);
        }
        if w >= 2.0 * wc {
            // (2/pi) sum_k int_0^wc x^{2k} R dx / w^{2k+1}
            let pref = 2.0 / PI * self.gamma * self.omega_bar.powf(1.0 - self.s);
            let q = (wc / w) * (wc / w);
            let mut term = wc.powf(self.s) / w;
            let mut sum = 0.0;
            for k in 0..200 {
                let t = term / (2.0 * k as f64 + self.s);
                sum += t;
                if t.abs() < 1e-17 * sum.abs() {
                    break;
                }
                term *= q;
            }
            return pref * sum;
        }
        let rc = self.r(wc);
        let log_part = rc / PI * ((wc + w) / (wc - w).abs()).ln();
        let smooth = self.kk.as_ref().expect("cache built at construction").smooth.eval(w);
        if self.s < 2.0 {
            no_cut(w) + log_part + smooth
        } else {
            log_part + smooth
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralDensity {
    Ohmic { gamma: f64 },
    PowerLaw(PowerLaw),
    /// `J = d1 gamma1 w / ((w^2 - omega1^2)^2 + gamma1^2 w^2)`.
    Lorentzian { d1: f64, gamma1: f64, omega1: f64 },
}

fn positive(name: &str, v: f64) -> Result<(), SpectralError> {
    if v > 0.0 && !v.is_nan() {
        Ok(())
    } else {
        Err(SpectralError::InvalidParameter(format!("{name} must be > 0, got {v}")))
    }
}

impl SpectralDensity {
    pub fn ohmic(gamma: f64) -> Result<Self, SpectralError> {
        positive("gamma", gamma)?;
        Ok(SpectralDensity::Ohmic { gamma })
    }

    /// Power law with hard cutoff; pass `f64::INFINITY` for no cutoff
    /// (requires `s < 2`). Builds the Kramers-Kronig cache.
    pub fn power_law(gamma: f64, s: f64, omega_bar: f64, omega_c: f64) -> Result<Self, SpectralError> {
        positive("gamma", gamma)?;
        positive("s", s)?;
        positive("omegabar", omega_bar)?;
        positive("omegac", omega_c)?;
        if !omega_c.is_finite() && s >= 2.0 {
            return Err(SpectralError::InvalidParameter(
                "power law with s >= 2 needs a finite cutoff".into(),
            ));
        }
        let mut p = PowerLaw {
            gamma,
            s,
            omega_bar,
            omega_c,
            kk: None,
        };
        p.build_cache()?;
        Ok(SpectralDensity::PowerLaw(p))
    }

    /// Power law whose imaginary damping part is never needed (e.g. for
    /// spectral integrals only); skips the Kramers-Kronig cache.
    pub fn power_law_real_only(gamma: f64, s: f64, omega_bar: f64, omega_c: f64) -> Result<Self, SpectralError> {
        positive("gamma", gamma)?;
        positive("s", s)?;
        positive("omegabar", omega_bar)?;
        positive("omegac", omega_c)?;
        Ok(SpectralDensity::PowerLaw(PowerLaw {
            gamma,
            s,
            omega_bar,
            omega_c,
            kk: None,
        }))
    }

    pub fn lorentzian(d1: f64, gamma1: f64, omega1: f64) -> Result<Self, SpectralError> {
        if !(d1 >= 0.0) {
            return Err(SpectralError::InvalidParameter(format!("d1 must be >= 0, got {d1}")));
        }
        positive("gamma1", gamma1)?;
        positive("omega1", omega1)?;
        Ok(SpectralDensity::Lorentzian { d1, gamma1, omega1 })
    }

    /// Lorentzian parametrized by the dimensionless coupling
    /// `kappa = d1 / (w0^2 omega1^2)`.
    pub fn lorentzian_kappa(kappa: f64, gamma1: f64, omega1: f64, omega0: f64) -> Result<Self, SpectralError> {
        if !(kappa >= 0.0) {
            return Err(SpectralError::InvalidParameter(format!("kappa must be >= 0, got {kappa}")));
        }
        Self::lorentzian(kappa * omega0 * omega0 * omega1 * omega1, gamma1, omega1)
    }

    /// `J(w)`.
    pub fn j(&self, w: f64) -> f64 {
        w * self.j_over_omega(w)
    }

    /// `J(w)/w = Re g(w)`; even in `w`.
    pub fn j_over_omega(&self, w: f64) -> f64 {
        match self {
            SpectralDensity::Ohmic { gamma } => *gamma,
            SpectralDensity::PowerLaw(p) => {
                let a = w.abs();
                if a < p.omega_c {
                    p.r(a)
                } else {
                    0.0
                }
            }
            SpectralDensity::Lorentzian { d1, gamma1, omega1 } => {
                let w2 = w * w;
                let dd = w2 - omega1 * omega1;
                d1 * gamma1 / (dd * dd + gamma1 * gamma1 * w2)
            }
        }
    }

    /// Complex damping transform `g(w)`, analytic in the upper half plane.
    pub fn gamma_tilde(&self, w: f64) -> Complex64 {
        match self {
            SpectralDensity::Ohmic { gamma } => Complex64::new(*gamma, 0.0),
            SpectralDensity::PowerLaw(p) => {
                let im = if w == 0.0 {
                    0.0
                } else {
                    w.signum() * p.im_positive(w.abs())
                };
                Complex64::new(self.j_over_omega(w), im)
            }
            SpectralDensity::Lorentzian { d1, gamma1, omega1 } => {
                let w12 = omega1 * omega1;
                Complex64::new(*d1 / w12, 0.0) * Complex64::new(*gamma1, -w)
                    / Complex64::new(w12 - w * w, -gamma1 * w)
            }
        }
    }

    /// Frequencies where the density or its transform has sharp structure.
    pub fn features(&self) -> Vec<f64> {
        match self {
            SpectralDensity::Ohmic { .. } => vec![],
            SpectralDensity::PowerLaw(p) => {
                if p.omega_c.is_finite() {
                    vec![p.omega_c]
                } else {
                    vec![]
                }
            }
            SpectralDensity::Lorentzian { omega1, .. } => vec![*omega1],
        }
    }

    /// Natural frequency scale (peak or cutoff), if any.
    pub fn scale(&self) -> Option<f64> {
        match self {
            SpectralDensity::Ohmic { .. } => None,
            SpectralDensity::PowerLaw(p) => Some(p.omega_bar),
            SpectralDensity::Lorentzian { omega1, .. } => Some(*omega1),
        }
    }

    /// Width of the sharpest feature, used to size initial quadrature pieces.
    pub fn width(&self) -> Option<f64> {
        match self {
            SpectralDensity::Lorentzian { gamma1, .. } => Some(*gamma1),
            _ => None,
        }
    }

    /// Dimensionless coupling `kappa = d1/(w0^2 omega1^2)` of a Lorentzian.
    pub fn kappa(&self, omega0: f64) -> Option<f64> {
        match self {
            SpectralDensity::Lorentzian { d1, omega1, .. } => Some(d1 / (omega0 * omega0 * omega1 * omega1)),
            _ => None,
        }
    }

    /// Overall rate scale (`gamma` of Ohmic/PowerLaw, `d1/omega1^3` for the
    /// Lorentzian).
    pub fn strength(&self) -> f64 {
        match self {
            SpectralDensity::Ohmic { gamma } => *gamma,
            SpectralDensity::PowerLaw(p) => p.gamma,
            SpectralDensity::Lorentzian { d1, omega1, .. } => d1 / omega1.powi(3),
        }
    }

    /// True when the density is identically zero.
    pub fn is_zero(&self) -> bool {
        matches!(self, SpectralDensity::Lorentzian { d1, .. } if *d1 == 0.0)
    }
}

/// A bath: spectral density at temperature `T >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BathConfig {
    pub spectral: SpectralDensity,
    pub temperature: f64,
}

impl BathConfig {
    pub fn new(spectral: SpectralDensity, temperature: f64) -> Result<Self, SpectralError> {
        if !(temperature >= 0.0) || !temperature.is_finite() {
            return Err(SpectralError::InvalidParameter(format!(
                "temperature must be >= 0, got {temperature}"
            )));
        }
        Ok(BathConfig { spectral, temperature })
    }

    /// `J(w) coth(w/2T)`; even and positive.
    pub fn j_coth(&self, w: f64) -> f64 {
        self.spectral.j_over_omega(w) * omega_coth(w, self.temperature)
    }

    /// Noise spectrum `L(w) = 2 J(w) [1 + n_B(w/T)]`.
    pub fn noise_psd(&self, w: f64) -> f64 {
        // J(1 + n) = (J/w) (w + w n_B(w/T))
        2.0 * self.spectral.j_over_omega(w) * (w + omega_bose(w, self.temperature))
    }
}

pub fn eval_j(sd: &SpectralDensity, w: f64) -> f64 {
    sd.j(w)
}

pub fn gamma_tilde(sd: &SpectralDensity, w: f64) -> Complex64 {
    sd.gamma_tilde(w)
}

pub fn noise_psd(bath: &BathConfig, w: f64) -> f64 {
    bath.noise_psd(w)
}
