//! Asymptotic punctual non-Markovianity `N_p` of a weakly damped oscillator
//! from the divisibility of its dynamical map.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::numerics::{coth_half, integrate_pv_range, Integrator, NumericsError, QuadratureSpec};
use crate::spectral::{BathConfig, SpectralDensity, SpectralError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NonMarkovError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Asymptotic master-equation coefficients and the resulting `N_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NMCoefficients {
    /// Damping `J(w0) / 2 w0`.
    pub gamma: f64,
    /// Direct diffusion `Gamma coth(w0 / 2T)`.
    pub delta: f64,
    /// Anomalous diffusion `-PV int (J/pi) coth / (w^2 - w0^2)`.
    pub pi: f64,
    pub n_p: f64,
}

/// `N_p = (1 - Delta / sqrt(Delta^2 + Gamma^2 + Pi^2)) / 2`, written without
/// the cancellation at large `Delta`.
pub fn n_p(gamma: f64, delta: f64, pi: f64) -> f64 {
    let x = gamma * gamma + pi * pi;
    if x == 0.0 {
        return 0.0;
    }
    let s = (delta * delta + x).sqrt();
    0.5 * x / (s * (s + delta))
}

/// Coefficients with the density's own cutoff (PowerLaw) or none.
pub fn nm_coefficients(bath: &BathConfig, omega0: f64) -> Result<NMCoefficients, NonMarkovError> {
    nm_coefficients_with(bath, omega0, None, &QuadratureSpec::default())
}

/// Coefficients with an extra hard cutoff `theta(cutoff - w)` applied to `J`.
pub fn nm_coefficients_with(
    bath: &BathConfig,
    omega0: f64,
    cutoff: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<NMCoefficients, NonMarkovError> {
    let t = bath.temperature;
    if !(t > 0.0) {
        return Err(NonMarkovError::InvalidParameter(format!("T must be > 0, got {t}")));
    }
    if !(omega0 > 0.0) {
        return Err(NonMarkovError::InvalidParameter(format!("w0 must be > 0, got {omega0}")));
    }
    let sd = &bath.spectral;
    let own = match sd {
        SpectralDensity::PowerLaw(p) => p.omega_c(),
        _ => f64::INFINITY,
    };
    let upper = cutoff.unwrap_or(f64::INFINITY).min(own);
    if matches!(sd, SpectralDensity::Ohmic { .. }) && upper.is_infinite() {
        return Err(NonMarkovError::InvalidParameter(
            "an Ohmic bath needs a finite cutoff (anomalous diffusion diverges)".into(),
        ));
    }
    if !(upper > omega0) {
        return Err(NonMarkovError::InvalidParameter(format!(
            "cutoff {upper} must exceed w0 = {omega0}"
        )));
    }
    let gamma = sd.j(omega0) / (2.0 * omega0);
    let delta = gamma * coth_half(omega0, t);

    let mut pts = vec![t, 2.0 * omega0];
    for f in sd.features() {
        pts.push(f);
        if let Some(w) = sd.width() {
            for g in [1.0, 4.0, 16.0] {
                pts.extend([f - g * w, f + g * w]);
            }
        }
    }
    // decades keep wide ranges resolvable without a uniform initial mesh
    let top = if upper.is_finite() { upper } else { 1e3 * omega0.max(t) };
    let mut d = 0.1 * omega0;
    while d < top {
        pts.push(d);
        d *= 10.0;
    }
    pts.retain(|&p| p > 0.0 && p < upper);
    let integ = Integrator::new(*spec)
        .scale(omega0.max(t.min(upper)))
        .breakpoints(pts);
    let pv = integrate_pv_range(|w| bath.j_coth(w) / PI, omega0, 0.0, upper, &integ)?;
    let pi = -pv;
    Ok(NMCoefficients {
        gamma,
        delta,
        pi,
        n_p: n_p(gamma, delta, pi),
    })
}

/// Spectral family scanned by [`nm_scan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NmFamily {
    /// `J ~ w^s` with hard cutoff.
    PowerLaw { s: f64, omega_c: f64 },
    /// Lorentzian peak, optionally hard cut off.
    Lorentzian { gamma1: f64, omega1: f64, omega_c: Option<f64> },
}

/// Scan template: family, temperature and oscillator frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NmTemplate {
    pub family: NmFamily,
    pub temperature: f64,
    pub omega0: f64,
}

/// Template parameter swept by an axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NmParam {
    Temperature,
    S,
    Gamma1,
    Omega1,
    Cutoff,
    /// `w0 / omega_c`.
    InverseCutoff,
}

impl NmParam {
    pub fn name(&self) -> &'static str {
        match self {
            NmParam::Temperature => "T",
            NmParam::S => "s",
            NmParam::Gamma1 => "gamma1",
            NmParam::Omega1 => "omega1",
            NmParam::Cutoff => "omegac",
            NmParam::InverseCutoff => "inv_omegac",
        }
    }

    pub fn parse(s: &str) -> Option<NmParam> {
        Some(match s {
            "T" => NmParam::Temperature,
            "s" => NmParam::S,
            "gamma1" => NmParam::Gamma1,
            "omega1" => NmParam::Omega1,
            "omegac" => NmParam::Cutoff,
            "inv_omegac" => NmParam::InverseCutoff,
            _ => return None,
        })
    }
}

impl NmTemplate {
    pub fn with(&self, p: NmParam, v: f64) -> Result<NmTemplate, NonMarkovError> {
        let mut t = *self;
        let bad = || NonMarkovError::InvalidParameter(format!("{} does not apply to {:?}", p.name(), self.family));
        match (p, &mut t.family) {
            (NmParam::Temperature, _) => t.temperature = v,
            (NmParam::S, NmFamily::PowerLaw { s, .. }) => *s = v,
            (NmParam::Cutoff, NmFamily::PowerLaw { omega_c, .. }) => *omega_c = v,
            (NmParam::InverseCutoff, NmFamily::PowerLaw { omega_c, .. }) => *omega_c = self.omega0 / v,
            (NmParam::Gamma1, NmFamily::Lorentzian { gamma1, .. }) => *gamma1 = v,
            (NmParam::Omega1, NmFamily::Lorentzian { omega1, .. }) => *omega1 = v,
            (NmParam::Cutoff, NmFamily::Lorentzian { omega_c, .. }) => *omega_c = Some(v),
            (NmParam::InverseCutoff, NmFamily::Lorentzian { omega_c, .. }) => *omega_c = Some(self.omega0 / v),
            _ => return Err(bad()),
        }
        Ok(t)
    }

    /// `N_p` does not depend on the overall coupling, so unit strength is used.
    pub fn bath(&self) -> Result<(BathConfig, Option<f64>), NonMarkovError> {
        Ok(match self.family {
            NmFamily::PowerLaw { s, omega_c } => (
                BathConfig::new(SpectralDensity::power_law_real_only(1.0, s, self.omega0, omega_c)?, self.temperature)?,
                None,
            ),
            NmFamily::Lorentzian { gamma1, omega1, omega_c } => (
                BathConfig::new(SpectralDensity::lorentzian(1.0, gamma1, omega1)?, self.temperature)?,
                omega_c,
            ),
        })
    }

    pub fn coefficients(&self) -> Result<NMCoefficients, NonMarkovError> {
        let (bath, cutoff) = self.bath()?;
        nm_coefficients_with(&bath, self.omega0, cutoff, &QuadratureSpec::default())
    }
}

/// One scan point; failures are kept in place.
#[derive(Debug, Clone, PartialEq)]
pub struct NmRow {
    pub x: f64,
    pub y: Option<f64>,
    pub result: Result<NMCoefficients, NonMarkovError>,
}

/// Row-major scan over one or two template parameters.
pub fn nm_scan(template: &NmTemplate, x: (NmParam, &[f64]), y: Option<(NmParam, &[f64])>) -> Vec<NmRow> {
    let mut pts = Vec::new();
    for &xv in x.1 {
        match y {
            Some((_, ys)) => pts.extend(ys.iter().map(|&yv| (xv, Some(yv)))),
            None => pts.push((xv, None)),
        }
    }
    pts.par_iter()
        .map(|&(xv, yv)| {
            let result = template.with(x.0, xv).and_then(|t| match (y, yv) {
                (Some((p, _)), Some(v)) => t.with(p, v),
                _ => Ok(t),
            });
            NmRow {
                x: xv,
                y: yv,
                result: result.and_then(|t| t.coefficients()),
            }
        })
        .collect()
}
