use crate::floquet::{FloquetError, KernelSet};
use crate::numerics::QuadratureSpec;
use crate::spectral::{BathConfig, SpectralDensity, SpectralError};

use super::ThermoError;

/// How many Floquet harmonics to keep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    /// Fixed order `M` (harmonics `-2M..=2M`). `M = 0` keeps `G_0` only.
    Fixed(usize),
    /// Smallest order (doubling from `min_order`) for which the columns at a
    /// set of probe frequencies change by less than `tol` when two more
    /// harmonics are added.
    Auto { tol: f64, min_order: usize, max_order: usize },
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::Auto {
            tol: 1e-10,
            min_order: 1,
            max_order: 128,
        }
    }
}

/// Full physical and numerical setup of one engine.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub omega0: f64,
    /// Drive frequency `Omega` of the bath-1 coupling `cos(Omega t)`.
    pub drive: f64,
    pub bath1: BathConfig,
    pub bath2: BathConfig,
    pub quadrature: QuadratureSpec,
    pub truncation: Truncation,
}

impl EngineConfig {
    pub fn new(omega0: f64, drive: f64, bath1: BathConfig, bath2: BathConfig) -> Result<Self, ThermoError> {
        let cfg = EngineConfig {
            omega0,
            drive,
            bath1,
            bath2,
            quadrature: QuadratureSpec::default(),
            truncation: Truncation::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_truncation(mut self, t: Truncation) -> Self {
        self.truncation = t;
        self
    }

    pub fn with_quadrature(mut self, q: QuadratureSpec) -> Self {
        self.quadrature = q;
        self
    }

    pub fn validate(&self) -> Result<(), ThermoError> {
        if !(self.omega0 > 0.0) || !self.omega0.is_finite() {
            return Err(ThermoError::InvalidConfig(format!("omega0 must be > 0, got {}", self.omega0)));
        }
        if !(self.drive > 0.0) || !self.drive.is_finite() {
            return Err(ThermoError::InvalidConfig(format!("Omega must be > 0, got {}", self.drive)));
        }
        for (i, b) in [&self.bath1, &self.bath2].iter().enumerate() {
            if !(b.temperature >= 0.0) || !b.temperature.is_finite() {
                return Err(ThermoError::InvalidConfig(format!(
                    "T{} must be >= 0, got {}",
                    i + 1,
                    b.temperature
                )));
            }
        }
        if let Some(k) = self.kappa() {
            if !(k >= 0.0) {
                return Err(ThermoError::InvalidConfig(format!("kappa must be >= 0, got {k}")));
            }
        }
        if let Truncation::Auto { tol, min_order, max_order } = self.truncation {
            if !(tol > 0.0) || min_order > max_order {
                return Err(ThermoError::InvalidConfig("bad truncation policy".into()));
            }
        }
        self.quadrature.validate().map_err(|e| ThermoError::InvalidConfig(e.to_string()))
    }

    /// Dimensionless Lorentzian coupling of bath 1, if it is Lorentzian.
    pub fn kappa(&self) -> Option<f64> {
        self.bath1.spectral.kappa(self.omega0)
    }

    pub fn kernels(&self) -> Result<KernelSet, FloquetError> {
        KernelSet::new(
            self.omega0,
            self.drive,
            self.bath1.spectral.clone(),
            self.bath2.spectral.clone(),
        )
    }

    /// `L = max(w0, Omega, omega1, T1, T2)`, the scale of the tangent map.
    pub fn frequency_scale(&self) -> f64 {
        let mut l = self.omega0.max(self.drive);
        for b in [&self.bath1, &self.bath2] {
            l = l.max(b.temperature);
            if let Some(s) = b.spectral.scale() {
                if s.is_finite() {
                    l = l.max(s);
                }
            }
        }
        l
    }

    /// Hot and cold temperatures with the index (1 or 2) of the hot bath;
    /// `None` when the temperatures are equal.
    pub fn hot_bath(&self) -> Option<usize> {
        let (t1, t2) = (self.bath1.temperature, self.bath2.temperature);
        if t1 > t2 {
            Some(1)
        } else if t2 > t1 {
            Some(2)
        } else {
            None
        }
    }

    /// `1 - T_cold/T_hot` (zero for equal temperatures).
    pub fn carnot(&self) -> f64 {
        let (t1, t2) = (self.bath1.temperature, self.bath2.temperature);
        let (hot, cold) = if t1 > t2 { (t1, t2) } else { (t2, t1) };
        if hot > 0.0 {
            1.0 - cold / hot
        } else {
            0.0
        }
    }

    /// Rate scale `gamma2` of an Ohmic bath 2 (strength otherwise).
    pub fn gamma2(&self) -> f64 {
        self.bath2.spectral.strength()
    }
}

/// Lorentzian bath 1 + Ohmic bath 2 parameter set used throughout the engine
/// studies. Defaults are the weak-coupling engine point
/// `Omega = 0.3, omega1 = 0.7, kappa = 1e-3, gamma1 = gamma2 = 0.02,
/// T1 = 0.2, T2 = 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianSetup {
    pub omega0: f64,
    pub drive: f64,
    pub kappa: f64,
    pub gamma1: f64,
    pub omega1: f64,
    pub gamma2: f64,
    pub t1: f64,
    pub t2: f64,
}

impl Default for LorentzianSetup {
    fn default() -> Self {
        LorentzianSetup {
            omega0: 1.0,
            drive: 0.3,
            kappa: 1e-3,
            gamma1: 0.02,
            omega1: 0.7,
            gamma2: 0.02,
            t1: 0.2,
            t2: 2.0,
        }
    }
}

impl LorentzianSetup {
    pub fn config(&self) -> Result<EngineConfig, ThermoError> {
        let b1 = BathConfig::new(
            SpectralDensity::lorentzian_kappa(self.kappa, self.gamma1, self.omega1, self.omega0)?,
            self.t1,
        )?;
        let b2 = BathConfig::new(SpectralDensity::ohmic(self.gamma2)?, self.t2)?;
        EngineConfig::new(self.omega0, self.drive, b1, b2)
    }
}

impl From<SpectralError> for ThermoError {
    fn from(e: SpectralError) -> Self {
        ThermoError::InvalidConfig(e.to_string())
    }
}
