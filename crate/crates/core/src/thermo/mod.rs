//! Exact cycle-averaged power and heat currents at arbitrary coupling.

mod config;
mod integrands;
mod report;

pub use config::{EngineConfig, LorentzianSetup, Truncation};
pub(crate) use report::{bath_features, guarded_breakpoints};
pub use report::{full_report, select_order, Integrals, Regime, Solver, ThermoReport, BALANCE_TOL};

use crate::floquet::FloquetError;
use crate::numerics::NumericsError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ThermoError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Floquet(#[from] FloquetError),
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] NumericsError),
    #[error("first-law residual {:e} exceeds tolerance (scale {:e})", .0.balance_residual, .0.balance_scale)]
    Integrity(Box<ThermoReport>),
}
