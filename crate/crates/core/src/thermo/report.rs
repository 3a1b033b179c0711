use std::cell::{Cell, RefCell};
use std::fmt;

use crate::floquet::{converge_truncation_from, FloquetError, KernelSet};
use crate::numerics::{Integrator, NumericsError};

use super::integrands::*;
use super::{EngineConfig, ThermoError, Truncation};

/// Operating regime of one report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `P < 0`.
    Engine,
    /// `P > 0` with heat drawn from the colder bath.
    RefrigeratorCandidate,
    /// `P > 0` and both baths absorb heat.
    Heater,
    Dissipator,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Engine => "engine",
            Regime::RefrigeratorCandidate => "refrigerator-candidate",
            Regime::Heater => "heater",
            Regime::Dissipator => "dissipator",
        }
    }

    pub fn classify(power: f64, heat_1: f64, heat_2: f64, hot: Option<usize>) -> Regime {
        if power < 0.0 {
            return Regime::Engine;
        }
        if power > 0.0 {
            if heat_1 < 0.0 && heat_2 < 0.0 {
                return Regime::Heater;
            }
            let cold = match hot {
                Some(1) => Some(heat_2),
                Some(2) => Some(heat_1),
                _ => None,
            };
            if matches!(cold, Some(j) if j > 0.0) {
                return Regime::RefrigeratorCandidate;
            }
        }
        Regime::Dissipator
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Cycle-averaged power, heat currents and their pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermoReport {
    pub power: f64,
    pub power_a: f64,
    pub power_b1: f64,
    pub power_b2: f64,
    /// Reactive piece from `Im g1`; zero when bath 1 has no reactive part.
    pub power_c: f64,
    /// `J1 = -(P + J2)`.
    pub heat_1: f64,
    pub heat_2: f64,
    /// `J2` piece with the explicit `omega Im G_0` weight, regularized by the
    /// hard cutoff (it diverges logarithmically for an Ohmic bath 2 on its own).
    pub heat_2a: f64,
    pub heat_2b: f64,
    /// `J1` evaluated directly from the unreduced harmonic sums.
    pub heat_1_direct: f64,
    /// `P^(a) + P^(b)` evaluated from the unreduced harmonic sums.
    pub power_direct: f64,
    /// `|P + J1_direct + J2|`.
    pub balance_residual: f64,
    /// Scale the residual is compared against.
    pub balance_scale: f64,
    /// `-P / J_hot` for engines with positive inflow from the hotter bath.
    pub efficiency: Option<f64>,
    pub efficiency_1: f64,
    pub efficiency_2: f64,
    pub carnot: f64,
    pub regime: Regime,
    pub order: usize,
    pub evaluations: usize,
    pub max_backward_error: f64,
    /// `P / gamma2^2`.
    pub power_over_gamma2_sq: f64,
}

impl ThermoReport {
    pub fn efficiency_over_carnot(&self) -> Option<f64> {
        match self.efficiency {
            Some(e) if self.carnot > 0.0 => Some(e / self.carnot),
            _ => None,
        }
    }

    /// Relative balance residual against `max(|P|, |J1|, |J2|, w0 gamma2^2)`.
    pub fn balance_ok(&self, rel: f64) -> bool {
        self.balance_residual <= rel * self.balance_scale
    }
}

/// Relative first-law tolerance enforced by [`full_report`].
pub const BALANCE_TOL: f64 = 1e-6;

/// Raw integrals for one configuration at a fixed truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrals {
    pub power_a: f64,
    pub power_b1: f64,
    pub power_b2: f64,
    pub power_c: f64,
    pub heat_2: f64,
    pub heat_2a: f64,
    pub heat_1_direct: f64,
    pub power_direct: f64,
    pub evaluations: usize,
    pub max_backward_error: f64,
}

/// Evaluates the thermodynamic integrals of one configuration.
pub struct Solver<'a> {
    cfg: &'a EngineConfig,
    kernels: KernelSet,
    order: usize,
}

fn probe_frequencies(cfg: &EngineConfig, k: &KernelSet) -> Vec<f64> {
    let w0 = cfg.omega0;
    let om = cfg.drive;
    let mut v = vec![0.0, 0.5 * w0, w0, -w0, w0 + om, w0 - om, 2.0 * w0];
    if let Some(r) = resonance_estimate(cfg, k) {
        v.extend([r, -r, r - om, r + om]);
    }
    for f in cfg.bath1.spectral.features() {
        if f.is_finite() && f < 1e3 * cfg.frequency_scale() {
            v.extend([f - om, f + om, -f + om, -f - om]);
        }
    }
    v
}

fn resonance_estimate(cfg: &EngineConfig, k: &KernelSet) -> Option<f64> {
    let s = cfg.omega0 * cfg.omega0 + k.k0(cfg.omega0).re;
    (s > 0.0).then(|| s.sqrt())
}

/// `(feature, width)` pairs of both bath densities.
pub(crate) fn bath_features(cfg: &EngineConfig) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for b in [&cfg.bath1, &cfg.bath2] {
        let w = b.spectral.width().unwrap_or(0.0);
        out.extend(b.spectral.features().into_iter().map(|f| (f, w)));
    }
    out
}

/// Breakpoints at `+-f + k Omega` for every feature `(f, width)`, `|k| <= kmax`,
/// plus guard points at `1, 4, 16` widths on either side for `|k| <= guarded`.
pub(crate) fn guarded_breakpoints(feats: &[(f64, f64)], om: f64, kmax: i64, guarded: i64, limit: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    for &(f, width) in feats {
        if !f.is_finite() || f > limit {
            continue;
        }
        for k in -kmax..=kmax {
            for s in [1.0, -1.0] {
                let c = s * f + k as f64 * om;
                pts.push(c);
                if width > 0.0 && k.abs() <= guarded {
                    for g in [1.0, 4.0, 16.0] {
                        pts.push(c - g * width);
                        pts.push(c + g * width);
                    }
                }
            }
        }
    }
    pts
}

/// Truncation order selected by the configuration's policy.
pub fn select_order(cfg: &EngineConfig, k: &KernelSet) -> Result<usize, FloquetError> {
    match cfg.truncation {
        Truncation::Fixed(m) => Ok(m),
        Truncation::Auto { tol, min_order, max_order } => {
            let mut best = min_order.max(1);
            for w in probe_frequencies(cfg, k) {
                let (m, _) = converge_truncation_from(k, w, tol, best, max_order)?;
                best = best.max(m);
            }
            Ok(best)
        }
    }
}

impl<'a> Solver<'a> {
    pub fn new(cfg: &'a EngineConfig) -> Result<Self, ThermoError> {
        cfg.validate()?;
        let kernels = cfg.kernels()?;
        let order = select_order(cfg, &kernels)?;
        Ok(Solver { cfg, kernels, order })
    }

    pub fn with_order(cfg: &'a EngineConfig, order: usize) -> Result<Self, ThermoError> {
        cfg.validate()?;
        Ok(Solver {
            cfg,
            kernels: cfg.kernels()?,
            order,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kernels(&self) -> &KernelSet {
        &self.kernels
    }

    fn breakpoints(&self) -> Vec<f64> {
        let cfg = self.cfg;
        let l = cfg.frequency_scale();
        let damping = (-self.kernels.k0(cfg.omega0).im / cfg.omega0).abs().max(1e-6);
        let mut feats = vec![(cfg.omega0, damping)];
        if let Some(r) = resonance_estimate(cfg, &self.kernels) {
            feats.push((r, damping));
        }
        feats.extend(bath_features(cfg));
        let kmax = (2 * self.order as i64 + 2).min(6);
        let mut pts = guarded_breakpoints(&feats, cfg.drive, kmax, 3, 1e6 * l);
        let cutoff = cfg.quadrature.cutoff(l);
        pts.extend([0.0, cutoff, -cutoff]);
        pts
    }

    /// All integrals in one vector-valued adaptive pass.
    pub fn integrals(&self) -> Result<Integrals, ThermoError> {
        let cfg = self.cfg;
        let l = cfg.frequency_scale();
        let integrand = NodeIntegrand {
            kernels: &self.kernels,
            bath1: &cfg.bath1,
            bath2: &cfg.bath2,
            order: self.order,
            cutoff: cfg.quadrature.cutoff(l),
        };
        let failure: RefCell<Option<FloquetError>> = RefCell::new(None);
        let count = Cell::new(0usize);
        let integ = Integrator::new(cfg.quadrature)
            .scale(l)
            .breakpoints(self.breakpoints())
            .max_initial_width(0.05);
        let res = integ.integrate_vec(
            |w| {
                count.set(count.get() + 1);
                match integrand.eval(w) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        [f64::NAN; N_COMPONENTS]
                    }
                }
            },
            f64::NEG_INFINITY,
            f64::INFINITY,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e.into());
        }
        let v = res.map_err(|e: NumericsError| ThermoError::from(e))?;
        Ok(Integrals {
            power_a: v[P_A],
            power_b1: v[P_B1],
            power_b2: v[P_B2],
            heat_2: v[J2],
            heat_2a: v[J2_A],
            heat_1_direct: v[J1_GENERAL],
            power_direct: v[P_GENERAL],
            power_c: v[P_C],
            evaluations: count.get(),
            max_backward_error: 0.0,
        })
    }

    pub fn power_a(&self) -> Result<f64, ThermoError> {
        Ok(self.integrals()?.power_a)
    }

    pub fn power_b1(&self) -> Result<f64, ThermoError> {
        Ok(self.integrals()?.power_b1)
    }

    pub fn power_b2(&self) -> Result<f64, ThermoError> {
        Ok(self.integrals()?.power_b2)
    }

    pub fn power_c(&self) -> Result<f64, ThermoError> {
        Ok(self.integrals()?.power_c)
    }

    /// `(J2, J2a, J2b)`.
    pub fn heat_current_2(&self) -> Result<(f64, f64, f64), ThermoError> {
        let i = self.integrals()?;
        Ok((i.heat_2, i.heat_2a, i.heat_2 - i.heat_2a))
    }

    /// Assembles the report without enforcing the balance tolerance.
    pub fn report_unchecked(&self) -> Result<ThermoReport, ThermoError> {
        let i = self.integrals()?;
        Ok(assemble(self.cfg, &i, self.order))
    }

    /// Assembles the report; a balance residual above
    /// `BALANCE_TOL * scale` is an integrity error carrying the report.
    pub fn report(&self) -> Result<ThermoReport, ThermoError> {
        let r = self.report_unchecked()?;
        if !r.balance_ok(BALANCE_TOL) {
            return Err(ThermoError::Integrity(Box::new(r)));
        }
        Ok(r)
    }
}

fn assemble(cfg: &EngineConfig, i: &Integrals, order: usize) -> ThermoReport {
    let power = i.power_a + i.power_b1 + i.power_b2 + i.power_c;
    let heat_2 = i.heat_2;
    let heat_1 = -(power + heat_2);
    let balance_residual = (power + i.heat_1_direct + heat_2).abs();
    let g2 = cfg.gamma2();
    let balance_scale = power
        .abs()
        .max(heat_1.abs())
        .max(heat_2.abs())
        .max(i.heat_1_direct.abs())
        .max(cfg.omega0 * g2 * g2);
    let hot = cfg.hot_bath();
    let regime = Regime::classify(power, heat_1, heat_2, hot);
    let efficiency = match (regime, hot) {
        (Regime::Engine, Some(1)) if heat_1 > 0.0 => Some(-power / heat_1),
        (Regime::Engine, Some(2)) if heat_2 > 0.0 => Some(-power / heat_2),
        _ => None,
    };
    ThermoReport {
        power,
        power_a: i.power_a,
        power_b1: i.power_b1,
        power_b2: i.power_b2,
        power_c: i.power_c,
        heat_1,
        heat_2,
        heat_2a: i.heat_2a,
        heat_2b: heat_2 - i.heat_2a,
        heat_1_direct: i.heat_1_direct,
        power_direct: i.power_direct,
        balance_residual,
        balance_scale,
        efficiency,
        efficiency_1: -power / heat_1,
        efficiency_2: -power / heat_2,
        carnot: cfg.carnot(),
        regime,
        order,
        evaluations: i.evaluations,
        max_backward_error: i.max_backward_error,
        power_over_gamma2_sq: power / (g2 * g2),
    }
}

/// Full report with automatic truncation and the first-law integrity check.
pub fn full_report(cfg: &EngineConfig) -> Result<ThermoReport, ThermoError> {
    Solver::new(cfg)?.report()
}
