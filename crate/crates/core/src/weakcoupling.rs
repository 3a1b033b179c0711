//! Thermodynamics to first order in the modulated bath: closed quadrature
//! forms, the sharp-resonance channel split, the effective Otto cycles and the
//! no-engine certificate for power-law baths.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::numerics::{bose, ln_bose, omega_bose, Integrator, NumericsError};
use crate::thermo::{bath_features, guarded_breakpoints, EngineConfig};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WeakError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("outside the model domain: {0}")]
    Domain(String),
    #[error("excluded point: {0}")]
    Excluded(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Validity threshold on `kappa w0^2 / (gamma1 gamma2)`. Heuristic.
pub const VALIDITY_THRESHOLD: f64 = 0.1;

/// Bare susceptibility `chi0(w) = -1/(w^2 - w0^2 + i w g2(w))`.
pub fn chi0(cfg: &EngineConfig, w: f64) -> Complex64 {
    let g2 = cfg.bath2.spectral.gamma_tilde(w);
    let z = Complex64::new(w * w - cfg.omega0 * cfg.omega0, 0.0) + Complex64::i() * w * g2;
    -1.0 / z
}

/// Occupation `n_B(w/T)`, with the `T = 0` limits `0` (w > 0) and `-1` (w < 0).
fn occupation(w: f64, t: f64) -> f64 {
    if t > 0.0 {
        bose(w / t)
    } else if w > 0.0 {
        0.0
    } else {
        -1.0
    }
}

/// `J(w) n_B(w/T)`, finite at `w = 0`.
fn j_bose(sd: &crate::spectral::SpectralDensity, w: f64, t: f64) -> f64 {
    sd.j_over_omega(w) * omega_bose(w, t)
}

/// `f(w, Omega)` of the weak-coupling power; engine regions have `f > 0`.
pub fn f_function(cfg: &EngineConfig, w: f64) -> f64 {
    let sd = &cfg.bath1.spectral;
    let (t1, t2) = (cfg.bath1.temperature, cfg.bath2.temperature);
    let (wp, wm) = (w + cfg.drive, w - cfg.drive);
    j_bose(sd, wp, t1) - j_bose(sd, wm, t1) + (sd.j(wm) - sd.j(wp)) * occupation(w, t2)
}

fn integrator(cfg: &EngineConfig) -> Integrator {
    let mut feats = vec![(cfg.omega0, cfg.bath2.spectral.j_over_omega(cfg.omega0).max(1e-6))];
    feats.extend(bath_features(cfg));
    let l = cfg.frequency_scale();
    Integrator::new(cfg.quadrature)
        .scale(l)
        .breakpoints(guarded_breakpoints(&feats, cfg.drive, 2, 2, 1e6 * l))
        .max_initial_width(0.05)
}

/// Low-frequency exponent of `J`; `J(w) n_B(w/T)` behaves as `|w|^(s-1)`.
fn low_exponent(sd: &crate::spectral::SpectralDensity) -> f64 {
    match sd {
        crate::spectral::SpectralDensity::PowerLaw(p) => p.s(),
        _ => 1.0,
    }
}

/// `integ` over `[a, b]`, with the integrable cusps `|w - c|^(s-1)` (s < 1)
/// removed by `w = c +- h u^k`, `k s >= 2`. The integrand receives `w` as
/// `(base, offset)` so that differences to the cusp stay exact.
fn integrate_cusps<const N: usize, F>(
    integ: &Integrator,
    mut f: F,
    a: f64,
    b: f64,
    cusps: &[(f64, f64)],
    cap: f64,
) -> Result<[f64; N], NumericsError>
where
    F: FnMut(f64, f64) -> [f64; N],
{
    let mut cs: Vec<(f64, f64)> = cusps.iter().copied().filter(|&(c, s)| s < 1.0 && c > a && c < b).collect();
    cs.sort_by(|x, y| x.0.total_cmp(&y.0));
    cs.dedup_by(|x, y| {
        if x.0 == y.0 {
            y.1 = y.1.min(x.1);
            true
        } else {
            false
        }
    });
    if cs.is_empty() {
        return integ.integrate_vec(|w| f(w, 0.0), a, b);
    }
    let unit = Integrator::new(*integ.spec());
    let mut acc = [0.0; N];
    let mut add = |v: [f64; N]| {
        for (x, y) in acc.iter_mut().zip(v) {
            *x += y;
        }
    };
    let mut left = a;
    for (i, &(c, s)) in cs.iter().enumerate() {
        let mut h = cap;
        if i > 0 {
            h = h.min(0.25 * (c - cs[i - 1].0));
        } else if a.is_finite() {
            h = h.min(0.5 * (c - a));
        }
        if i + 1 < cs.len() {
            h = h.min(0.25 * (cs[i + 1].0 - c));
        } else if b.is_finite() {
            h = h.min(0.5 * (b - c));
        }
        let k = (2.0 / s).ceil();
        add(integ.integrate_vec(|w| f(w, 0.0), left, c - h)?);
        for sign in [-1.0, 1.0] {
            add(unit.integrate_vec(
                |u| {
                    let d = sign * h * u.powf(k);
                    if d == 0.0 {
                        return [0.0; N];
                    }
                    f(c, d).map(|y| y * h * k * u.powf(k - 1.0))
                },
                0.0,
                1.0,
            )?);
        }
        left = c + h;
    }
    add(integ.integrate_vec(|w| f(w, 0.0), left, b)?);
    Ok(acc)
}

/// `P = -Omega Int_0^inf dw/2pi Im chi0(w) f(w, Omega)`.
pub fn weak_power(cfg: &EngineConfig) -> Result<f64, WeakError> {
    cfg.validate().map_err(|e| WeakError::InvalidParameter(e.to_string()))?;
    let sd1 = &cfg.bath1.spectral;
    let sd2 = &cfg.bath2.spectral;
    let (t1, t2) = (cfg.bath1.temperature, cfg.bath2.temperature);
    let om = cfg.drive;
    // Im chi0 = J2 |chi0|^2; the n_B(w/T2) term is taken as (J2/w)(w n_B) to
    // stay finite at w = 0.
    let v = integrate_cusps(
        &integrator(cfg),
        |base, d| {
            let w = base + d;
            let c2 = chi0(cfg, w).norm_sqr();
            let (wp, wm) = ((base + om) + d, (base - om) + d);
            let a = sd2.j(w) * (j_bose(sd1, wp, t1) - j_bose(sd1, wm, t1));
            let b = sd2.j_over_omega(w) * omega_bose(w, t2) * (sd1.j(wm) - sd1.j(wp));
            [c2 * (a + b)]
        },
        0.0,
        f64::INFINITY,
        &[(om, low_exponent(sd1))],
        0.25 * cfg.omega0,
    )?;
    Ok(-om * v[0] / (2.0 * PI))
}

/// Full-line weak-coupling integrals `[J1, J2, P^(a), P^(b,2)]`.
fn current_integrals(cfg: &EngineConfig) -> Result<[f64; 4], WeakError> {
    cfg.validate().map_err(|e| WeakError::InvalidParameter(e.to_string()))?;
    let b1 = &cfg.bath1;
    let b2 = &cfg.bath2;
    let om = cfg.drive;
    let (s1, s2) = (low_exponent(&b1.spectral), low_exponent(&b2.spectral));
    let v = integrate_cusps(
        &integrator(cfg),
        |base, d| {
            let w = base + d;
            let c2 = chi0(cfg, w).norm_sqr();
            let (wp, wm) = ((base + om) + d, (base - om) + d);
            // Im chi0(w) [coth1(w+Omega) - coth2(w)] J1(w+Omega)
            let k = c2 * (b2.spectral.j(w) * b1.j_coth(wp) - b1.spectral.j(wp) * b2.j_coth(w));
            let pa = b1.j_coth(w) * chi0(cfg, wm).im;
            let pb2 = c2 * b2.j_coth(w) * (b1.spectral.j(wp) - b1.spectral.j(wm));
            [wp * k, -w * k, pa, pb2]
        },
        f64::NEG_INFINITY,
        f64::INFINITY,
        &[(-om, s1), (0.0, s1.min(s2))],
        0.25 * cfg.omega0,
    )?;
    Ok([
        v[0] / (4.0 * PI),
        v[1] / (4.0 * PI),
        -om * v[2] / (4.0 * PI),
        om * v[3] / (8.0 * PI),
    ])
}

/// Weak-coupling `(J1, J2)`.
pub fn weak_currents(cfg: &EngineConfig) -> Result<(f64, f64), WeakError> {
    let v = current_integrals(cfg)?;
    Ok((v[0], v[1]))
}

/// One resonant channel `p = +-1` in the sharp-peak limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    pub p: i32,
    pub power: f64,
    pub heat_1: f64,
    pub heat_2: f64,
}

/// Both channels and their totals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDecomposition {
    pub plus: Channel,
    pub minus: Channel,
}

impl ChannelDecomposition {
    pub fn channel(&self, p: i32) -> &Channel {
        if p > 0 {
            &self.plus
        } else {
            &self.minus
        }
    }

    pub fn power(&self) -> f64 {
        self.plus.power + self.minus.power
    }

    pub fn heat_1(&self) -> f64 {
        self.plus.heat_1 + self.minus.heat_1
    }

    pub fn heat_2(&self) -> f64 {
        self.plus.heat_2 + self.minus.heat_2
    }
}

/// `J1(w0 + p Omega) [n_B((w0 + p Omega)/T1) - n_B(w0/T2)]`.
fn channel_weight(cfg: &EngineConfig, p: i32) -> f64 {
    let x = cfg.omega0 + p as f64 * cfg.drive;
    let sd = &cfg.bath1.spectral;
    j_bose(sd, x, cfg.bath1.temperature) - sd.j(x) * occupation(cfg.omega0, cfg.bath2.temperature)
}

fn channel(cfg: &EngineConfig, p: i32) -> Channel {
    let w0 = cfg.omega0;
    let jd = channel_weight(cfg, p);
    let pf = p as f64;
    Channel {
        p,
        power: -(cfg.drive / (4.0 * w0)) * pf * jd,
        heat_1: 0.25 * ((w0 + pf * cfg.drive) / w0) * jd,
        heat_2: -0.25 * jd,
    }
}

/// Delta-peak limit of `Im chi0`: power and currents split into the channels
/// resonant at `omega1 = w0 + p Omega`.
pub fn channel_decomposition(cfg: &EngineConfig) -> ChannelDecomposition {
    ChannelDecomposition {
        plus: channel(cfg, 1),
        minus: channel(cfg, -1),
    }
}

/// Weak-coupling results and their validity monitor.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakReport {
    /// From the `f(w, Omega)` form.
    pub power: f64,
    pub power_a: f64,
    pub power_b2: f64,
    pub heat_1: f64,
    pub heat_2: f64,
    pub channels: ChannelDecomposition,
    /// `kappa w0^2 / (gamma1 gamma2)` for a Lorentzian bath 1.
    pub coupling_ratio: Option<f64>,
}

impl WeakReport {
    /// False when the coupling ratio exceeds [`VALIDITY_THRESHOLD`].
    pub fn is_valid(&self) -> bool {
        self.coupling_ratio.map_or(true, |r| r <= VALIDITY_THRESHOLD)
    }

    /// `|P + J1 + J2|`; zero up to quadrature error.
    pub fn balance_residual(&self) -> f64 {
        (self.power + self.heat_1 + self.heat_2).abs()
    }
}

pub fn coupling_ratio(cfg: &EngineConfig) -> Option<f64> {
    let kappa = cfg.kappa()?;
    let g1 = cfg.bath1.spectral.width()?;
    let g2 = cfg.bath2.spectral.j_over_omega(cfg.omega0);
    Some(kappa * cfg.omega0 * cfg.omega0 / (g1 * g2))
}

pub fn weak_report(cfg: &EngineConfig) -> Result<WeakReport, WeakError> {
    let power = weak_power(cfg)?;
    let [j1, j2, pa, pb2] = current_integrals(cfg)?;
    Ok(WeakReport {
        power,
        power_a: pa,
        power_b2: pb2,
        heat_1: j1,
        heat_2: j2,
        channels: channel_decomposition(cfg),
        coupling_ratio: coupling_ratio(cfg),
    })
}

/// Effective quantum Otto cycle of channel `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OttoCycle {
    pub p: i32,
    /// Frequency on the isochore in contact with bath 1 (`w0 + p Omega`).
    pub omega_bath1: f64,
    /// Frequency on the isochore in contact with bath 2 (`w0`).
    pub omega_bath2: f64,
    pub n_a: f64,
    pub n_b: f64,
    pub n_c: f64,
    pub n_d: f64,
    pub heat_1: f64,
    pub heat_2: f64,
    pub work: f64,
    pub tau_1: f64,
    pub tau_2: f64,
    pub tau_is: f64,
    /// Compression-ratio efficiency of the cycle run as an engine.
    pub efficiency: f64,
}

impl OttoCycle {
    pub fn power(&self) -> f64 {
        self.work / self.tau_1
    }

    pub fn heat_current_1(&self) -> f64 {
        self.heat_1 / self.tau_1
    }

    pub fn heat_current_2(&self) -> f64 {
        self.heat_2 / self.tau_1
    }

    pub fn is_engine(&self) -> bool {
        self.work < 0.0
    }
}

/// Temperature condition for channel `p` to run as an engine:
/// `T1 > (w0 + Omega)/w0 T2` for `p = +1`, `T2 > w0/(w0 - Omega) T1` for `p = -1`.
pub fn otto_engine_condition(p: i32, cfg: &EngineConfig) -> bool {
    let (w0, om) = (cfg.omega0, cfg.drive);
    let (t1, t2) = (cfg.bath1.temperature, cfg.bath2.temperature);
    if p > 0 {
        t1 > (w0 + om) / w0 * t2
    } else {
        t2 > w0 / (w0 - om) * t1
    }
}

pub fn otto_cycle(p: i32, cfg: &EngineConfig) -> Result<OttoCycle, WeakError> {
    if p != 1 && p != -1 {
        return Err(WeakError::InvalidParameter(format!("channel must be +1 or -1, got {p}")));
    }
    let (w0, om) = (cfg.omega0, cfg.drive);
    if p == -1 && om >= w0 {
        return Err(WeakError::Domain(format!(
            "cycle C- needs Omega < w0 (Omega = {om}, w0 = {w0})"
        )));
    }
    let pf = p as f64;
    let w1 = w0 + pf * om;
    let nb = occupation(w1, cfg.bath1.temperature);
    let na = occupation(w0, cfg.bath2.temperature);
    let dn = nb - na;
    let j1 = cfg.bath1.spectral.j(w1);
    let j2 = cfg.bath2.spectral.j(w0);
    Ok(OttoCycle {
        p,
        omega_bath1: w1,
        omega_bath2: w0,
        n_a: na,
        n_b: nb,
        n_c: nb,
        n_d: na,
        heat_1: w1 * dn,
        heat_2: -w0 * dn,
        work: -pf * om * dn,
        tau_1: 4.0 * w0 / j1,
        tau_2: 4.0 * w0 / j2,
        tau_is: 1.0 / w0,
        efficiency: if p > 0 { om / (w0 + om) } else { om / w0 },
    })
}

/// Comparison of `f_s` and `g_T1` for a power-law bath with `T2 -> 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    pub f_s: f64,
    pub g_t1: f64,
    /// `ln f_s - ln g_T1`; an engine is possible iff positive.
    pub log_margin: f64,
    pub engine_possible: bool,
}

/// `f_s = |(w0+Omega)/(w0-Omega)|^s`, `g_T1 = |n_B((w0-Omega)/T1) / n_B((w0+Omega)/T1)|`.
/// Compared in log space; `Omega = w0` is an excluded point.
pub fn no_engine_certificate(s: f64, omega: f64, t1: f64, omega0: f64) -> Result<Certificate, WeakError> {
    if !(s > 0.0) || !(omega > 0.0) || !(t1 > 0.0) || !(omega0 > 0.0) {
        return Err(WeakError::InvalidParameter(format!(
            "need s, Omega, T1, w0 > 0 (got {s}, {omega}, {t1}, {omega0})"
        )));
    }
    if omega == omega0 {
        return Err(WeakError::Excluded("Omega = w0".into()));
    }
    let ln_f = s * ((omega0 + omega) / (omega0 - omega)).abs().ln();
    let xm = (omega0 - omega) / t1;
    let xp = (omega0 + omega) / t1;
    // |n_B(-x)| = 1 + n_B(x) = e^x n_B(x)
    let ln_num = if xm > 0.0 { ln_bose(xm) } else { -xm + ln_bose(-xm) };
    let ln_g = ln_num - ln_bose(xp);
    let margin = ln_f - ln_g;
    Ok(Certificate {
        f_s: ln_f.exp(),
        g_t1: ln_g.exp(),
        log_margin: margin,
        engine_possible: margin > 0.0,
    })
}
