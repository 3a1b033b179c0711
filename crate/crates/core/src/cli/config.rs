use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::numerics::QuadratureSpec;
use crate::spectral::{BathConfig, SpectralDensity};
use crate::thermo::{EngineConfig, Truncation};

/// Run mode; each has a fixed CSV schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subcommand {
    Point,
    Sweep,
    WeakVsFull,
    Nonmarkov,
    Noengine,
    Otto,
    Validate,
}

impl Subcommand {
    pub const ALL: [Subcommand; 7] = [
        Subcommand::Point,
        Subcommand::Sweep,
        Subcommand::WeakVsFull,
        Subcommand::Nonmarkov,
        Subcommand::Noengine,
        Subcommand::Otto,
        Subcommand::Validate,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Subcommand::Point => "point",
            Subcommand::Sweep => "sweep",
            Subcommand::WeakVsFull => "weak-vs-full",
            Subcommand::Nonmarkov => "nonmarkov",
            Subcommand::Noengine => "noengine",
            Subcommand::Otto => "otto",
            Subcommand::Validate => "validate",
        }
    }

    /// Parameters that must be given (or swept).
    fn required(&self, kind: BathKind) -> Vec<Param> {
        use Param::*;
        let bath1 = match kind {
            BathKind::Lorentzian => vec![Kappa, Gamma1, Omega1],
            BathKind::Ohmic => vec![Gamma1],
            BathKind::PowerLaw => vec![Gamma1, S, OmegaBar, OmegaC],
        };
        let mut v = match self {
            Subcommand::Point | Subcommand::Sweep | Subcommand::WeakVsFull | Subcommand::Otto | Subcommand::Validate => {
                vec![Drive, T1, T2, Gamma2]
            }
            Subcommand::Nonmarkov => vec![T1],
            Subcommand::Noengine => return vec![Drive, T1, S],
        };
        match (self, kind) {
            (Subcommand::Nonmarkov, BathKind::Lorentzian) => v.extend([Gamma1, Omega1]),
            (Subcommand::Nonmarkov, BathKind::Ohmic) => v.push(OmegaC),
            (Subcommand::Nonmarkov, BathKind::PowerLaw) => v.extend([S, OmegaC]),
            _ => v.extend(bath1),
        }
        v
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Subcommand {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Subcommand::ALL
            .iter()
            .find(|c| c.as_str() == s)
            .copied()
            .ok_or_else(|| format!("unknown subcommand '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BathKind {
    Lorentzian,
    Ohmic,
    PowerLaw,
}

impl BathKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BathKind::Lorentzian => "lorentzian",
            BathKind::Ohmic => "ohmic",
            BathKind::PowerLaw => "powerlaw",
        }
    }
}

/// Numeric parameters addressable by config keys and sweep axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    Omega0,
    Drive,
    T1,
    T2,
    Kappa,
    Gamma1,
    Omega1,
    S,
    OmegaBar,
    OmegaC,
    Gamma2,
}

impl Param {
    pub const ALL: [Param; 11] = [
        Param::Omega0,
        Param::Drive,
        Param::T1,
        Param::T2,
        Param::Kappa,
        Param::Gamma1,
        Param::Omega1,
        Param::S,
        Param::OmegaBar,
        Param::OmegaC,
        Param::Gamma2,
    ];

    /// Config key.
    pub fn key(&self) -> &'static str {
        match self {
            Param::Omega0 => "omega0",
            Param::Drive => "Omega",
            Param::T1 => "T1",
            Param::T2 => "T2",
            Param::Kappa => "kappa",
            Param::Gamma1 => "bath1.gamma1",
            Param::Omega1 => "bath1.omega1",
            Param::S => "bath1.s",
            Param::OmegaBar => "bath1.omegabar",
            Param::OmegaC => "bath1.omegac",
            Param::Gamma2 => "bath2.gamma2",
        }
    }

    /// CSV column name.
    pub fn column(&self) -> &'static str {
        match self {
            Param::Omega0 => "omega0",
            Param::Drive => "Omega",
            Param::T1 => "T1",
            Param::T2 => "T2",
            Param::Kappa => "kappa",
            Param::Gamma1 => "gamma1",
            Param::Omega1 => "omega1",
            Param::S => "s",
            Param::OmegaBar => "omegabar",
            Param::OmegaC => "omegac",
            Param::Gamma2 => "gamma2",
        }
    }

    /// Accepts the config key or the column name.
    pub fn parse(s: &str) -> Option<Param> {
        Param::ALL.iter().copied().find(|p| p.key() == s || p.column() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Lin,
    Log,
}

/// One sweep axis; `count = 1` evaluates at `min` only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub param: Param,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Axis {
    pub fn new(param: Param, min: f64, max: f64, count: usize, spacing: Spacing) -> Result<Axis, String> {
        if count < 1 {
            return Err("axis count must be >= 1".into());
        }
        if !(min.is_finite() && max.is_finite()) || !(min < max) {
            return Err(format!("axis needs min < max, got {min} and {max}"));
        }
        if spacing == Spacing::Log && !(min > 0.0) {
            return Err("log axis needs min > 0".into());
        }
        Ok(Axis {
            param,
            min,
            max,
            count,
            spacing,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / n;
                if i + 1 == self.count {
                    return self.max;
                }
                let v = match self.spacing {
                    Spacing::Lin => self.min + t * (self.max - self.min),
                    Spacing::Log => self.min * (self.max / self.min).powf(t),
                };
                // drop representation noise such as 0.30000000000000004
                format!("{v:.13e}").parse().unwrap_or(v)
            })
            .collect()
    }

    /// `name min max count [lin|log]`.
    fn parse(text: &str) -> Result<Axis, String> {
        let f: Vec<&str> = text.split_whitespace().collect();
        if f.len() != 4 && f.len() != 5 {
            return Err("expected 'name min max count [lin|log]'".into());
        }
        let param = Param::parse(f[0]).ok_or_else(|| format!("unknown axis parameter '{}'", f[0]))?;
        let min = parse_num(f[1])?;
        let max = parse_num(f[2])?;
        let count = f[3].parse::<usize>().map_err(|_| format!("bad count '{}'", f[3]))?;
        let spacing = match f.get(4).copied().unwrap_or("lin") {
            "lin" => Spacing::Lin,
            "log" => Spacing::Log,
            other => return Err(format!("spacing must be lin or log, got '{other}'")),
        };
        Axis::new(param, min, max, count, spacing)
    }
}

/// Parse failure; `line` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = self.line {
            write!(f, "line {l}: ")?;
        }
        if let Some(k) = &self.key {
            write!(f, "{k}: ")?;
        }
        f.write_str(&self.message)
    }
}

impl ConfigError {
    pub(crate) fn new(line: Option<usize>, key: Option<&str>, message: impl Into<String>) -> Self {
        ConfigError {
            line,
            key: key.map(str::to_string),
            message: message.into(),
        }
    }
}

fn parse_num(s: &str) -> Result<f64, String> {
    let v = s.parse::<f64>().map_err(|_| format!("cannot parse '{s}' as a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

/// Validated run specification.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub command: Subcommand,
    pub bath1_kind: BathKind,
    /// Fixed parameter values, keyed by parameter.
    pub fixed: BTreeMap<Param, f64>,
    pub x: Option<Axis>,
    pub y: Option<Axis>,
    pub quadrature: QuadratureSpec,
    pub truncation: Truncation,
    pub out: Option<PathBuf>,
    /// `None` uses all cores.
    pub workers: Option<usize>,
}

/// Parses the `key = value` config text for `command`. Blank lines and lines
/// starting with `#` are ignored.
pub fn parse_config(text: &str, command: Subcommand) -> Result<SweepSpec, ConfigError> {
    let mut fixed = BTreeMap::new();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut kind = BathKind::Lorentzian;
    let mut x = None;
    let mut y = None;
    let mut quadrature = QuadratureSpec::default();
    let mut truncation = Truncation::default();
    let mut out = None;

    for (i, raw) in text.lines().enumerate() {
        let ln = Some(i + 1);
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::new(ln, None, format!("expected key = value, got '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        let err = |m: String| ConfigError::new(ln, Some(key), m);
        if let Some(first) = seen.insert(key.to_string(), i + 1) {
            return Err(err(format!("duplicate key (first set on line {first})")));
        }
        match key {
            "bath1.kind" => {
                kind = match value {
                    "lorentzian" => BathKind::Lorentzian,
                    "ohmic" => BathKind::Ohmic,
                    "powerlaw" => BathKind::PowerLaw,
                    _ => return Err(err(format!("expected lorentzian, ohmic or powerlaw, got '{value}'"))),
                }
            }
            "quad.reltol" => {
                let v = parse_num(value).map_err(err)?;
                if !(v > 0.0 && v < 1.0) {
                    return Err(err(format!("must be in (0, 1), got {v}")));
                }
                quadrature.rel_tol = v;
            }
            "quad.omegamax" => {
                let v = parse_num(value).map_err(err)?;
                if !(v > 0.0) {
                    return Err(err(format!("must be > 0, got {v}")));
                }
                quadrature.omega_max = Some(v);
            }
            "floquet.M" => {
                truncation = if value == "auto" {
                    Truncation::default()
                } else {
                    Truncation::Fixed(
                        value
                            .parse::<usize>()
                            .map_err(|_| err(format!("expected a non-negative integer or 'auto', got '{value}'")))?,
                    )
                }
            }
            "sweep.x" => x = Some(Axis::parse(value).map_err(err)?),
            "sweep.y" => y = Some(Axis::parse(value).map_err(err)?),
            "out" => {
                if value.is_empty() {
                    return Err(err("empty path".into()));
                }
                out = Some(PathBuf::from(value));
            }
            _ => {
                let p = Param::ALL
                    .iter()
                    .copied()
                    .find(|p| p.key() == key)
                    .ok_or_else(|| err("unknown key".into()))?;
                let v = parse_num(value).map_err(err)?;
                check_param(p, v).map_err(err)?;
                fixed.insert(p, v);
            }
        }
    }

    let line_of = |k: &str| seen.get(k).copied();
    if y.is_some() && x.is_none() {
        return Err(ConfigError::new(line_of("sweep.y"), Some("sweep.y"), "sweep.y given without sweep.x"));
    }
    if let (Some(a), Some(b)) = (x, y) {
        if a.param == b.param {
            return Err(ConfigError::new(line_of("sweep.y"), Some("sweep.y"), "both axes sweep the same parameter"));
        }
    }
    for a in [x, y].into_iter().flatten() {
        let k = if Some(a) == x { "sweep.x" } else { "sweep.y" };
        for v in [a.min, a.max] {
            check_param(a.param, v).map_err(|m| ConfigError::new(line_of(k), Some(k), m))?;
        }
    }
    match command {
        Subcommand::Point if x.is_some() => {
            return Err(ConfigError::new(line_of("sweep.x"), Some("sweep.x"), "point takes no sweep axes"));
        }
        Subcommand::Sweep if x.is_none() => {
            return Err(ConfigError::new(None, Some("sweep.x"), "sweep needs at least one axis"));
        }
        _ => {}
    }
    let swept = |p: Param| x.map_or(false, |a| a.param == p) || y.map_or(false, |a| a.param == p);
    for p in command.required(kind) {
        if !fixed.contains_key(&p) && !swept(p) {
            return Err(ConfigError::new(None, Some(p.key()), format!("required by '{command}' but missing")));
        }
    }
    if command == Subcommand::Nonmarkov {
        for a in [x, y].into_iter().flatten() {
            if matches!(a.param, Param::Omega0 | Param::Drive | Param::T2 | Param::Kappa | Param::Gamma2 | Param::OmegaBar) {
                return Err(ConfigError::new(None, Some(a.param.key()), "cannot be swept by nonmarkov"));
            }
        }
    }
    fixed.entry(Param::Omega0).or_insert(1.0);
    Ok(SweepSpec {
        command,
        bath1_kind: kind,
        fixed,
        x,
        y,
        quadrature,
        truncation,
        out,
        workers: None,
    })
}

fn check_param(p: Param, v: f64) -> Result<(), String> {
    let ok = match p {
        Param::T1 | Param::T2 | Param::Kappa | Param::Gamma2 => v >= 0.0,
        Param::Omega0 | Param::Drive | Param::Gamma1 | Param::Omega1 | Param::OmegaBar | Param::OmegaC | Param::S => v > 0.0,
    };
    if ok {
        Ok(())
    } else {
        let bound = if matches!(p, Param::T1 | Param::T2 | Param::Kappa | Param::Gamma2) { ">= 0" } else { "> 0" };
        Err(format!("must be {bound}, got {v}"))
    }
}

/// Parameter values at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointParams {
    pub kind: BathKind,
    values: BTreeMap<Param, f64>,
}

impl PointParams {
    pub fn get(&self, p: Param) -> Option<f64> {
        self.values.get(&p).copied()
    }

    pub(crate) fn need(&self, p: Param) -> Result<f64, String> {
        self.get(p).ok_or_else(|| format!("{} not set", p.key()))
    }

    pub fn set(&mut self, p: Param, v: f64) {
        self.values.insert(p, v);
    }

    pub fn bath1(&self) -> Result<SpectralDensity, String> {
        let omega0 = self.need(Param::Omega0)?;
        let r = match self.kind {
            BathKind::Lorentzian => SpectralDensity::lorentzian_kappa(
                self.need(Param::Kappa)?,
                self.need(Param::Gamma1)?,
                self.need(Param::Omega1)?,
                omega0,
            ),
            BathKind::Ohmic => SpectralDensity::ohmic(self.need(Param::Gamma1)?),
            BathKind::PowerLaw => SpectralDensity::power_law(
                self.need(Param::Gamma1)?,
                self.need(Param::S)?,
                self.need(Param::OmegaBar)?,
                self.need(Param::OmegaC)?,
            ),
        };
        r.map_err(|e| e.to_string())
    }

    pub fn engine(&self, spec: &SweepSpec) -> Result<EngineConfig, String> {
        let b1 = BathConfig::new(self.bath1()?, self.need(Param::T1)?).map_err(|e| e.to_string())?;
        let b2 = BathConfig::new(
            SpectralDensity::ohmic(self.need(Param::Gamma2)?).map_err(|e| e.to_string())?,
            self.need(Param::T2)?,
        )
        .map_err(|e| e.to_string())?;
        EngineConfig::new(self.need(Param::Omega0)?, self.need(Param::Drive)?, b1, b2)
            .map(|c| c.with_quadrature(spec.quadrature).with_truncation(spec.truncation))
            .map_err(|e| e.to_string())
    }
}

impl SweepSpec {
    /// Row-major grid (`x` outer, `y` inner); a single point without axes.
    pub fn grid(&self) -> Vec<PointParams> {
        let base = PointParams {
            kind: self.bath1_kind,
            values: self.fixed.clone(),
        };
        let xs = self.x.map(|a| a.values());
        let ys = self.y.map(|a| a.values());
        let mut out = Vec::new();
        match (&xs, &ys) {
            (None, _) => out.push(base),
            (Some(xv), None) => {
                for &v in xv {
                    let mut p = base.clone();
                    p.set(self.x.unwrap().param, v);
                    out.push(p);
                }
            }
            (Some(xv), Some(yv)) => {
                for &a in xv {
                    for &b in yv {
                        let mut p = base.clone();
                        p.set(self.x.unwrap().param, a);
                        p.set(self.y.unwrap().param, b);
                        out.push(p);
                    }
                }
            }
        }
        out
    }

    pub fn base_point(&self) -> PointParams {
        PointParams {
            kind: self.bath1_kind,
            values: self.fixed.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG2: &str = "\
# weak-coupling engine map
T1 = 0.2
T2 = 2
kappa = 0.001
bath1.gamma1 = 0.02
bath2.gamma2 = 0.02
bath1.kind = lorentzian
sweep.x = Omega 0.05 1.2 30 lin
sweep.y = omega1 0.1 1.2 30
";

    #[test]
    fn parses_engine_map() {
        let s = parse_config(FIG2, Subcommand::Sweep).unwrap();
        assert_eq!(s.x.unwrap().param, Param::Drive);
        assert_eq!(s.y.unwrap().param, Param::Omega1);
        assert_eq!(s.grid().len(), 900);
        assert_eq!(s.fixed[&Param::Omega0], 1.0);
        let v = s.x.unwrap().values();
        assert_eq!(v[0], 0.05);
        assert_eq!(v[29], 1.2);
    }

    #[test]
    fn negative_kappa_names_key_and_line() {
        let e = parse_config("Omega = 0.3\nkappa = -1\n", Subcommand::Point).unwrap_err();
        assert_eq!(e.line, Some(2));
        assert_eq!(e.key.as_deref(), Some("kappa"));
    }

    #[test]
    fn point_needs_drive() {
        let text = "T1 = 0.2\nT2 = 2\nkappa = 0.001\nbath1.gamma1 = 0.02\nbath1.omega1 = 0.7\nbath2.gamma2 = 0.02\n";
        let e = parse_config(text, Subcommand::Point).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("Omega"));
        assert!(parse_config(&format!("{text}Omega = 0.3\n"), Subcommand::Point).is_ok());
    }

    #[test]
    fn rejects_unknown_and_garbage() {
        assert_eq!(parse_config("foo = 1", Subcommand::Point).unwrap_err().key.as_deref(), Some("foo"));
        assert!(parse_config("T1 = abc", Subcommand::Point).unwrap_err().message.contains("abc"));
        assert!(parse_config("T1", Subcommand::Point).unwrap_err().line == Some(1));
        assert!(parse_config("T1 = 1\nT1 = 2", Subcommand::Point).is_err());
        assert!(parse_config("sweep.x = Omega 1 0.5 3", Subcommand::Sweep).is_err());
        assert!(parse_config("sweep.x = Omega 0 1 3 log", Subcommand::Sweep).is_err());
    }

    #[test]
    fn log_axis() {
        let a = Axis::new(Param::Kappa, 1e-3, 2.0, 14, Spacing::Log).unwrap();
        let v = a.values();
        assert_eq!(v.len(), 14);
        assert_eq!((v[0], v[13]), (1e-3, 2.0));
    }
}
