use std::io::Write;

use rayon::prelude::*;

use super::config::{BathKind, Param, PointParams, Subcommand, SweepSpec};
use super::validate::validation_table;
use super::CliError;
use crate::floquet::detuned_resonance;
use crate::nonmarkov::{nm_scan, NMCoefficients, NmFamily, NmParam, NmRow, NmTemplate};
use crate::thermo::{Solver, ThermoReport, BALANCE_TOL};
use crate::weakcoupling::{channel_decomposition, no_engine_certificate, otto_cycle, otto_engine_condition, weak_report, WeakError};

/// Row status values.
pub const OK: &str = "ok";
pub const FAILED: &str = "failed";
/// Point outside the domain of the quantity (e.g. an excluded channel).
pub const NOT_APPLICABLE: &str = "na";

/// A computed CSV table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: Vec<String>) -> Table {
        Table { header, rows: Vec::new() }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Rows whose `status` column is `failed`.
    pub fn failed(&self) -> usize {
        match self.column("status") {
            Some(i) => self.rows.iter().filter(|r| r[i] == FAILED).count(),
            None => 0,
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(&self.header)?;
        for r in &self.rows {
            wr.write_record(r)?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Shortest round-trip decimal, switching to exponent form outside
/// `[1e-4, 1e6)`.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 || !v.is_finite() || (1e-4..1e6).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

fn nan_row(n: usize) -> Vec<String> {
    vec!["NaN".to_string(); n]
}

fn param_header() -> Vec<String> {
    let mut h = vec!["bath1".to_string()];
    h.extend(Param::ALL.iter().map(|p| p.column().to_string()));
    h
}

fn param_cells(p: &PointParams) -> Vec<String> {
    let mut c = vec![p.kind.as_str().to_string()];
    c.extend(Param::ALL.iter().map(|&q| opt(p.get(q))));
    c
}

fn header(extra: &[&str]) -> Vec<String> {
    let mut h = param_header();
    h.extend(extra.iter().map(|s| s.to_string()));
    h
}

pub const THERMO_COLUMNS: [&str; 23] = [
    "status",
    "message",
    "M_used",
    "evaluations",
    "P",
    "P_over_gamma2sq",
    "P_a",
    "P_b1",
    "P_b2",
    "P_c",
    "J1",
    "J2",
    "J2a",
    "J2b",
    "J1_direct",
    "eta",
    "eta_over_etaC",
    "carnot",
    "regime",
    "balance_residual",
    "balance_scale",
    "detuned_omega1",
    "detuned_omega",
];

fn thermo_numbers(r: &ThermoReport) -> Vec<String> {
    let mut c = vec![r.order.to_string(), r.evaluations.to_string()];
    c.extend(
        [
            r.power,
            r.power_over_gamma2_sq,
            r.power_a,
            r.power_b1,
            r.power_b2,
            r.power_c,
            r.heat_1,
            r.heat_2,
            r.heat_2a,
            r.heat_2b,
            r.heat_1_direct,
        ]
        .map(fmt_num),
    );
    c.push(opt(r.efficiency));
    c.push(opt(r.efficiency_over_carnot()));
    c.push(fmt_num(r.carnot));
    c.push(r.regime.as_str().to_string());
    c.push(fmt_num(r.balance_residual));
    c.push(fmt_num(r.balance_scale));
    c
}

/// Full-coupling report row for one point.
pub fn thermo_row(p: &PointParams, spec: &SweepSpec) -> Vec<String> {
    let mut row = param_cells(p);
    let n = THERMO_COLUMNS.len();
    let computed = p.engine(spec).and_then(|cfg| {
        let solver = Solver::new(&cfg).map_err(|e| e.to_string())?;
        let rep = solver.report_unchecked().map_err(|e| e.to_string())?;
        let det = match p.kind {
            BathKind::Lorentzian => detuned_resonance(solver.kernels()).ok(),
            _ => None,
        };
        Ok((rep, det))
    });
    match computed {
        Ok((rep, det)) => {
            if rep.balance_ok(BALANCE_TOL) {
                row.extend([OK.to_string(), String::new()]);
            } else {
                row.extend([
                    FAILED.to_string(),
                    format!("first-law residual {:e} over scale {:e}", rep.balance_residual, rep.balance_scale),
                ]);
            }
            row.extend(thermo_numbers(&rep));
            row.push(opt(det.map(|d| d.omega1)));
            row.push(opt(det.map(|d| d.omega)));
        }
        Err(e) => {
            row.extend([FAILED.to_string(), e]);
            row.extend(nan_row(n - 2));
        }
    }
    row
}

pub const WEAK_COLUMNS: [&str; 13] = [
    "status",
    "message",
    "M_used",
    "P_full",
    "P_weak",
    "rel_gap",
    "J1_full",
    "J2_full",
    "J1_weak",
    "J2_weak",
    "P_weak_over_gamma2sq",
    "coupling_ratio",
    "weak_valid",
];

fn weak_row(p: &PointParams, spec: &SweepSpec) -> Vec<String> {
    let mut row = param_cells(p);
    let computed = p.engine(spec).and_then(|cfg| {
        let full = Solver::new(&cfg).and_then(|s| s.report_unchecked()).map_err(|e| e.to_string())?;
        let weak = weak_report(&cfg).map_err(|e| e.to_string())?;
        Ok((cfg, full, weak))
    });
    match computed {
        Ok((cfg, full, weak)) => {
            let gap = (full.power - weak.power).abs() / weak.power.abs();
            row.extend([OK.to_string(), String::new(), full.order.to_string()]);
            row.extend(
                [
                    full.power,
                    weak.power,
                    gap,
                    full.heat_1,
                    full.heat_2,
                    weak.heat_1,
                    weak.heat_2,
                    weak.power / (cfg.gamma2() * cfg.gamma2()),
                ]
                .map(fmt_num),
            );
            row.push(opt(weak.coupling_ratio));
            row.push(weak.is_valid().to_string());
        }
        Err(e) => {
            row.extend([FAILED.to_string(), e]);
            row.extend(nan_row(WEAK_COLUMNS.len() - 2));
        }
    }
    row
}

pub const OTTO_COLUMNS: [&str; 24] = [
    "p",
    "status",
    "message",
    "omega_bath1",
    "omega_bath2",
    "n_a",
    "n_b",
    "n_c",
    "n_d",
    "Q1",
    "Q2",
    "W",
    "tau1",
    "tau2",
    "tau_is",
    "efficiency",
    "power",
    "J1",
    "J2",
    "channel_P",
    "channel_J1",
    "channel_J2",
    "engine",
    "engine_condition",
];

fn otto_rows(p: &PointParams, spec: &SweepSpec) -> Vec<Vec<String>> {
    let cfg = p.engine(spec);
    [1, -1]
        .iter()
        .map(|&ch| {
            let mut row = param_cells(p);
            row.push(ch.to_string());
            let cfg = match &cfg {
                Ok(c) => c,
                Err(e) => {
                    row.extend([FAILED.to_string(), e.clone()]);
                    row.extend(nan_row(OTTO_COLUMNS.len() - 3));
                    return row;
                }
            };
            match otto_cycle(ch, cfg) {
                Ok(c) => {
                    let chan = *channel_decomposition(cfg).channel(ch);
                    row.extend([OK.to_string(), String::new()]);
                    row.extend(
                        [
                            c.omega_bath1,
                            c.omega_bath2,
                            c.n_a,
                            c.n_b,
                            c.n_c,
                            c.n_d,
                            c.heat_1,
                            c.heat_2,
                            c.work,
                            c.tau_1,
                            c.tau_2,
                            c.tau_is,
                            c.efficiency,
                            c.power(),
                            c.heat_current_1(),
                            c.heat_current_2(),
                            chan.power,
                            chan.heat_1,
                            chan.heat_2,
                        ]
                        .map(fmt_num),
                    );
                    row.push(c.is_engine().to_string());
                    row.push(otto_engine_condition(ch, cfg).to_string());
                }
                Err(e @ WeakError::Domain(_)) => {
                    row.extend([NOT_APPLICABLE.to_string(), e.to_string()]);
                    row.extend(vec![String::new(); OTTO_COLUMNS.len() - 3]);
                }
                Err(e) => {
                    row.extend([FAILED.to_string(), e.to_string()]);
                    row.extend(nan_row(OTTO_COLUMNS.len() - 3));
                }
            }
            row
        })
        .collect()
}

pub const NOENGINE_COLUMNS: [&str; 6] = ["status", "message", "f_s", "g_T1", "log_margin", "engine_possible"];

fn noengine_row(p: &PointParams) -> Vec<String> {
    let mut row = param_cells(p);
    let cert = (|| -> Result<_, String> {
        no_engine_certificate(p.need(Param::S)?, p.need(Param::Drive)?, p.need(Param::T1)?, p.need(Param::Omega0)?)
            .map_err(|e| e.to_string())
    })();
    match cert {
        Ok(c) => {
            row.extend([OK.to_string(), String::new()]);
            row.extend([c.f_s, c.g_t1, c.log_margin].map(fmt_num));
            row.push(c.engine_possible.to_string());
        }
        Err(e) => {
            row.extend([NOT_APPLICABLE.to_string(), e]);
            row.extend(vec![String::new(); NOENGINE_COLUMNS.len() - 2]);
        }
    }
    row
}

pub const NONMARKOV_COLUMNS: [&str; 12] = [
    "family", "T", "s", "gamma1", "omega1", "omegac", "status", "message", "Gamma", "Delta", "Pi", "N_p",
];

fn nm_param(p: Param) -> Option<NmParam> {
    Some(match p {
        Param::T1 => NmParam::Temperature,
        Param::S => NmParam::S,
        Param::Gamma1 => NmParam::Gamma1,
        Param::Omega1 => NmParam::Omega1,
        Param::OmegaC => NmParam::Cutoff,
        _ => return None,
    })
}

fn nm_template(base: &PointParams) -> Result<NmTemplate, String> {
    let family = match base.kind {
        BathKind::Lorentzian => NmFamily::Lorentzian {
            gamma1: base.get(Param::Gamma1).unwrap_or(f64::NAN),
            omega1: base.get(Param::Omega1).unwrap_or(f64::NAN),
            omega_c: base.get(Param::OmegaC),
        },
        BathKind::Ohmic => NmFamily::PowerLaw {
            s: 1.0,
            omega_c: base.get(Param::OmegaC).unwrap_or(f64::NAN),
        },
        BathKind::PowerLaw => NmFamily::PowerLaw {
            s: base.get(Param::S).unwrap_or(f64::NAN),
            omega_c: base.get(Param::OmegaC).unwrap_or(f64::NAN),
        },
    };
    Ok(NmTemplate {
        family,
        temperature: base.get(Param::T1).unwrap_or(f64::NAN),
        omega0: base.need(Param::Omega0)?,
    })
}

fn nm_cells(t: &NmTemplate, r: &Result<NMCoefficients, String>) -> Vec<String> {
    let (family, s, g1, w1, wc) = match t.family {
        NmFamily::PowerLaw { s, omega_c } => ("powerlaw", Some(s), None, None, Some(omega_c)),
        NmFamily::Lorentzian { gamma1, omega1, omega_c } => ("lorentzian", None, Some(gamma1), Some(omega1), omega_c),
    };
    let mut row = vec![family.to_string(), fmt_num(t.temperature), opt(s), opt(g1), opt(w1), opt(wc)];
    match r {
        Ok(c) => {
            row.extend([OK.to_string(), String::new()]);
            row.extend([c.gamma, c.delta, c.pi, c.n_p].map(fmt_num));
        }
        Err(e) => {
            row.extend([FAILED.to_string(), e.clone()]);
            row.extend(nan_row(4));
        }
    }
    row
}

fn nonmarkov_table(spec: &SweepSpec) -> Result<Table, CliError> {
    let mut table = Table::new(NONMARKOV_COLUMNS.iter().map(|s| s.to_string()).collect());
    let base = spec.base_point();
    let template = nm_template(&base).map_err(CliError::Numerical)?;
    let axis = |a: Option<super::config::Axis>| -> Result<Option<(NmParam, Vec<f64>)>, CliError> {
        match a {
            None => Ok(None),
            Some(a) => {
                let p = nm_param(a.param).ok_or_else(|| {
                    CliError::Config(super::ConfigError::new(None, Some(a.param.key()), "cannot be swept by nonmarkov"))
                })?;
                Ok(Some((p, a.values())))
            }
        }
    };
    let x = axis(spec.x)?;
    let y = axis(spec.y)?;
    let rows: Vec<NmRow> = match &x {
        None => vec![NmRow {
            x: f64::NAN,
            y: None,
            result: template.coefficients(),
        }],
        Some((px, xs)) => nm_scan(&template, (*px, xs), y.as_ref().map(|(p, v)| (*p, v.as_slice()))),
    };
    for r in rows {
        let mut t = template;
        if let Some((px, _)) = &x {
            t = t.with(*px, r.x).unwrap_or(t);
        }
        if let (Some((py, _)), Some(v)) = (&y, r.y) {
            t = t.with(*py, v).unwrap_or(t);
        }
        let res = r.result.map_err(|e| e.to_string());
        table.rows.push(nm_cells(&t, &res));
    }
    Ok(table)
}

/// Computes the table for `spec` on the configured number of workers.
/// Row order is row-major over the axes regardless of the worker count.
pub fn compute(spec: &SweepSpec) -> Result<Table, CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = spec.workers {
        pool = pool.num_threads(n.max(1));
    }
    let pool = pool.build().map_err(|e| CliError::Numerical(e.to_string()))?;
    pool.install(|| compute_inner(spec))
}

fn compute_inner(spec: &SweepSpec) -> Result<Table, CliError> {
    let grid = spec.grid();
    Ok(match spec.command {
        Subcommand::Point | Subcommand::Sweep => {
            let mut t = Table::new(header(&THERMO_COLUMNS));
            t.rows = grid.par_iter().map(|p| thermo_row(p, spec)).collect();
            t
        }
        Subcommand::WeakVsFull => {
            let mut t = Table::new(header(&WEAK_COLUMNS));
            t.rows = grid.par_iter().map(|p| weak_row(p, spec)).collect();
            t
        }
        Subcommand::Otto => {
            let mut t = Table::new(header(&OTTO_COLUMNS));
            let rows: Vec<Vec<Vec<String>>> = grid.par_iter().map(|p| otto_rows(p, spec)).collect();
            t.rows = rows.into_iter().flatten().collect();
            t
        }
        Subcommand::Noengine => {
            let mut t = Table::new(header(&NOENGINE_COLUMNS));
            t.rows = grid.par_iter().map(noengine_row).collect();
            t
        }
        Subcommand::Nonmarkov => nonmarkov_table(spec)?,
        Subcommand::Validate => validation_table(spec),
    })
}

/// Outcome of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSummary {
    pub rows: usize,
    /// Failed rows, or failed checks for `validate`.
    pub failed: usize,
    pub command: Subcommand,
}

impl RunSummary {
    /// 0 on success, 3 with failed points, 4 with failed validation checks.
    pub fn exit_code(&self) -> i32 {
        match (self.failed, self.command) {
            (0, _) => 0,
            (_, Subcommand::Validate) => 4,
            _ => 3,
        }
    }
}

/// Computes `spec` and streams the CSV to `out`.
pub fn run_sweep<W: Write>(spec: &SweepSpec, out: W) -> Result<RunSummary, CliError> {
    let table = compute(spec)?;
    table.write_csv(out)?;
    let failed = if spec.command == Subcommand::Validate {
        let i = table.column("passed").expect("validate table has a passed column");
        table.rows.iter().filter(|r| r[i] != "true").count()
    } else {
        table.failed()
    };
    Ok(RunSummary {
        rows: table.rows.len(),
        failed,
        command: spec.command,
    })
}
