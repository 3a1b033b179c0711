// Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use floquet_engine::cli::{parse_config, run_sweep, Subcommand};
use floquet_engine::floquet::solve_floquet;
use floquet_engine::nonmarkov::{NmFamily, NmParam, NmTemplate};
use floquet_engine::spectral::{BathConfig, SpectralDensity};
use floquet_engine::thermo::{select_order, EngineConfig, LorentzianSetup, Solver};
use floquet_engine::weakcoupling::{channel_decomposition, no_engine_certificate, otto_cycle, otto_engine_condition, weak_power};

// Tolerances
const FIRST_LAW_REL: f64 = 1e-6;
const SYMMETRY_TOL: f64 = 1e-10;
const MARKOV_FLOOR: f64 = -1e-8;
const WEAK_FULL_REL: f64 = 0.02;
const WEAK_FULL_FLOOR: f64 = 1e-3;
const CARNOT_SLACK: f64 = 1e-3;
const NEAR_CARNOT: f64 = 0.95;
const STRONG_RATIO: f64 = 10.0;
const NP_HOT_MAX: f64 = 0.01;
const NP_SLOPE: (f64, f64) = (2.0, 0.2);
const NP_SHARP: (f64, f64) = (0.5, 0.01);
const NP_BROAD_MIN: (f64, f64) = (0.36, 0.03);
const OTTO_REL: f64 = 1e-12;

const ENGINE_MAP: &str = "\
T1 = 0.2
T2 = 2
kappa = 0.001
bath1.gamma1 = 0.02
bath2.gamma2 = 0.02
sweep.x = Omega 0.05 1.2 30
sweep.y = omega1 0.1 1.2 30
";

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// One row of the engine map.
struct Cell {
    omega: f64,
    omega1: f64,
    power: f64,
    eta_over_carnot: Option<f64>,
}

fn engine_map_csv() -> Vec<u8> {
    let mut spec = parse_config(ENGINE_MAP, Subcommand::Sweep).unwrap();
    spec.workers = Some(1);
    let mut buf = Vec::new();
    let s = run_sweep(&spec, &mut buf).unwrap();
    assert_eq!(s.failed, 0, "engine map has failed points");
    buf
}

fn parse_cells(csv: &[u8]) -> Vec<Cell> {
    let mut rd = csv::Reader::from_reader(csv);
    let h = rd.headers().unwrap().clone();
    let c = |n: &str| h.iter().position(|x| x == n).unwrap();
    let (om, w1, p, eta) = (c("Omega"), c("omega1"), c("P"), c("eta_over_etaC"));
    rd.records()
        .map(|r| {
            let r = r.unwrap();
            Cell {
                omega: r[om].parse().unwrap(),
                omega1: r[w1].parse().unwrap(),
                power: r[p].parse().unwrap(),
                eta_over_carnot: r[eta].parse().ok(),
            }
        })
        .collect()
}

fn lorentz(kappa: f64, drive: f64, omega1: f64, gamma1: f64, t1: f64, t2: f64, gamma2: f64) -> EngineConfig {
    LorentzianSetup {
        omega0: 1.0,
        drive,
        kappa,
        gamma1,
        omega1,
        gamma2,
        t1,
        t2,
    }
    .config()
    .unwrap()
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let cfgs: Vec<EngineConfig> = (0..50)
        .map(|_| {
            lorentz(
                rng.gen_range(0.0..0.5),
                rng.gen_range(0.02..=2.0),
                rng.gen_range(0.2..2.0),
                rng.gen_range(0.05..0.5),
                rng.gen_range(0.05..5.0),
                rng.gen_range(0.05..5.0),
                rng.gen_range(0.01..0.1),
            )
        })
        .collect();
    let worst = cfgs
        .par_iter()
        .map(|c| {
            let r = Solver::new(c).unwrap().report_unchecked().unwrap();
            // J1 from the unreduced harmonic sums, independent of the balance
            (r.power + r.heat_1_direct + r.heat_2).abs() / r.balance_scale
        })
        .reduce(|| 0.0, f64::max);
    outcome(
        worst <= FIRST_LAW_REL,
        format!("max |P + J1 + J2| / scale = {worst:.2e} over 50 configs (tol {FIRST_LAW_REL:.0e})"),
    )
}

fn criterion_2() -> Outcome {
    let cfg = lorentz(0.1, 0.3, 0.7, 0.02, 0.2, 2.0, 0.02);
    let k = cfg.kernels().unwrap();
    let m = select_order(&cfg, &k).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let (mut conj, mut shift): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let w: f64 = rng.gen_range(-3.0..3.0);
        let mu = 2 * rng.gen_range(-(m as i64)..=m as i64);
        let a = solve_floquet(&k, w, m).unwrap();
        let b = solve_floquet(&k, -w, m).unwrap();
        let s = a.get(mu).norm().max(1.0);
        conj = conj.max((a.get(mu).conj() - b.get(-mu)).norm() / s);
        let h = mu as f64 * k.drive() / 2.0;
        let lo = solve_floquet(&k, w - h, m).unwrap().get(mu);
        let hi = solve_floquet(&k, w + h, m).unwrap().get(-mu);
        shift = shift.max((lo - hi).norm() / lo.norm().max(1.0));
    }
    outcome(
        conj <= SYMMETRY_TOL && shift <= SYMMETRY_TOL,
        format!("conjugation {conj:.1e}, shift {shift:.1e} on 100 samples at kappa = 0.1, M = {m}"),
    )
}

fn criterion_3() -> Outcome {
    let mut pts = Vec::new();
    for t1 in [50.0, 100.0, 500.0] {
        for i in 0..20 {
            pts.push((t1, 0.1 * (i + 1) as f64));
        }
    }
    let res: Vec<(f64, f64, f64)> = pts
        .par_iter()
        .map(|&(t1, drive)| {
            let b1 = BathConfig::new(SpectralDensity::ohmic(0.02).unwrap(), t1).unwrap();
            let b2 = BathConfig::new(SpectralDensity::ohmic(0.02).unwrap(), 0.2).unwrap();
            let c = EngineConfig::new(1.0, drive, b1, b2).unwrap();
            let r = Solver::new(&c).unwrap().report().unwrap();
            (r.power, r.power_b1, r.power_b2)
        })
        .collect();
    let p = res.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let b1 = res.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let b2 = res.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    outcome(
        p >= MARKOV_FLOOR && b1 >= 0.0 && b2 >= 0.0,
        format!("min P = {p:.3e}, min P_b1 = {b1:.3e}, min P_b2 = {b2:.3e} over 60 points"),
    )
}

fn criterion_4() -> Outcome {
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for s in [0.25, 0.5, 0.75, 1.0] {
        for i in 0..50 {
            let omega = 3.0 * (i as f64 + 0.5) / 50.0;
            for j in 0..50 {
                let t1 = 10f64.powf(-2.0 + 4.0 * j as f64 / 49.0);
                let c = no_engine_certificate(s, omega, t1, 1.0).unwrap();
                worst = worst.max(c.log_margin);
                violations += (c.f_s > c.g_t1) as usize;
            }
        }
    }
    let mut pts = Vec::new();
    for i in 0..10 {
        for j in 0..10 {
            pts.push((0.1 * (i + 1) as f64, 3.0 * (j as f64 + 0.5) / 10.0));
        }
    }
    let min_p = pts
        .par_iter()
        .map(|&(s, drive)| {
            let b1 = BathConfig::new(SpectralDensity::power_law_real_only(0.02, s, 1.0, f64::INFINITY).unwrap(), 1.0).unwrap();
            let b2 = BathConfig::new(SpectralDensity::ohmic(0.02).unwrap(), 0.01).unwrap();
            weak_power(&EngineConfig::new(1.0, drive, b1, b2).unwrap()).unwrap()
        })
        .reduce(|| f64::INFINITY, f64::min);
    outcome(
        violations == 0 && min_p >= 0.0,
        format!(
            "{violations} of 10000 points with f_s > g_T1 (max ln(f/g) = {worst:.3}); min weak P = {min_p:.3e} on 10x10 (s, Omega)"
        ),
    )
}

fn criterion_5(cells: &[Cell]) -> Outcome {
    let weak: Vec<f64> = cells
        .par_iter()
        .map(|c| weak_power(&lorentz(1e-3, c.omega, c.omega1, 0.02, 0.2, 2.0, 0.02)).unwrap())
        .collect();
    let max = weak.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let mut n = 0;
    let mut bad = 0;
    let mut worst = (0.0, 0.0, 0.0);
    for (c, &w) in cells.iter().zip(&weak) {
        if w.abs() <= WEAK_FULL_FLOOR * max {
            continue;
        }
        n += 1;
        let rel = (c.power - w).abs() / w.abs();
        if rel > WEAK_FULL_REL {
            bad += 1;
        }
        if rel > worst.0 {
            worst = (rel, c.omega, c.omega1);
        }
    }
    outcome(
        bad == 0,
        format!(
            "{bad} of {n} points exceed {WEAK_FULL_REL}; worst {:.3} at Omega = {}, omega1 = {}",
            worst.0, worst.1, worst.2
        ),
    )
}

fn criterion_6(cells: &[Cell]) -> Outcome {
    let (t1, t2) = (0.2, 2.0);
    let engines: Vec<&Cell> = cells.iter().filter(|c| c.power < 0.0).collect();
    let outside = engines.iter().filter(|c| !(t1 < c.omega1 / (c.omega1 + c.omega) * t2)).count();
    // the engine power of the map; the largest |P| overall sits on the heater
    // branch omega1 = Omega - w0
    let best = engines.iter().max_by(|a, b| a.power.abs().total_cmp(&b.power.abs())).unwrap();
    let cell = 1.1 / 29.0;
    let off_line = (best.omega1 - (1.0 - best.omega)).abs();
    let eta_max = cells.iter().filter_map(|c| c.eta_over_carnot).fold(0.0f64, f64::max);
    // efficiency where the power vanishes: for each ratio omega1 / (omega1 + Omega)
    // just above T1/T2, the best engine point along the ratio line near the
    // resonance
    let ratios = [1.005, 1.01, 1.015, 1.02];
    let mut pts = Vec::new();
    for (k, &f) in ratios.iter().enumerate() {
        let r = f * t1 / t2;
        for i in 0..61 {
            let om = 0.8 + 0.002 * i as f64;
            pts.push((k, om, r * om / (1.0 - r)));
        }
    }
    let etas: Vec<(usize, f64)> = pts
        .par_iter()
        .map(|&(k, om, w1)| {
            let r = Solver::new(&lorentz(1e-3, om, w1, 0.02, t1, t2, 0.02)).unwrap().report().unwrap();
            (k, r.efficiency_over_carnot().unwrap_or(0.0))
        })
        .collect();
    let near: Vec<f64> = (0..ratios.len())
        .map(|k| etas.iter().filter(|e| e.0 == k).map(|e| e.1).fold(0.0, f64::max))
        .collect();
    let near_ok = near.iter().all(|&e| e >= NEAR_CARNOT);
    let pass = !engines.is_empty() && outside == 0 && off_line <= cell && eta_max <= 1.0 + CARNOT_SLACK && near_ok;
    let near: Vec<String> = ratios.iter().zip(&near).map(|(f, e)| format!("{f}: {e:.3}")).collect();
    outcome(
        pass,
        format!(
            "{} engine cells, {outside} outside the Otto region; max engine |P| at Omega = {}, omega1 = {} ({:.3} from omega1 = w0 - Omega, cell {:.3}); max eta/etaC = {eta_max:.4}; best eta/etaC at ratio/(T1/T2) [{}] (need >= {NEAR_CARNOT})",
            engines.len(),
            best.omega,
            best.omega1,
            off_line,
            cell,
            near.join(", ")
        ),
    )
}

fn criterion_7() -> Outcome {
    let kappas: Vec<f64> = (0..14).map(|i| 1e-3 * 2000f64.powf(i as f64 / 13.0)).collect();
    let omegas: Vec<f64> = (0..15).map(|i| 0.3 + 0.05 * i as f64).collect();
    let mut pts = Vec::new();
    for (i, &k) in kappas.iter().enumerate() {
        for &o in &omegas {
            pts.push((i, k, o));
        }
    }
    let res: Vec<(usize, f64)> = pts
        .par_iter()
        .map(|&(i, k, o)| {
            let r = Solver::new(&lorentz(k, o, 0.4, 0.02, 0.2, 2.0, 0.02)).unwrap().report_unchecked().unwrap();
            (i, r.power_over_gamma2_sq)
        })
        .collect();
    let mut by_kappa: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for (i, p) in res {
        by_kappa.entry(i).or_default().push(p);
    }
    let max_out: Vec<f64> = by_kappa.values().map(|v| v.iter().map(|p| -p).fold(f64::NEG_INFINITY, f64::max)).collect();
    let (istar, best) = max_out.iter().copied().enumerate().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    let kstar = kappas[istar];
    let ratio = best / max_out[0];
    let lost = by_kappa[&13].iter().all(|&p| p > 0.0);
    let pass = (0.1..=0.4).contains(&kstar) && ratio >= STRONG_RATIO && lost;
    outcome(
        pass,
        format!(
            "kappa* = {kstar:.3}, max -P/gamma2^2 = {best:.2} vs {:.2} at kappa = 1e-3 (ratio {ratio:.2}, need >= {STRONG_RATIO}); all P > 0 at kappa = 2: {lost}",
            max_out[0]
        ),
    )
}

fn criterion_8() -> Outcome {
    let ohmic = NmTemplate {
        family: NmFamily::PowerLaw { s: 1.0, omega_c: 1e4 },
        temperature: 100.0,
        omega0: 1.0,
    };
    let hot = ohmic.coefficients().unwrap().n_p;
    let temps: Vec<f64> = (0..21).map(|i| 100.0 * 100f64.powf(i as f64 / 20.0)).collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = temps
        .iter()
        .map(|&t| {
            let c = ohmic.with(NmParam::Temperature, t).unwrap().coefficients().unwrap();
            ((1.0 / t).ln(), c.n_p.ln())
        })
        .unzip();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let lor = |g: f64| NmTemplate {
        family: NmFamily::Lorentzian { gamma1: g, omega1: 0.5, omega_c: None },
        temperature: 0.2,
        omega0: 1.0,
    };
    let sharp = lor(0.02).coefficients().unwrap().n_p;
    let broad = (0..200)
        .map(|i| lor(0.01 * 300f64.powf(i as f64 / 199.0)).coefficients().unwrap().n_p)
        .fold(f64::INFINITY, f64::min);
    let pass = hot < NP_HOT_MAX
        && (slope - NP_SLOPE.0).abs() <= NP_SLOPE.1
        && (sharp - NP_SHARP.0).abs() <= NP_SHARP.1
        && (broad - NP_BROAD_MIN.0).abs() <= NP_BROAD_MIN.1;
    outcome(
        pass,
        format!(
            "Ohmic N_p(T=100) = {hot:.3e}; slope {slope:.3} (least squares, 21 log-spaced T in [1e2, 1e4]); Lorentzian N_p(0.02) = {sharp:.4}, min over gamma1 = {broad:.4}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let mut worst: f64 = 0.0;
    let mut mismatched = 0;
    for _ in 0..20 {
        let cfg = lorentz(1e-3, rng.gen_range(0.01..0.99), 0.7, 0.02, rng.gen_range(0.05..5.0), rng.gen_range(0.05..5.0), 0.02);
        let ch = channel_decomposition(&cfg);
        for p in [1, -1] {
            let c = otto_cycle(p, &cfg).unwrap();
            let x = ch.channel(p);
            for (a, b) in [(c.power(), x.power), (c.heat_current_1(), x.heat_1), (c.heat_current_2(), x.heat_2)] {
                worst = worst.max((a - b).abs() / b.abs());
            }
            // sign conditions: engine iff the channel power is negative
            let by_sign = x.power < 0.0;
            if c.is_engine() != by_sign || otto_engine_condition(p, &cfg) != by_sign {
                mismatched += 1;
            }
        }
    }
    outcome(
        worst <= OTTO_REL && mismatched == 0,
        format!("max relative mismatch {worst:.1e} over 20 configs x 2 channels; {mismatched} engine-flag mismatches"),
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut record = |n: u32, name: &'static str, o: Outcome| {
        println!("criterion {n} [{name}]: {} | {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((n, name, o));
    };
    record(1, "first law", criterion_1());
    record(2, "Floquet symmetries", criterion_2());
    record(3, "Markovian no-engine", criterion_3());
    record(4, "sub-Ohmic no-engine", criterion_4());
    let first = engine_map_csv();
    let cells = parse_cells(&first);
    record(5, "weak vs full", criterion_5(&cells));
    record(6, "engine map", criterion_6(&cells));
    record(7, "strong-coupling bands", criterion_7());
    record(8, "non-Markovianity", criterion_8());
    record(9, "Otto identity", criterion_9());
    let second = engine_map_csv();
    record(
        10,
        "determinism",
        outcome(
            first == second,
            format!("two single-worker runs of the 30x30 map: {} and {} bytes, identical = {}", first.len(), second.len(), first == second),
        ),
    );
    let failed: Vec<String> = results.iter().filter(|r| !r.2.pass).map(|r| r.0.to_string()).collect();
    println!("acceptance: {} of {} criteria pass", results.len() - failed.len(), results.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failing criteria: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
