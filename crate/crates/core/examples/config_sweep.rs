// Drives the CSV pipeline from a config string, as the binary does.

use std::error::Error;

use floquet_engine::cli::{parse_config, run_sweep, Subcommand};

const CONFIG: &str = "\
T1 = 0.2
T2 = 2
kappa = 0.001
bath1.gamma1 = 0.02
bath2.gamma2 = 0.02
sweep.x = Omega 0.2 0.4 3
sweep.y = omega1 0.6 0.8 3
";

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let mut spec = parse_config(CONFIG, Subcommand::Sweep)?;
    spec.workers = Some(1);
    let mut buf = Vec::new();
    let summary = run_sweep(&spec, &mut buf)?;
    let csv = String::from_utf8(buf)?;
    let mut rd = csv::Reader::from_reader(csv.as_bytes());
    let h = rd.headers()?.clone();
    let col = |n: &str| h.iter().position(|x| x == n).unwrap();
    let (om, w1, p, reg) = (col("Omega"), col("omega1"), col("P_over_gamma2sq"), col("regime"));
    for rec in rd.records() {
        let r = rec?;
        println!("Omega = {:>4}  omega1 = {:>4}  P/gamma2^2 = {:>9.4}  {}", &r[om], &r[w1], r[p].parse::<f64>()?, &r[reg]);
    }
    println!("{} rows, {} failed, exit code {}", summary.rows, summary.failed, summary.exit_code());
    Ok(csv)
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
