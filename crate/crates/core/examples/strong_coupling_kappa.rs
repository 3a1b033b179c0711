// Power versus coupling strength at omega1 = 0.4 w0: the engine grows past
// the weak-coupling value, peaks, and is lost at strong coupling.

use std::error::Error;

use floquet_engine::floquet::detuned_resonance;
use floquet_engine::thermo::{LorentzianSetup, Solver};

pub fn run_example() -> Result<Vec<(f64, f64)>, Box<dyn Error>> {
    let kappas = [1e-3, 1e-2, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0];
    let mut out = Vec::new();
    println!("{:>8} {:>12} {:>8} {:>10} {:>4}", "kappa", "P/gamma2^2", "regime", "omega1*", "M");
    for &kappa in &kappas {
        let cfg = LorentzianSetup {
            kappa,
            omega1: 0.4,
            drive: 0.6,
            ..Default::default()
        }
        .config()?;
        let solver = Solver::new(&cfg)?;
        let r = solver.report()?;
        let det = detuned_resonance(solver.kernels()).map(|d| format!("{:.4}", d.omega1)).unwrap_or("-".into());
        println!("{:>8.3} {:>12.4} {:>8} {:>10} {:>4}", kappa, r.power_over_gamma2_sq, r.regime.as_str(), det, r.order);
        out.push((kappa, r.power_over_gamma2_sq));
    }
    Ok(out)
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
