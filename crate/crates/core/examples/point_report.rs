// Full-coupling power and heat currents at the weak-coupling engine point.

use std::error::Error;

use floquet_engine::thermo::{full_report, LorentzianSetup, ThermoReport};

pub fn run_example() -> Result<ThermoReport, Box<dyn Error>> {
    let setup = LorentzianSetup::default();
    let cfg = setup.config()?;
    let r = full_report(&cfg)?;
    println!("Omega = {}, omega1 = {}, kappa = {}", setup.drive, setup.omega1, setup.kappa);
    println!("truncation M = {} ({} integrand evaluations)", r.order, r.evaluations);
    println!("P / gamma2^2 = {:.4}", r.power_over_gamma2_sq);
    println!("  P_a = {:+.4e}  P_b1 = {:+.4e}  P_b2 = {:+.4e}  P_c = {:+.4e}", r.power_a, r.power_b1, r.power_b2, r.power_c);
    println!("J1 = {:+.4e}, J2 = {:+.4e}", r.heat_1, r.heat_2);
    println!("first-law residual {:.2e} (scale {:.2e})", r.balance_residual, r.balance_scale);
    println!("regime: {}", r.regime);
    if let Some(e) = r.efficiency {
        println!("efficiency {:.4} = {:.3} of Carnot", e, e / r.carnot);
    }
    Ok(r)
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
