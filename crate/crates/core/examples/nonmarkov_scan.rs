// Asymptotic non-Markovianity for a sharp-to-broad Lorentzian and for a
// hot Ohmic bath.

use std::error::Error;

use floquet_engine::nonmarkov::{nm_scan, NmFamily, NmParam, NmTemplate};

pub fn run_example() -> Result<(f64, f64), Box<dyn Error>> {
    let lorentz = NmTemplate {
        family: NmFamily::Lorentzian { gamma1: 0.02, omega1: 0.5, omega_c: None },
        temperature: 0.2,
        omega0: 1.0,
    };
    let widths: Vec<f64> = (0..13).map(|i| 0.01 * 300f64.powf(i as f64 / 12.0)).collect();
    let mut min: f64 = 0.5;
    println!("Lorentzian, omega1 = 0.5, T = 0.2");
    for row in nm_scan(&lorentz, (NmParam::Gamma1, &widths), None) {
        let c = row.result?;
        min = min.min(c.n_p);
        println!("  gamma1 = {:7.4}  N_p = {:.4}", row.x, c.n_p);
    }

    let ohmic = NmTemplate {
        family: NmFamily::PowerLaw { s: 1.0, omega_c: 1e4 },
        temperature: 100.0,
        omega0: 1.0,
    };
    let temps = [1e2, 1e3, 1e4];
    println!("Ohmic, omega_c = 1e4");
    let mut hot = 0.0;
    for row in nm_scan(&ohmic, (NmParam::Temperature, &temps), None) {
        let c = row.result?;
        if row.x == 100.0 {
            hot = c.n_p;
        }
        println!("  T = {:6.0}  N_p = {:.3e}  (Pi = {:+.3})", row.x, c.n_p, c.pi);
    }
    Ok((min, hot))
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
