// Checks f_s(Omega) <= g(T1) over drives and temperatures for sub-Ohmic and
// Ohmic baths, which rules out an engine.

use std::error::Error;

use floquet_engine::weakcoupling::no_engine_certificate;

pub fn run_example() -> Result<usize, Box<dyn Error>> {
    let mut violations = 0;
    for s in [0.25, 0.5, 0.75, 1.0] {
        let mut tightest = f64::NEG_INFINITY;
        for i in 0..30 {
            let omega = 3.0 * (i as f64 + 0.5) / 30.0;
            for j in 0..20 {
                let t1 = 10f64.powf(-2.0 + 4.0 * j as f64 / 19.0);
                let c = no_engine_certificate(s, omega, t1, 1.0)?;
                tightest = tightest.max(c.log_margin);
                violations += c.engine_possible as usize;
            }
        }
        println!("s = {s:4}: largest ln(f/g) = {tightest:+.3}");
    }
    println!("{violations} points admit an engine");
    Ok(violations)
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
