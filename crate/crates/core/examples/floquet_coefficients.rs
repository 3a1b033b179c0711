// Floquet Green's coefficients: truncation convergence, the two symmetries,
// and the self-consistent resonance.

use std::error::Error;

use floquet_engine::floquet::{converge_truncation, detuned_resonance, solve_floquet, KernelSet};
use floquet_engine::spectral::SpectralDensity;

pub fn run_example() -> Result<f64, Box<dyn Error>> {
    let k = KernelSet::new(
        1.0,
        0.3,
        SpectralDensity::lorentzian_kappa(0.1, 0.02, 0.7, 1.0)?,
        SpectralDensity::ohmic(0.02)?,
    )?;
    let w = 0.9;
    let (order, col) = converge_truncation(&k, w, 1e-12, 64)?;
    println!("omega = {w}: converged at M = {order}, backward error {:.1e}", col.backward_error);
    for mu in (-4..=4).step_by(2) {
        let g = col.get(mu);
        println!("  G_{mu:+} = {:+.6e} {:+.6e}i", g.re, g.im);
    }
    let back = solve_floquet(&k, -w, order)?;
    let mut dev: f64 = 0.0;
    for mu in (-2 * order as i64..=2 * order as i64).step_by(2) {
        dev = dev.max((col.get(mu).conj() - back.get(-mu)).norm());
    }
    println!("max |G_mu(w)* - G_-mu(-w)| = {dev:.1e}");
    let r = detuned_resonance(&k)?;
    println!("resonant peak omega1* = {:.5} (dressed frequency {:.5})", r.omega1, r.omega);
    Ok(dev)
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
