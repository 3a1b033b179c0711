// Weak-coupling power over the (Omega, omega1) plane. Engine cells are
// marked `#`; the dashed line is the resonance omega1 = w0 - Omega.

use std::error::Error;

use floquet_engine::thermo::LorentzianSetup;
use floquet_engine::weakcoupling::weak_power;

pub struct MapSummary {
    pub engine_cells: usize,
    pub cells: usize,
    /// (Omega, omega1) of the most negative power.
    pub best: (f64, f64),
    pub best_power: f64,
}

pub fn run_example() -> Result<MapSummary, Box<dyn Error>> {
    let n = 16;
    let omegas: Vec<f64> = (0..n).map(|i| 0.05 + 1.15 * i as f64 / (n - 1) as f64).collect();
    let peaks: Vec<f64> = (0..n).map(|i| 0.1 + 1.1 * i as f64 / (n - 1) as f64).collect();
    let mut s = MapSummary {
        engine_cells: 0,
        cells: 0,
        best: (0.0, 0.0),
        best_power: 0.0,
    };
    let g2 = LorentzianSetup::default().gamma2;
    println!("omega1 \\ Omega  0.05 .. 1.20");
    for &w1 in peaks.iter().rev() {
        let mut line = format!("{w1:5.2} ");
        for &om in &omegas {
            let cfg = LorentzianSetup { drive: om, omega1: w1, ..Default::default() }.config()?;
            let p = weak_power(&cfg)?;
            s.cells += 1;
            let c = if p < 0.0 {
                s.engine_cells += 1;
                '#'
            } else if ((w1 + om) - 1.0).abs() < 0.04 {
                '-'
            } else {
                '.'
            };
            if p < s.best_power {
                s.best_power = p;
                s.best = (om, w1);
            }
            line.push(c);
        }
        println!("{line}");
    }
    println!(
        "{} of {} cells are engines; strongest at Omega = {:.2}, omega1 = {:.2} with P / gamma2^2 = {:.3}",
        s.engine_cells,
        s.cells,
        s.best.0,
        s.best.1,
        s.best_power / (g2 * g2)
    );
    Ok(s)
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
