// The two resonant channels read as quantum Otto cycles.

use std::error::Error;

use floquet_engine::thermo::LorentzianSetup;
use floquet_engine::weakcoupling::{channel_decomposition, otto_cycle, otto_engine_condition};

pub fn run_example() -> Result<f64, Box<dyn Error>> {
    let cfg = LorentzianSetup::default().config()?;
    let channels = channel_decomposition(&cfg);
    let mut worst: f64 = 0.0;
    for p in [1, -1] {
        let c = otto_cycle(p, &cfg)?;
        let ch = channels.channel(p);
        println!("channel p = {p:+}: bath-1 frequency {:.2}, bath-2 frequency {:.2}", c.omega_bath1, c.omega_bath2);
        println!("  occupations a..d: {:.4} {:.4} {:.4} {:.4}", c.n_a, c.n_b, c.n_c, c.n_d);
        println!("  W = {:+.4}, Q1 = {:+.4}, Q2 = {:+.4}, efficiency {:.3}", c.work, c.heat_1, c.heat_2, c.efficiency);
        println!("  W/tau1 = {:+.4e}  vs channel power {:+.4e}", c.power(), ch.power);
        println!("  engine: {} (sign condition {})", c.is_engine(), otto_engine_condition(p, &cfg));
        worst = worst.max((c.power() - ch.power).abs() / ch.power.abs());
    }
    println!("largest relative mismatch {worst:.1e}");
    Ok(worst)
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
