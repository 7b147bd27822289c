//! Slice-by-slice screening: how many below-average workers survive when
//! the firm may observe only `m` of the `n` periods needed to learn a
//! worker's productivity.
//!
//! ```text
//! cargo run --example screening
//! ```

use lemonlab::screening::{
    critical_assessment_periods, residual_below_average_probability, simulate_slice_firing, ScreeningConfig,
};

fn main() -> lemonlab::Result<()> {
    let m = 3;
    println!("m = {m}: every below-average worker is caught when n <= {}", critical_assessment_periods(m));
    println!("{:>3} {:>12} {:>12}", "n", "closed form", "simulated");
    for n in [4, 6, 8, 10, 12, 20, 40] {
        let cfg = ScreeningConfig::new(n, m, 0.0, 1.0)?;
        let sim = simulate_slice_firing(&cfg, 100_000);
        println!(
            "{n:>3} {:>12.6} {:>12.6}",
            residual_below_average_probability(&cfg),
            sim.probability
        );
    }
    Ok(())
}
