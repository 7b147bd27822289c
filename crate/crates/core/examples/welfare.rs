//! Expected pay by productivity decile under two- and three-period
//! regimes.
//!
//! ```text
//! cargo run --example welfare
//! ```

use lemonlab::multiperiod::welfare_comparison;
use lemonlab::{ProductivityDistribution, QuitFactor, SolverOptions};

fn main() -> lemonlab::Result<()> {
    let dist = ProductivityDistribution::uniform(0.0, 1.0)?;
    let r = welfare_comparison(&dist, QuitFactor::new(0.5)?, &SolverOptions::default())?;

    println!("{:>6} {:>8}   {:<17} {:<26}", "decile", "theta", "two-period path", "three-period path");
    for d in &r.deciles {
        println!(
            "{:>6} {:>8.3}   {:.3} {:.3}       {:.3} {:.3} {:.3}",
            d.decile,
            d.mean_theta,
            d.two_period_path[0],
            d.two_period_path[1],
            d.three_period_path[0],
            d.three_period_path[1],
            d.three_period_path[2]
        );
    }
    println!(
        "\naverage wage per period worked: two {:.6}, three {:.6}",
        r.aggregate_two_period, r.aggregate_three_period
    );
    Ok(())
}
