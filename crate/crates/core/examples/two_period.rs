//! Two-period market on a uniform pool: the second-hand wage as a fixed
//! point of the leaver-mean map, the entry wage from zero profit, and the
//! ordering `w1 < θ̄ < w0 < θ̄₂` across quit factors.
//!
//! ```text
//! cargo run --example two_period
//! ```

use lemonlab::equilibrium::{check_two_period_ordering, solve_two_period, sweep_two_period};
use lemonlab::{ProductivityDistribution, QuitFactor, SolverOptions};

fn main() -> lemonlab::Result<()> {
    let dist = ProductivityDistribution::uniform(0.0, 1.0)?;
    let opts = SolverOptions::default();

    let sol = solve_two_period(&dist, QuitFactor::new(0.5)?, &opts)?;
    println!("mu = 0.5: w1 = {:.9}, w0 = {:.9}", sol.w1, sol.w0);
    println!("  closed form w1 = {:.9}", 2f64.sqrt() - 1.0);

    let mus: Vec<QuitFactor> = (1..10)
        .map(|k| QuitFactor::new(k as f64 / 10.0))
        .collect::<Result<_, _>>()?;
    println!("\n{:>5} {:>10} {:>10} {:>10}  ordering", "mu", "w1", "w0", "theta2");
    for s in sweep_two_period(&dist, &mus, &opts)? {
        let ok = check_two_period_ordering(&s).all_strict();
        println!(
            "{:>5.1} {:>10.6} {:>10.6} {:>10.6}  {}",
            s.mu,
            s.w1,
            s.w0,
            s.theta_bar2.unwrap_or(f64::NAN),
            if ok { "holds" } else { "fails" }
        );
    }

    let collapse = solve_two_period(&ProductivityDistribution::uniform(-1.0, 1.0)?, QuitFactor::new(0.0)?, &opts)?;
    println!("\nno random quits on uniform(-1,1): collapsed = {}, w1 = {}", collapse.collapsed, collapse.w1);
    Ok(())
}
