//! Agent-based replay of the two-period market at the analytic wages:
//! empirical group means against the analytic pools, and the entry firm's
//! profit per worker.
//!
//! ```text
//! cargo run --release --example monte_carlo
//! ```

use lemonlab::equilibrium::solve_two_period;
use lemonlab::simulator::{simulate, Regime, SimulationConfig};
use lemonlab::{ProductivityDistribution, QuitFactor, SolverOptions};

fn main() -> lemonlab::Result<()> {
    let dist = ProductivityDistribution::uniform(0.0, 1.0)?;
    let mu = QuitFactor::new(0.5)?;
    let sol = solve_two_period(&dist, mu, &SolverOptions::default())?;

    let report = simulate(&SimulationConfig {
        n_agents: 1_000_000,
        seed: 2024,
        regime: Regime::TwoPeriod,
        dist,
        mu,
        wages: vec![sol.w0, sol.w1],
    })?;

    println!("{:<8} {:>9} {:>10} {:>10} {:>8}", "history", "count", "mean", "analytic", "z");
    for m in &report.markets {
        let (mean, exact, se) = (m.mean.unwrap(), m.analytic_mean.unwrap(), m.std_error.unwrap());
        println!(
            "{:<8} {:>9} {:>10.6} {:>10.6} {:>8.2}",
            if m.history.is_empty() { "-".to_string() } else { m.history.to_string() },
            m.count,
            mean,
            exact,
            (mean - exact) / se
        );
    }
    println!(
        "entry firm profit per worker: {:.6} ± {:.6}",
        report.entry_profit_per_capita, report.entry_profit_halfwidth
    );
    Ok(())
}
