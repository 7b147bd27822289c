//! Market division: the tree of employment histories, with each group's
//! mass and mean productivity, and the count of off-firm markets by
//! horizon.
//!
//! ```text
//! cargo run --example market_tree
//! ```

use lemonlab::multiperiod::{build_market_tree, internal_node_count, solve_three_period, submarket_count};
use lemonlab::{ProductivityDistribution, QuitFactor, SolverOptions};

fn main() -> lemonlab::Result<()> {
    let dist = ProductivityDistribution::uniform(0.0, 1.0)?;
    let mu = QuitFactor::new(0.5)?;

    let sol = solve_three_period(&dist, mu, &SolverOptions::default())?;
    let mut tree = build_market_tree(&dist, mu, 3, &sol.wages.thresholds())?;
    tree.assign_wages(|h| sol.wages.wage_of(h));

    println!("{:<8} {:<15} {:>8} {:>8} {:>8}", "history", "market", "mass", "mean", "wage");
    for node in &tree.nodes {
        println!(
            "{:<8} {:<15} {:>8.4} {:>8.4} {:>8.4}",
            if node.history.is_empty() { "-".to_string() } else { node.history.to_string() },
            node.history.market_name().unwrap_or(""),
            node.pool.mass(),
            node.pool.mean().unwrap_or(f64::NAN),
            node.wage.unwrap_or(f64::NAN),
        );
    }

    println!("\nperiods  off-firm markets");
    for n in 1..=6 {
        let t = build_market_tree(&dist, mu, n, &vec![0.4; internal_node_count(n)])?;
        println!("{n:>7}  {:>3} (formula {})", t.off_firm_markets().count(), submarket_count(n));
    }
    Ok(())
}
