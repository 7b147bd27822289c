//! Three-period regime: five wages, the residuals of the equilibrium
//! system, agreement of random restarts, and the wage and productivity
//! inequalities of the solved market.
//!
//! ```text
//! cargo run --release --example three_period
//! ```

use lemonlab::multiperiod::{
    check_final_period_wages, check_second_period_wages, multi_start, second_period_chain, solve_three_period,
};
use lemonlab::{ProductivityDistribution, QuitFactor, SolverOptions};

fn main() -> lemonlab::Result<()> {
    let dist = ProductivityDistribution::uniform(0.0, 1.0)?;
    let opts = SolverOptions::default();

    for mu in [0.2, 0.5, 0.8] {
        let mu = QuitFactor::new(mu)?;
        let sol = solve_three_period(&dist, mu, &opts)?;
        let w = sol.wages;
        println!("mu = {}", mu.get());
        println!(
            "  w0 = {:.6}  w1 = {:.6}  w+ = {:.6}  w2 = {:.6}  w2' = {:.6}",
            w.w0, w.w1, w.w_plus, w.w2, w.w2p
        );
        println!("  max residual = {:.1e}", sol.max_residual());

        let starts = multi_start(&dist, mu, &opts, 64, 1)?;
        println!("  64 restarts agree: {} (spread {:.1e})", starts.agree, starts.spread);

        for report in [check_final_period_wages(&sol), check_second_period_wages(&sol), second_period_chain(&sol)] {
            for c in &report.checks {
                println!("    {:<40} {:?}", c.label, c.relation);
            }
        }
    }
    Ok(())
}
