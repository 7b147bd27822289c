//! Employment-history market trees and the multi-period regimes.

mod three_period;
mod tree;
mod welfare;

pub use three_period::{
    check_final_period_wages, check_second_period_wages, multi_start, second_period_chain, residuals,
    solve_three_period, three_period_tree, LiteralMasses, Masses, MultiStartReport, MultiStartRun,
    ThreePeriodSolution, ThreePeriodWages, AGREEMENT_TOL,
};
pub use tree::{
    build_market_tree, internal_node_count, submarket_count, History, MarketNode, MarketTree,
    Move, NodeSummary, TreeSummary, MAX_TREE_PERIODS,
};
pub use welfare::{welfare_comparison, DecileWelfare, WelfareReport};

use serde::{Deserialize, Serialize};

use crate::equilibrium::{one_period_wage, Clearing, TwoPeriodSolution};
use crate::error::{Error, Result};
use crate::pool::{ProductivityDistribution, QuitFactor};
use crate::solver::{scan_roots, SolverOptions};

/// Two-period equilibrium obtained from the market tree: the retained wage
/// equals the second-market wage and the second market is terminal.
///
/// Serves as a cross-check of [`crate::equilibrium::solve_two_period`]
/// through an independent composition route.
pub fn solve_reduced_two_period(
    dist: &ProductivityDistribution,
    mu: QuitFactor,
    opts: &SolverOptions,
) -> Result<TwoPeriodSolution> {
    let second_mean = |w: f64| -> Option<f64> {
        let tree = build_market_tree(dist, mu, 2, &[w]).ok()?;
        tree.by_label("L")?.pool.mean().ok()
    };
    let lo = dist.support_low().min(0.0);
    let roots = scan_roots(|w| second_mean(w).map(|m| w - m), lo, dist.mean(), opts)?;
    let chosen = roots.iter().rev().find(|r| r.x >= 0.0);
    let w1 = chosen.map_or(0.0, |r| r.x);

    let mut tree = build_market_tree(dist, mu, 2, &[w1])?;
    let all = tree.root().pool.moments();
    let kept = tree.by_label("S").expect("two-period node").pool.moments();
    let n = all.mass;
    let w0 = (all.first + kept.first - kept.mass * w1) / n;
    tree.assign_wages(|h| Some(if h.is_empty() { w0 } else { w1 }));
    let above = tree.root().pool.moments_within(w1, dist.support_high());
    Ok(TwoPeriodSolution {
        mu: mu.get(),
        w0,
        w1,
        theta_bar: all.first / n,
        theta_bar2: above.mean().ok(),
        residual_fixed_point: second_mean(w1).map(|m| w1 - m),
        residual_zero_profit: all.first - n * w0 + kept.first - kept.mass * w1,
        collapsed: chosen.is_none(),
        fixed_point_roots: roots.iter().map(|r| r.x).collect(),
    })
}

/// Equilibrium of an `n`-period regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum RegimeSolution {
    OnePeriod { clearing: Clearing },
    TwoPeriod(TwoPeriodSolution),
    ThreePeriod(ThreePeriodSolution),
}

/// Solves the regime with `n_periods` ∈ {1, 2, 3}. Longer horizons build
/// trees but have no equilibrium solver.
pub fn solve_regime(
    dist: &ProductivityDistribution,
    mu: QuitFactor,
    n_periods: u32,
    opts: &SolverOptions,
) -> Result<RegimeSolution> {
    match n_periods {
        1 => Ok(RegimeSolution::OnePeriod {
            clearing: one_period_wage(dist),
        }),
        2 => crate::equilibrium::solve_two_period(dist, mu, opts).map(RegimeSolution::TwoPeriod),
        3 => solve_three_period(dist, mu, opts).map(RegimeSolution::ThreePeriod),
        n => Err(Error::OutOfRange {
            what: "n_periods",
            value: n as f64,
            range: "{1, 2, 3} for equilibrium solving".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::solve_two_period;

    #[test]
    fn reduction_matches_two_period_module() {
        let dist = ProductivityDistribution::uniform(0.0, 1.0).unwrap();
        let opts = SolverOptions::default();
        for mu in [0.1, 0.5, 0.9] {
            let mu = QuitFactor::new(mu).unwrap();
            let a = solve_two_period(&dist, mu, &opts).unwrap();
            let b = solve_reduced_two_period(&dist, mu, &opts).unwrap();
            assert!((a.w0 - b.w0).abs() < 1e-12);
            assert!((a.w1 - b.w1).abs() < 1e-12);
        }
    }

    #[test]
    fn long_regimes_are_not_solved() {
        let dist = ProductivityDistribution::uniform(0.0, 1.0).unwrap();
        let mu = QuitFactor::new(0.5).unwrap();
        assert!(solve_regime(&dist, mu, 4, &SolverOptions::default()).is_err());
        assert!(matches!(
            solve_regime(&dist, mu, 1, &SolverOptions::default()).unwrap(),
            RegimeSolution::OnePeriod { clearing: Clearing::Wage(w) } if w == 0.5
        ));
    }
}
