//! Lifetime pay under the two- and three-period regimes, by productivity decile.
//!
//! No discounting. Expected pay paths are averaged over the random quit
//! draws; a decile's path mixes the branch below the period-one threshold
//! with the branch above it in proportion to the decile's population share
//! on each side.

use serde::{Deserialize, Serialize};

use super::three_period::{solve_three_period, ThreePeriodSolution};
use crate::equilibrium::{solve_two_period, TwoPeriodSolution};
use crate::error::Result;
use crate::pool::{ProductivityDistribution, QuitFactor};
use crate::solver::SolverOptions;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecileWelfare {
    /// 1 (least productive) to 10.
    pub decile: u32,
    pub mean_theta: f64,
    /// Expected wage in periods 1 and 2 of the two-period regime.
    pub two_period_path: [f64; 2],
    /// Expected wage in periods 1, 2 and 3 of the three-period regime.
    pub three_period_path: [f64; 3],
    pub two_period_lifetime: f64,
    pub three_period_lifetime: f64,
    pub two_period_per_period: f64,
    pub three_period_per_period: f64,
    /// Three-period minus two-period average wage per period worked.
    pub per_period_difference: f64,
    /// Period-by-period difference over the common two periods.
    pub period_differences: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WelfareReport {
    pub mu: f64,
    pub theta_bar: f64,
    pub two_period: TwoPeriodSolution,
    pub three_period: ThreePeriodSolution,
    /// Population-average wage per period worked, two-period regime.
    pub aggregate_two_period: f64,
    pub aggregate_three_period: f64,
    pub aggregate_difference: f64,
    pub deciles: Vec<DecileWelfare>,
}

/// Compares expected lifetime pay between the two- and three-period regimes.
///
/// Lifetimes run over different horizons, so comparisons use the average
/// wage per period worked.
pub fn welfare_comparison(
    dist: &ProductivityDistribution,
    mu: QuitFactor,
    opts: &SolverOptions,
) -> Result<WelfareReport> {
    let two = solve_two_period(dist, mu, opts)?;
    let three = solve_three_period(dist, mu, opts)?;
    let m = mu.get();
    let w = three.wages;

    let below_three = dist.share_below(w.w_plus);

    let mut deciles = Vec::with_capacity(10);
    let (mut agg2, mut agg3) = (0.0, 0.0);
    for d in 0..10u32 {
        let u0 = d as f64 / 10.0;
        let u1 = (d + 1) as f64 / 10.0;
        let low_share = |cut: f64| ((cut - u0) * 10.0).clamp(0.0, 1.0);
        let mean_theta = dist.quantile_band_integral(u0, u1) * 10.0;

        // retained and departed workers both earn w1 in period two
        let two_path = [two.w0, two.w1];

        let b = low_share(below_three);
        let three_path = [
            w.w0,
            b * w.w1 + (1.0 - b) * (m * w.w1 + (1.0 - m) * w.w_plus),
            b * w.w2p + (1.0 - b) * (m * w.w2p + (1.0 - m) * w.w2),
        ];
        let life2: f64 = two_path.iter().sum();
        let life3: f64 = three_path.iter().sum();
        agg2 += life2 / 2.0 / 10.0;
        agg3 += life3 / 3.0 / 10.0;
        deciles.push(DecileWelfare {
            decile: d + 1,
            mean_theta,
            two_period_path: two_path,
            three_period_path: three_path,
            two_period_lifetime: life2,
            three_period_lifetime: life3,
            two_period_per_period: life2 / 2.0,
            three_period_per_period: life3 / 3.0,
            per_period_difference: life3 / 3.0 - life2 / 2.0,
            period_differences: [three_path[0] - two_path[0], three_path[1] - two_path[1]],
        });
    }
    Ok(WelfareReport {
        mu: m,
        theta_bar: dist.mean(),
        aggregate_two_period: agg2,
        aggregate_three_period: agg3,
        aggregate_difference: agg3 - agg2,
        two_period: two,
        three_period: three,
        deciles,
    })
}
