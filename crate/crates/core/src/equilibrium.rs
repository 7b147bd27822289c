//! One-period pooling wage and the two-period second-hand market.
//!
//! With one period the competitive wage is the pool mean. With two periods,
//! first-period employers learn each worker's productivity and keep those
//! worth at least the second-hand wage `w₁`; the leavers (everyone below
//! `w₁` plus a random share μ of the rest) form the second-hand market,
//! whose wage must equal its own mean: `w₁ = M(w₁)`. The entry wage `w₀`
//! then follows from zero profit over both periods.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pool::{LaborPool, ProductivityDistribution, QuitFactor};
use crate::report::{Inequality, InequalityReport};
use crate::solver::{scan_roots, SolverOptions};

/// Outcome of a market that may fail to trade.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", content = "wage", rename_all = "snake_case")]
pub enum Clearing {
    Wage(f64),
    /// No nonnegative break-even wage exists; nobody is hired.
    Collapse,
}

impl Clearing {
    /// The market wage, or zero ("go home and do nothing") on collapse.
    pub fn wage_or_zero(self) -> f64 {
        match self {
            Clearing::Wage(w) => w,
            Clearing::Collapse => 0.0,
        }
    }

    pub fn is_collapse(self) -> bool {
        matches!(self, Clearing::Collapse)
    }
}

/// Zero-profit wage without any firing option: the pool mean, or a
/// collapse when that mean is negative.
pub fn one_period_wage(dist: &ProductivityDistribution) -> Clearing {
    let mean = dist.mean();
    if mean >= 0.0 {
        Clearing::Wage(mean)
    } else {
        Clearing::Collapse
    }
}

/// Result of solving `w = M(w)` on one pool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub outcome: Clearing,
    /// Every root found on the scan interval, ascending.
    pub roots: Vec<f64>,
    /// `w − M(w)` at the selected root (zero on collapse).
    pub residual: f64,
}

impl FixedPoint {
    pub fn wage(&self) -> f64 {
        self.outcome.wage_or_zero()
    }

    pub fn is_multiple(&self) -> bool {
        self.roots.len() > 1
    }
}

/// Solves `w = M(w)` for the leavers of `pool`.
///
/// Scans `[min(θ_L, 0), mean]`, bisects every sign change, and selects the
/// largest root that is a valid market (nonnegative wage, leavers present).
pub fn pool_fixed_point(pool: &LaborPool, mu: QuitFactor, opts: &SolverOptions) -> Result<FixedPoint> {
    let mean = pool.mean()?;
    let lo = pool.base().support_low().min(0.0);
    let gap = |w: f64| pool.m_operator(w, mu).ok().map(|m| w - m);
    let roots = scan_roots(gap, lo, mean, opts)?;
    let valid = roots
        .iter()
        .rev()
        .find(|r| r.x >= 0.0 && !pool.firing_split(r.x, mu).0.is_empty());
    Ok(FixedPoint {
        outcome: match valid {
            Some(r) => Clearing::Wage(r.x),
            None => Clearing::Collapse,
        },
        residual: valid.map_or(0.0, |r| r.residual),
        roots: roots.iter().map(|r| r.x).collect(),
    })
}

/// Equilibrium wage of the second-hand market fed by the entry pool.
pub fn secondhand_fixed_point(
    dist: &ProductivityDistribution,
    mu: QuitFactor,
    opts: &SolverOptions,
) -> Result<FixedPoint> {
    pool_fixed_point(&LaborPool::new(dist.clone()), mu, opts)
}

/// Damped iteration `w ← w + damping·(M(w) − w)` started from the pool mean.
pub fn tatonnement(
    pool: &LaborPool,
    mu: QuitFactor,
    damping: f64,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let mut w = pool.mean()?;
    let mut step = f64::INFINITY;
    for _ in 0..max_iter {
        let m = pool.m_operator(w, mu)?;
        step = m - w;
        if step.abs() <= tol {
            return Ok(m);
        }
        w += damping * step;
    }
    Err(Error::NoConvergence {
        what: "tatonnement".into(),
        best_residual: step.abs(),
        best: vec![w],
    })
}

/// Entry wage that makes a first-period employer break even over both
/// periods, given the second-hand wage `w1`.
pub fn entry_wage_two_period(dist: &ProductivityDistribution, mu: QuitFactor, w1: f64) -> Result<f64> {
    let pool = LaborPool::new(dist.clone());
    let above = pool.moments_within(w1, dist.support_high());
    let theta_bar2 = above.mean()?;
    let n = dist.total_mass();
    let q = (1.0 - mu.get()) * above.mass;
    Ok(dist.mean() + q / n * (theta_bar2 - w1))
}

/// Solved two-period market.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoPeriodSolution {
    pub mu: f64,
    /// Entry-level wage `w₀`.
    pub w0: f64,
    /// Second-hand wage `w₁` (zero when the second-hand market collapses).
    pub w1: f64,
    /// Entry pool mean.
    pub theta_bar: f64,
    /// Mean of workers at or above `w₁`; absent if nobody is.
    pub theta_bar2: Option<f64>,
    /// `w₁ − M(w₁)`, absent when `M` is undefined at `w₁`.
    pub residual_fixed_point: Option<f64>,
    /// `N(θ̄ − w₀) + Q(θ̄₂ − w₁)`.
    pub residual_zero_profit: f64,
    pub collapsed: bool,
    pub fixed_point_roots: Vec<f64>,
}

pub fn solve_two_period(
    dist: &ProductivityDistribution,
    mu: QuitFactor,
    opts: &SolverOptions,
) -> Result<TwoPeriodSolution> {
    let fp = secondhand_fixed_point(dist, mu, opts)?;
    let w1 = fp.wage();
    let pool = LaborPool::new(dist.clone());
    let theta_bar = dist.mean();
    let n = dist.total_mass();

    let stayers = pool.firing_split(w1, mu).1;
    let above = pool.moments_within(w1, dist.support_high());
    let (w0, theta_bar2) = if above.mass > 0.0 {
        let tb2 = above.first / above.mass;
        let q = (1.0 - mu.get()) * above.mass;
        (theta_bar + q / n * (tb2 - w1), Some(tb2))
    } else {
        (theta_bar, None)
    };
    let kept = stayers.moments();
    let residual_zero_profit = n * (theta_bar - w0) + (kept.first - kept.mass * w1);
    Ok(TwoPeriodSolution {
        mu: mu.get(),
        w0,
        w1,
        theta_bar,
        theta_bar2,
        residual_fixed_point: pool.m_operator(w1, mu).ok().map(|m| w1 - m),
        residual_zero_profit,
        collapsed: fp.outcome.is_collapse(),
        fixed_point_roots: fp.roots,
    })
}

/// Solves the two-period market for each μ; output order follows input order.
pub fn sweep_two_period(
    dist: &ProductivityDistribution,
    mus: &[QuitFactor],
    opts: &SolverOptions,
) -> Result<Vec<TwoPeriodSolution>> {
    mus.par_iter()
        .map(|&mu| solve_two_period(dist, mu, opts))
        .collect()
}

/// Evaluates `w₁ < θ̄ < w₀ < θ̄₂` term by term.
pub fn check_two_period_ordering(sol: &TwoPeriodSolution) -> InequalityReport {
    let tol = 1e-9 * sol.theta_bar.abs().max(1.0);
    let mut checks = vec![
        Inequality::less("w1 < theta_bar", sol.w1, sol.theta_bar, tol),
        Inequality::less("theta_bar < w0", sol.theta_bar, sol.w0, tol),
    ];
    if let Some(tb2) = sol.theta_bar2 {
        checks.push(Inequality::less("w0 < theta_bar2", sol.w0, tb2, tol));
    }
    InequalityReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Relation;

    fn q(mu: f64) -> QuitFactor {
        QuitFactor::new(mu).unwrap()
    }

    fn unit() -> ProductivityDistribution {
        ProductivityDistribution::uniform(0.0, 1.0).unwrap()
    }

    #[test]
    fn one_period() {
        assert_eq!(one_period_wage(&unit()), Clearing::Wage(0.5));
        let neg = ProductivityDistribution::uniform(-2.0, -1.0).unwrap();
        assert_eq!(one_period_wage(&neg), Clearing::Collapse);
        let sym = ProductivityDistribution::discrete([(-1.0, 50.0), (1.0, 50.0)]).unwrap();
        assert_eq!(one_period_wage(&sym), Clearing::Wage(0.0));
    }

    #[test]
    fn secondhand_wage_closed_form() {
        let opts = SolverOptions::default();
        let fp = secondhand_fixed_point(&unit(), q(0.5), &opts).unwrap();
        assert!((fp.wage() - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert_eq!(fp.roots.len(), 1);
    }

    #[test]
    fn no_random_quits_collapses_at_zero() {
        let fp = secondhand_fixed_point(&unit(), q(0.0), &SolverOptions::default()).unwrap();
        assert_eq!(fp.outcome, Clearing::Collapse);
        assert_eq!(fp.wage(), 0.0);
    }

    #[test]
    fn everyone_quits() {
        let fp = secondhand_fixed_point(&unit(), q(1.0), &SolverOptions::default()).unwrap();
        assert_eq!(fp.wage(), 0.5);
        let w0 = entry_wage_two_period(&unit(), q(1.0), 0.5).unwrap();
        assert_eq!(w0, 0.5);
    }

    #[test]
    fn entry_wage_values() {
        let w0 = entry_wage_two_period(&unit(), q(0.5), 0.414214).unwrap();
        assert!((w0 - 0.585786).abs() < 1e-6);
        let point = ProductivityDistribution::discrete([(1.0, 100.0)]).unwrap();
        assert_eq!(entry_wage_two_period(&point, q(0.5), 1.0).unwrap(), 1.0);
        assert_eq!(
            entry_wage_two_period(&unit(), q(0.5), 1.5),
            Err(Error::EmptyPool)
        );
    }

    #[test]
    fn ordering_uniform() {
        let opts = SolverOptions::default();
        for mu in [0.5, 0.9] {
            let sol = solve_two_period(&unit(), q(mu), &opts).unwrap();
            assert!(check_two_period_ordering(&sol).all_strict(), "mu = {mu}");
        }
    }

    #[test]
    fn ordering_point_mass_is_equalities() {
        let point = ProductivityDistribution::discrete([(1.0, 100.0)]).unwrap();
        let sol = solve_two_period(&point, q(0.5), &SolverOptions::default()).unwrap();
        assert_eq!((sol.w0, sol.w1), (1.0, 1.0));
        let rep = check_two_period_ordering(&sol);
        assert!(rep.checks.iter().all(|c| c.relation == Relation::Equal));
    }

    #[test]
    fn negative_mean_pool() {
        let neg = ProductivityDistribution::uniform(-2.0, -1.0).unwrap();
        let sol = solve_two_period(&neg, q(0.5), &SolverOptions::default()).unwrap();
        assert!(sol.collapsed);
        assert_eq!(sol.w1, 0.0);
        assert_eq!(sol.theta_bar2, None);
    }

    #[test]
    fn sweep_preserves_order() {
        let mus: Vec<_> = (1..10).map(|i| q(i as f64 / 10.0)).collect();
        let sols = sweep_two_period(&unit(), &mus, &SolverOptions::default()).unwrap();
        for (s, m) in sols.iter().zip(&mus) {
            assert_eq!(s.mu, m.get());
        }
    }
}
