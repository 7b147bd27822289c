//! Three-period regime: firing is allowed at the end of periods one and two.
//!
//! Market tree (S = retained, L = left):
//!
//! ```text
//! entry (w0) ──S── retained (w+) ──S── retained twice (w2)
//!     │                  └──────L── third market (w2)
//!     └────L── second market (w1) ──S── retained by second employer (w2')
//!                        └──────L── double second market (w2')
//! ```
//!
//! Every employer keeps the workers worth at least the wage it pays
//! retained workers, so the thresholds are `w+` at the end of period one,
//! and `w2` / `w2'` at the end of period two. The five conditions:
//!
//! 1. `w2 = mean(third market)` at threshold `w2`;
//! 2. `w2' = mean(double second market)` at threshold `w2'`;
//! 3. a retained random quitter is indifferent: `w1 + w2' = w+ + w2`;
//! 4. entry employers break even over three periods;
//! 5. second-market employers break even over periods two and three.
//!
//! Given `w+`, conditions 1–2 are one-dimensional fixed points and 5 is
//! explicit in `w1`, so the system reduces to a scalar root in `w+`
//! (condition 3), after which condition 4 gives `w0` directly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{build_market_tree, History, MarketTree};
use crate::equilibrium::{pool_fixed_point, Clearing};
use crate::error::{Error, Result};
use crate::pool::{LaborPool, ProductivityDistribution, QuitFactor};
use crate::report::{Inequality, InequalityReport};
use crate::solver::{scan_roots, SolverOptions};

/// Grid points for the outer scan over `w+`.
const OUTER_SCAN_POINTS: usize = 256;
/// Damping of the full-system fixed-point iteration.
const DAMPING: f64 = 0.5;

/// The five equilibrium wages of the three-period regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreePeriodWages {
    pub w0: f64,
    pub w1: f64,
    pub w_plus: f64,
    pub w2: f64,
    pub w2p: f64,
}

impl ThreePeriodWages {
    pub fn to_array(self) -> [f64; 5] {
        [self.w0, self.w1, self.w_plus, self.w2, self.w2p]
    }

    pub fn from_array(a: [f64; 5]) -> Self {
        ThreePeriodWages {
            w0: a[0],
            w1: a[1],
            w_plus: a[2],
            w2: a[3],
            w2p: a[4],
        }
    }

    /// Firing thresholds in breadth-first tree order.
    pub fn thresholds(&self) -> [f64; 3] {
        [self.w_plus, self.w2, self.w2p]
    }

    /// Wage paid to the group with the given history.
    pub fn wage_of(&self, h: &History) -> Option<f64> {
        Some(match h.to_string().as_str() {
            "" => self.w0,
            "S" => self.w_plus,
            "L" => self.w1,
            "SS" | "SL" => self.w2,
            "LS" | "LL" => self.w2p,
            _ => return None,
        })
    }

    fn max_abs_diff(&self, o: &Self) -> f64 {
        self.to_array()
            .iter()
            .zip(o.to_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Head-counts of every group, derived from the market tree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Masses {
    /// Entry cohort.
    pub n: f64,
    /// Second market.
    pub n1: f64,
    /// Retained after period one.
    pub q1: f64,
    /// Third market.
    pub n2: f64,
    /// Retained after both periods by the entry employer.
    pub q2: f64,
    /// Double second market.
    pub n2p: f64,
    /// Retained by the second-market employer.
    pub q2p: f64,
}

/// The same head-counts with single-period integral bounds, without
/// compounding survival factors. Diagnostic only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiteralMasses {
    pub n1: f64,
    pub q1: f64,
    pub n2: f64,
    pub q2: f64,
    pub n2p: f64,
    pub q2p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreePeriodSolution {
    pub mu: f64,
    pub wages: ThreePeriodWages,
    /// Entry pool mean.
    pub theta_bar: f64,
    /// Mean of workers retained after period one.
    pub theta_bar_q1: f64,
    /// Mean of workers retained through both periods.
    pub theta_bar_q2: f64,
    /// Mean of the second market.
    pub theta_bar_second: f64,
    /// Residuals of the five conditions; 4 and 5 are per entry worker.
    pub residuals: [f64; 5],
    pub masses: Masses,
    pub literal_masses: LiteralMasses,
    /// Every `w+` root found by the outer scan.
    pub w_plus_roots: Vec<f64>,
    pub multiple_equilibria: bool,
    /// `w+ < 0`: reported as found, but economically suspect.
    pub negative_w_plus: bool,
}

impl ThreePeriodSolution {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.abs()).fold(0.0, f64::max)
    }
}

/// Intermediate quantities for one trial `w+`.
struct Stage {
    w_plus: f64,
    w1: f64,
    w2: f64,
    w2p: f64,
}

impl Stage {
    fn indifference_gap(&self) -> f64 {
        self.w1 + self.w2p - self.w2 - self.w_plus
    }
}

fn terminal_wage(pool: &LaborPool, mu: QuitFactor, opts: &SolverOptions) -> Result<f64> {
    if pool.is_empty() {
        return Err(Error::DegenerateSystem("an intermediate pool is empty".into()));
    }
    match pool_fixed_point(pool, mu, opts)?.outcome {
        Clearing::Wage(w) => Ok(w),
        Clearing::Collapse => Err(Error::DegenerateSystem(
            "a final-period market collapses".into(),
        )),
    }
}

/// Break-even wage for employers hiring `hired` when they retain the part
/// at or above `keep_threshold` for one more period at that wage.
fn two_period_break_even(hired: &LaborPool, keep_threshold: f64, mu: QuitFactor) -> Result<f64> {
    let h = hired.moments();
    if h.mass <= 0.0 {
        return Err(Error::DegenerateSystem("an intermediate pool is empty".into()));
    }
    let kept = hired.firing_split(keep_threshold, mu).1.moments();
    Ok((h.first + kept.first - kept.mass * keep_threshold) / h.mass)
}

fn stage(root: &LaborPool, mu: QuitFactor, w_plus: f64, opts: &SolverOptions) -> Result<Stage> {
    let (left, kept) = root.firing_split(w_plus, mu);
    let w2 = terminal_wage(&kept, mu, opts)?;
    let w2p = terminal_wage(&left, mu, opts)?;
    let w1 = two_period_break_even(&left, w2p, mu)?;
    Ok(Stage { w_plus, w1, w2, w2p })
}

/// Entry wage from zero profit over three periods.
fn entry_wage(root: &LaborPool, mu: QuitFactor, w_plus: f64, w2: f64) -> f64 {
    let all = root.moments();
    let kept = root.firing_split(w_plus, mu).1;
    let k1 = kept.moments();
    let k2 = kept.firing_split(w2, mu).1.moments();
    (all.first + (k1.first - k1.mass * w_plus) + (k2.first - k2.mass * w2)) / all.mass
}

/// Builds the solved market tree with every node's wage attached.
pub fn three_period_tree(
    dist: &ProductivityDistribution,
    mu: QuitFactor,
    wages: &ThreePeriodWages,
) -> Result<MarketTree> {
    let mut tree = build_market_tree(dist, mu, 3, &wages.thresholds())?;
    tree.assign_wages(|h| wages.wage_of(h));
    Ok(tree)
}

/// Residuals of the five conditions at an arbitrary wage vector,
/// evaluated on the market tree those wages induce.
pub fn residuals(
    dist: &ProductivityDistribution,
    mu: QuitFactor,
    wages: &ThreePeriodWages,
) -> Result<[f64; 5]> {
    let tree = three_period_tree(dist, mu, wages)?;
    let mean = |label: &str| -> Result<f64> {
        tree.by_label(label)
            .expect("three-period node")
            .pool
            .mean()
            .map_err(|_| Error::DegenerateSystem(format!("group {label:?} is empty")))
    };
    let mom = |label: &str| tree.by_label(label).expect("three-period node").pool.moments();
    let ThreePeriodWages {
        w0,
        w1,
        w_plus,
        w2,
        w2p,
    } = *wages;
    let all = mom("");
    let n = all.mass;
    let (s, ss, l, ls) = (mom("S"), mom("SS"), mom("L"), mom("LS"));
    Ok([
        w2 - mean("SL")?,
        w2p - mean("LL")?,
        w1 + w2p - w_plus - w2,
        ((all.first - n * w0) + (s.first - s.mass * w_plus) + (ss.first - ss.mass * w2)) / n,
        ((l.first - l.mass * w1) + (ls.first - ls.mass * w2p)) / n,
    ])
}

fn literal_masses(dist: &ProductivityDistribution, mu: f64, w: &ThreePeriodWages) -> LiteralMasses {
    let (lo, hi) = (dist.support_low(), dist.support_high());
    let m = |a: f64, b: f64| dist.moments_closed(a, b).mass;
    LiteralMasses {
        n1: m(lo, w.w_plus) + mu * m(w.w1, hi),
        q1: (1.0 - mu) * m(w.w_plus, hi),
        n2: (1.0 - mu) * (m(w.w_plus, hi) - m(w.w2, hi)),
        q2: (1.0 - mu) * m(w.w2, hi),
        n2p: m(lo, w.w_plus) - (1.0 - mu) * m(w.w2p, hi),
        q2p: (1.0 - mu) * m(w.w2p, hi),
    }
}

fn assemble(
    dist: &ProductivityDistribution,
    mu: QuitFactor,
    wages: ThreePeriodWages,
    w_plus_roots: Vec<f64>,
) -> Result<ThreePeriodSolution> {
    let tree = three_period_tree(dist, mu, &wages)?;
    let node = |l: &str| &tree.by_label(l).expect("three-period node").pool;
    let mean = |l: &str| {
        node(l)
            .mean()
            .map_err(|_| Error::DegenerateSystem(format!("group {l:?} is empty")))
    };
    Ok(ThreePeriodSolution {
        mu: mu.get(),
        theta_bar: dist.mean(),
        theta_bar_q1: mean("S")?,
        theta_bar_q2: mean("SS")?,
        theta_bar_second: mean("L")?,
        residuals: residuals(dist, mu, &wages)?,
        masses: Masses {
            n: node("").mass(),
            n1: node("L").mass(),
            q1: node("S").mass(),
            n2: node("SL").mass(),
            q2: node("SS").mass(),
            n2p: node("LL").mass(),
            q2p: node("LS").mass(),
        },
        literal_masses: literal_masses(dist, mu.get(), &wages),
        multiple_equilibria: w_plus_roots.len() > 1,
        negative_w_plus: wages.w_plus < 0.0,
        w_plus_roots,
        wages,
    })
}

fn wages_from_stage(root: &LaborPool, mu: QuitFactor, st: &Stage) -> ThreePeriodWages {
    ThreePeriodWages {
        w0: entry_wage(root, mu, st.w_plus, st.w2),
        w1: st.w1,
        w_plus: st.w_plus,
        w2: st.w2,
        w2p: st.w2p,
    }
}

/// Solves the five-equation three-period system.
///
/// The retained wage `w+` is located by scanning for sign changes of the
/// indifference gap and bisecting; the largest root is selected when there
/// are several. If the scan finds no root the damped full-system iteration
/// is tried from a handful of starts before giving up.
pub fn solve_three_period(
    dist: &ProductivityDistribution,
    mu: QuitFactor,
    opts: &SolverOptions,
) -> Result<ThreePeriodSolution> {
    if !mu.is_interior() {
        return Err(Error::OutOfRange {
            what: "mu",
            value: mu.get(),
            range: "(0, 1)".into(),
        });
    }
    let root = LaborPool::new(dist.clone());
    let (lo, hi) = (dist.support_low(), dist.support_high());
    let span = (hi - lo).max(1.0);

    let gap = |w: f64| stage(&root, mu, w, opts).ok().map(|s| s.indifference_gap());
    let outer = SolverOptions {
        scan_points: OUTER_SCAN_POINTS,
        ..*opts
    };
    let roots = scan_roots(gap, lo - span, hi, &outer).unwrap_or_default();

    if let Some(best) = roots.last() {
        let st = stage(&root, mu, best.x, opts)?;
        let wages = wages_from_stage(&root, mu, &st);
        let sol = assemble(dist, mu, wages, roots.iter().map(|r| r.x).collect())?;
        if sol.max_residual() <= opts.tol.max(1e-12) {
            return Ok(sol);
        }
        return Err(Error::NoConvergence {
            what: "three-period system".into(),
            best_residual: sol.max_residual(),
            best: wages.to_array().to_vec(),
        });
    }

    // no bracket: fall back to the damped iteration
    let report = multi_start(dist, mu, opts, 16, 0)?;
    let best = &report.runs[0];
    if best.converged {
        let wages = ThreePeriodWages::from_array(best.wages);
        return assemble(dist, mu, wages, vec![wages.w_plus]);
    }
    Err(Error::NoConvergence {
        what: "three-period system".into(),
        best_residual: best.residual_norm,
        best: best.wages.to_vec(),
    })
}

/// One run of the damped full-system iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiStartRun {
    pub start: [f64; 5],
    pub wages: [f64; 5],
    /// Largest absolute residual of the five conditions at `wages`.
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiStartReport {
    /// Sorted by residual norm, then lexicographically by wage vector.
    pub runs: Vec<MultiStartRun>,
    /// Largest distance of any converged run from the best one.
    pub spread: f64,
    /// All runs converged and lie within `AGREEMENT_TOL` of each other.
    pub agree: bool,
}

/// Tolerance within which multi-start runs count as the same equilibrium.
pub const AGREEMENT_TOL: f64 = 1e-6;

/// One application of the full-system map `v ↦ F(v)`.
fn system_map(
    root: &LaborPool,
    mu: QuitFactor,
    v: &ThreePeriodWages,
    w_plus_cap: f64,
) -> Result<ThreePeriodWages> {
    let w_plus = v.w_plus.min(w_plus_cap);
    let (left, kept) = root.firing_split(w_plus, mu);
    let w2 = kept.m_operator(v.w2, mu)?;
    let w2p = left.m_operator(v.w2p, mu)?;
    let w1 = two_period_break_even(&left, v.w2p, mu)?;
    Ok(ThreePeriodWages {
        w0: entry_wage(root, mu, w_plus, v.w2),
        w1,
        w_plus: v.w1 + v.w2p - v.w2,
        w2,
        w2p,
    })
}

fn damped_run(
    dist: &ProductivityDistribution,
    root: &LaborPool,
    mu: QuitFactor,
    start: [f64; 5],
    opts: &SolverOptions,
) -> MultiStartRun {
    let (lo, hi) = (dist.support_low(), dist.support_high());
    let cap = if dist.is_discrete() {
        hi
    } else {
        hi - 1e-6 * (hi - lo)
    };
    let budget = 25 * opts.max_iter;
    let mut v = ThreePeriodWages::from_array(start);
    let mut iterations = 0;
    while iterations < budget {
        iterations += 1;
        v.w_plus = v.w_plus.min(cap);
        let Ok(f) = system_map(root, mu, &v, cap) else {
            break;
        };
        let step = f.max_abs_diff(&v);
        let next = v
            .to_array()
            .iter()
            .zip(f.to_array())
            .map(|(a, b)| a + DAMPING * (b - a))
            .collect::<Vec<_>>();
        v = ThreePeriodWages::from_array([next[0], next[1], next[2], next[3], next[4]]);
        if step <= 1e-14 * v.w0.abs().max(1.0) {
            v = f;
            break;
        }
    }
    let residual_norm = residuals(dist, mu, &v)
        .map(|r| r.iter().map(|x| x.abs()).fold(0.0, f64::max))
        .unwrap_or(f64::INFINITY);
    MultiStartRun {
        start,
        wages: v.to_array(),
        residual_norm,
        iterations,
        converged: residual_norm <= opts.tol.max(1e-12),
    }
}

/// Runs the damped fixed-point iteration of the full five-equation system
/// from `starts` random points in `[θ_L, θ_H]⁵`.
///
/// Start `k` draws from its own ChaCha stream, and runs are sorted before
/// being returned, so the report does not depend on thread scheduling.
pub fn multi_start(
    dist: &ProductivityDistribution,
    mu: QuitFactor,
    opts: &SolverOptions,
    starts: usize,
    seed: u64,
) -> Result<MultiStartReport> {
    if starts == 0 {
        return Err(Error::InvalidParameter("need at least one start".into()));
    }
    let root = LaborPool::new(dist.clone());
    let (lo, hi) = (dist.support_low(), dist.support_high());
    let mut runs: Vec<MultiStartRun> = (0..starts)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let mut start = [0.0; 5];
            for s in &mut start {
                *s = lo + (hi - lo) * rng.random::<f64>();
            }
            damped_run(dist, &root, mu, start, opts)
        })
        .collect();
    runs.sort_by(|a, b| {
        a.residual_norm
            .total_cmp(&b.residual_norm)
            .then_with(|| {
                a.wages
                    .iter()
                    .zip(&b.wages)
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
    });
    let best = ThreePeriodWages::from_array(runs[0].wages);
    let spread = runs
        .iter()
        .filter(|r| r.converged)
        .map(|r| ThreePeriodWages::from_array(r.wages).max_abs_diff(&best))
        .fold(0.0, f64::max);
    let agree = runs.iter().all(|r| r.converged) && spread <= AGREEMENT_TOL;
    Ok(MultiStartReport { runs, spread, agree })
}

/// `w2' < w2 < θ̄_Q2`.
pub fn check_final_period_wages(sol: &ThreePeriodSolution) -> InequalityReport {
    let tol = tolerance(sol);
    let w = &sol.wages;
    InequalityReport {
        checks: vec![
            Inequality::less("w2p < w2", w.w2p, w.w2, tol),
            Inequality::less("w2 < theta_bar_q2", w.w2, sol.theta_bar_q2, tol),
        ],
    }
}

/// Second-period pay claims: retained workers earn less than leavers and
/// less than their own mean, leavers are overpaid, and the double second
/// market pays less than the second market.
///
/// The full chain also places `w+` below `w2'`; that comparison is
/// reported by [`second_period_chain`] and is not part of this suite.
pub fn check_second_period_wages(sol: &ThreePeriodSolution) -> InequalityReport {
    let tol = tolerance(sol);
    let w = &sol.wages;
    InequalityReport {
        checks: vec![
            Inequality::less("w_plus < w1", w.w_plus, w.w1, tol),
            Inequality::less("w_plus < theta_bar_q1", w.w_plus, sol.theta_bar_q1, tol),
            Inequality::less("theta_bar_q1 < theta_bar_q2", sol.theta_bar_q1, sol.theta_bar_q2, tol),
            Inequality::less("theta_bar_second < w1", sol.theta_bar_second, w.w1, tol),
            Inequality::less("w2p < w1", w.w2p, w.w1, tol),
        ],
    }
}

/// Pairwise links of the chain `w+ < w2' < θ̄ < w1`, with `θ̄`
/// read as the second-market mean.
pub fn second_period_chain(sol: &ThreePeriodSolution) -> InequalityReport {
    let tol = tolerance(sol);
    let w = &sol.wages;
    InequalityReport {
        checks: vec![
            Inequality::less("w_plus < w2p", w.w_plus, w.w2p, tol),
            Inequality::less("w2p < theta_bar_second", w.w2p, sol.theta_bar_second, tol),
            Inequality::less("theta_bar_second < w1", sol.theta_bar_second, w.w1, tol),
        ],
    }
}

fn tolerance(sol: &ThreePeriodSolution) -> f64 {
    1e-8 * sol.theta_bar.abs().max(1.0)
}
