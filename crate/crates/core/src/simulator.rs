//! Agent-based replay of hiring, firing and quitting.
//!
//! Every agent draws from its own ChaCha stream (seed, agent index), so a
//! run is reproducible bit for bit whatever the thread count. Agents are
//! processed in fixed-size chunks whose partial sums are combined by a
//! pairwise reduction in chunk order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiperiod::{build_market_tree, internal_node_count, History, Move, ThreePeriodWages};
use crate::pool::{ProductivityDistribution, QuitFactor};

const CHUNK: u64 = 4096;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959963984540054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    TwoPeriod,
    ThreePeriod,
}

impl Regime {
    pub fn n_periods(self) -> u32 {
        match self {
            Regime::TwoPeriod => 2,
            Regime::ThreePeriod => 3,
        }
    }

    /// Length of the wage vector: `[w0, w1]` or `[w0, w1, w+, w2, w2']`.
    pub fn n_wages(self) -> usize {
        match self {
            Regime::TwoPeriod => 2,
            Regime::ThreePeriod => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub n_agents: u64,
    pub seed: u64,
    pub regime: Regime,
    pub dist: ProductivityDistribution,
    pub mu: QuitFactor,
    pub wages: Vec<f64>,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_agents == 0 {
            return Err(Error::InvalidParameter("n_agents must be at least 1".into()));
        }
        if self.wages.len() != self.regime.n_wages() {
            return Err(Error::InvalidParameter(format!(
                "{:?} needs {} wages, got {}",
                self.regime,
                self.regime.n_wages(),
                self.wages.len()
            )));
        }
        if self.wages.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter("wages must be finite".into()));
        }
        Ok(())
    }

    /// Firing thresholds in breadth-first tree order.
    pub fn thresholds(&self) -> Vec<f64> {
        match self.regime {
            Regime::TwoPeriod => vec![self.wages[1]],
            Regime::ThreePeriod => self.three_period_wages().thresholds().to_vec(),
        }
    }

    /// Wage paid to each tree node in breadth-first order.
    pub fn node_wages(&self) -> Vec<f64> {
        let n = self.regime.n_periods();
        let total = 2 * internal_node_count(n) + 1;
        (0..total)
            .map(|i| {
                let h = history_of(i);
                match self.regime {
                    Regime::TwoPeriod => {
                        if h.is_empty() {
                            self.wages[0]
                        } else {
                            self.wages[1]
                        }
                    }
                    Regime::ThreePeriod => self
                        .three_period_wages()
                        .wage_of(&h)
                        .expect("three-period history"),
                }
            })
            .collect()
    }

    fn three_period_wages(&self) -> ThreePeriodWages {
        let mut a = [0.0; 5];
        a.copy_from_slice(&self.wages);
        ThreePeriodWages::from_array(a)
    }
}

/// Inverse of [`History::index`].
fn history_of(mut i: usize) -> History {
    let mut moves = Vec::new();
    while i > 0 {
        moves.push(if i % 2 == 1 { Move::Stayed } else { Move::Left });
        i = (i - 1) / 2;
    }
    moves.reverse();
    History(moves)
}

/// Index of the node whose firm employs the group at node `i`: the
/// nearest ancestor (or `i` itself) that is the root or an off-firm market.
fn employer_of(mut i: usize) -> usize {
    while i > 0 && i % 2 == 1 {
        i = (i - 1) / 2;
    }
    i
}

/// Path of one sampled worker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub agent: u64,
    pub theta: f64,
    pub history: History,
    /// Node visited in each period, breadth-first index.
    pub nodes: Vec<usize>,
    pub wages: Vec<f64>,
}

struct Agent {
    theta: f64,
    nodes: Vec<usize>,
}

fn replay(cfg: &SimulationConfig, thresholds: &[f64], agent: u64) -> Agent {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(agent);
    let theta = cfg.dist.quantile(rng.random::<f64>());
    let mu = cfg.mu.get();
    let periods = cfg.regime.n_periods() as usize;
    let mut nodes = Vec::with_capacity(periods);
    let mut i = 0usize;
    nodes.push(i);
    for _ in 1..periods {
        let quit = rng.random::<f64>() < mu;
        let leaves = theta < thresholds[i] || quit;
        i = 2 * i + if leaves { 2 } else { 1 };
        nodes.push(i);
    }
    Agent { theta, nodes }
}

/// Replays a single agent of the population.
pub fn agent_trajectory(cfg: &SimulationConfig, agent: u64) -> Result<Trajectory> {
    cfg.validate()?;
    let thresholds = cfg.thresholds();
    let wages = cfg.node_wages();
    let a = replay(cfg, &thresholds, agent);
    let last = *a.nodes.last().expect("at least one period");
    Ok(Trajectory {
        agent,
        theta: a.theta,
        history: history_of(last),
        wages: a.nodes.iter().map(|&n| wages[n]).collect(),
        nodes: a.nodes,
    })
}

#[derive(Debug, Clone, Default)]
struct Acc {
    count: Vec<u64>,
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
    /// Per employer node: profit from the workers it hired.
    profit: Vec<f64>,
    profit_sq: Vec<f64>,
}

impl Acc {
    fn new(nodes: usize) -> Self {
        Acc {
            count: vec![0; nodes],
            sum: vec![0.0; nodes],
            sum_sq: vec![0.0; nodes],
            profit: vec![0.0; nodes],
            profit_sq: vec![0.0; nodes],
        }
    }

    fn merge(mut self, o: &Acc) -> Acc {
        for i in 0..self.count.len() {
            self.count[i] += o.count[i];
            self.sum[i] += o.sum[i];
            self.sum_sq[i] += o.sum_sq[i];
            self.profit[i] += o.profit[i];
            self.profit_sq[i] += o.profit_sq[i];
        }
        self
    }
}

fn pairwise(parts: &[Acc]) -> Acc {
    match parts {
        [] => unreachable!("at least one chunk"),
        [one] => one.clone(),
        _ => {
            let (l, r) = parts.split_at(parts.len() / 2);
            pairwise(l).merge(&pairwise(r))
        }
    }
}

fn run_chunk(cfg: &SimulationConfig, thresholds: &[f64], wages: &[f64], lo: u64, hi: u64) -> Acc {
    let mut acc = Acc::new(wages.len());
    let mut profit = vec![0.0; wages.len()];
    for agent in lo..hi {
        let a = replay(cfg, thresholds, agent);
        for &n in &a.nodes {
            acc.count[n] += 1;
            acc.sum[n] += a.theta;
            acc.sum_sq[n] += a.theta * a.theta;
            profit[employer_of(n)] += a.theta - wages[n];
        }
        for &n in &a.nodes {
            let e = employer_of(n);
            if n == e {
                acc.profit[e] += profit[e];
                acc.profit_sq[e] += profit[e] * profit[e];
            }
        }
        for &n in &a.nodes {
            profit[employer_of(n)] = 0.0;
        }
    }
    acc
}

/// Empirical statistics of one node of the market tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketStats {
    pub history: History,
    pub name: Option<String>,
    pub period: u32,
    pub off_firm_market: bool,
    pub count: u64,
    /// Share of the entering cohort in this group.
    pub mass_share: f64,
    pub analytic_mass: f64,
    pub mean: Option<f64>,
    pub analytic_mean: Option<f64>,
    pub std_error: Option<f64>,
    pub stderr_halfwidth: Option<f64>,
    pub wage: f64,
    /// Hiring wage at which the hiring firm breaks even on the sampled
    /// workers, given the later wages it pays. Hiring nodes only.
    pub break_even_wage: Option<f64>,
    /// Hiring firm's profit per entering worker. Hiring nodes only.
    pub firm_profit_per_capita: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub n_agents: u64,
    pub seed: u64,
    pub regime: Regime,
    pub mu: f64,
    pub wages: Vec<f64>,
    pub markets: Vec<MarketStats>,
    /// Entry firm's total profit across periods, per entering worker.
    pub entry_profit_per_capita: f64,
    pub entry_profit_halfwidth: f64,
}

impl SimulationReport {
    pub fn market(&self, label: &str) -> Option<&MarketStats> {
        self.markets.iter().find(|m| m.history.to_string() == label)
    }
}

/// Runs the population with the rayon pool of the caller.
pub fn simulate(cfg: &SimulationConfig) -> Result<SimulationReport> {
    cfg.validate()?;
    let thresholds = cfg.thresholds();
    let wages = cfg.node_wages();
    let n = cfg.n_agents;
    let chunks: Vec<Acc> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| run_chunk(cfg, &thresholds, &wages, c * CHUNK, ((c + 1) * CHUNK).min(n)))
        .collect();
    let acc = pairwise(&chunks);

    let tree = build_market_tree(&cfg.dist, cfg.mu, cfg.regime.n_periods(), &thresholds)?;
    let total = tree.root().pool.mass();
    let nf = n as f64;
    let markets = (0..wages.len())
        .map(|i| {
            let node = &tree.nodes[i];
            let count = acc.count[i];
            let c = count as f64;
            let mean = (count > 0).then(|| acc.sum[i] / c);
            let std_error = (count > 1).then(|| {
                let m = acc.sum[i] / c;
                let var = ((acc.sum_sq[i] - c * m * m) / (c - 1.0)).max(0.0);
                (var / c).sqrt()
            });
            let hires = employer_of(i) == i;
            let break_even_wage = (hires && count > 0).then(|| {
                // later wages the firm pays to the workers it keeps
                let mut owed = acc.sum[i];
                let mut j = i;
                while 2 * j + 1 < wages.len() {
                    j = 2 * j + 1;
                    owed += acc.sum[j] - acc.count[j] as f64 * wages[j];
                }
                owed / c
            });
            MarketStats {
                history: node.history.clone(),
                name: node.history.market_name().map(str::to_owned),
                period: node.period,
                off_firm_market: node.is_off_firm_market(),
                count,
                mass_share: c / nf,
                analytic_mass: node.pool.mass() / total,
                mean,
                analytic_mean: node.pool.mean().ok(),
                stderr_halfwidth: std_error.map(|s| Z95 * s),
                std_error,
                wage: wages[i],
                break_even_wage,
                firm_profit_per_capita: hires.then(|| acc.profit[i] / nf),
            }
        })
        .collect();

    let p = acc.profit[0] / nf;
    let var = if n > 1 {
        ((acc.profit_sq[0] - nf * p * p) / (nf - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(SimulationReport {
        n_agents: n,
        seed: cfg.seed,
        regime: cfg.regime,
        mu: cfg.mu.get(),
        wages: cfg.wages.clone(),
        markets,
        entry_profit_per_capita: p,
        entry_profit_halfwidth: Z95 * (var / nf).sqrt(),
    })
}

/// Entry firm's profit per capita when paying `cfg.wages`.
pub fn empirical_zero_profit(cfg: &SimulationConfig) -> Result<f64> {
    simulate(cfg).map(|r| r.entry_profit_per_capita)
}
