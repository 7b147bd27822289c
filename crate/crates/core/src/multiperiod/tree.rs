use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pool::{LaborPool, ProductivityDistribution, QuitFactor};

/// What a worker did at the end of one period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Move {
    Stayed,
    Left,
}

/// Employment history, oldest move first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct History(pub Vec<Move>);

impl History {
    pub fn moves(&self) -> &[Move] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Position of this history in the breadth-first node order.
    pub fn index(&self) -> usize {
        self.0
            .iter()
            .fold(0, |i, m| 2 * i + 1 + usize::from(*m == Move::Left))
    }

    fn child(&self, m: Move) -> History {
        let mut v = self.0.clone();
        v.push(m);
        History(v)
    }

    /// Conventional market name for the histories of the three-period model.
    pub fn market_name(&self) -> Option<&'static str> {
        match self.to_string().as_str() {
            "" => Some("entry"),
            "L" => Some("second"),
            "SL" => Some("third"),
            "LL" => Some("double_second"),
            _ => None,
        }
    }
}

impl fmt::Display for History {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.0 {
            f.write_str(match m {
                Move::Stayed => "S",
                Move::Left => "L",
            })?;
        }
        Ok(())
    }
}

impl From<History> for String {
    fn from(h: History) -> String {
        h.to_string()
    }
}

impl TryFrom<String> for History {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl std::str::FromStr for History {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'S' => Ok(Move::Stayed),
                'L' => Ok(Move::Left),
                _ => Err(Error::InvalidParameter(format!("bad history character {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(History)
    }
}

/// A group of workers sharing one employment history.
///
/// Nodes whose history ends in [`Move::Left`] are off-firm markets; the
/// others are workers retained by their current employer.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketNode {
    pub history: History,
    /// Zero-based period in which this group works.
    pub period: u32,
    pub pool: LaborPool,
    /// Firing threshold applied at the end of this period (non-terminal nodes).
    pub threshold: Option<f64>,
    /// Wage paid to this group during its period, once solved.
    pub wage: Option<f64>,
}

impl MarketNode {
    pub fn is_off_firm_market(&self) -> bool {
        self.history.0.last() == Some(&Move::Left)
    }
}

/// Complete binary tree of employment histories for an `n`-period regime,
/// stored breadth-first: the children of node `i` are `2i+1` (stayed) and
/// `2i+2` (left).
#[derive(Debug, Clone, PartialEq)]
pub struct MarketTree {
    pub n_periods: u32,
    pub mu: QuitFactor,
    pub nodes: Vec<MarketNode>,
}

/// Largest horizon the tree builder accepts.
pub const MAX_TREE_PERIODS: u32 = 20;

/// Number of internal (threshold-carrying) nodes, `2^{n−1} − 1`.
pub fn internal_node_count(n_periods: u32) -> usize {
    (1usize << (n_periods - 1)) - 1
}

/// Off-firm sub-markets created by an `n`-period regime: `2^{n−1} − 1`.
pub fn submarket_count(n_periods: u32) -> u64 {
    assert!(n_periods >= 1, "regime needs at least one period");
    (1u64 << (n_periods - 1)) - 1
}

/// Replays the firing splits of an `n`-period regime.
///
/// `thresholds` lists one firing threshold per internal node in
/// breadth-first order (root first, then the retained and the departed
/// group of period two, and so on).
pub fn build_market_tree(
    dist: &ProductivityDistribution,
    mu: QuitFactor,
    n_periods: u32,
    thresholds: &[f64],
) -> Result<MarketTree> {
    if n_periods == 0 || n_periods > MAX_TREE_PERIODS {
        return Err(Error::OutOfRange {
            what: "n_periods",
            value: n_periods as f64,
            range: format!("[1, {MAX_TREE_PERIODS}]"),
        });
    }
    let internal = internal_node_count(n_periods);
    if thresholds.len() != internal {
        return Err(Error::InvalidParameter(format!(
            "{n_periods}-period tree needs {internal} thresholds, got {}",
            thresholds.len()
        )));
    }
    if let Some(&bad) = thresholds.iter().find(|t| t.is_nan()) {
        return Err(Error::InvalidThreshold(bad));
    }

    let total = 2 * internal + 1;
    let mut nodes: Vec<MarketNode> = Vec::with_capacity(total);
    nodes.push(MarketNode {
        history: History::default(),
        period: 0,
        pool: LaborPool::new(dist.clone()),
        threshold: thresholds.first().copied(),
        wage: None,
    });
    for i in 0..internal {
        let t = thresholds[i];
        let (leavers, stayers) = nodes[i].pool.firing_split(t, mu);
        if leavers.mass() < 0.0 || stayers.mass() < 0.0 {
            return Err(Error::InvalidThreshold(t));
        }
        let period = nodes[i].period + 1;
        for (m, pool) in [(Move::Stayed, stayers), (Move::Left, leavers)] {
            let history = nodes[i].history.child(m);
            let idx = history.index();
            nodes.push(MarketNode {
                threshold: thresholds.get(idx).copied(),
                history,
                period,
                pool,
                wage: None,
            });
        }
    }
    Ok(MarketTree {
        n_periods,
        mu,
        nodes,
    })
}

impl MarketTree {
    pub fn node(&self, history: &History) -> Option<&MarketNode> {
        self.nodes.get(history.index())
    }

    /// Looks a node up by its `S`/`L` label, e.g. `"SL"`.
    pub fn by_label(&self, label: &str) -> Option<&MarketNode> {
        label.parse::<History>().ok().and_then(|h| self.node(&h))
    }

    pub fn root(&self) -> &MarketNode {
        &self.nodes[0]
    }

    pub fn off_firm_markets(&self) -> impl Iterator<Item = &MarketNode> {
        self.nodes.iter().filter(|n| n.is_off_firm_market())
    }

    /// Groups in the final period; together they partition the cohort.
    pub fn terminal_nodes(&self) -> impl Iterator<Item = &MarketNode> {
        let last = self.n_periods - 1;
        self.nodes.iter().filter(move |n| n.period == last)
    }

    /// Attaches a wage to every node through `wage_of(history)`.
    pub fn assign_wages(&mut self, wage_of: impl Fn(&History) -> Option<f64>) {
        for node in &mut self.nodes {
            node.wage = wage_of(&node.history);
        }
    }

    /// Largest absolute gap between a node's mass and the sum of its
    /// children's masses.
    pub fn max_conservation_error(&self) -> f64 {
        let internal = internal_node_count(self.n_periods);
        (0..internal)
            .map(|i| {
                let parent = self.nodes[i].pool.mass();
                let kids = self.nodes[2 * i + 1].pool.mass() + self.nodes[2 * i + 2].pool.mass();
                (parent - kids).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn summary(&self) -> TreeSummary {
        TreeSummary {
            n_periods: self.n_periods,
            mu: self.mu.get(),
            submarkets: self.off_firm_markets().count() as u64,
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeSummary {
                    history: n.history.clone(),
                    name: n.history.market_name().map(str::to_owned),
                    period: n.period,
                    off_firm_market: n.is_off_firm_market(),
                    mass: n.pool.mass(),
                    mean: n.pool.mean().ok(),
                    threshold: n.threshold,
                    wage: n.wage,
                })
                .collect(),
        }
    }
}

/// Serializable view of a [`MarketTree`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeSummary {
    pub n_periods: u32,
    pub mu: f64,
    pub submarkets: u64,
    pub nodes: Vec<NodeSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSummary {
    pub history: History,
    pub name: Option<String>,
    pub period: u32,
    pub off_firm_market: bool,
    pub mass: f64,
    pub mean: Option<f64>,
    pub threshold: Option<f64>,
    pub wage: Option<f64>,
}
