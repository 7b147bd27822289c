//! Discretized principal-agent problem with hidden effort.
//!
//! The principal picks a sharing rule `s(x)` (one wage-grid level per
//! outcome) and a recommended effort to maximize `E{G(x − s(x))}` subject
//! to participation, `E{u(s)} − c(a) ≥ H̄`. The first-best ignores
//! incentives; the second-best also requires the recommended effort to be
//! a best response of the agent.
//!
//! Small instances are solved exactly by branch and bound over the wage
//! grid; larger ones fall back to coordinate ascent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on participation and incentive constraints. Agent
/// indifference within this slack is resolved in the principal's favour.
pub const CONSTRAINT_TOL: f64 = 1e-12;

/// Largest number of candidate rules (`levels^outcomes`) solved exactly.
pub const EXACT_LIMIT: f64 = 1e7;

/// Agent's utility of money, `u(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum AgentUtility {
    Linear,
    Sqrt,
    /// `ln(1 + s)`.
    Log1p,
    /// `s^{1−γ}/(1−γ)`, or `ln s` at `γ = 1`.
    Crra { gamma: f64 },
}

impl AgentUtility {
    pub fn eval(self, s: f64) -> f64 {
        match self {
            AgentUtility::Linear => s,
            AgentUtility::Sqrt => s.max(0.0).sqrt(),
            AgentUtility::Log1p => s.ln_1p(),
            AgentUtility::Crra { gamma } => crra(s, gamma),
        }
    }
}

/// Principal's utility of net output `G(x − s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PrincipalUtility {
    Neutral,
    Crra { gamma: f64 },
}

impl PrincipalUtility {
    pub fn eval(self, y: f64) -> f64 {
        match self {
            PrincipalUtility::Neutral => y,
            PrincipalUtility::Crra { gamma } => crra(y, gamma),
        }
    }
}

fn crra(x: f64, gamma: f64) -> f64 {
    if x <= 0.0 {
        return if gamma >= 1.0 { f64::NEG_INFINITY } else { 0.0 };
    }
    if (gamma - 1.0).abs() < 1e-12 {
        x.ln()
    } else {
        x.powf(1.0 - gamma) / (1.0 - gamma)
    }
}

/// A discretized principal-agent instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractProblem {
    pub outcomes: Vec<f64>,
    /// Cost `c(a)` of each effort level, non-decreasing.
    pub effort_costs: Vec<f64>,
    /// `density[a][j]`: probability of outcome `j` under effort `a`.
    pub density: Vec<Vec<f64>>,
    pub agent: AgentUtility,
    pub principal: PrincipalUtility,
    /// Reservation utility `H̄`.
    pub reservation: f64,
    /// Admissible wages, increasing.
    pub wage_grid: Vec<f64>,
}

/// `levels` evenly spaced wages on `[0, max outcome]`.
pub fn default_wage_grid(outcomes: &[f64], levels: usize) -> Vec<f64> {
    let top = outcomes.iter().copied().fold(0.0, f64::max);
    let levels = levels.max(2);
    (0..levels)
        .map(|i| top * i as f64 / (levels - 1) as f64)
        .collect()
}

impl ContractProblem {
    pub fn new(
        outcomes: Vec<f64>,
        effort_costs: Vec<f64>,
        density: Vec<Vec<f64>>,
        agent: AgentUtility,
        principal: PrincipalUtility,
        reservation: f64,
        wage_grid: Vec<f64>,
    ) -> Result<Self> {
        let p = ContractProblem {
            outcomes,
            effort_costs,
            density,
            agent,
            principal,
            reservation,
            wage_grid,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.outcomes.is_empty() || self.effort_costs.is_empty() || self.wage_grid.is_empty() {
            return bad("outcomes, efforts and wage grid must be non-empty".into());
        }
        if self.density.len() != self.effort_costs.len() {
            return bad("one density column per effort is required".into());
        }
        for (a, col) in self.density.iter().enumerate() {
            if col.len() != self.outcomes.len() {
                return bad(format!("density for effort {a} has the wrong length"));
            }
            if col.iter().any(|&f| !(f >= 0.0)) {
                return bad(format!("density for effort {a} has a negative entry"));
            }
            let sum: f64 = col.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return bad(format!("density for effort {a} sums to {sum}, not 1"));
            }
        }
        if self.effort_costs.windows(2).any(|w| w[1] < w[0]) {
            return bad("effort costs must be non-decreasing".into());
        }
        if self.wage_grid.windows(2).any(|w| w[1] <= w[0]) {
            return bad("wage grid must be strictly increasing".into());
        }
        let u: Vec<f64> = self.wage_grid.iter().map(|&s| self.agent.eval(s)).collect();
        let finite: Vec<usize> = (0..u.len()).filter(|&i| u[i].is_finite()).collect();
        if finite.windows(2).any(|w| u[w[1]] <= u[w[0]]) {
            return bad("agent utility must be strictly increasing on the wage grid".into());
        }
        for w in finite.windows(3) {
            let (s0, s1, s2) = (self.wage_grid[w[0]], self.wage_grid[w[1]], self.wage_grid[w[2]]);
            let slope_lo = (u[w[1]] - u[w[0]]) / (s1 - s0);
            let slope_hi = (u[w[2]] - u[w[1]]) / (s2 - s1);
            if slope_hi > slope_lo * (1.0 + 1e-9) + 1e-12 {
                return bad("agent utility must be concave on the wage grid".into());
            }
        }
        Ok(())
    }

    pub fn n_outcomes(&self) -> usize {
        self.outcomes.len()
    }

    pub fn n_efforts(&self) -> usize {
        self.effort_costs.len()
    }

    /// True when the outcome distribution does not depend on effort.
    pub fn effort_independent(&self) -> bool {
        self.density.iter().all(|col| col == &self.density[0])
    }

    /// `E{G(x − s(x)) | a}` for a rule given as wage-grid levels.
    pub fn principal_value(&self, levels: &[usize], effort: usize) -> f64 {
        let f = &self.density[effort];
        (0..self.outcomes.len())
            .filter(|&j| f[j] > 0.0)
            .map(|j| f[j] * self.principal.eval(self.outcomes[j] - self.wage_grid[levels[j]]))
            .sum()
    }

    /// `E{u(s(x)) | a} − c(a)`.
    pub fn agent_value(&self, levels: &[usize], effort: usize) -> f64 {
        self.expected_utility(levels, effort) - self.effort_costs[effort]
    }

    fn expected_utility(&self, levels: &[usize], effort: usize) -> f64 {
        let f = &self.density[effort];
        (0..self.outcomes.len())
            .filter(|&j| f[j] > 0.0)
            .map(|j| f[j] * self.agent.eval(self.wage_grid[levels[j]]))
            .sum()
    }

    /// Participation at `effort`.
    pub fn satisfies_ir(&self, levels: &[usize], effort: usize) -> bool {
        self.agent_value(levels, effort) >= self.reservation - CONSTRAINT_TOL
    }

    /// `effort` is a best response of the agent to the rule.
    pub fn satisfies_ic(&self, levels: &[usize], effort: usize) -> bool {
        let own = self.agent_value(levels, effort);
        (0..self.n_efforts()).all(|b| self.agent_value(levels, b) <= own + CONSTRAINT_TOL)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContractKind {
    FirstBest,
    SecondBest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Exact,
    CoordinateAscent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractSolution {
    pub kind: ContractKind,
    pub method: SolveMethod,
    /// Wage paid at each outcome.
    pub rule: Vec<f64>,
    /// Wage-grid index paid at each outcome.
    pub rule_levels: Vec<usize>,
    pub effort: usize,
    pub effort_cost: f64,
    pub principal_value: f64,
    pub agent_value: f64,
}

/// Optimal contract ignoring the incentive constraint.
pub fn solve_first_best(p: &ContractProblem) -> Result<ContractSolution> {
    solve(p, ContractKind::FirstBest)
}

/// Optimal contract with the recommended effort a best response.
pub fn solve_second_best(p: &ContractProblem) -> Result<ContractSolution> {
    solve(p, ContractKind::SecondBest)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WelfareGap {
    pub first_best: ContractSolution,
    pub second_best: ContractSolution,
    /// First-best minus second-best principal value.
    pub gap: f64,
    /// Second-best effort is cheaper (lower) than first-best effort.
    pub effort_lower: bool,
}

pub fn welfare_gap(p: &ContractProblem) -> Result<WelfareGap> {
    let first_best = solve_first_best(p)?;
    let second_best = solve_second_best(p)?;
    Ok(WelfareGap {
        gap: first_best.principal_value - second_best.principal_value,
        effort_lower: second_best.effort_cost < first_best.effort_cost,
        first_best,
        second_best,
    })
}

fn candidate_count(p: &ContractProblem) -> f64 {
    (p.wage_grid.len() as f64).powi(p.n_outcomes() as i32)
}

/// Candidate ordering: higher principal value wins; ties go to the rule
/// with the narrower wage spread, then the lexicographically smaller one.
fn better(p: &ContractProblem, cand: (&[usize], f64), best: Option<(&[usize], f64)>) -> bool {
    let Some((best_rule, best_value)) = best else {
        return true;
    };
    let (rule, value) = cand;
    if value > best_value + CONSTRAINT_TOL {
        return true;
    }
    if value < best_value - CONSTRAINT_TOL {
        return false;
    }
    let spread = |r: &[usize]| {
        let lo = r.iter().map(|&l| p.wage_grid[l]).fold(f64::INFINITY, f64::min);
        let hi = r.iter().map(|&l| p.wage_grid[l]).fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    };
    let (a, b) = (spread(rule), spread(best_rule));
    if a != b {
        return a < b;
    }
    rule < best_rule
}

fn solve(p: &ContractProblem, kind: ContractKind) -> Result<ContractSolution> {
    let exact = candidate_count(p) <= EXACT_LIMIT;
    let mut best: Option<(Vec<usize>, usize, f64)> = None;
    for effort in 0..p.n_efforts() {
        let found = if exact {
            BranchAndBound::new(p, effort, kind).run()
        } else {
            coordinate_ascent(p, effort, kind)
        };
        if let Some((rule, value)) = found {
            // a later effort must be strictly better to displace an earlier one
            let replace = match &best {
                None => true,
                Some((_, _, v)) => value > *v + CONSTRAINT_TOL,
            };
            if replace {
                best = Some((rule, effort, value));
            }
        }
    }
    let (levels, effort, _) = best.ok_or(Error::Infeasible)?;
    Ok(ContractSolution {
        kind,
        method: if exact {
            SolveMethod::Exact
        } else {
            SolveMethod::CoordinateAscent
        },
        rule: levels.iter().map(|&l| p.wage_grid[l]).collect(),
        principal_value: p.principal_value(&levels, effort),
        agent_value: p.agent_value(&levels, effort),
        effort_cost: p.effort_costs[effort],
        effort,
        rule_levels: levels,
    })
}

/// Depth-first search over outcomes with optimistic bounds on the
/// objective and on every constraint.
struct BranchAndBound<'a> {
    p: &'a ContractProblem,
    effort: usize,
    /// Per outcome and level: principal term, agent utility term.
    gain: Vec<Vec<f64>>,
    util: Vec<Vec<f64>>,
    /// Per rival effort, outcome and level: incentive-constraint term.
    ic_terms: Vec<Vec<Vec<f64>>>,
    ic_required: Vec<f64>,
    /// Suffix sums of per-outcome maxima.
    gain_bound: Vec<f64>,
    util_bound: Vec<f64>,
    ic_bound: Vec<Vec<f64>>,
    ir_required: f64,
    rule: Vec<usize>,
    best: Option<(Vec<usize>, f64)>,
}

impl<'a> BranchAndBound<'a> {
    fn new(p: &'a ContractProblem, effort: usize, kind: ContractKind) -> Self {
        let k = p.n_outcomes();
        let f = &p.density[effort];
        let term = |prob: f64, v: f64| if prob == 0.0 { 0.0 } else { prob * v };
        let gain: Vec<Vec<f64>> = (0..k)
            .map(|j| {
                p.wage_grid
                    .iter()
                    .map(|&s| term(f[j], p.principal.eval(p.outcomes[j] - s)))
                    .collect()
            })
            .collect();
        let u: Vec<f64> = p.wage_grid.iter().map(|&s| p.agent.eval(s)).collect();
        let util: Vec<Vec<f64>> = (0..k)
            .map(|j| u.iter().map(|&v| term(f[j], v)).collect())
            .collect();
        let rivals: Vec<usize> = match kind {
            ContractKind::FirstBest => vec![],
            ContractKind::SecondBest => (0..p.n_efforts()).filter(|&b| b != effort).collect(),
        };
        let ic_terms: Vec<Vec<Vec<f64>>> = rivals
            .iter()
            .map(|&b| {
                (0..k)
                    .map(|j| {
                        u.iter()
                            .map(|&v| term(f[j], v) - term(p.density[b][j], v))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let ic_required = rivals
            .iter()
            .map(|&b| p.effort_costs[effort] - p.effort_costs[b])
            .collect();
        let suffix = |rows: &Vec<Vec<f64>>| {
            let mut out = vec![0.0; k + 1];
            for j in (0..k).rev() {
                let m = rows[j].iter().copied().fold(f64::NEG_INFINITY, f64::max);
                out[j] = out[j + 1] + m;
            }
            out
        };
        BranchAndBound {
            gain_bound: suffix(&gain),
            util_bound: suffix(&util),
            ic_bound: ic_terms.iter().map(suffix).collect(),
            ir_required: p.reservation + p.effort_costs[effort],
            gain,
            util,
            ic_terms,
            ic_required,
            p,
            effort,
            rule: vec![0; k],
            best: None,
        }
    }

    fn run(mut self) -> Option<(Vec<usize>, f64)> {
        let ic = vec![0.0; self.ic_terms.len()];
        self.descend(0, 0.0, 0.0, ic);
        self.best
    }

    fn descend(&mut self, j: usize, gain: f64, util: f64, ic: Vec<f64>) {
        if let Some((_, v)) = &self.best {
            if gain + self.gain_bound[j] < v - CONSTRAINT_TOL {
                return;
            }
        }
        if util + self.util_bound[j] < self.ir_required - CONSTRAINT_TOL {
            return;
        }
        for (c, acc) in ic.iter().enumerate() {
            if acc + self.ic_bound[c][j] < self.ic_required[c] - CONSTRAINT_TOL {
                return;
            }
        }
        if j == self.p.n_outcomes() {
            let p = self.p;
            let (rule, effort) = (&self.rule, self.effort);
            let feasible = p.satisfies_ir(rule, effort)
                && (self.ic_terms.is_empty() || p.satisfies_ic(rule, effort));
            if feasible {
                let value = p.principal_value(rule, effort);
                let incumbent = self.best.as_ref().map(|(r, v)| (r.as_slice(), *v));
                if better(p, (rule, value), incumbent) {
                    self.best = Some((rule.clone(), value));
                }
            }
            return;
        }
        for level in 0..self.p.wage_grid.len() {
            if gain.is_infinite() && gain < 0.0 {
                return;
            }
            self.rule[j] = level;
            let next_ic: Vec<f64> = ic
                .iter()
                .enumerate()
                .map(|(c, acc)| acc + self.ic_terms[c][j][level])
                .collect();
            let g = gain + self.gain[j][level];
            let u = util + self.util[j][level];
            if g == f64::NEG_INFINITY || u == f64::NEG_INFINITY {
                continue;
            }
            self.descend(j + 1, g, u, next_ic);
        }
    }
}

/// Local search for instances too large to enumerate: start from the best
/// feasible bonus rule and improve one outcome at a time.
fn coordinate_ascent(
    p: &ContractProblem,
    effort: usize,
    kind: ContractKind,
) -> Option<(Vec<usize>, f64)> {
    let k = p.n_outcomes();
    let feasible = |r: &[usize]| {
        p.satisfies_ir(r, effort) && (kind == ContractKind::FirstBest || p.satisfies_ic(r, effort))
    };
    let (mut rule, mut value) = bonus_rules(p, effort)
        .filter(|r| feasible(r))
        .map(|r| {
            let v = p.principal_value(&r, effort);
            (r, v)
        })
        .fold(None, |best: Option<(Vec<usize>, f64)>, (r, v)| match best {
            Some((_, bv)) if bv >= v => best,
            _ => Some((r, v)),
        })?;
    loop {
        let mut improved = false;
        for j in 0..k {
            for level in 0..p.wage_grid.len() {
                let old = rule[j];
                rule[j] = level;
                let v = p.principal_value(&rule, effort);
                if feasible(&rule) && v > value + CONSTRAINT_TOL {
                    value = v;
                    improved = true;
                } else {
                    rule[j] = old;
                }
            }
        }
        if !improved {
            return Some((rule, value));
        }
    }
}

/// Constant rules and two-level rules paying a bonus on the outcomes most
/// indicative of `effort` relative to its rivals.
fn bonus_rules(p: &ContractProblem, effort: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
    let k = p.n_outcomes();
    let levels = p.wage_grid.len();
    let score = |j: usize| -> f64 {
        (0..p.n_efforts())
            .map(|b| p.density[effort][j] - p.density[b][j])
            .sum()
    };
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| score(b).total_cmp(&score(a)));
    (0..levels).flat_map(move |lo| {
        let order = order.clone();
        (lo..levels).flat_map(move |hi| {
            let order = order.clone();
            (1..=k).map(move |top| {
                let mut r = vec![lo; k];
                for &j in &order[..top] {
                    r[j] = hi;
                }
                r
            })
        })
    })
}
