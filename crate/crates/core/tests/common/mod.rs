#![allow(dead_code)]

use lemonlab::moral_hazard::{AgentUtility, ContractProblem, PrincipalUtility};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const SLACK: f64 = 1e-12;

fn sum_terms(f: &[f64], vals: impl Iterator<Item = f64>) -> f64 {
    f.iter()
        .zip(vals)
        .filter(|(p, _)| **p > 0.0)
        .map(|(p, v)| p * v)
        .sum()
}

/// Best principal value over every rule on the wage grid and every
/// effort, by exhaustive enumeration.
pub fn enumerate_best(p: &ContractProblem, incentive: bool) -> Option<f64> {
    let k = p.outcomes.len();
    let levels = p.wage_grid.len();
    let u: Vec<f64> = p.wage_grid.iter().map(|&s| p.agent.eval(s)).collect();
    let mut rule = vec![0usize; k];
    let mut best: Option<f64> = None;
    loop {
        let agent: Vec<f64> = (0..p.effort_costs.len())
            .map(|a| sum_terms(&p.density[a], rule.iter().map(|&l| u[l])) - p.effort_costs[a])
            .collect();
        for a in 0..p.effort_costs.len() {
            if agent[a] < p.reservation - SLACK {
                continue;
            }
            if incentive && agent.iter().any(|&v| v > agent[a] + SLACK) {
                continue;
            }
            let value = sum_terms(
                &p.density[a],
                (0..k).map(|j| p.principal.eval(p.outcomes[j] - p.wage_grid[rule[j]])),
            );
            if best.is_none_or(|b| value > b) {
                best = Some(value);
            }
        }
        // odometer over the wage levels
        let mut j = 0;
        loop {
            if j == k {
                return best;
            }
            rule[j] += 1;
            if rule[j] < levels {
                break;
            }
            rule[j] = 0;
            j += 1;
        }
    }
}

fn column(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let s: f64 = raw.iter().sum();
    let mut col: Vec<f64> = raw.iter().map(|x| x / s).collect();
    let tail: f64 = col[1..].iter().sum();
    col[0] = 1.0 - tail;
    col
}

/// A random desk-scale instance: up to 3 outcomes, 3 efforts and 25 wage
/// levels.
pub fn random_instance(rng: &mut ChaCha8Rng, effort_independent: bool) -> ContractProblem {
    let k = rng.random_range(2..=3);
    let efforts = rng.random_range(1..=3);
    let levels = rng.random_range(5..=25);
    let mut outcomes: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..6.0)).collect();
    outcomes.sort_by(f64::total_cmp);
    let mut costs: Vec<f64> = (0..efforts).map(|_| rng.random_range(0.0..0.8)).collect();
    costs.sort_by(f64::total_cmp);
    let density = if effort_independent {
        let c = column(rng, k);
        vec![c; efforts]
    } else {
        (0..efforts).map(|_| column(rng, k)).collect()
    };
    let agent = match rng.random_range(0..4) {
        0 => AgentUtility::Sqrt,
        1 => AgentUtility::Log1p,
        2 => AgentUtility::Crra { gamma: 0.5 },
        _ => AgentUtility::Linear,
    };
    let principal = if rng.random_bool(0.7) {
        PrincipalUtility::Neutral
    } else {
        PrincipalUtility::Crra { gamma: 0.5 }
    };
    let top = outcomes[k - 1].max(1.0);
    let grid = (0..levels).map(|i| top * i as f64 / (levels - 1) as f64).collect();
    let reservation = rng.random_range(0.0..0.8);
    ContractProblem::new(outcomes, costs, density, agent, principal, reservation, grid)
        .expect("generated instances are valid")
}
