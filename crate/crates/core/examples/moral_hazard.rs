//! Hidden effort: first-best and second-best sharing rules on a two-outcome,
//! two-effort instance, and the gap between them.
//!
//! ```text
//! cargo run --example moral_hazard
//! ```

use lemonlab::moral_hazard::{default_wage_grid, welfare_gap, AgentUtility, ContractProblem, PrincipalUtility};

fn main() -> lemonlab::Result<()> {
    let outcomes = vec![0.0, 4.0];
    let problem = ContractProblem::new(
        outcomes.clone(),
        vec![0.0, 0.5],
        vec![vec![0.8, 0.2], vec![0.2, 0.8]],
        AgentUtility::Sqrt,
        PrincipalUtility::Neutral,
        0.5,
        default_wage_grid(&outcomes, 21),
    )?;

    let g = welfare_gap(&problem)?;
    for s in [&g.first_best, &g.second_best] {
        println!(
            "{:?}: effort {} pays {:?}, principal {:.4}, agent {:.4}",
            s.kind, s.effort, s.rule, s.principal_value, s.agent_value
        );
    }
    println!("gap = {:.4}, second-best effort lower: {}", g.gap, g.effort_lower);

    let mut flat = problem.clone();
    flat.density = vec![vec![0.5, 0.5], vec![0.5, 0.5]];
    println!("effort-independent outcomes: gap = {}", welfare_gap(&flat)?.gap);
    Ok(())
}
