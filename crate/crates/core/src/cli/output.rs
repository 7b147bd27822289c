//! CSV and JSON rendering of results.
//!
//! Floats are written in shortest round-trip form, so re-parsing any
//! emitted number gives back the same `f64`.

use serde::{Deserialize, Serialize};

use crate::equilibrium::{Clearing, TwoPeriodSolution};
use crate::moral_hazard::{ContractSolution, WelfareGap};
use crate::multiperiod::{RegimeSolution, ThreePeriodSolution, TreeSummary, WelfareReport};
use crate::screening::{ScreeningConfig, SliceFiringOutcome};
use crate::simulator::SimulationReport;

use super::config::Format;

pub fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn nums(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(";")
}

/// Header plus rows, RFC 4180 quoting, `\n` line endings.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for r in rows {
        w.write_record(r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is UTF-8")
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("results serialize");
    s.push('\n');
    s
}

pub const ONE_PERIOD_COLUMNS: &[&str] = &["mu", "theta_bar", "wage", "collapsed"];

pub const TWO_PERIOD_COLUMNS: &[&str] = &[
    "mu",
    "w1",
    "theta_bar",
    "w0",
    "theta_bar2",
    "residual_fixed_point",
    "residual_zero_profit",
    "collapsed",
];

pub const THREE_PERIOD_COLUMNS: &[&str] = &[
    "mu",
    "w0",
    "w1",
    "w_plus",
    "w2",
    "w2p",
    "theta_bar",
    "theta_bar_q1",
    "theta_bar_q2",
    "theta_bar_second",
    "residual_1",
    "residual_2",
    "residual_3",
    "residual_4",
    "residual_5",
    "multiple_equilibria",
];

fn one_period_row(mu: Option<f64>, theta_bar: f64, c: Clearing) -> Vec<String> {
    vec![
        opt(mu),
        num(theta_bar),
        num(c.wage_or_zero()),
        c.is_collapse().to_string(),
    ]
}

fn two_period_row(s: &TwoPeriodSolution) -> Vec<String> {
    vec![
        num(s.mu),
        num(s.w1),
        num(s.theta_bar),
        num(s.w0),
        opt(s.theta_bar2),
        opt(s.residual_fixed_point),
        num(s.residual_zero_profit),
        s.collapsed.to_string(),
    ]
}

fn three_period_row(s: &ThreePeriodSolution) -> Vec<String> {
    let w = s.wages;
    let mut row = vec![
        num(s.mu),
        num(w.w0),
        num(w.w1),
        num(w.w_plus),
        num(w.w2),
        num(w.w2p),
        num(s.theta_bar),
        num(s.theta_bar_q1),
        num(s.theta_bar_q2),
        num(s.theta_bar_second),
    ];
    row.extend(s.residuals.iter().map(|&r| num(r)));
    row.push(s.multiple_equilibria.to_string());
    row
}

/// One solved regime per μ, all of the same regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutput {
    pub mu: Option<f64>,
    pub theta_bar: f64,
    pub solution: RegimeSolution,
}

pub fn render_solutions(rows: &[SolveOutput], format: Format, as_list: bool) -> String {
    match format {
        Format::Json if as_list => json(&rows),
        Format::Json => json(&rows[0]),
        Format::Csv => {
            let header = match rows.first().map(|r| &r.solution) {
                Some(RegimeSolution::ThreePeriod(_)) => THREE_PERIOD_COLUMNS,
                Some(RegimeSolution::TwoPeriod(_)) => TWO_PERIOD_COLUMNS,
                _ => ONE_PERIOD_COLUMNS,
            };
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| match &r.solution {
                    RegimeSolution::OnePeriod { clearing } => one_period_row(r.mu, r.theta_bar, *clearing),
                    RegimeSolution::TwoPeriod(s) => two_period_row(s),
                    RegimeSolution::ThreePeriod(s) => three_period_row(s),
                })
                .collect();
            csv_table(header, &body)
        }
    }
}

pub const TREE_COLUMNS: &[&str] = &[
    "history",
    "name",
    "period",
    "off_firm_market",
    "mass",
    "mean",
    "threshold",
    "wage",
];

pub fn render_tree(t: &TreeSummary, format: Format) -> String {
    match format {
        Format::Json => json(t),
        Format::Csv => {
            let rows: Vec<Vec<String>> = t
                .nodes
                .iter()
                .map(|n| {
                    vec![
                        n.history.to_string(),
                        n.name.clone().unwrap_or_default(),
                        n.period.to_string(),
                        n.off_firm_market.to_string(),
                        num(n.mass),
                        opt(n.mean),
                        opt(n.threshold),
                        opt(n.wage),
                    ]
                })
                .collect();
            csv_table(TREE_COLUMNS, &rows)
        }
    }
}

pub const SIMULATION_COLUMNS: &[&str] = &[
    "history",
    "name",
    "period",
    "off_firm_market",
    "count",
    "mass_share",
    "analytic_mass",
    "mean",
    "analytic_mean",
    "std_error",
    "stderr_halfwidth",
    "wage",
    "break_even_wage",
    "firm_profit_per_capita",
];

pub fn render_simulation(r: &SimulationReport, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => {
            let rows: Vec<Vec<String>> = r
                .markets
                .iter()
                .map(|m| {
                    vec![
                        m.history.to_string(),
                        m.name.clone().unwrap_or_default(),
                        m.period.to_string(),
                        m.off_firm_market.to_string(),
                        m.count.to_string(),
                        num(m.mass_share),
                        num(m.analytic_mass),
                        opt(m.mean),
                        opt(m.analytic_mean),
                        opt(m.std_error),
                        opt(m.stderr_halfwidth),
                        num(m.wage),
                        opt(m.break_even_wage),
                        opt(m.firm_profit_per_capita),
                    ]
                })
                .collect();
            csv_table(SIMULATION_COLUMNS, &rows)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreeningReport {
    pub config: ScreeningConfig,
    pub probability: f64,
    pub simulated: SliceFiringOutcome,
    pub critical_assessment_periods: u32,
    /// Slice confirmed in each screening period.
    pub intervals: Vec<(f64, f64)>,
}

pub const SCREENING_COLUMNS: &[&str] = &[
    "n_total",
    "m_allowed",
    "theta_low",
    "theta_high",
    "probability",
    "simulated_probability",
    "simulated_types",
    "critical_assessment_periods",
];

pub fn render_screening(r: &ScreeningReport, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => csv_table(
            SCREENING_COLUMNS,
            &[vec![
                r.config.n_total.to_string(),
                r.config.m_allowed.to_string(),
                num(r.config.theta_low),
                num(r.config.theta_high),
                num(r.probability),
                num(r.simulated.probability),
                r.simulated.types.to_string(),
                r.critical_assessment_periods.to_string(),
            ]],
        ),
    }
}

/// How ties in the agent's effort choice are resolved.
pub const IC_TIE_BREAK: &str = "principal";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoralHazardReport {
    pub ic_tie_break: String,
    #[serde(flatten)]
    pub result: WelfareGap,
}

pub const MORAL_HAZARD_COLUMNS: &[&str] = &[
    "kind",
    "method",
    "effort",
    "effort_cost",
    "principal_value",
    "agent_value",
    "rule",
    "gap",
    "effort_lower",
    "ic_tie_break",
];

pub fn render_moral_hazard(r: &MoralHazardReport, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => {
            let g = &r.result;
            let row = |s: &ContractSolution, kind: &str| {
                vec![
                    kind.to_owned(),
                    match s.method {
                        crate::moral_hazard::SolveMethod::Exact => "exact".to_owned(),
                        crate::moral_hazard::SolveMethod::CoordinateAscent => "coordinate_ascent".to_owned(),
                    },
                    s.effort.to_string(),
                    num(s.effort_cost),
                    num(s.principal_value),
                    num(s.agent_value),
                    nums(&s.rule),
                    num(g.gap),
                    g.effort_lower.to_string(),
                    r.ic_tie_break.clone(),
                ]
            };
            csv_table(
                MORAL_HAZARD_COLUMNS,
                &[row(&g.first_best, "first_best"), row(&g.second_best, "second_best")],
            )
        }
    }
}

pub const WELFARE_COLUMNS: &[&str] = &[
    "decile",
    "mean_theta",
    "two_period_1",
    "two_period_2",
    "three_period_1",
    "three_period_2",
    "three_period_3",
    "two_period_lifetime",
    "three_period_lifetime",
    "two_period_per_period",
    "three_period_per_period",
    "per_period_difference",
];

pub fn render_welfare(r: &WelfareReport, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => {
            let rows: Vec<Vec<String>> = r
                .deciles
                .iter()
                .map(|d| {
                    vec![
                        d.decile.to_string(),
                        num(d.mean_theta),
                        num(d.two_period_path[0]),
                        num(d.two_period_path[1]),
                        num(d.three_period_path[0]),
                        num(d.three_period_path[1]),
                        num(d.three_period_path[2]),
                        num(d.two_period_lifetime),
                        num(d.three_period_lifetime),
                        num(d.two_period_per_period),
                        num(d.three_period_per_period),
                        num(d.per_period_difference),
                    ]
                })
                .collect();
            csv_table(WELFARE_COLUMNS, &rows)
        }
    }
}

pub const SERIES_COLUMNS: &[&str] = &["w", "m_of_w"];

pub fn render_series(points: &[(f64, Option<f64>)]) -> String {
    let rows: Vec<Vec<String>> = points.iter().map(|&(w, m)| vec![num(w), opt(m)]).collect();
    csv_table(SERIES_COLUMNS, &rows)
}

/// Best-effort state written when a solver runs out of budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub status: String,
    pub what: String,
    pub best_residual: f64,
    pub best: Vec<f64>,
}

pub const DIAGNOSTICS_COLUMNS: &[&str] = &["status", "what", "best_residual", "best"];

pub fn render_diagnostics(d: &Diagnostics, format: Format) -> String {
    match format {
        Format::Json => json(d),
        Format::Csv => csv_table(
            DIAGNOSTICS_COLUMNS,
            &[vec![
                d.status.clone(),
                d.what.clone(),
                num(d.best_residual),
                nums(&d.best),
            ]],
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0, 1e-17, -2.5e300, std::f64::consts::PI] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(1.0), "1.0");
    }

    #[test]
    fn csv_quotes_and_newlines() {
        let s = csv_table(&["a", "b"], &[vec!["x,y".into(), "1".into()]]);
        assert_eq!(s, "a,b\n\"x,y\",1\n");
    }
}
