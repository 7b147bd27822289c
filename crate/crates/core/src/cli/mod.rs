//! Batch front end: read a config, run one task, write a CSV or JSON table.
//!
//! Exit codes: 0 success, 1 usage or config error, 2 solver
//! non-convergence (diagnostics are still written).

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::equilibrium::{one_period_wage, solve_two_period};
use crate::error::Error;
use crate::moral_hazard::welfare_gap;
use crate::multiperiod::{
    build_market_tree, solve_regime, solve_three_period, welfare_comparison, History, RegimeSolution,
};
use crate::pool::{LaborPool, ProductivityDistribution, QuitFactor};
use crate::screening::{
    critical_assessment_periods, distinguishable_interval, residual_below_average_probability,
    simulate_slice_firing,
};
use crate::simulator::{simulate, Regime, SimulationConfig};
use crate::solver::SolverOptions;

pub use config::{
    parse_config, parse_config_with, Command, ConfigError, ConfigErrors, Format, Overrides, RegimeKind,
    RunConfig, Task,
};
use output::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NO_CONVERGENCE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "lemonlab", version, about = "Adverse-selection labour-market solver")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// Run configuration in `key = value` form.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Solve one regime.
    Solve {
        #[arg(value_enum)]
        regime: Option<RegimeArg>,
    },
    /// Build the market tree of employment histories.
    Tree,
    /// Solve a regime over a grid of quit factors.
    Sweep,
    /// Monte Carlo replay of the hiring and firing process.
    Simulate,
    /// Slice-by-slice screening probabilities.
    Screening,
    /// First-best and second-best contracts.
    MoralHazard,
    /// Pay by productivity decile, two versus three periods.
    Welfare,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RegimeArg {
    OnePeriod,
    TwoPeriod,
    ThreePeriod,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let text = match &cli.config {
        Some(p) => match std::fs::read_to_string(p) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", p.display());
                return EXIT_USAGE;
            }
        },
        None => String::new(),
    };
    let (command, regime) = match cli.command {
        Sub::Solve { regime } => (
            Command::Solve,
            regime.map(|r| match r {
                RegimeArg::OnePeriod => RegimeKind::OnePeriod,
                RegimeArg::TwoPeriod => RegimeKind::TwoPeriod,
                RegimeArg::ThreePeriod => RegimeKind::ThreePeriod,
            }),
        ),
        Sub::Tree => (Command::Tree, None),
        Sub::Sweep => (Command::Sweep, None),
        Sub::Simulate => (Command::Simulate, None),
        Sub::Screening => (Command::Screening, None),
        Sub::MoralHazard => (Command::MoralHazard, None),
        Sub::Welfare => (Command::Welfare, None),
    };
    let ov = Overrides {
        command: Some(command),
        regime,
        format: cli.format.map(|f| match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }),
        out: cli.out,
        seed: cli.seed,
        tol: cli.tol,
        jobs: cli.jobs,
    };
    match parse_config_with(&text, &ov) {
        Ok(cfg) => run(&cfg),
        Err(errs) => {
            for e in &errs.0 {
                eprintln!("error: {e}");
            }
            EXIT_USAGE
        }
    }
}

/// Files produced by a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub main: String,
    /// Extra `(path, contents)` files such as plot series.
    pub extra: Vec<(PathBuf, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
    /// Written in place of the main output when present.
    pub diagnostics: Option<String>,
}

impl Failure {
    fn from_error(e: Error, format: Format) -> Self {
        match e {
            Error::NoConvergence {
                what,
                best_residual,
                best,
            } => Failure {
                code: EXIT_NO_CONVERGENCE,
                message: format!("{what} did not converge (best residual {best_residual:e})"),
                diagnostics: Some(render_diagnostics(
                    &Diagnostics {
                        status: "non_convergence".into(),
                        what,
                        best_residual,
                        best,
                    },
                    format,
                )),
            },
            other => Failure {
                code: EXIT_USAGE,
                message: other.to_string(),
                diagnostics: None,
            },
        }
    }
}

/// Runs the task and writes its artifacts; returns the exit code.
pub fn run(cfg: &RunConfig) -> i32 {
    let result = match cfg.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| render(cfg)),
            Err(e) => {
                eprintln!("error: cannot start {n} worker threads: {e}");
                return EXIT_USAGE;
            }
        },
        None => render(cfg),
    };
    let (main, extra, code) = match result {
        Ok(r) => (Some(r.main), r.extra, EXIT_OK),
        Err(f) => {
            eprintln!("error: {}", f.message);
            (f.diagnostics, vec![], f.code)
        }
    };
    if let Some(text) = main {
        if let Err(e) = emit(cfg.out.as_ref(), &text) {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    }
    for (path, text) in extra {
        if let Err(e) = emit(Some(&path), &text) {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    }
    code
}

fn emit(path: Option<&PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Computes the task's outputs without touching the file system.
pub fn render(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let fail = |e: Error| Failure::from_error(e, cfg.format);
    let opts = &cfg.solver;
    let mut extra = Vec::new();
    let main = match &cfg.task {
        Task::Solve {
            dist,
            mu,
            regime,
            series,
        } => {
            let solution = solve(dist, *mu, *regime, opts).map_err(fail)?;
            if let Some(spec) = series {
                let mu = mu.ok_or_else(|| Failure {
                    code: EXIT_USAGE,
                    message: "series needs mu".into(),
                    diagnostics: None,
                })?;
                extra.push((spec.path.clone(), render_series(&m_series(dist, mu, spec.points))));
            }
            render_solutions(&[solution], cfg.format, false)
        }
        Task::Sweep { dist, mus, regime } => {
            let rows: Vec<SolveOutput> = mus
                .par_iter()
                .map(|&mu| solve(dist, Some(mu), *regime, opts))
                .collect::<Result<_, _>>()
                .map_err(fail)?;
            render_solutions(&rows, cfg.format, true)
        }
        Task::Tree {
            dist,
            mu,
            n_periods,
            thresholds,
        } => {
            let (thresholds, wages) = match thresholds {
                Some(t) => (t.clone(), None),
                None => equilibrium_thresholds(dist, *mu, *n_periods, opts).map_err(fail)?,
            };
            let mut tree = build_market_tree(dist, *mu, *n_periods, &thresholds).map_err(fail)?;
            if let Some(w) = wages {
                tree.assign_wages(|h| w(h));
            }
            render_tree(&tree.summary(), cfg.format)
        }
        Task::Simulate {
            dist,
            mu,
            regime,
            n_agents,
            wages,
        } => {
            let wages = match wages {
                Some(w) => w.clone(),
                None => analytic_wages(dist, *mu, *regime, opts).map_err(fail)?,
            };
            let sim = SimulationConfig {
                n_agents: *n_agents,
                seed: cfg.seed,
                regime: *regime,
                dist: dist.clone(),
                mu: *mu,
                wages,
            };
            render_simulation(&simulate(&sim).map_err(fail)?, cfg.format)
        }
        Task::Screening { config, n_types } => {
            let report = ScreeningReport {
                config: *config,
                probability: residual_below_average_probability(config),
                simulated: simulate_slice_firing(config, *n_types),
                critical_assessment_periods: critical_assessment_periods(config.m_allowed),
                intervals: (0..config.m_allowed.min(config.n_total))
                    .map(|t| distinguishable_interval(t, config).expect("period within horizon"))
                    .collect(),
            };
            render_screening(&report, cfg.format)
        }
        Task::MoralHazard { problem } => {
            let result = welfare_gap(problem).map_err(fail)?;
            render_moral_hazard(
                &MoralHazardReport {
                    ic_tie_break: IC_TIE_BREAK.into(),
                    result,
                },
                cfg.format,
            )
        }
        Task::Welfare { dist, mu } => {
            render_welfare(&welfare_comparison(dist, *mu, opts).map_err(fail)?, cfg.format)
        }
    };
    Ok(Rendered { main, extra })
}

fn solve(
    dist: &ProductivityDistribution,
    mu: Option<QuitFactor>,
    regime: RegimeKind,
    opts: &SolverOptions,
) -> crate::Result<SolveOutput> {
    let solution = match (regime, mu) {
        (RegimeKind::OnePeriod, _) => RegimeSolution::OnePeriod {
            clearing: one_period_wage(dist),
        },
        (_, Some(mu)) => solve_regime(dist, mu, regime.n_periods(), opts)?,
        (_, None) => return Err(Error::InvalidParameter("mu is required".into())),
    };
    Ok(SolveOutput {
        mu: mu.map(QuitFactor::get),
        theta_bar: dist.mean(),
        solution,
    })
}

type WageFn = Box<dyn Fn(&History) -> Option<f64>>;

fn equilibrium_thresholds(
    dist: &ProductivityDistribution,
    mu: QuitFactor,
    n: u32,
    opts: &SolverOptions,
) -> crate::Result<(Vec<f64>, Option<WageFn>)> {
    Ok(match n {
        1 => {
            let w = one_period_wage(dist).wage_or_zero();
            (vec![], Some(Box::new(move |_: &History| Some(w))))
        }
        2 => {
            let s = solve_two_period(dist, mu, opts)?;
            let (w0, w1) = (s.w0, s.w1);
            (
                vec![w1],
                Some(Box::new(move |h: &History| Some(if h.is_empty() { w0 } else { w1 }))),
            )
        }
        3 => {
            let w = solve_three_period(dist, mu, opts)?.wages;
            (w.thresholds().to_vec(), Some(Box::new(move |h: &History| w.wage_of(h))))
        }
        _ => {
            return Err(Error::InvalidParameter(
                "thresholds are required beyond three periods".into(),
            ))
        }
    })
}

fn analytic_wages(
    dist: &ProductivityDistribution,
    mu: QuitFactor,
    regime: Regime,
    opts: &SolverOptions,
) -> crate::Result<Vec<f64>> {
    Ok(match regime {
        Regime::TwoPeriod => {
            let s = solve_two_period(dist, mu, opts)?;
            vec![s.w0, s.w1]
        }
        Regime::ThreePeriod => solve_three_period(dist, mu, opts)?.wages.to_array().to_vec(),
    })
}

/// `M(w)` on an even grid over the support; absent where nobody leaves.
pub fn m_series(dist: &ProductivityDistribution, mu: QuitFactor, points: usize) -> Vec<(f64, Option<f64>)> {
    let pool = LaborPool::new(dist.clone());
    let (lo, hi) = (dist.support_low(), dist.support_high());
    (0..points)
        .map(|i| {
            let w = lo + (hi - lo) * i as f64 / (points - 1) as f64;
            (w, pool.m_operator(w, mu).ok())
        })
        .collect()
}
