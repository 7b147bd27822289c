//! Flat `key = value` run configuration.
//!
//! ```text
//! # two-period market
//! dist   = uniform(0,1)
//! mu     = 0.5
//! regime = two_period
//! ```
//!
//! `#` starts a comment. Distribution literals are `uniform(a,b)`,
//! `uniform(a,b,density)`, `discrete((θ,count);…)` and
//! `piecewise((θ,density);…)`. Lists are comma separated or
//! `linspace(a,b,n)`. Parsing reports every problem found, not just the
//! first.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use crate::moral_hazard::{default_wage_grid, AgentUtility, ContractProblem, PrincipalUtility};
use crate::pool::{ProductivityDistribution, QuitFactor};
use crate::screening::ScreeningConfig;
use crate::simulator::Regime;
use crate::solver::SolverOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Tree,
    Sweep,
    Simulate,
    Screening,
    MoralHazard,
    Welfare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Tree => "tree",
            Command::Sweep => "sweep",
            Command::Simulate => "simulate",
            Command::Screening => "screening",
            Command::MoralHazard => "moral-hazard",
            Command::Welfare => "welfare",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "solve" => Command::Solve,
            "tree" => Command::Tree,
            "sweep" => Command::Sweep,
            "simulate" => Command::Simulate,
            "screening" => Command::Screening,
            "moral-hazard" | "moral_hazard" => Command::MoralHazard,
            "welfare" => Command::Welfare,
            _ => return None,
        })
    }

    /// Keys accepted by this command besides the common ones.
    fn keys(self) -> &'static [&'static str] {
        match self {
            Command::Solve => &["dist", "mu", "regime", "series", "series_points"],
            Command::Tree => &["dist", "mu", "n_periods", "thresholds", "threshold"],
            Command::Sweep => &["dist", "mu_grid", "regime"],
            Command::Simulate => &["dist", "mu", "regime", "n_agents", "seed", "wages"],
            Command::Screening => &["n_total", "m_allowed", "theta_low", "theta_high", "n_types"],
            Command::MoralHazard => &[
                "outcomes",
                "effort_costs",
                "density",
                "agent_utility",
                "principal_utility",
                "reservation",
                "wage_levels",
                "wage_grid",
            ],
            Command::Welfare => &["dist", "mu"],
        }
    }
}

const COMMON_KEYS: &[&str] = &["command", "format", "out", "tol", "max_iter", "scan_points", "jobs"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeKind {
    OnePeriod,
    TwoPeriod,
    ThreePeriod,
}

impl RegimeKind {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "one_period" | "one-period" | "1" => RegimeKind::OnePeriod,
            "two_period" | "two-period" | "2" => RegimeKind::TwoPeriod,
            "three_period" | "three-period" | "3" => RegimeKind::ThreePeriod,
            _ => return None,
        })
    }

    pub fn n_periods(self) -> u32 {
        match self {
            RegimeKind::OnePeriod => 1,
            RegimeKind::TwoPeriod => 2,
            RegimeKind::ThreePeriod => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

/// `(w, M(w))` series written next to a solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec {
    pub path: PathBuf,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    Solve {
        dist: ProductivityDistribution,
        mu: Option<QuitFactor>,
        regime: RegimeKind,
        series: Option<SeriesSpec>,
    },
    Tree {
        dist: ProductivityDistribution,
        mu: QuitFactor,
        n_periods: u32,
        /// Breadth-first thresholds; solved from the equilibrium when absent.
        thresholds: Option<Vec<f64>>,
    },
    Sweep {
        dist: ProductivityDistribution,
        mus: Vec<QuitFactor>,
        regime: RegimeKind,
    },
    Simulate {
        dist: ProductivityDistribution,
        mu: QuitFactor,
        regime: Regime,
        n_agents: u64,
        /// Analytic equilibrium wages are used when absent.
        wages: Option<Vec<f64>>,
    },
    Screening {
        config: ScreeningConfig,
        n_types: usize,
    },
    MoralHazard {
        problem: ContractProblem,
    },
    Welfare {
        dist: ProductivityDistribution,
        mu: QuitFactor,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub task: Task,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub solver: SolverOptions,
    pub seed: u64,
    pub jobs: Option<usize>,
}

/// Command-line values that take precedence over the document.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub command: Option<Command>,
    pub regime: Option<RegimeKind>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Validation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub kind: ErrorKind,
    pub key: Option<String>,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let (Some(l), Some(c)) = (self.line, self.column) {
            write!(f, "line {l}, column {c}: ")?;
        }
        f.write_str(&self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

struct Entry {
    value: String,
    line: usize,
    key_col: usize,
    value_col: usize,
}

/// Parses a document with no command-line overrides. The command defaults
/// to `solve`.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigErrors> {
    parse_config_with(text, &Overrides::default())
}

pub fn parse_config_with(text: &str, ov: &Overrides) -> Result<RunConfig, ConfigErrors> {
    let mut errors = Vec::new();
    let entries = lex(text, &mut errors);
    let mut b = Builder { entries, errors };
    let cfg = b.build(ov);
    if b.errors.is_empty() {
        Ok(cfg.expect("a config is built whenever no error was recorded"))
    } else {
        Err(ConfigErrors(b.errors))
    }
}

fn lex(text: &str, errors: &mut Vec<ConfigError>) -> BTreeMap<String, Entry> {
    let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let indent = body.len() - body.trim_start().len();
        let parse_err = |column: usize, message: String| ConfigError {
            kind: ErrorKind::Parse,
            key: None,
            line: Some(line),
            column: Some(column),
            message,
        };
        let Some(eq) = body.find('=') else {
            errors.push(parse_err(indent + 1, "expected `key = value`".into()));
            continue;
        };
        let key = body[..eq].trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_') {
            errors.push(parse_err(indent + 1, format!("invalid key `{key}`")));
            continue;
        }
        let after = &body[eq + 1..];
        let value = after.trim();
        let value_col = eq + 2 + (after.len() - after.trim_start().len());
        if value.is_empty() {
            errors.push(parse_err(value_col, format!("missing value for `{key}`")));
            continue;
        }
        if let Some(prev) = entries.get(key) {
            errors.push(parse_err(
                indent + 1,
                format!("duplicate key `{key}` (first set on line {})", prev.line),
            ));
            continue;
        }
        entries.insert(
            key.to_owned(),
            Entry {
                value: value.to_owned(),
                line,
                key_col: indent + 1,
                value_col,
            },
        );
    }
    entries
}

struct Builder {
    entries: BTreeMap<String, Entry>,
    errors: Vec<ConfigError>,
}

impl Builder {
    fn invalid(&mut self, key: &str, message: String) {
        let (line, column) = match self.entries.get(key) {
            Some(e) => (Some(e.line), Some(e.value_col)),
            None => (None, None),
        };
        self.errors.push(ConfigError {
            kind: ErrorKind::Validation,
            key: Some(key.to_owned()),
            line,
            column,
            message,
        });
    }

    fn raw(&self, key: &str) -> Option<String> {
        self.entries.get(key).map(|e| e.value.clone())
    }

    fn optional<T>(&mut self, key: &'static str, parse: impl Fn(&str) -> Result<T, String>) -> Option<T> {
        let v = self.raw(key)?;
        match parse(&v) {
            Ok(t) => Some(t),
            Err(m) => {
                self.invalid(key, format!("{key}: {m}"));
                None
            }
        }
    }

    fn required<T>(
        &mut self,
        key: &'static str,
        missing: &mut Vec<&'static str>,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Option<T> {
        if !self.entries.contains_key(key) {
            missing.push(key);
            return None;
        }
        self.optional(key, parse)
    }

    fn build(&mut self, ov: &Overrides) -> Option<RunConfig> {
        let doc_command = self.optional("command", |s| {
            Command::parse(s).ok_or_else(|| format!("unknown command `{s}`"))
        });
        let command = ov.command.or(doc_command).unwrap_or(Command::Solve);

        let format = self
            .optional("format", |s| Format::parse(s).ok_or_else(|| format!("format must be csv or json, got `{s}`")));
        let format = ov.format.or(format).unwrap_or_default();
        let out = self.optional("out", |s| Ok(PathBuf::from(s)));
        let out = ov.out.clone().or(out);
        let defaults = SolverOptions::default();
        let doc_tol = self.optional("tol", positive_f64);
        let tol = ov.tol.or(doc_tol).unwrap_or(defaults.tol);
        if !(tol > 0.0 && tol.is_finite()) {
            self.invalid("tol", format!("tol must be positive, got {tol}"));
        }
        let max_iter = self.optional("max_iter", positive_int).unwrap_or(defaults.max_iter);
        let scan_points = self
            .optional("scan_points", |s| {
                positive_int(s).and_then(|n| if n >= 2 { Ok(n) } else { Err("must be at least 2".into()) })
            })
            .unwrap_or(defaults.scan_points);
        let doc_jobs = self.optional("jobs", positive_int);
        let jobs = ov.jobs.or(doc_jobs);
        if jobs == Some(0) {
            self.invalid("jobs", "jobs must be at least 1".into());
        }

        let mut missing = Vec::new();
        let mut seed = ov.seed.unwrap_or(0);
        let task = match command {
            Command::Solve => {
                let dist = self.required("dist", &mut missing, parse_distribution);
                let regime = self.optional("regime", parse_regime);
                let regime = ov.regime.or(regime);
                if regime.is_none() {
                    missing.push("regime");
                }
                let mu = if regime == Some(RegimeKind::OnePeriod) {
                    self.optional("mu", parse_mu)
                } else {
                    self.required("mu", &mut missing, parse_mu)
                };
                let path = self.optional("series", |s| Ok(PathBuf::from(s)));
                let points = self
                    .optional("series_points", |s| {
                        positive_int(s).and_then(|n| if n >= 2 { Ok(n) } else { Err("must be at least 2".into()) })
                    })
                    .unwrap_or(101);
                let series = path.map(|path| SeriesSpec { path, points });
                match (dist, regime) {
                    (Some(dist), Some(regime)) => Some(Task::Solve {
                        dist,
                        mu,
                        regime,
                        series,
                    }),
                    _ => None,
                }
            }
            Command::Tree => {
                let dist = self.required("dist", &mut missing, parse_distribution);
                let mu = self.required("mu", &mut missing, parse_mu);
                let n = self.required("n_periods", &mut missing, |s| {
                    let n = positive_int(s)?;
                    if (1..=crate::multiperiod::MAX_TREE_PERIODS as usize).contains(&n) {
                        Ok(n as u32)
                    } else {
                        Err(format!(
                            "n_periods must lie in [1, {}]",
                            crate::multiperiod::MAX_TREE_PERIODS
                        ))
                    }
                });
                let list = self.optional("thresholds", parse_list);
                let scalar = self.optional("threshold", parse_f64);
                let mut thresholds = None;
                if let Some(n) = n {
                    let need = crate::multiperiod::internal_node_count(n);
                    match (list, scalar) {
                        (Some(_), Some(_)) => {
                            self.invalid("threshold", "set either threshold or thresholds, not both".into())
                        }
                        (Some(l), None) if l.len() != need => self.invalid(
                            "thresholds",
                            format!("thresholds: {n} periods need {need} thresholds, got {}", l.len()),
                        ),
                        (Some(l), None) => thresholds = Some(l),
                        (None, Some(t)) => thresholds = Some(vec![t; need]),
                        (None, None) if n > 3 => self.invalid(
                            "thresholds",
                            "thresholds (or threshold) is required for n_periods > 3".into(),
                        ),
                        (None, None) => {}
                    }
                }
                match (dist, mu, n) {
                    (Some(dist), Some(mu), Some(n_periods)) => Some(Task::Tree {
                        dist,
                        mu,
                        n_periods,
                        thresholds,
                    }),
                    _ => None,
                }
            }
            Command::Sweep => {
                let dist = self.required("dist", &mut missing, parse_distribution);
                let mus = self.required("mu_grid", &mut missing, |s| {
                    let l = parse_list(s)?;
                    if l.is_empty() {
                        return Err("mu_grid is empty".into());
                    }
                    l.into_iter()
                        .map(|m| QuitFactor::new(m).map_err(|_| "mu must lie in [0,1]".to_owned()))
                        .collect()
                });
                let regime = self.optional("regime", parse_regime);
                let regime = ov.regime.or(regime);
                if regime.is_none() {
                    missing.push("regime");
                }
                match (dist, mus, regime) {
                    (Some(dist), Some(mus), Some(regime)) => Some(Task::Sweep { dist, mus, regime }),
                    _ => None,
                }
            }
            Command::Simulate => {
                let dist = self.required("dist", &mut missing, parse_distribution);
                let mu = self.required("mu", &mut missing, parse_mu);
                let regime = self.optional("regime", parse_regime);
                let regime = ov.regime.or(regime);
                let regime = match regime {
                    None => {
                        missing.push("regime");
                        None
                    }
                    Some(RegimeKind::OnePeriod) => {
                        self.invalid("regime", "regime: simulation needs two_period or three_period".into());
                        None
                    }
                    Some(RegimeKind::TwoPeriod) => Some(Regime::TwoPeriod),
                    Some(RegimeKind::ThreePeriod) => Some(Regime::ThreePeriod),
                };
                let n_agents = self
                    .optional("n_agents", |s| positive_int(s).map(|n| n as u64))
                    .unwrap_or(100_000);
                if n_agents == 0 {
                    self.invalid("n_agents", "n_agents must be at least 1".into());
                }
                if let Some(s) = self.optional("seed", |s| s.parse::<u64>().map_err(|e| e.to_string())) {
                    seed = ov.seed.unwrap_or(s);
                }
                let wages = self.optional("wages", parse_list);
                if let (Some(w), Some(r)) = (&wages, regime) {
                    if w.len() != r.n_wages() {
                        self.invalid(
                            "wages",
                            format!("wages: {:?} needs {} wages, got {}", r, r.n_wages(), w.len()),
                        );
                    }
                }
                match (dist, mu, regime) {
                    (Some(dist), Some(mu), Some(regime)) => Some(Task::Simulate {
                        dist,
                        mu,
                        regime,
                        n_agents,
                        wages,
                    }),
                    _ => None,
                }
            }
            Command::Screening => {
                let n_total = self.required("n_total", &mut missing, |s| {
                    let n = positive_int(s)?;
                    if n == 0 {
                        Err("n_total must be at least 1".into())
                    } else {
                        u32::try_from(n).map_err(|e| e.to_string())
                    }
                });
                let m = self.required("m_allowed", &mut missing, |s| {
                    positive_int(s).and_then(|n| u32::try_from(n).map_err(|e| e.to_string()))
                });
                let lo = self.optional("theta_low", parse_f64).unwrap_or(0.0);
                let hi = self.optional("theta_high", parse_f64).unwrap_or(1.0);
                let n_types = self
                    .optional("n_types", |s| {
                        positive_int(s).and_then(|n| if n >= 1 { Ok(n) } else { Err("must be at least 1".into()) })
                    })
                    .unwrap_or(100_000);
                match (n_total, m) {
                    (Some(n), Some(m)) => match ScreeningConfig::new(n, m, lo, hi) {
                        Ok(config) => Some(Task::Screening { config, n_types }),
                        Err(e) => {
                            self.invalid("theta_high", e.to_string());
                            None
                        }
                    },
                    _ => None,
                }
            }
            Command::MoralHazard => {
                let outcomes = self.required("outcomes", &mut missing, parse_list);
                let costs = self.required("effort_costs", &mut missing, parse_list);
                let density = self.required("density", &mut missing, parse_tuples);
                let agent = self
                    .optional("agent_utility", parse_agent_utility)
                    .unwrap_or(AgentUtility::Sqrt);
                let principal = self
                    .optional("principal_utility", parse_principal_utility)
                    .unwrap_or(PrincipalUtility::Neutral);
                let reservation = self.required("reservation", &mut missing, parse_f64);
                let levels = self.optional("wage_levels", |s| {
                    positive_int(s).and_then(|n| if n >= 2 { Ok(n) } else { Err("must be at least 2".into()) })
                });
                let grid = self.optional("wage_grid", parse_list);
                if levels.is_some() && grid.is_some() {
                    self.invalid("wage_grid", "set either wage_levels or wage_grid, not both".into());
                }
                match (outcomes, costs, density, reservation) {
                    (Some(outcomes), Some(costs), Some(density), Some(reservation)) => {
                        let grid = grid.unwrap_or_else(|| default_wage_grid(&outcomes, levels.unwrap_or(21)));
                        match ContractProblem::new(outcomes, costs, density, agent, principal, reservation, grid) {
                            Ok(problem) => Some(Task::MoralHazard { problem }),
                            Err(e) => {
                                self.invalid("density", e.to_string());
                                None
                            }
                        }
                    }
                    _ => None,
                }
            }
            Command::Welfare => {
                let dist = self.required("dist", &mut missing, parse_distribution);
                let mu = self.required("mu", &mut missing, parse_mu);
                match (dist, mu) {
                    (Some(dist), Some(mu)) => Some(Task::Welfare { dist, mu }),
                    _ => None,
                }
            }
        };

        if !missing.is_empty() {
            self.errors.push(ConfigError {
                kind: ErrorKind::Validation,
                key: Some(missing.join(",")),
                line: None,
                column: None,
                message: format!(
                    "missing required keys for {}: {}",
                    command.name(),
                    missing.join(", ")
                ),
            });
        }

        let allowed: Vec<&str> = COMMON_KEYS.iter().chain(command.keys()).copied().collect();
        let unknown: Vec<(String, usize, usize)> = self
            .entries
            .iter()
            .filter(|(k, _)| !allowed.contains(&k.as_str()))
            .map(|(k, e)| (k.clone(), e.line, e.key_col))
            .collect();
        for (k, line, column) in unknown {
            self.errors.push(ConfigError {
                kind: ErrorKind::Validation,
                message: format!("unknown key `{k}` for {}", command.name()),
                key: Some(k),
                line: Some(line),
                column: Some(column),
            });
        }
        self.errors.sort_by_key(|e| (e.line.unwrap_or(usize::MAX), e.column.unwrap_or(0)));

        Some(RunConfig {
            command,
            task: task?,
            format,
            out,
            solver: SolverOptions {
                tol,
                max_iter,
                scan_points,
            },
            seed,
            jobs,
        })
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("expected a finite number, got `{}`", s.trim())),
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {v}"))
    }
}

fn positive_int(s: &str) -> Result<usize, String> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| format!("expected a non-negative integer, got `{}`", s.trim()))
}

fn parse_mu(s: &str) -> Result<QuitFactor, String> {
    let v = parse_f64(s)?;
    QuitFactor::new(v).map_err(|_| "mu must lie in [0,1]".to_owned())
}

fn parse_regime(s: &str) -> Result<RegimeKind, String> {
    RegimeKind::parse(s).ok_or_else(|| {
        format!("regime must be one_period, two_period or three_period, got `{s}`")
    })
}

/// Comma-separated numbers or `linspace(a,b,n)`.
pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    if let Some(args) = call_args(s, "linspace") {
        let parts: Vec<&str> = args.split(',').collect();
        if parts.len() != 3 {
            return Err("linspace takes (start, end, count)".into());
        }
        let (a, b) = (parse_f64(parts[0])?, parse_f64(parts[1])?);
        let n = positive_int(parts[2])?;
        return Ok(match n {
            0 => vec![],
            1 => vec![a],
            _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
        });
    }
    s.split(',').map(parse_f64).collect()
}

/// `(a,b);(c,d);…`
fn parse_tuples(s: &str) -> Result<Vec<Vec<f64>>, String> {
    s.split(';')
        .map(|t| {
            let t = t.trim();
            let inner = t
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| format!("expected `(…)`, got `{t}`"))?;
            parse_list(inner)
        })
        .collect()
}

fn call_args<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    let rest = s.strip_prefix(name)?.trim_start();
    rest.strip_prefix('(')?.strip_suffix(')')
}

/// Parses a distribution literal.
pub fn parse_distribution(s: &str) -> Result<ProductivityDistribution, String> {
    let s = s.trim();
    let built = if let Some(args) = call_args(s, "uniform") {
        let v = parse_list(args)?;
        match v.as_slice() {
            [a, b] => ProductivityDistribution::uniform(*a, *b),
            [a, b, d] => ProductivityDistribution::uniform_with_density(*a, *b, *d),
            _ => return Err("uniform takes (low, high) or (low, high, density)".into()),
        }
    } else if let Some(args) = call_args(s, "discrete") {
        let atoms = pairs(args)?;
        ProductivityDistribution::discrete(atoms)
    } else if let Some(args) = call_args(s, "piecewise") {
        let knots = pairs(args)?;
        ProductivityDistribution::piecewise_linear(knots)
    } else {
        return Err(format!("unknown distribution `{s}`"));
    };
    built.map_err(|e| e.to_string())
}

fn pairs(s: &str) -> Result<Vec<(f64, f64)>, String> {
    parse_tuples(s)?
        .into_iter()
        .map(|t| match t.as_slice() {
            [a, b] => Ok((*a, *b)),
            _ => Err("expected pairs `(θ,weight)`".into()),
        })
        .collect()
}

fn parse_agent_utility(s: &str) -> Result<AgentUtility, String> {
    match s.trim() {
        "linear" => Ok(AgentUtility::Linear),
        "sqrt" => Ok(AgentUtility::Sqrt),
        "log1p" => Ok(AgentUtility::Log1p),
        other => match call_args(other, "crra") {
            Some(g) => Ok(AgentUtility::Crra { gamma: positive_f64(g)? }),
            None => Err(format!("agent_utility must be linear, sqrt, log1p or crra(γ), got `{other}`")),
        },
    }
}

fn parse_principal_utility(s: &str) -> Result<PrincipalUtility, String> {
    match s.trim() {
        "neutral" | "linear" => Ok(PrincipalUtility::Neutral),
        other => match call_args(other, "crra") {
            Some(g) => Ok(PrincipalUtility::Crra { gamma: positive_f64(g)? }),
            None => Err(format!("principal_utility must be neutral or crra(γ), got `{other}`")),
        },
    }
}
