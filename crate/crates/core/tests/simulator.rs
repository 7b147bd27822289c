use lemonlab::equilibrium::solve_two_period;
use lemonlab::multiperiod::solve_three_period;
use lemonlab::simulator::{agent_trajectory, empirical_zero_profit, simulate, Regime, SimulationConfig};
use lemonlab::{ProductivityDistribution, QuitFactor, SolverOptions};

fn unit() -> ProductivityDistribution {
    ProductivityDistribution::uniform(0.0, 1.0).unwrap()
}

fn two_period(n: u64, seed: u64) -> SimulationConfig {
    let mu = QuitFactor::new(0.5).unwrap();
    let s = solve_two_period(&unit(), mu, &SolverOptions::default()).unwrap();
    SimulationConfig {
        n_agents: n,
        seed,
        regime: Regime::TwoPeriod,
        dist: unit(),
        mu,
        wages: vec![s.w0, s.w1],
    }
}

#[test]
fn two_period_markets_match_the_pools() {
    let r = simulate(&two_period(1_000_000, 17)).unwrap();
    for m in &r.markets {
        let z = (m.mean.unwrap() - m.analytic_mean.unwrap()) / m.std_error.unwrap();
        assert!(z.abs() <= 3.0, "{}: z = {z}", m.history);
        let mean = m.mean.unwrap();
        assert!((0.0..=1.0).contains(&mean));
    }
    let second = r.market("L").unwrap().mean.unwrap();
    assert!((second - 0.414214).abs() < 0.01);
    assert!(r.entry_profit_per_capita.abs() < 0.005);
}

#[test]
fn three_period_markets_match_the_pools() {
    let mu = QuitFactor::new(0.5).unwrap();
    let s = solve_three_period(&unit(), mu, &SolverOptions::default()).unwrap();
    let cfg = SimulationConfig {
        n_agents: 1_000_000,
        seed: 3,
        regime: Regime::ThreePeriod,
        dist: unit(),
        mu,
        wages: s.wages.to_array().to_vec(),
    };
    let r = simulate(&cfg).unwrap();
    for m in &r.markets {
        let z = (m.mean.unwrap() - m.analytic_mean.unwrap()) / m.std_error.unwrap();
        assert!(z.abs() <= 3.0, "{}: z = {z}", m.history);
        assert!((m.mass_share - m.analytic_mass).abs() < 0.005, "{}", m.history);
    }
    for p in 0..3 {
        let total: u64 = r.markets.iter().filter(|m| m.period == p).map(|m| m.count).sum();
        assert_eq!(total, 1_000_000);
    }
    assert!(r.entry_profit_per_capita.abs() < 0.005);
}

#[test]
fn no_quits_sends_the_bottom_half() {
    let cfg = SimulationConfig {
        mu: QuitFactor::new(0.0).unwrap(),
        wages: vec![0.75, 0.5],
        ..two_period(200_000, 1)
    };
    let r = simulate(&cfg).unwrap();
    assert!((r.market("L").unwrap().mean.unwrap() - 0.25).abs() < 0.005);
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let cfg = two_period(300_000, 99);
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        serde_json::to_string(&pool.install(|| simulate(&cfg)).unwrap()).unwrap()
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
}

#[test]
fn entry_wage_moves_profit_one_for_one() {
    let base = two_period(100_000, 5);
    let p0 = empirical_zero_profit(&base).unwrap();
    let mut bumped = base.clone();
    bumped.wages[0] += 0.1;
    let p1 = empirical_zero_profit(&bumped).unwrap();
    assert!((p1 - p0 + 0.1).abs() < 1e-12);
}

#[test]
fn point_mass_breaks_even_exactly() {
    let cfg = SimulationConfig {
        dist: ProductivityDistribution::discrete([(0.7, 1.0)]).unwrap(),
        wages: vec![0.7, 0.7],
        ..two_period(10_000, 8)
    };
    assert_eq!(empirical_zero_profit(&cfg).unwrap(), 0.0);
}

#[test]
fn single_agent_replays_identically() {
    let cfg = two_period(1, 123);
    let a = serde_json::to_string(&agent_trajectory(&cfg, 0).unwrap()).unwrap();
    let b = serde_json::to_string(&agent_trajectory(&cfg, 0).unwrap()).unwrap();
    assert_eq!(a, b);
    let r = simulate(&cfg).unwrap();
    let t = agent_trajectory(&cfg, 0).unwrap();
    assert_eq!(r.markets[0].mean, Some(t.theta));
}
