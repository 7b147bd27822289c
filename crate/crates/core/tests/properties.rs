use proptest::prelude::*;

use lemonlab::equilibrium::solve_two_period;
use lemonlab::moral_hazard::{default_wage_grid, welfare_gap, AgentUtility, ContractProblem, PrincipalUtility};
use lemonlab::multiperiod::{build_market_tree, internal_node_count};
use lemonlab::quad::adaptive_simpson;
use lemonlab::screening::{residual_below_average_probability, ScreeningConfig};
use lemonlab::{LaborPool, ProductivityDistribution, QuitFactor, SolverOptions};

fn uniform() -> impl Strategy<Value = ProductivityDistribution> {
    (-2.0..2.0f64, 0.1..3.0f64, 0.2..4.0f64)
        .prop_map(|(a, w, d)| ProductivityDistribution::uniform_with_density(a, a + w, d).unwrap())
}

fn discrete() -> impl Strategy<Value = ProductivityDistribution> {
    prop::collection::vec((-1.0..2.0f64, 0.1..5.0f64), 1..6)
        .prop_map(|atoms| ProductivityDistribution::discrete(atoms).unwrap())
}

fn piecewise() -> impl Strategy<Value = ProductivityDistribution> {
    (-1.0..1.0f64, prop::collection::vec((0.1..1.0f64, 0.0..3.0f64), 2..5)).prop_map(|(start, steps)| {
        let mut x = start;
        let mut knots = vec![(x, 1.0)];
        for (dx, d) in steps {
            x += dx;
            knots.push((x, d));
        }
        ProductivityDistribution::piecewise_linear(knots).unwrap()
    })
}

fn any_dist() -> impl Strategy<Value = ProductivityDistribution> {
    prop_oneof![uniform(), discrete(), piecewise()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn firing_conserves_mass(dist in any_dist(), t in -3.0..5.0f64, m in 0.0..=1.0f64) {
        let pool = LaborPool::new(dist);
        let (l, s) = pool.firing_split(t, QuitFactor::new(m).unwrap());
        let n = pool.mass();
        prop_assert!((l.mass() + s.mass() - n).abs() <= 1e-10 * n.max(1.0));
    }

    #[test]
    fn means_stay_in_support(dist in any_dist(), t in -3.0..5.0f64, m in 0.01..=1.0f64) {
        let (lo, hi) = (dist.support_low(), dist.support_high());
        let pool = LaborPool::new(dist);
        let (l, s) = pool.firing_split(t, QuitFactor::new(m).unwrap());
        for p in [&pool, &l, &s] {
            if let Ok(mean) = p.mean() {
                prop_assert!(mean >= lo - 1e-12 && mean <= hi + 1e-12);
            }
        }
    }

    #[test]
    fn m_at_the_ends_is_the_pool_mean(dist in any_dist(), m in 0.01..=1.0f64) {
        let pool = LaborPool::new(dist.clone());
        let mu = QuitFactor::new(m).unwrap();
        let mean = pool.mean().unwrap();
        let at_low = pool.m_operator(dist.support_low(), mu).unwrap();
        prop_assert!((at_low - mean).abs() <= 1e-10 * mean.abs().max(1.0));
        if !dist.is_discrete() {
            let at_high = pool.m_operator(dist.support_high(), mu).unwrap();
            prop_assert!((at_high - mean).abs() <= 1e-10 * mean.abs().max(1.0));
        }
    }

    #[test]
    fn m_is_depressed_inside_uniform_support(dist in uniform(), m in 0.01..0.99f64, u in 0.01..0.99f64) {
        let pool = LaborPool::new(dist.clone());
        let w = dist.support_low() + u * (dist.support_high() - dist.support_low());
        let mw = pool.m_operator(w, QuitFactor::new(m).unwrap()).unwrap();
        prop_assert!(mw < dist.mean());
    }

    #[test]
    fn closed_form_matches_quadrature(dist in uniform(), u0 in 0.0..1.0f64, u1 in 0.0..1.0f64) {
        let (lo, hi) = (dist.support_low(), dist.support_high());
        let (a, b) = (lo + u0.min(u1) * (hi - lo), lo + u0.max(u1) * (hi - lo));
        let exact = dist.moments_closed(a, b);
        let d = dist.density_at(0.5 * (lo + hi)).unwrap();
        let mass = adaptive_simpson(&|_| d, a, b, 1e-12);
        let first = adaptive_simpson(&|x| x * d, a, b, 1e-12);
        prop_assert!((exact.mass - mass).abs() < 1e-8);
        prop_assert!((exact.first - first).abs() < 1e-8);
    }

    #[test]
    fn tree_children_partition_parents(
        dist in any_dist(),
        n in 1u32..=6,
        m in 0.0..=1.0f64,
        seeds in prop::collection::vec(0.0..1.0f64, 31),
    ) {
        let (lo, hi) = (dist.support_low(), dist.support_high());
        let th: Vec<f64> = seeds[..internal_node_count(n)].iter().map(|u| lo + u * (hi - lo)).collect();
        let tree = build_market_tree(&dist, QuitFactor::new(m).unwrap(), n, &th).unwrap();
        prop_assert!(tree.max_conservation_error() <= 1e-10 * dist.total_mass().max(1.0));
        prop_assert_eq!(tree.off_firm_markets().count() as u64, (1u64 << (n - 1)) - 1);
        let terminal: f64 = tree.terminal_nodes().map(|t| t.pool.mass()).sum();
        prop_assert!((terminal - dist.total_mass()).abs() <= 1e-10 * dist.total_mass().max(1.0));
    }

    #[test]
    fn two_period_residuals_are_small(dist in prop_oneof![uniform(), piecewise()], m in 0.02..0.98f64) {
        let s = solve_two_period(&dist, QuitFactor::new(m).unwrap(), &SolverOptions::default()).unwrap();
        let span = dist.support_high() - dist.support_low();
        prop_assert!(s.residual_zero_profit.abs() <= 1e-9 * dist.total_mass() * span);
        if !s.collapsed {
            prop_assert!(s.residual_fixed_point.unwrap().abs() <= 1e-9);
            prop_assert!(s.w0 > s.theta_bar);
            prop_assert!(s.w1 < s.theta_bar);
        }
    }

    #[test]
    fn screening_is_monotone(n in 1u32..60, m in 0u32..60) {
        let p = |n, m| residual_below_average_probability(&ScreeningConfig::new(n, m, 0.0, 1.0).unwrap());
        let here = p(n, m);
        prop_assert!(p(n, m + 1) <= here);
        prop_assert!(p(n + 1, m) >= here);
        if 2 * m >= n {
            prop_assert_eq!(here, 0.0);
        } else {
            prop_assert!(here > 0.0 && here <= 0.5);
        }
    }
}

fn contract() -> impl Strategy<Value = ContractProblem> {
    (2usize..=3, 1usize..=3).prop_flat_map(|(k, a)| {
        (
            prop::collection::vec(0.0..5.0f64, k),
            prop::collection::vec(0.0..0.6f64, a),
            prop::collection::vec(prop::collection::vec(0.05..1.0f64, k), a),
            0.0..1.0f64,
        )
            .prop_map(|(mut outcomes, mut costs, raw, reservation)| {
                outcomes.sort_by(f64::total_cmp);
                costs.sort_by(f64::total_cmp);
                let density = raw
                    .into_iter()
                    .map(|col| {
                        let s: f64 = col.iter().sum();
                        let mut col: Vec<f64> = col.iter().map(|x| x / s).collect();
                        let tail: f64 = col[1..].iter().sum();
                        col[0] = 1.0 - tail;
                        col
                    })
                    .collect();
                let grid = default_wage_grid(&outcomes, 9);
                ContractProblem::new(
                    outcomes,
                    costs,
                    density,
                    AgentUtility::Sqrt,
                    PrincipalUtility::Neutral,
                    reservation,
                    grid,
                )
                .unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn second_best_never_beats_first_best(p in contract()) {
        if let Ok(g) = welfare_gap(&p) {
            prop_assert!(g.gap >= 0.0);
            prop_assert!(g.first_best.agent_value >= p.reservation - 1e-9);
            prop_assert!(g.second_best.agent_value >= p.reservation - 1e-9);
        }
    }
}
