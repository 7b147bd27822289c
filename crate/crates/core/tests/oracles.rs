//! Solver output against independently computed values: closed forms for
//! uniform pools, Riemann sums for general densities, and frozen numbers
//! from a separate reference implementation of the three-period system.

use lemonlab::equilibrium::{
    check_two_period_ordering, secondhand_fixed_point, solve_two_period, tatonnement, Clearing,
};
use lemonlab::multiperiod::{
    check_final_period_wages, check_second_period_wages, multi_start, second_period_chain,
    solve_reduced_two_period, solve_three_period,
};
use lemonlab::pool::Density;
use lemonlab::{LaborPool, ProductivityDistribution, QuitFactor, SolverOptions};

fn mu(m: f64) -> QuitFactor {
    QuitFactor::new(m).unwrap()
}

/// Root in `[a, b]` of `(1−μ)w² − 2(a−μb)w + (a² − μb²) = 0`, the fixed
/// point of the leaver-mean map on `uniform(a, b)`.
fn uniform_fixed_point(a: f64, b: f64, m: f64) -> f64 {
    ((a - m * b) + m.sqrt() * (b - a)) / (1.0 - m)
}

#[test]
fn two_period_uniform_closed_form() {
    let dist = ProductivityDistribution::uniform(0.0, 1.0).unwrap();
    for k in 1..10 {
        let m = k as f64 / 10.0;
        let s = solve_two_period(&dist, mu(m), &SolverOptions::default()).unwrap();
        let w1 = m.sqrt() / (1.0 + m.sqrt());
        assert!((s.w1 - w1).abs() < 1e-9, "mu {m}: {} vs {w1}", s.w1);
        assert!((s.w0 - (1.0 - w1)).abs() < 1e-9);
        assert!((s.theta_bar2.unwrap() - (1.0 + w1) / 2.0).abs() < 1e-9);
    }
}

#[test]
fn general_uniform_fixed_points() {
    for (a, b) in [(0.0, 1.0), (-0.2, 1.0), (1.0, 3.0), (-0.5, 2.0)] {
        let dist = ProductivityDistribution::uniform(a, b).unwrap();
        for m in [0.05, 0.3, 0.7, 0.95] {
            let expect = uniform_fixed_point(a, b, m);
            let fp = secondhand_fixed_point(&dist, mu(m), &SolverOptions::default()).unwrap();
            if expect >= 0.0 {
                assert!((fp.wage() - expect).abs() < 1e-9, "[{a},{b}] mu {m}");
            } else {
                assert_eq!(fp.outcome, Clearing::Collapse, "[{a},{b}] mu {m}");
            }
        }
    }
}

#[test]
fn symmetric_support_around_zero_always_collapses() {
    let dist = ProductivityDistribution::uniform(-1.0, 1.0).unwrap();
    for m in [0.0, 0.2, 0.6, 0.9] {
        let s = solve_two_period(&dist, mu(m), &SolverOptions::default()).unwrap();
        assert!(s.collapsed);
        assert_eq!(s.w1, 0.0);
    }
}

#[test]
fn two_atom_pool_by_hand() {
    // leavers at w ∈ (0.2, 0.8]: all of the 0.2 atom and half of the 0.8 atom
    let dist = ProductivityDistribution::discrete([(0.2, 1.0), (0.8, 1.0)]).unwrap();
    let s = solve_two_period(&dist, mu(0.5), &SolverOptions::default()).unwrap();
    assert!((s.w1 - 0.4).abs() < 1e-12);
    assert!((s.w0 - 0.6).abs() < 1e-12);
    assert_eq!(s.theta_bar2, Some(0.8));
}

/// Midpoint Riemann sums of mass and first moment of a pool's leavers and
/// stayers, straight from the density.
fn riemann_split(dist: &ProductivityDistribution, t: f64, m: f64, cells: usize) -> [f64; 4] {
    let (lo, hi) = (dist.support_low(), dist.support_high());
    let h = (hi - lo) / cells as f64;
    let mut out = [0.0; 4];
    for i in 0..cells {
        let x = lo + (i as f64 + 0.5) * h;
        let d = dist.density_at(x).unwrap() * h;
        let leave = if x < t { 1.0 } else { m };
        out[0] += leave * d;
        out[1] += leave * d * x;
        out[2] += (1.0 - leave) * d;
        out[3] += (1.0 - leave) * d * x;
    }
    out
}

#[test]
fn firing_split_matches_riemann_sums() {
    let dists = [
        ProductivityDistribution::piecewise_linear([(0.0, 2.0), (1.0, 0.0)]).unwrap(),
        ProductivityDistribution::piecewise_linear([(-1.0, 0.0), (0.0, 1.0), (2.0, 0.5), (3.0, 0.0)]).unwrap(),
        ProductivityDistribution::uniform_with_density(0.5, 2.5, 3.0).unwrap(),
    ];
    for dist in &dists {
        let pool = LaborPool::new(dist.clone());
        for (t, m) in [(0.3, 0.4), (1.1, 0.25), (-0.5, 0.9)] {
            let (l, s) = pool.firing_split(t, mu(m));
            let (lm, sm) = (l.moments(), s.moments());
            // a cut inside a cell costs O(h) in the sum; align cells with it
            let r = riemann_split(dist, t, m, 2_000_000);
            for (got, want) in [lm.mass, lm.first, sm.mass, sm.first].iter().zip(r) {
                assert!((got - want).abs() < 1e-5, "{dist} t={t}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn discrete_pool_sums_exactly() {
    let dist = ProductivityDistribution::discrete([(0.1, 2.0), (0.4, 1.0), (0.9, 3.0)]).unwrap();
    let (l, s) = LaborPool::new(dist).firing_split(0.4, mu(0.5));
    // 0.1 leaves; 0.4 sits on the threshold and is retained
    assert!((l.mass() - (2.0 + 0.5 + 1.5)).abs() < 1e-15);
    assert!((l.moments().first - (0.2 + 0.2 + 1.35)).abs() < 1e-15);
    assert!((s.mass() - 2.0).abs() < 1e-15);
}

#[test]
fn tatonnement_agrees_with_bisection() {
    let dists = [
        ProductivityDistribution::uniform(0.0, 1.0).unwrap(),
        ProductivityDistribution::uniform(-0.2, 1.0).unwrap(),
        ProductivityDistribution::piecewise_linear([(0.0, 2.0), (1.0, 0.0)]).unwrap(),
        ProductivityDistribution::piecewise_linear([(0.0, 0.0), (0.5, 2.0), (1.0, 0.0)]).unwrap(),
    ];
    for dist in &dists {
        for m in [0.1, 0.5, 0.9] {
            let fp = secondhand_fixed_point(dist, mu(m), &SolverOptions::default()).unwrap();
            if fp.outcome.is_collapse() {
                continue;
            }
            let t = tatonnement(&LaborPool::new(dist.clone()), mu(m), 0.5, 1e-13, 10_000).unwrap();
            assert!((t - fp.wage()).abs() < 1e-8, "{dist} mu {m}: {t} vs {}", fp.wage());
        }
    }
}

#[test]
fn ordering_holds_exactly_when_mu_exceeds_a_quarter() {
    // for uniform[0,1], w0 = 1 − w1 and θ̄₂ = (1 + w1)/2, so w0 < θ̄₂ iff w1 > 1/3 iff μ > 1/4
    let dist = ProductivityDistribution::uniform(0.0, 1.0).unwrap();
    for k in 1..10 {
        let m = k as f64 / 10.0;
        let s = solve_two_period(&dist, mu(m), &SolverOptions::default()).unwrap();
        let r = check_two_period_ordering(&s);
        assert_eq!(r.all_strict(), m > 0.25, "mu {m}");
        assert!(r.get("w1 < theta_bar").unwrap().holds_strictly());
        assert!(r.get("theta_bar < w0").unwrap().holds_strictly());
    }
}

#[test]
fn free_riders_are_overpaid() {
    for (a, b) in [(0.0, 1.0), (-0.3, 1.0), (2.0, 5.0)] {
        let dist = ProductivityDistribution::uniform(a, b).unwrap();
        for m in [0.1, 0.5, 0.9] {
            let s = solve_two_period(&dist, mu(m), &SolverOptions::default()).unwrap();
            assert!(s.w0 > s.theta_bar, "[{a},{b}] mu {m}");
        }
    }
}

#[test]
fn wages_approach_the_mean_as_quits_dominate() {
    let dist = ProductivityDistribution::uniform(0.0, 1.0).unwrap();
    let s = solve_two_period(&dist, mu(0.999_999), &SolverOptions::default()).unwrap();
    assert!((s.w1 - 0.5).abs() < 1e-3);
    assert!((s.w0 - 0.5).abs() < 1e-3);
}

/// Reference three-period wages `[w0, w1, w+, w2, w2']` and the means
/// `θ̄_Q1, θ̄_Q2, θ̄_second` on uniform[0,1].
const THREE_PERIOD_REFERENCE: &[(f64, [f64; 5], [f64; 3])] = &[
    (
        0.1,
        [0.990619, 0.416844, 0.152936, 0.356445, 0.092538],
        [0.576468, 0.678223, 0.254691],
    ),
    (
        0.2,
        [0.854878, 0.478054, 0.198763, 0.446359, 0.167068],
        [0.599381, 0.723179, 0.322561],
    ),
    (
        0.5,
        [0.655514, 0.509104, 0.271330, 0.573155, 0.335381],
        [0.635665, 0.786578, 0.422243],
    ),
    (
        0.8,
        [0.549846, 0.503472, 0.312867, 0.637287, 0.446682],
        [0.656433, 0.818643, 0.475077],
    ),
];

#[test]
fn three_period_matches_reference_values() {
    let dist = ProductivityDistribution::uniform(0.0, 1.0).unwrap();
    for &(m, wages, means) in THREE_PERIOD_REFERENCE {
        let s = solve_three_period(&dist, mu(m), &SolverOptions::default()).unwrap();
        for (got, want) in s.wages.to_array().iter().zip(wages) {
            assert!((got - want).abs() < 1e-6, "mu {m}: {got} vs {want}");
        }
        for (got, want) in [s.theta_bar_q1, s.theta_bar_q2, s.theta_bar_second].iter().zip(means) {
            assert!((got - want).abs() < 1e-6, "mu {m}: {got} vs {want}");
        }
        assert!(s.max_residual() <= 1e-8);
        assert!(!s.multiple_equilibria);
    }
}

#[test]
fn three_period_zero_profit_sums_to_the_mean() {
    // every worker's expected pay over three periods adds up to 3θ̄ in aggregate
    let dist = ProductivityDistribution::uniform(0.0, 1.0).unwrap();
    for m in [0.3, 0.6] {
        let s = solve_three_period(&dist, mu(m), &SolverOptions::default()).unwrap();
        let tree = lemonlab::multiperiod::three_period_tree(&dist, mu(m), &s.wages).unwrap();
        let paid: f64 = tree.nodes.iter().map(|n| n.pool.mass() * n.wage.unwrap()).sum();
        assert!((paid - 1.5).abs() < 1e-9, "mu {m}: {paid}");
    }
}

#[test]
fn three_period_limits() {
    let dist = ProductivityDistribution::uniform(0.0, 1.0).unwrap();
    let s = solve_three_period(&dist, mu(0.999), &SolverOptions::default()).unwrap();
    let w = s.wages;
    for x in [w.w0, w.w1, w.w2p] {
        assert!((x - 0.5).abs() < 1e-3, "{w:?}");
    }
    assert!((w.w_plus - 1.0 / 3.0).abs() < 1e-3);
    assert!((w.w2 - 2.0 / 3.0).abs() < 1e-3);
}

#[test]
fn three_period_inequalities_across_mu() {
    let dist = ProductivityDistribution::uniform(0.0, 1.0).unwrap();
    for k in 1..10 {
        let m = k as f64 / 10.0;
        let s = solve_three_period(&dist, mu(m), &SolverOptions::default()).unwrap();
        assert!(check_final_period_wages(&s).all_strict(), "mu {m}");
        assert!(check_second_period_wages(&s).all_strict(), "mu {m}");
        let chain = second_period_chain(&s);
        let link = chain.get("w_plus < w2p").unwrap().holds_strictly();
        assert_eq!(link, m > 0.2, "mu {m}: w+ {} w2' {}", s.wages.w_plus, s.wages.w2p);
    }
}

#[test]
fn damped_restarts_reach_the_bracketed_root() {
    let dist = ProductivityDistribution::uniform(0.0, 1.0).unwrap();
    for m in [0.2, 0.5, 0.8] {
        let s = solve_three_period(&dist, mu(m), &SolverOptions::default()).unwrap();
        let r = multi_start(&dist, mu(m), &SolverOptions::default(), 64, 99).unwrap();
        assert!(r.agree, "mu {m}: spread {}", r.spread);
        let best = r.runs[0].wages;
        for (a, b) in best.iter().zip(s.wages.to_array()) {
            assert!((a - b).abs() < 1e-6);
        }
    }
}

#[test]
fn reduced_tree_reproduces_two_period() {
    let dists = [
        ProductivityDistribution::uniform(0.0, 1.0).unwrap(),
        ProductivityDistribution::piecewise_linear([(0.0, 2.0), (1.0, 0.0)]).unwrap(),
    ];
    for dist in &dists {
        for m in [0.2, 0.5, 0.8] {
            let a = solve_two_period(dist, mu(m), &SolverOptions::default()).unwrap();
            let b = solve_reduced_two_period(dist, mu(m), &SolverOptions::default()).unwrap();
            assert!((a.w0 - b.w0).abs() < 1e-8 && (a.w1 - b.w1).abs() < 1e-8);
        }
    }
}

#[test]
fn density_literals_survive_serde() {
    let d = ProductivityDistribution::discrete([(0.2, 1.0), (0.8, 3.0)]).unwrap();
    let back: ProductivityDistribution = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
    assert_eq!(back, d);
    assert!(matches!(back.density(), Density::Discrete { .. }));
}
