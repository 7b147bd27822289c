//! Slice-by-slice screening of workers whose productivity the firm learns
//! one interval per period.
//!
//! With `n` periods needed to reveal a worker fully, period `t` tells the
//! firm whether `θ` lies in the `t`-th of `n` equal slices of `[θ_l, θ_h]`.
//! Workers revealed in a slice lying entirely below the entry-pool average
//! are fired. If the firm may only screen for `m < n/2` periods, some
//! below-average workers survive.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScreeningConfig {
    /// Periods required to reveal productivity completely (`n`).
    pub n_total: u32,
    /// Periods during which the firm may observe and fire (`m`).
    pub m_allowed: u32,
    pub theta_low: f64,
    pub theta_high: f64,
}

impl ScreeningConfig {
    pub fn new(n_total: u32, m_allowed: u32, theta_low: f64, theta_high: f64) -> Result<Self> {
        if n_total == 0 {
            return Err(Error::InvalidParameter("n_total must be at least 1".into()));
        }
        if !(theta_low.is_finite() && theta_high.is_finite() && theta_low < theta_high) {
            return Err(Error::InvalidParameter(format!(
                "screening support [{theta_low}, {theta_high}] needs theta_low < theta_high"
            )));
        }
        Ok(ScreeningConfig {
            n_total,
            m_allowed,
            theta_low,
            theta_high,
        })
    }

    /// Entry-pool average, the fixed firing benchmark.
    pub fn market_average(&self) -> f64 {
        0.5 * (self.theta_low + self.theta_high)
    }
}

/// Productivity slice the firm can confirm in period `t` (zero-based).
pub fn distinguishable_interval(t: u32, cfg: &ScreeningConfig) -> Result<(f64, f64)> {
    if t >= cfg.n_total {
        return Err(Error::OutOfRange {
            what: "period",
            value: t as f64,
            range: format!("[0, {})", cfg.n_total),
        });
    }
    let span = cfg.theta_high - cfg.theta_low;
    let n = cfg.n_total as f64;
    let lo = cfg.theta_low + (t as f64 / n) * span;
    let hi = if t + 1 == cfg.n_total {
        cfg.theta_high
    } else {
        cfg.theta_low + ((t + 1) as f64 / n) * span
    };
    Ok((lo, hi))
}

/// Probability that a worker who survives `m` screening periods is below
/// the market average: `(1/2 − m/n) / (1 − m/n)` while `m/n < 1/2`, else 0.
///
/// The closed form assumes whole slices tile the lower half of the support,
/// which is exact for even `n`. For odd `n` and `m > n/2` the slice
/// straddling the average is never fired and [`simulate_slice_firing`]
/// reports a residual of `1/(n+1)`.
pub fn residual_below_average_probability(cfg: &ScreeningConfig) -> f64 {
    let ratio = cfg.m_allowed as f64 / cfg.n_total as f64;
    if ratio >= 0.5 {
        0.0
    } else {
        (0.5 - ratio) / (1.0 - ratio)
    }
}

/// Largest `n` for which `m` screening periods remove every
/// below-average worker.
pub fn critical_assessment_periods(m_allowed: u32) -> u32 {
    2 * m_allowed
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceFiringOutcome {
    pub types: usize,
    pub survivors: usize,
    pub survivors_below_average: usize,
    /// `survivors_below_average / survivors`.
    pub probability: f64,
}

/// Replays the firing rule over `n_types` evenly spaced worker types.
pub fn simulate_slice_firing(cfg: &ScreeningConfig, n_types: usize) -> SliceFiringOutcome {
    let avg = cfg.market_average();
    let span = cfg.theta_high - cfg.theta_low;
    let observed = cfg.m_allowed.min(cfg.n_total);
    let fired: Vec<(f64, f64)> = (0..observed)
        .filter_map(|t| distinguishable_interval(t, cfg).ok())
        .filter(|&(_, hi)| hi <= avg)
        .collect();
    let mut survivors = 0;
    let mut below = 0;
    for k in 0..n_types {
        let theta = cfg.theta_low + span * (k as f64 + 0.5) / n_types as f64;
        if fired.iter().any(|&(lo, hi)| lo <= theta && theta < hi) {
            continue;
        }
        survivors += 1;
        if theta < avg {
            below += 1;
        }
    }
    SliceFiringOutcome {
        types: n_types,
        survivors,
        survivors_below_average: below,
        probability: if survivors > 0 {
            below as f64 / survivors as f64
        } else {
            0.0
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: u32, m: u32) -> ScreeningConfig {
        ScreeningConfig::new(n, m, 0.0, 1.0).unwrap()
    }

    #[test]
    fn intervals() {
        let c = ScreeningConfig::new(6, 3, 0.0, 6.0).unwrap();
        assert_eq!(distinguishable_interval(0, &c).unwrap(), (0.0, 1.0));
        assert_eq!(distinguishable_interval(5, &c).unwrap(), (5.0, 6.0));
        let (a, b) = distinguishable_interval(2, &cfg(10, 1)).unwrap();
        assert!((a - 0.2).abs() < 1e-15 && (b - 0.3).abs() < 1e-15);
        assert!(matches!(
            distinguishable_interval(6, &c),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn intervals_tile_the_support() {
        let c = ScreeningConfig::new(7, 1, -1.0, 2.5).unwrap();
        let mut prev = c.theta_low;
        for t in 0..7 {
            let (a, b) = distinguishable_interval(t, &c).unwrap();
            assert_eq!(a, prev);
            prev = b;
        }
        assert_eq!(prev, c.theta_high);
    }

    #[test]
    fn probabilities() {
        assert_eq!(residual_below_average_probability(&cfg(6, 3)), 0.0);
        assert!((residual_below_average_probability(&cfg(10, 3)) - 2.0 / 7.0).abs() < 1e-15);
        assert_eq!(residual_below_average_probability(&cfg(10, 0)), 0.5);
        assert_eq!(residual_below_average_probability(&cfg(4, 9)), 0.0);
    }

    #[test]
    fn critical_periods() {
        assert_eq!(critical_assessment_periods(3), 6);
        assert_eq!(critical_assessment_periods(1), 2);
        assert_eq!(critical_assessment_periods(5), 10);
        // n = 2m clears everyone below average, n = 2m + 1 does not
        for m in 1..8 {
            let n = critical_assessment_periods(m);
            assert_eq!(simulate_slice_firing(&cfg(n, m), 10_000).survivors_below_average, 0);
            assert!(simulate_slice_firing(&cfg(n + 1, m), 10_000).survivors_below_average > 0);
        }
    }

    #[test]
    fn odd_n_straddle_slice_survives() {
        let sim = simulate_slice_firing(&cfg(5, 3), 100_000);
        assert!((sim.probability - 1.0 / 6.0).abs() < 1e-3);
    }

    #[test]
    fn invalid_config() {
        assert!(ScreeningConfig::new(0, 1, 0.0, 1.0).is_err());
        assert!(ScreeningConfig::new(3, 1, 1.0, 0.0).is_err());
    }
}
