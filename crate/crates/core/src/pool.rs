//! Productivity distributions and the sub-market pools derived from them.
//!
//! Every pool in the model is the entry-level distribution reweighted by a
//! piecewise-constant multiplier. Multipliers change only at firing
//! thresholds, so integrals over uniform and discrete bases are exact and
//! piecewise-linear densities integrate panel by panel.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;

/// Absolute tolerance used when a density has to be integrated numerically.
pub const QUAD_TOL: f64 = 1e-10;

/// Shape of an entry-level productivity density `N(θ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Density {
    /// Constant head-count per unit of productivity.
    Uniform { density: f64 },
    /// Point masses `(θ, count)`, sorted by θ.
    Discrete { atoms: Vec<(f64, f64)> },
    /// Linear interpolation between `(θ, density)` knots, sorted by θ.
    PiecewiseLinear { knots: Vec<(f64, f64)> },
}

/// The entry-level density `N(θ)` on `[θ_L, θ_H]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductivityDistribution {
    low: f64,
    high: f64,
    density: Density,
}

/// Head-count and first moment of a population slice.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Moments {
    pub mass: f64,
    pub first: f64,
}

impl Moments {
    pub fn mean(&self) -> Result<f64> {
        if self.mass > 0.0 {
            Ok(self.first / self.mass)
        } else {
            Err(Error::EmptyPool)
        }
    }

    fn scale(self, k: f64) -> Self {
        Moments {
            mass: k * self.mass,
            first: k * self.first,
        }
    }
}

impl std::ops::Add for Moments {
    type Output = Moments;
    fn add(self, o: Moments) -> Moments {
        Moments {
            mass: self.mass + o.mass,
            first: self.first + o.first,
        }
    }
}

impl ProductivityDistribution {
    /// Uniform density of one worker per unit of productivity on `[low, high]`.
    pub fn uniform(low: f64, high: f64) -> Result<Self> {
        Self::uniform_with_density(low, high, 1.0)
    }

    pub fn uniform_with_density(low: f64, high: f64, density: f64) -> Result<Self> {
        if !(low.is_finite() && high.is_finite() && low < high) {
            return Err(Error::InvalidDistribution(format!(
                "uniform support [{low}, {high}] must be finite with low < high"
            )));
        }
        if !(density.is_finite() && density > 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "uniform density {density} must be positive"
            )));
        }
        Ok(Self {
            low,
            high,
            density: Density::Uniform { density },
        })
    }

    /// Point masses given as `(θ, count)`; zero counts are allowed but the
    /// total must be positive.
    pub fn discrete(atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut atoms: Vec<(f64, f64)> = atoms.into_iter().collect();
        if atoms.is_empty() {
            return Err(Error::InvalidDistribution("no atoms".into()));
        }
        for &(t, c) in &atoms {
            if !t.is_finite() || !c.is_finite() || c < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "atom ({t}, {c}) needs finite θ and nonnegative count"
                )));
            }
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        // merge repeated productivities
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (t, c) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == t => last.1 += c,
                _ => merged.push((t, c)),
            }
        }
        let total: f64 = merged.iter().map(|a| a.1).sum();
        if total <= 0.0 {
            return Err(Error::InvalidDistribution("total count is zero".into()));
        }
        Ok(Self {
            low: merged[0].0,
            high: merged[merged.len() - 1].0,
            density: Density::Discrete { atoms: merged },
        })
    }

    /// Density interpolated linearly between knots `(θ, N(θ))`.
    pub fn piecewise_linear(knots: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let knots: Vec<(f64, f64)> = knots.into_iter().collect();
        if knots.len() < 2 {
            return Err(Error::InvalidDistribution(
                "piecewise-linear density needs at least two knots".into(),
            ));
        }
        for w in knots.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(Error::InvalidDistribution(
                    "knots must be strictly increasing in θ".into(),
                ));
            }
        }
        if knots
            .iter()
            .any(|&(t, d)| !t.is_finite() || !d.is_finite() || d < 0.0)
        {
            return Err(Error::InvalidDistribution(
                "knot densities must be finite and nonnegative".into(),
            ));
        }
        let dist = Self {
            low: knots[0].0,
            high: knots[knots.len() - 1].0,
            density: Density::PiecewiseLinear { knots },
        };
        if dist.total_mass() <= 0.0 {
            return Err(Error::InvalidDistribution("total mass is zero".into()));
        }
        Ok(dist)
    }

    pub fn support_low(&self) -> f64 {
        self.low
    }

    pub fn support_high(&self) -> f64 {
        self.high
    }

    pub fn density(&self) -> &Density {
        &self.density
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self.density, Density::Discrete { .. })
    }

    /// True when every worker has the same productivity.
    pub fn is_degenerate(&self) -> bool {
        match &self.density {
            Density::Discrete { atoms } => atoms.iter().filter(|a| a.1 > 0.0).count() <= 1,
            _ => false,
        }
    }

    /// `N(θ)` for continuous kinds; `None` for point masses.
    pub fn density_at(&self, theta: f64) -> Option<f64> {
        match &self.density {
            Density::Uniform { density } => Some(if (self.low..=self.high).contains(&theta) {
                *density
            } else {
                0.0
            }),
            Density::Discrete { .. } => None,
            Density::PiecewiseLinear { knots } => Some(interpolate(knots, theta)),
        }
    }

    /// Total head-count `N`.
    pub fn total_mass(&self) -> f64 {
        self.moments_closed(self.low, self.high).mass
    }

    pub fn mean(&self) -> f64 {
        let m = self.moments_closed(self.low, self.high);
        m.first / m.mass
    }

    /// Moments over the closed interval `[a, b]`.
    pub fn moments_closed(&self, a: f64, b: f64) -> Moments {
        match &self.density {
            Density::Discrete { atoms } => atoms
                .iter()
                .filter(|(t, _)| a <= *t && *t <= b)
                .fold(Moments::default(), |acc, &(t, c)| {
                    acc + Moments {
                        mass: c,
                        first: c * t,
                    }
                }),
            _ => self.continuous_moments(a, b),
        }
    }

    fn continuous_moments(&self, a: f64, b: f64) -> Moments {
        let a = a.max(self.low);
        let b = b.min(self.high);
        if b <= a {
            return Moments::default();
        }
        match &self.density {
            Density::Uniform { density } => Moments {
                mass: density * (b - a),
                first: density * (b - a) * (b + a) * 0.5,
            },
            Density::PiecewiseLinear { knots } => {
                let mut acc = Moments::default();
                for w in knots.windows(2) {
                    let lo = w[0].0.max(a);
                    let hi = w[1].0.min(b);
                    if hi <= lo {
                        continue;
                    }
                    let mass = adaptive_simpson(|t| interpolate(knots, t), lo, hi, QUAD_TOL);
                    let first =
                        adaptive_simpson(|t| t * interpolate(knots, t), lo, hi, QUAD_TOL);
                    acc = acc + Moments { mass, first };
                }
                acc
            }
            Density::Discrete { .. } => unreachable!("discrete moments are summed directly"),
        }
    }

    /// Share of the population with productivity strictly below `t`.
    pub fn share_below(&self, t: f64) -> f64 {
        let below = match &self.density {
            Density::Discrete { atoms } => atoms.iter().filter(|a| a.0 < t).map(|a| a.1).sum(),
            _ => self.continuous_moments(self.low, t).mass,
        };
        below / self.total_mass()
    }

    /// Generalised inverse CDF: the smallest θ whose cumulative share reaches `u`.
    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        match &self.density {
            Density::Uniform { .. } => self.low + u * (self.high - self.low),
            Density::Discrete { atoms } => {
                let target = u * self.total_mass();
                let mut cum = 0.0;
                for &(t, c) in atoms {
                    cum += c;
                    if c > 0.0 && cum >= target {
                        return t;
                    }
                }
                self.high
            }
            Density::PiecewiseLinear { knots } => {
                let mut remaining = u * self.total_mass();
                for w in knots.windows(2) {
                    let (x0, d0) = w[0];
                    let (x1, d1) = w[1];
                    let h = x1 - x0;
                    let seg = 0.5 * (d0 + d1) * h;
                    if remaining <= seg && seg > 0.0 {
                        let slope = (d1 - d0) / (2.0 * h);
                        let t = if slope == 0.0 {
                            remaining / d0
                        } else {
                            2.0 * remaining / (d0 + (d0 * d0 + 4.0 * slope * remaining).sqrt())
                        };
                        return (x0 + t).min(x1);
                    }
                    remaining -= seg;
                }
                self.high
            }
        }
    }

    /// `∫ Q(u) du` over `[u0, u1]`, i.e. the population-share-weighted
    /// productivity of a quantile band.
    pub fn quantile_band_integral(&self, u0: f64, u1: f64) -> f64 {
        let (u0, u1) = (u0.clamp(0.0, 1.0), u1.clamp(0.0, 1.0));
        if u1 <= u0 {
            return 0.0;
        }
        match &self.density {
            Density::Discrete { atoms } => {
                let total = self.total_mass();
                let mut cum = 0.0;
                let mut acc = 0.0;
                for &(t, c) in atoms {
                    let lo = cum / total;
                    cum += c;
                    let hi = cum / total;
                    let overlap = hi.min(u1) - lo.max(u0);
                    if overlap > 0.0 {
                        acc += overlap * t;
                    }
                }
                acc
            }
            _ => {
                let m = self.continuous_moments(self.quantile(u0), self.quantile(u1));
                m.first / self.total_mass()
            }
        }
    }
}

fn interpolate(knots: &[(f64, f64)], t: f64) -> f64 {
    if t < knots[0].0 || t > knots[knots.len() - 1].0 {
        return 0.0;
    }
    let i = knots.partition_point(|k| k.0 <= t);
    if i == 0 {
        return knots[0].1;
    }
    if i == knots.len() {
        return knots[knots.len() - 1].1;
    }
    let (x0, d0) = knots[i - 1];
    let (x1, d1) = knots[i];
    d0 + (d1 - d0) * (t - x0) / (x1 - x0)
}

impl fmt::Display for ProductivityDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.density {
            Density::Uniform { density } if *density == 1.0 => {
                write!(f, "uniform({},{})", self.low, self.high)
            }
            Density::Uniform { density } => {
                write!(f, "uniform({},{},{})", self.low, self.high, density)
            }
            Density::Discrete { atoms } => {
                let parts: Vec<String> = atoms.iter().map(|(t, c)| format!("({t},{c})")).collect();
                write!(f, "discrete({})", parts.join(";"))
            }
            Density::PiecewiseLinear { knots } => {
                let parts: Vec<String> = knots.iter().map(|(t, d)| format!("({t},{d})")).collect();
                write!(f, "piecewise({})", parts.join(";"))
            }
        }
    }
}

/// Exogenous probability that a retained worker changes job anyway.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct QuitFactor(f64);

impl QuitFactor {
    pub fn new(mu: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&mu) {
            Ok(QuitFactor(mu))
        } else {
            Err(Error::OutOfRange {
                what: "mu",
                value: mu,
                range: "[0, 1]".into(),
            })
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// True for `0 < μ < 1`.
    pub fn is_interior(self) -> bool {
        self.0 > 0.0 && self.0 < 1.0
    }
}

impl TryFrom<f64> for QuitFactor {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        QuitFactor::new(v)
    }
}

impl From<QuitFactor> for f64 {
    fn from(q: QuitFactor) -> f64 {
        q.0
    }
}

/// One weight segment `[start, end)` with its head-count multiplier. The
/// final segment of a pool also contains its right endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSegment {
    pub start: f64,
    pub end: f64,
    pub multiplier: f64,
}

/// A sub-market's composition: the base distribution times a
/// piecewise-constant weight.
#[derive(Debug, Clone, PartialEq)]
pub struct LaborPool {
    base: Arc<ProductivityDistribution>,
    /// Interior breakpoints in `(θ_L, θ_H]`, strictly increasing.
    cuts: Vec<f64>,
    /// `cuts.len() + 1` multipliers.
    multipliers: Vec<f64>,
}

impl LaborPool {
    /// The entry-level pool: every multiplier equal to one.
    pub fn new(base: ProductivityDistribution) -> Self {
        Self::from_shared(Arc::new(base))
    }

    pub fn from_shared(base: Arc<ProductivityDistribution>) -> Self {
        LaborPool {
            base,
            cuts: Vec::new(),
            multipliers: vec![1.0],
        }
    }

    /// Builds a pool from explicit segments, which must tile the base support.
    pub fn with_segments(
        base: ProductivityDistribution,
        segments: &[WeightSegment],
    ) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidParameter(format!("weight segments: {msg}")));
        if segments.is_empty() {
            return bad("empty");
        }
        if segments[0].start != base.support_low()
            || segments[segments.len() - 1].end != base.support_high()
        {
            return bad("must start at θ_L and end at θ_H");
        }
        for w in segments.windows(2) {
            if w[0].end != w[1].start {
                return bad("gap or overlap between segments");
            }
        }
        let mut cuts = Vec::new();
        let mut multipliers = Vec::new();
        for (i, s) in segments.iter().enumerate() {
            if !(s.multiplier >= 0.0 && s.multiplier.is_finite()) || s.end < s.start {
                return bad("multipliers must be finite and nonnegative");
            }
            if i > 0 {
                cuts.push(s.start);
            }
            multipliers.push(s.multiplier);
        }
        Ok(LaborPool {
            base: Arc::new(base),
            cuts,
            multipliers,
        }
        .normalized())
    }

    pub fn base(&self) -> &ProductivityDistribution {
        &self.base
    }

    pub fn shared_base(&self) -> &Arc<ProductivityDistribution> {
        &self.base
    }

    pub fn segments(&self) -> Vec<WeightSegment> {
        let lo = self.base.support_low();
        let hi = self.base.support_high();
        (0..self.multipliers.len())
            .map(|i| WeightSegment {
                start: if i == 0 { lo } else { self.cuts[i - 1] },
                end: if i == self.cuts.len() { hi } else { self.cuts[i] },
                multiplier: self.multipliers[i],
            })
            .collect()
    }

    /// Multiplier applied to workers of productivity θ.
    pub fn weight_at(&self, theta: f64) -> f64 {
        if theta < self.base.support_low() || theta > self.base.support_high() {
            return 0.0;
        }
        self.multipliers[self.cuts.partition_point(|&c| c <= theta)]
    }

    /// Moments of the pool restricted to the closed interval `[a, b]`.
    pub fn moments_within(&self, a: f64, b: f64) -> Moments {
        match self.base.density() {
            Density::Discrete { atoms } => atoms
                .iter()
                .filter(|(t, _)| a <= *t && *t <= b)
                .fold(Moments::default(), |acc, &(t, c)| {
                    let w = self.weight_at(t) * c;
                    acc + Moments {
                        mass: w,
                        first: w * t,
                    }
                }),
            _ => self
                .segments()
                .iter()
                .filter(|s| s.multiplier != 0.0)
                .fold(Moments::default(), |acc, s| {
                    let m = self
                        .base
                        .moments_closed(s.start.max(a), s.end.min(b));
                    acc + m.scale(s.multiplier)
                }),
        }
    }

    pub fn moments(&self) -> Moments {
        self.moments_within(self.base.support_low(), self.base.support_high())
    }

    /// `∫ w(θ) N(θ) dθ`.
    pub fn mass(&self) -> f64 {
        self.moments().mass
    }

    pub fn is_empty(&self) -> bool {
        self.mass() <= 0.0
    }

    /// Average productivity of the pool.
    pub fn mean(&self) -> Result<f64> {
        self.moments().mean()
    }

    /// Average productivity of the pool restricted to `[a, b]`.
    pub fn truncated_mean(&self, a: f64, b: f64) -> Result<f64> {
        if !(a < b) {
            return Err(Error::InvalidParameter(format!(
                "truncation interval [{a}, {b}] is empty"
            )));
        }
        self.moments_within(a, b).mean()
    }

    pub fn scaled(&self, factor: f64) -> LaborPool {
        LaborPool {
            base: self.base.clone(),
            cuts: self.cuts.clone(),
            multipliers: self.multipliers.iter().map(|m| m * factor).collect(),
        }
        .normalized()
    }

    /// Splits the pool at a firing threshold.
    ///
    /// Workers strictly below `threshold` all leave; those at or above it
    /// leave with probability μ. Thresholds outside the support are clamped.
    pub fn firing_split(&self, threshold: f64, mu: QuitFactor) -> (LaborPool, LaborPool) {
        assert!(!threshold.is_nan(), "firing threshold is NaN");
        let mu = mu.get();
        let lo = self.base.support_low();
        let hi = self.base.support_high();
        if threshold > hi {
            let empty = self.scaled(0.0);
            return (self.clone(), empty);
        }
        let t = threshold.max(lo);
        let mut cuts = self.cuts.clone();
        let mut mults = self.multipliers.clone();
        // index of the first segment lying at or above t
        let first_above = if t > lo {
            let pos = cuts.partition_point(|&c| c < t);
            if cuts.get(pos) != Some(&t) {
                cuts.insert(pos, t);
                mults.insert(pos, mults[pos]);
            }
            pos + 1
        } else {
            0
        };
        let mut leave = mults.clone();
        let mut stay = mults;
        for i in 0..leave.len() {
            if i >= first_above {
                stay[i] = leave[i] * (1.0 - mu);
                leave[i] *= mu;
            } else {
                stay[i] = 0.0;
            }
        }
        let make = |multipliers| {
            LaborPool {
                base: self.base.clone(),
                cuts: cuts.clone(),
                multipliers,
            }
            .normalized()
        };
        (make(leave), make(stay))
    }

    /// Mean productivity of the workers who leave at threshold `w`.
    pub fn m_operator(&self, w: f64, mu: QuitFactor) -> Result<f64> {
        self.firing_split(w, mu).0.mean()
    }

    fn normalized(mut self) -> Self {
        let mut i = 0;
        while i < self.cuts.len() {
            if self.multipliers[i] == self.multipliers[i + 1] {
                self.cuts.remove(i);
                self.multipliers.remove(i + 1);
            } else {
                i += 1;
            }
        }
        self
    }
}

/// Total head-count of a pool.
pub fn pool_mass(pool: &LaborPool) -> f64 {
    pool.mass()
}

pub fn pool_mean(pool: &LaborPool) -> Result<f64> {
    pool.mean()
}

pub fn truncated_mean(pool: &LaborPool, a: f64, b: f64) -> Result<f64> {
    pool.truncated_mean(a, b)
}

pub fn firing_split(pool: &LaborPool, threshold: f64, mu: QuitFactor) -> (LaborPool, LaborPool) {
    pool.firing_split(threshold, mu)
}

pub fn m_operator(pool: &LaborPool, w: f64, mu: QuitFactor) -> Result<f64> {
    pool.m_operator(w, mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> LaborPool {
        LaborPool::new(ProductivityDistribution::uniform(0.0, 1.0).unwrap())
    }

    fn two_atoms() -> LaborPool {
        LaborPool::new(ProductivityDistribution::discrete([(1.0, 10.0), (2.0, 30.0)]).unwrap())
    }

    fn q(mu: f64) -> QuitFactor {
        QuitFactor::new(mu).unwrap()
    }

    #[test]
    fn masses() {
        assert_eq!(unit().mass(), 1.0);
        assert_eq!(two_atoms().mass(), 40.0);
        let base = ProductivityDistribution::uniform(0.0, 1.0).unwrap();
        let p = LaborPool::with_segments(
            base,
            &[
                WeightSegment { start: 0.0, end: 0.5, multiplier: 1.0 },
                WeightSegment { start: 0.5, end: 1.0, multiplier: 0.5 },
            ],
        )
        .unwrap();
        assert!((p.mass() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn means() {
        assert_eq!(unit().mean().unwrap(), 0.5);
        assert_eq!(two_atoms().mean().unwrap(), 1.75);
        assert_eq!(unit().truncated_mean(0.5, 1.0).unwrap(), 0.75);
        assert_eq!(two_atoms().truncated_mean(1.5, 2.0).unwrap(), 2.0);
        let a = 0.414214;
        assert!((unit().truncated_mean(a, 1.0).unwrap() - 0.707107).abs() < 1e-12);
    }

    #[test]
    fn empty_truncation_is_an_error() {
        assert_eq!(two_atoms().truncated_mean(1.2, 1.8), Err(Error::EmptyPool));
        assert_eq!(unit().scaled(0.0).mean(), Err(Error::EmptyPool));
    }

    #[test]
    fn split_extremes() {
        let (l, s) = unit().firing_split(0.5, q(0.0));
        assert_eq!(l.mass(), 0.5);
        assert_eq!(l.mean().unwrap(), 0.25);
        assert_eq!(s.mean().unwrap(), 0.75);
        let (l, s) = unit().firing_split(0.5, q(1.0));
        assert_eq!(l.mass(), 1.0);
        assert!(s.is_empty());
        let (l, s) = unit().firing_split(0.5, q(0.5));
        assert_eq!(l.mass(), 0.75);
        assert_eq!(s.mass(), 0.25);
    }

    #[test]
    fn split_clamps_outside_support() {
        let (l, s) = unit().firing_split(-3.0, q(0.25));
        assert_eq!(l.mass(), 0.25);
        assert_eq!(s.mass(), 0.75);
        let (l, s) = unit().firing_split(7.0, q(0.25));
        assert_eq!(l.mass(), 1.0);
        assert!(s.is_empty());
    }

    #[test]
    fn atoms_at_the_threshold_count_as_retained() {
        let p = LaborPool::new(ProductivityDistribution::discrete([(1.0, 100.0)]).unwrap());
        let (l, s) = p.firing_split(1.0, q(0.5));
        assert_eq!(l.mass(), 50.0);
        assert_eq!(s.mass(), 50.0);
    }

    #[test]
    fn m_operator_values() {
        let p = unit();
        assert_eq!(p.m_operator(0.0, q(0.5)).unwrap(), 0.5);
        assert!((p.m_operator(1.0, q(0.5)).unwrap() - 0.5).abs() < 1e-15);
        let expect = (0.125 + 0.5 * 0.375) / (0.5 + 0.5 * 0.5);
        assert!((p.m_operator(0.5, q(0.5)).unwrap() - expect).abs() < 1e-15);
        assert_eq!(p.m_operator(0.0, q(0.0)), Err(Error::EmptyPool));
    }

    #[test]
    fn segments_must_tile() {
        let base = ProductivityDistribution::uniform(0.0, 1.0).unwrap();
        let gap = [
            WeightSegment { start: 0.0, end: 0.4, multiplier: 1.0 },
            WeightSegment { start: 0.5, end: 1.0, multiplier: 1.0 },
        ];
        assert!(LaborPool::with_segments(base, &gap).is_err());
    }

    #[test]
    fn piecewise_linear_moments() {
        // triangle on [0, 2] peaking at 1
        let d = ProductivityDistribution::piecewise_linear([(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)])
            .unwrap();
        assert!((d.total_mass() - 1.0).abs() < 1e-12);
        assert!((d.mean() - 1.0).abs() < 1e-12);
        assert!((d.quantile(0.5) - 1.0).abs() < 1e-12);
        assert!((d.quantile(0.125) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn quantiles_and_bands() {
        let d = ProductivityDistribution::discrete([(1.0, 10.0), (2.0, 30.0)]).unwrap();
        assert_eq!(d.quantile(0.2), 1.0);
        assert_eq!(d.quantile(0.3), 2.0);
        assert!((d.quantile_band_integral(0.0, 1.0) - 1.75).abs() < 1e-15);
        let u = ProductivityDistribution::uniform(0.0, 1.0).unwrap();
        assert!((u.quantile_band_integral(0.9, 1.0) - 0.095).abs() < 1e-15);
        assert_eq!(u.share_below(0.25), 0.25);
    }

    #[test]
    fn invalid_distributions() {
        assert!(ProductivityDistribution::uniform(1.0, 1.0).is_err());
        assert!(ProductivityDistribution::discrete([]).is_err());
        assert!(ProductivityDistribution::discrete([(1.0, 0.0)]).is_err());
        assert!(ProductivityDistribution::piecewise_linear([(0.0, 1.0), (0.0, 1.0)]).is_err());
        assert!(QuitFactor::new(1.5).is_err());
    }
}
