//! Adverse selection in labour markets with fixed-term contracts.
//!
//! Workers of privately known productivity are hired under a firing
//! threshold, retained or released, and re-traded in second-hand markets
//! that partially reveal their type. The crate computes the resulting
//! equilibria for one-, two- and three-period regimes, builds the market
//! tree of employment histories, replays the process with sampled agents,
//! and solves the companion moral-hazard contract problem.

pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod moral_hazard;
pub mod multiperiod;
pub mod pool;
pub mod quad;
pub mod report;
pub mod screening;
pub mod simulator;
pub mod solver;

pub use error::{Error, Result};
pub use pool::{LaborPool, ProductivityDistribution, QuitFactor};
pub use solver::SolverOptions;
