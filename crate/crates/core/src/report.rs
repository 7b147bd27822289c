//! Inequality checks reported one by one.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs < rhs` with a margin above the tolerance.
    Strict,
    /// `lhs` and `rhs` agree within the tolerance.
    Equal,
    /// `lhs > rhs` beyond the tolerance.
    Violated,
}

/// One claimed inequality `lhs < rhs`, evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
}

impl Inequality {
    pub fn less(label: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let relation = if rhs - lhs > tol {
            Relation::Strict
        } else if (rhs - lhs).abs() <= tol {
            Relation::Equal
        } else {
            Relation::Violated
        };
        Inequality {
            label: label.into(),
            lhs,
            rhs,
            relation,
        }
    }

    pub fn holds_strictly(&self) -> bool {
        self.relation == Relation::Strict
    }
}

/// A named list of inequalities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub checks: Vec<Inequality>,
}

impl InequalityReport {
    pub fn all_strict(&self) -> bool {
        self.checks.iter().all(Inequality::holds_strictly)
    }

    pub fn all_equal(&self) -> bool {
        self.checks.iter().all(|c| c.relation == Relation::Equal)
    }

    pub fn any_violated(&self) -> bool {
        self.checks.iter().any(|c| c.relation == Relation::Violated)
    }

    pub fn get(&self, label: &str) -> Option<&Inequality> {
        self.checks.iter().find(|c| c.label == label)
    }
}
