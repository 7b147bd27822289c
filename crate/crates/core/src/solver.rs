//! Bracketing root search: scan a grid for sign changes, then bisect.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and budgets shared by the equilibrium solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Residual tolerance every returned root must meet.
    pub tol: f64,
    /// Bisection steps allowed per bracket.
    pub max_iter: usize,
    /// Grid points used to look for sign changes.
    pub scan_points: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-10,
            max_iter: 200,
            scan_points: 1024,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
}

/// Finds every root of `f` on `[lo, hi]` that shows up as a sign change or
/// an exact zero on the scan grid. `f` returns `None` where it is undefined.
///
/// Roots are returned in increasing order.
pub fn scan_roots<F>(f: F, lo: f64, hi: f64, opts: &SolverOptions) -> Result<Vec<Root>>
where
    F: Fn(f64) -> Option<f64>,
{
    let n = opts.scan_points.max(2);
    let grid: Vec<f64> = if hi > lo {
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * (i as f64) / ((n - 1) as f64)
                }
            })
            .collect()
    } else {
        vec![lo]
    };
    let values: Vec<Option<f64>> = grid.iter().map(|&x| f(x)).collect();

    let mut roots = Vec::new();
    for i in 0..grid.len() {
        if values[i] == Some(0.0) {
            roots.push(Root {
                x: grid[i],
                residual: 0.0,
            });
        }
        if i + 1 < grid.len() {
            if let (Some(a), Some(b)) = (values[i], values[i + 1]) {
                if a != 0.0 && b != 0.0 && (a < 0.0) != (b < 0.0) {
                    roots.push(bisect(&f, grid[i], grid[i + 1], a, opts)?);
                }
            }
        }
    }
    Ok(roots)
}

/// Bisects `[a, b]` where `f(a)` has sign `fa` and `f(b)` the opposite one.
pub fn bisect<F>(f: &F, mut a: f64, mut b: f64, mut fa: f64, opts: &SolverOptions) -> Result<Root>
where
    F: Fn(f64) -> Option<f64>,
{
    let mut fb = f(b).unwrap_or(f64::NAN);
    for _ in 0..opts.max_iter {
        let m = 0.5 * (a + b);
        if m <= a || m >= b || (b - a) <= 1e-15 * a.abs().max(b.abs()).max(1.0) {
            break;
        }
        let Some(fm) = f(m) else {
            return Err(Error::NoConvergence {
                what: "bisection hit an undefined point".into(),
                best_residual: fa.abs().min(fb.abs()),
                best: vec![m],
            });
        };
        if fm == 0.0 {
            return Ok(Root { x: m, residual: 0.0 });
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    let best = if fa.abs() <= fb.abs() || fb.is_nan() {
        Root { x: a, residual: fa }
    } else {
        Root { x: b, residual: fb }
    };
    if best.residual.abs() <= opts.tol {
        Ok(best)
    } else {
        Err(Error::NoConvergence {
            what: "bisection".into(),
            best_residual: best.residual.abs(),
            best: vec![best.x],
        })
    }
}
