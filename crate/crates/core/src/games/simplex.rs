//! Dense tableau simplex for `max 1ᵀy  s.t.  M y <= 1, y >= 0` with `M > 0`.
//!
//! The slack basis is feasible at `y = 0`, so no phase one is needed. Bland's
//! rule (least entering index, least leaving basic index on ratio ties)
//! guarantees termination on the degenerate 0/1 instances this crate produces.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-11;
const MAX_PIVOTS: usize = 2_000_000;

/// Optimal primal `y`, the constraint shadow prices `x`, and the objective.
#[derive(Debug, Clone)]
pub(crate) struct PackingSolution {
    pub(crate) y: Vec<f64>,
    pub(crate) x: Vec<f64>,
    pub(crate) objective: f64,
}

/// Solves the packing LP for a strictly positive `rows × cols` matrix.
pub(crate) fn solve_packing(m: &[Vec<f64>]) -> Result<PackingSolution> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let width = cols + rows + 1;
    let rhs = width - 1;

    let mut tab = vec![0.0; rows * width];
    for (i, row) in m.iter().enumerate() {
        let t = &mut tab[i * width..(i + 1) * width];
        t[..cols].copy_from_slice(row);
        t[cols + i] = 1.0;
        t[rhs] = 1.0;
    }
    // reduced costs; objective value lives in the last slot (negated)
    let mut cost = vec![0.0; width];
    cost[..cols].fill(1.0);
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    let mut pivots = 0;
    while let Some(enter) = (0..rhs).find(|&j| cost[j] > PIVOT_EPS) {

        let mut leave: Option<(usize, f64)> = None;
        for i in 0..rows {
            let a = tab[i * width + enter];
            if a > PIVOT_EPS {
                let ratio = tab[i * width + rhs] / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        let tie = (ratio - best).abs() <= 1e-12 * (1.0 + best.abs());
                        if ratio < best && !tie || tie && basis[i] < basis[k] {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
        }
        let Some((r, _)) = leave else {
            return Err(Error::Solver("objective is unbounded".into()));
        };

        pivot(&mut tab, &mut cost, width, r, enter);
        basis[r] = enter;

        pivots += 1;
        if pivots > MAX_PIVOTS {
            return Err(Error::Solver(format!("no convergence after {MAX_PIVOTS} pivots")));
        }
    }

    let mut y = vec![0.0; cols];
    for (i, &b) in basis.iter().enumerate() {
        if b < cols {
            y[b] = tab[i * width + rhs];
        }
    }
    let x = (0..rows).map(|i| -cost[cols + i]).collect();
    Ok(PackingSolution {
        objective: -cost[rhs],
        y,
        x,
    })
}

fn pivot(tab: &mut [f64], cost: &mut [f64], width: usize, r: usize, c: usize) {
    let rows = tab.len() / width;
    let inv = 1.0 / tab[r * width + c];
    for v in &mut tab[r * width..(r + 1) * width] {
        *v *= inv;
    }
    let pivot_row: Vec<f64> = tab[r * width..(r + 1) * width].to_vec();
    for i in (0..rows).filter(|&i| i != r) {
        let factor = tab[i * width + c];
        if factor != 0.0 {
            for (v, p) in tab[i * width..(i + 1) * width].iter_mut().zip(&pivot_row) {
                *v -= factor * p;
            }
            tab[i * width + c] = 0.0;
        }
    }
    let factor = cost[c];
    for (v, p) in cost.iter_mut().zip(&pivot_row) {
        *v -= factor * p;
    }
    cost[c] = 0.0;
}
