//! Brute-force oracles shared by the integration tests. They enumerate
//! simplex grids directly and share no code with the library's solvers.
#![allow(dead_code)]

use maximin_bandits::FunctionClass;

/// Every point of the simplex over `parts` coordinates with spacing `1/k`.
pub fn simplex_grid(parts: usize, k: usize) -> Vec<Vec<f64>> {
    fn rec(prefix: &mut Vec<usize>, parts: usize, left: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == parts {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for n in 0..=left {
            prefix.push(n);
            rec(prefix, parts, left - n, out);
            prefix.pop();
        }
    }
    let mut raw = Vec::new();
    rec(&mut Vec::new(), parts, k, &mut raw);
    raw.into_iter()
        .map(|c| c.into_iter().map(|n| n as f64 / k as f64).collect())
        .collect()
}

/// `gap_f(a) <= alpha` computed straight from the means.
pub fn near_optimal(class: &FunctionClass, f: usize, a: usize, alpha: f64) -> bool {
    let row = &class.means()[f];
    let best = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    best - row[a] <= alpha + 1e-12
}

pub fn coverage(class: &FunctionClass, f: usize, p: &[f64], alpha: f64) -> f64 {
    (0..class.num_arms())
        .filter(|&a| near_optimal(class, f, a, alpha))
        .map(|a| p[a])
        .sum()
}

/// `max_p min_f coverage` over a grid of spacing `1/k`.
pub fn grid_maximin(payoff: &[Vec<f64>], k: usize) -> f64 {
    let arms = payoff[0].len();
    simplex_grid(arms, k)
        .iter()
        .map(|p| {
            payoff
                .iter()
                .map(|row| row.iter().zip(p).map(|(b, w)| b * w).sum::<f64>())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Coefficient at `anchor` with both `q` and `p` restricted to the grid.
pub fn grid_dec(class: &FunctionClass, anchor: &[f64], eps: f64, alpha: f64, k: usize) -> f64 {
    let arms = class.num_arms();
    let fbar: Vec<f64> = (0..arms)
        .map(|a| {
            anchor
                .iter()
                .zip(class.means())
                .map(|(w, row)| w * row[a])
                .sum()
        })
        .collect();
    let grid = simplex_grid(arms, k);
    let mut best = f64::INFINITY;
    for q in &grid {
        let members: Vec<usize> = (0..class.num_functions())
            .filter(|&f| {
                let d: f64 = (0..arms)
                    .map(|a| q[a] * (class.means()[f][a] - fbar[a]).powi(2))
                    .sum();
                d <= eps * eps + 1e-12
            })
            .collect();
        let value = if members.is_empty() {
            0.0
        } else {
            grid.iter()
                .map(|p| {
                    members
                        .iter()
                        .map(|&f| 1.0 - coverage(class, f, p, alpha))
                        .fold(0.0, f64::max)
                })
                .fold(f64::INFINITY, f64::min)
        };
        best = best.min(value);
    }
    best
}

/// Random class with means on a coarse grid so that ties and exact gaps occur.
pub fn random_class(rng: &mut impl rand::Rng, arms: usize, functions: usize) -> FunctionClass {
    let means = (0..functions)
        .map(|_| (0..arms).map(|_| rng.random_range(0..=20) as f64 / 20.0).collect())
        .collect();
    FunctionClass::new(means).unwrap()
}
