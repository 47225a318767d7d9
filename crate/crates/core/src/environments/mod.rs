//! Constructors for the instance families studied here, and the histogram
//! discretization of Gaussian reward laws.

mod histogram;
mod linear;
mod tree;

pub use histogram::{
    make_gaussian_histogram, tv_distance, Density, Gaussian, PiecewiseUniform,
    MAX_HISTOGRAM_BUCKETS,
};
pub use linear::{make_linear_net_class, sphere_net, MAX_NET_SIZE};
pub use tree::{make_tree_class, TreeMeta, MAX_TREE_CELLS};

use crate::class::{FunctionClass, Labels};
use crate::error::{param, Result};

fn indicator_rows(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// `K` arms and the `K` indicator functions: function `i` pays 1 only at arm `i`.
///
/// Every indicator is a member of `[0,1]^K`, and the indicators alone already
/// force the volume down to `1/K` at any `alpha < 1`.
pub fn make_k_armed_surrogate(k: usize) -> Result<FunctionClass> {
    if k == 0 {
        return Err(param("K", "must be at least 1"));
    }
    let labels = Labels {
        class: Some(format!("k-armed-{k}")),
        functions: Some((0..k).map(|i| format!("e{i}")).collect()),
        arms: None,
    };
    FunctionClass::new(indicator_rows(k))?.with_labels(labels)
}

/// The first `n` singleton indicators over the naturals.
///
/// Same matrix as [`make_k_armed_surrogate`]; as `n` grows the volume `1/n`
/// tends to zero, which is the unlearnable limit of the infinite family.
pub fn make_singletons(n: usize) -> Result<FunctionClass> {
    if n == 0 {
        return Err(param("n", "must be at least 1"));
    }
    let labels = Labels {
        class: Some(format!("singletons-{n}")),
        functions: Some((0..n).map(|i| format!("1{{{i}}}")).collect()),
        arms: None,
    };
    FunctionClass::new(indicator_rows(n))?.with_labels(labels)
}
