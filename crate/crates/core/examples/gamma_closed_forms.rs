//! Maximin volume of the standard instance families, next to the values
//! they are known to take.
//!
//!     cargo run --example gamma_closed_forms

use maximin_bandits::environments::{
    make_k_armed_surrogate, make_linear_net_class, make_singletons, make_tree_class,
};
use maximin_bandits::games::{gamma, verify_certificate};
use maximin_bandits::{FunctionClass, Result};

fn show(label: &str, class: &FunctionClass, alpha: f64, expected: Option<f64>) -> Result<()> {
    let cert = gamma(class, alpha, 1e-9)?;
    let expected = expected.map_or("-".to_string(), |e| format!("{e:.6}"));
    println!(
        "{label:<28} arms {:>4}  functions {:>4}  gamma {:.6}  expected {expected:>8}  verified {}",
        class.num_arms(),
        class.num_functions(),
        cert.value,
        verify_certificate(class, alpha, &cert)
    );
    Ok(())
}

fn main() -> Result<()> {
    for k in [2, 5, 10] {
        show(&format!("k-armed surrogate, K={k}"), &make_k_armed_surrogate(k)?, 0.5, Some(1.0 / k as f64))?;
    }
    show("singletons, n=6", &make_singletons(6)?, 0.5, Some(1.0 / 6.0))?;
    for (d, n) in [(2, 1), (3, 2), (5, 4)] {
        let (class, _) = make_tree_class(d, n)?;
        show(&format!("tree, depth {d}, bucket {n}"), &class, 0.1, Some(1.0 / ((1 << d) * n) as f64))?;
    }
    // no closed form; the volume shrinks as the net gets finer
    for alpha in [0.8, 0.5] {
        show(&format!("linear net, d=2, alpha={alpha}"), &make_linear_net_class(2, alpha)?, alpha, None)?;
    }
    Ok(())
}
