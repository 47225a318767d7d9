//! Decision-estimation coefficient of a tree class as the version-set
//! radius grows, with the witness distributions at the worst anchor.
//!
//!     cargo run --release --example dec_coefficient

use maximin_bandits::dec::{dec_sup, default_anchors};
use maximin_bandits::environments::make_tree_class;
use maximin_bandits::Result;

fn main() -> Result<()> {
    let (class, _) = make_tree_class(2, 1)?;
    let anchors = default_anchors(class.num_functions());
    for eps in [0.05, 0.15, 0.3, 0.6] {
        let r = dec_sup(&class, eps, 0.2, &anchors, 0.25)?;
        println!(
            "eps {eps:<5} value {:.4}  version set {:?}  candidates {}",
            r.value, r.members, r.candidates_evaluated
        );
    }
    let r = dec_sup(&class, 0.6, 0.2, &anchors, 0.25)?;
    println!("at eps 0.6, worst anchor {:?}", r.anchor);
    println!("p witness    {:?}", r.p_witness.probs());
    println!("q witness    {:?}", r.q_witness.probs());
    Ok(())
}
