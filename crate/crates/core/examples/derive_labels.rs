//! Print the full placement table: every political x fairness placement and
//! the three labels derived from it.
//!
//!     cargo run --example derive_labels

use biaslens::corpus::{derive_labels, FairnessPlacement, PoliticalPlacement};

fn main() {
    println!("{:<22} {:<24} {:>6} {:>7} {:>7}", "political", "fairness", "bias", "unfair", "nonobj");
    for p in PoliticalPlacement::ALL {
        for f in FairnessPlacement::ALL {
            let l = derive_labels(p, f);
            println!(
                "{:<22} {:<24} {:>6} {:>7} {:>7}",
                p.as_str(),
                f.as_str(),
                l.political_bias,
                l.unfairness,
                l.non_objectivity
            );
        }
    }
}
