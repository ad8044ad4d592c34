//! Exact counts of `t`-error-correcting codes, and the largest one.
//!
//! `cargo run --release --example census -- 2 6 1`

use hamming_census::indep::census;
use hamming_census::{Budget, CodeParams, Result};

fn main() -> Result<()> {
    let args: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let grid: Vec<(u32, u32, u32)> = match args[..] {
        [q, n, t] => vec![(q, n, t)],
        _ => vec![(2, 3, 1), (2, 4, 1), (2, 5, 1), (3, 3, 1), (2, 6, 2)],
    };
    for (q, n, t) in grid {
        let p = CodeParams::new(q, n, t)?;
        let c = census(&p, &Budget::default())?;
        println!(
            "{p}: {} codes, largest has {} words (witness ranks {:?}), log2(count)/H = {:.3}",
            c.independent_set_count, c.max_independent_size, c.witness, c.log2_count_over_hamming
        );
    }
    Ok(())
}
