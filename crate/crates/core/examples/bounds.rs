//! Hamming, Plotkin and Elias upper bounds, and the regime classifier.

use hamming_census::bounds::{best_upper_bound, elias_bound_best, hamming, plotkin_bound, regime};
use hamming_census::numeric::rat;
use hamming_census::{CodeParams, Result};

fn main() -> Result<()> {
    for (q, n, t) in [(2, 7, 1), (2, 10, 2), (2, 15, 5), (3, 12, 3)] {
        let p = CodeParams::new(q, n, t)?;
        let elias = elias_bound_best(q, n, 2 * t + 1)?.best;
        println!(
            "{p}: hamming {}, plotkin {}, elias {} (r={:?}), best integer bound {}",
            hamming(&p)?,
            plotkin_bound(&p),
            elias,
            elias.witness_r,
            best_upper_bound(&p)?
        );
    }
    for t in [5, 400, 600] {
        let r = regime(2, 1000, t, &rat(1, 1), Some(&rat(2, 1)))?;
        println!("n=1000, t={t}: {:?}", r);
    }
    Ok(())
}
