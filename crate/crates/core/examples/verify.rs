//! Runs every exact check over a small grid and reports counterexamples.

use hamming_census::cli::grid::SweepSpec;
use hamming_census::cli::verify::{run_suite, Suite, VerifyOptions};
use hamming_census::Result;

fn main() -> Result<()> {
    let opts = VerifyOptions { seed: 1, ..Default::default() };
    for suite in Suite::ALL {
        let grid = match suite {
            Suite::Container => suite.default_grid(),
            _ => SweepSpec::parse("q=2,3;n=1..6;t=0..2;seeds=5")?,
        };
        let r = run_suite(suite, &grid, &opts)?;
        println!("{suite}: {} checks, {} failures", r.checks, r.failures.len());
    }
    Ok(())
}
