//! Reproducible CSV sweeps, cached on disk so repeated runs are instant.

use hamming_census::cli::cache::Cache;
use hamming_census::cli::grid::SweepSpec;
use hamming_census::cli::sweep::{sweep, SweepOp, SweepOptions};
use hamming_census::numeric::rat;
use hamming_census::{Budget, Result};

fn main() -> Result<()> {
    let opts = SweepOptions {
        seed: 7,
        epsilon: rat(1, 1),
        budget: Budget::default(),
    };
    print!("{}", sweep(SweepOp::Bounds, &SweepSpec::parse("q=2;n=5..9;t=1..2")?, &opts, None)?);

    let path = std::env::temp_dir().join("hamming-census-example.jsonl");
    let grid = SweepSpec::parse("q=2;n=3..6;t=1")?;
    let mut cache = Cache::open(&path)?;
    let first = sweep(SweepOp::Census, &grid, &opts, Some(&mut cache))?;
    let mut cache = Cache::open(&path)?;
    let again = sweep(SweepOp::Census, &grid, &opts, Some(&mut cache))?;
    assert_eq!(first, again);
    print!("{first}");
    println!("cache at {} holds {} entries", path.display(), cache.len());
    Ok(())
}
