//! A set of words more than twice the sphere-packing bound has many close pairs.

use hamming_census::numeric::rat;
use hamming_census::supersat::{random_subset, supersat_report};
use hamming_census::{CodeParams, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let p = CodeParams::new(2, 8, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..4 {
        let set = random_subset(&p, &mut rng, 1 << 10)?;
        let r = supersat_report(&set, &p, &rat(1, 2), 1 << 10)?;
        let lemma = match &r.lemma41 {
            Some(c) => format!("close-pair bounds hold: {}", c.holds()),
            None => "below 2H, bounds not applicable".to_string(),
        };
        println!(
            "|S| = {:>3}: {:>5} close pairs, double counting {}, {lemma}",
            r.set_size,
            r.edge_total,
            if r.double_counting.holds { "exact" } else { "BROKEN" }
        );
    }
    Ok(())
}
