//! `W_q(n, t, k)`: how much two radius-`t` balls at distance `k` overlap.

use hamming_census::intersections::{check_decay, check_identity_k1, intersection_profile};
use hamming_census::space::ball_intersection_bruteforce;
use hamming_census::{CodeParams, Result};

fn main() -> Result<()> {
    let p = CodeParams::new(3, 8, 2)?;
    let profile = intersection_profile(&p)?;
    for (k, w) in profile.iter().enumerate() {
        let brute = ball_intersection_bruteforce(&p, k as u32, 1 << 16)?;
        println!("k={k}: W = {w:>4}  (counted: {brute})");
    }
    println!("k = 1 identity: {}", check_identity_k1(&p)?);

    let big = CodeParams::new(2, 60, 10)?;
    let chain = check_decay(&big, 3)?;
    println!("decay chain at n=60, t=10, k=3 holds: {}", chain.holds());
    Ok(())
}
