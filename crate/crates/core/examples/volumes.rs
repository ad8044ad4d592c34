//! Ball volumes `V_q(n, t)` and the sphere-packing bound `H_q(n, t) = q^n / V`.

use hamming_census::volumes::{ball_volume, check_volume_decay, hamming_bound, threshold_radius};
use hamming_census::Result;

fn main() -> Result<()> {
    for (q, n, t) in [(2, 7, 1), (2, 23, 3), (3, 13, 2), (4, 200, 50)] {
        let v = ball_volume(q, n, t)?;
        let h = hamming_bound(q, n, t)?;
        let digits = h.to_integer().to_string().len();
        println!("q={q} n={n} t={t}: V = {v}  (H has {digits} integer digits)");
    }
    // Perfect codes meet the bound with equality.
    println!("H_2(7,1) = {}, H_2(23,3) = {}", hamming_bound(2, 7, 1)?, hamming_bound(2, 23, 3)?);

    let c = check_volume_decay(2, 30, 6, 3)?;
    println!("shrinking the ball by 3 coordinates: {c}");

    let r = threshold_radius(2, 100, &hamming_bound(2, 100, 9)?)?;
    println!("smallest t with H_2(100, t) <= H_2(100, 9): {r}");
    Ok(())
}
