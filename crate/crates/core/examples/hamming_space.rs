//! Words, distances and balls in `[q]^n`.

use hamming_census::space::{all_words, enumerate_ball};
use hamming_census::{CodeParams, Result, Word};

fn main() -> Result<()> {
    let a = Word::parse(3, "01210")?;
    let b = Word::parse(3, "01012")?;
    println!("d({a}, {b}) = {}", a.distance(&b)?);
    println!("rank of {a} = {}, weight {}", a.rank(), a.weight());

    let center = Word::zero(2, 4)?;
    let ball: Vec<String> = enumerate_ball(&center, 1).map(|w| w.to_string()).collect();
    println!("B_2(0000, 1) = {{{}}}", ball.join(", "));

    let p = CodeParams::new(2, 3, 1)?;
    let words = all_words(&p, 1 << 10)?;
    println!("[2]^3 has {} words: first {}, last {}", words.len(), words[0], words[7]);
    Ok(())
}
