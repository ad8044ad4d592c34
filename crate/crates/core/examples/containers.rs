//! The graph container algorithm on `G_{2,4,1}`: every code sits inside
//! one of a few containers, each named by a small fingerprint.

use hamming_census::container::{all_independent_sets, audit_family, build_container_family, ContainerRunner, StopRule};
use hamming_census::numeric::nat;
use hamming_census::{Budget, CodeParams, DistanceGraph, Result};

fn main() -> Result<()> {
    let p = CodeParams::new(2, 4, 1)?;
    let dg = DistanceGraph::full(p, 1 << 10)?;
    let g = dg.bit_graph()?;
    let budget = Budget::default();
    let sets = all_independent_sets(g, &budget)?;

    for threshold in [1u64, 4, 16, 64] {
        let mut runner = ContainerRunner::for_distance_graph(&dg, StopRule::new(nat(threshold), budget)?)?;
        let family = build_container_family(&mut runner, Some(&sets))?;
        let audit = audit_family(&mut runner, &family, &sets)?;
        println!(
            "T={threshold:>3}: {} codes in {} containers, fingerprints up to {} words, covered: {}",
            sets.len(),
            audit.family_size,
            audit.max_fingerprint_size,
            audit.coverage
        );
    }

    let mut runner = ContainerRunner::for_distance_graph(&dg, StopRule::new(nat(4), budget)?)?;
    let rec = runner.run(&sets[sets.len() - 1])?;
    let words = |ix: &[usize]| ix.iter().map(|&v| dg.vertices()[v].to_string()).collect::<Vec<_>>().join(" ");
    println!("fingerprint [{}] -> container [{}]", words(&rec.fingerprint), words(&rec.container));
    Ok(())
}
