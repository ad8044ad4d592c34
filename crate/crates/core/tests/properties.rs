//! Property tests: every function is compared against a small independent
//! oracle written here with plain integer loops.

use hamming_census::container::{all_independent_sets, audit_family, build_container_family, ContainerRunner, StopRule};
use hamming_census::indep::{
    count_by_split, count_independent_sets, count_independent_sets_component_naive, count_independent_sets_naive,
    enumerate_independent_sets, max_independent_set, CounterKind,
};
use hamming_census::intersections::intersection_volume;
use hamming_census::numeric::{nat, pow_u, rat_from_nat, Nat, Rat};
use hamming_census::space::{degree_by_distance, edge_counts_by_distance, enumerate_ball, pair_distance_histogram};
use hamming_census::supersat::{covers, greedy_distance_packing};
use hamming_census::volumes::{ball_volume, binomial_masses, hamming_bound, threshold_radius};
use hamming_census::{BitGraph, Budget, CodeParams, DistanceGraph, VertexSet, Word};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn digits_distance(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

fn oracle_binomial(n: u64, k: u64) -> Nat {
    // Pascal's rule, independent of the library's multiplicative form.
    let mut row = vec![Nat::one()];
    for _ in 0..n {
        let mut next = vec![Nat::one(); row.len() + 1];
        for i in 1..row.len() {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    row.get(k as usize).cloned().unwrap_or_else(Nat::zero)
}

fn oracle_volume(q: u32, n: u32, r: u32) -> Nat {
    (0..=r.min(n))
        .map(|i| oracle_binomial(n as u64, i as u64) * pow_u(q as u64 - 1, i))
        .sum()
}

fn word_strategy() -> impl Strategy<Value = (u32, Vec<u32>, Vec<u32>, Vec<u32>)> {
    (2u32..6, 1usize..40).prop_flat_map(|(q, n)| {
        let w = proptest::collection::vec(0..q, n);
        (Just(q), w.clone(), w.clone(), w)
    })
}

fn random_graph(n: usize, density: u32, seed: u64) -> BitGraph {
    let mut g = BitGraph::new(n);
    let mut s = seed | 1;
    for u in 0..n {
        for v in u + 1..n {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            if (s % 100) < density as u64 {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

fn oracle_count(g: &BitGraph) -> u64 {
    let n = g.len();
    (0u64..1 << n)
        .filter(|&m| {
            (0..n).all(|u| m >> u & 1 == 0 || (u + 1..n).all(|v| m >> v & 1 == 0 || !g.adjacent(u, v)))
        })
        .count() as u64
}

fn oracle_max(g: &BitGraph) -> usize {
    let n = g.len();
    (0u64..1 << n)
        .filter(|&m| {
            (0..n).all(|u| m >> u & 1 == 0 || (u + 1..n).all(|v| m >> v & 1 == 0 || !g.adjacent(u, v)))
        })
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn distance_is_a_metric((q, a, b, c) in word_strategy()) {
        let (wa, wb, wc) = (Word::from_digits(q, &a).unwrap(), Word::from_digits(q, &b).unwrap(), Word::from_digits(q, &c).unwrap());
        let dab = wa.distance(&wb).unwrap();
        prop_assert_eq!(dab, digits_distance(&a, &b));
        prop_assert_eq!(dab, wb.distance(&wa).unwrap());
        prop_assert_eq!(dab == 0, a == b);
        prop_assert!(dab <= wa.distance(&wc).unwrap() + wc.distance(&wb).unwrap());
    }

    #[test]
    fn rank_round_trips((q, a, _, _) in word_strategy()) {
        let w = Word::from_digits(q, &a).unwrap();
        let back = Word::from_rank(q, a.len(), &w.rank()).unwrap();
        prop_assert_eq!(back.digits(), a.clone());
        prop_assert_eq!(Word::parse(q, &w.to_string()).unwrap(), w);
    }

    #[test]
    fn volume_matches_binomial_sum(q in 2u32..9, n in 1u32..60, r in 0u32..60) {
        let r = r.min(n);
        prop_assert_eq!(ball_volume(q, n, r).unwrap(), oracle_volume(q, n, r));
        prop_assert_eq!(ball_volume(q, n, n).unwrap(), pow_u(q as u64, n));
        prop_assert_eq!(hamming_bound(q, n, r).unwrap() * rat_from_nat(&ball_volume(q, n, r).unwrap()),
                        rat_from_nat(&pow_u(q as u64, n)));
    }

    #[test]
    fn masses_sum_to_one(q in 2u32..9, n in 1u32..80) {
        let total: Rat = binomial_masses(q, n).unwrap().into_iter().sum();
        prop_assert_eq!(total, Rat::one());
    }

    #[test]
    fn threshold_radius_inverts_hamming_bound(q in 2u32..5, n in 1u32..50, num in 1u64..1_000_000, den in 1u64..1000) {
        let bound = Rat::new(num.into(), den.into());
        prop_assume!(bound >= Rat::one());
        let t = threshold_radius(q, n, &bound).unwrap();
        prop_assert!(hamming_bound(q, n, t).unwrap() <= bound);
        if t > 0 {
            prop_assert!(hamming_bound(q, n, t - 1).unwrap() > bound);
        }
    }

    #[test]
    fn intersection_profile_sums_to_volume_squared(q in 2u32..6, n in 1u32..40, t in 0u32..12) {
        // Σ_y |B(0,t) ∩ B(y,t)| = V², grouped by d(0, y) = k.
        let p = CodeParams::new(q, n, t.min(n)).unwrap();
        let mut total = Nat::zero();
        for k in 0..=n {
            let w = intersection_volume(&p, k).unwrap();
            prop_assert_eq!(w.is_zero(), k > 2 * p.t);
            total += w * oracle_binomial(n as u64, k as u64) * pow_u(q as u64 - 1, k);
        }
        let v = ball_volume(q, n, p.t).unwrap();
        prop_assert_eq!(total, &v * &v);
    }

    #[test]
    fn ball_stream_is_distance_sorted(q in 2u32..5, n in 1usize..7, r in 0usize..7, rank in 0u64..4096) {
        let total = (q as u64).pow(n as u32);
        let center = Word::from_rank_u64(q, n, rank % total).unwrap();
        let ball: Vec<Word> = enumerate_ball(&center, r).collect();
        prop_assert_eq!(nat(ball.len() as u64), oracle_volume(q, n as u32, r as u32));
        let keys: Vec<(usize, Nat)> = ball.iter().map(|w| (w.distance(&center).unwrap(), w.rank())).collect();
        prop_assert!(keys.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn adjacency_is_distance_predicate(q in 2u32..4, n in 1u32..6, t in 0u32..3, picks in proptest::collection::vec(0u64..729, 2..30)) {
        let p = CodeParams::new(q, n, t.min(n)).unwrap();
        let total = p.space_size_u64().unwrap();
        let words: Vec<Word> = picks.iter().map(|&r| Word::from_rank_u64(q, n as usize, r % total).unwrap()).collect();
        let dg = DistanceGraph::new(p, &words).unwrap();
        let vs = dg.vertices();
        for u in 0..vs.len() {
            for v in 0..vs.len() {
                let d = digits_distance(&vs[u].digits(), &vs[v].digits());
                prop_assert_eq!(dg.adjacent(u, v), (1..=2 * p.t as usize).contains(&d));
            }
        }
    }

    #[test]
    fn handshake_per_distance(q in 2u32..4, n in 1u32..7, t in 0u32..3, picks in proptest::collection::vec(0u64..729, 1..40)) {
        let p = CodeParams::new(q, n, t.min(n)).unwrap();
        let total = p.space_size_u64().unwrap();
        let mut words: Vec<Word> = picks.iter().map(|&r| Word::from_rank_u64(q, n as usize, r % total).unwrap()).collect();
        words.sort();
        words.dedup();
        let edges = edge_counts_by_distance(&words, &p).unwrap();
        let hist = pair_distance_histogram(&words, n as usize);
        for k in 1..=n {
            let degree_sum: u64 = words.iter().map(|v| degree_by_distance(&words, v, k).unwrap()).sum();
            prop_assert_eq!(degree_sum, 2 * hist[k as usize]);
            if let Some(e) = edges.get(&k) {
                prop_assert_eq!(e.clone(), nat(hist[k as usize]));
            }
        }
    }

    #[test]
    fn packing_is_separated_and_maximal(q in 2u32..4, n in 1u32..7, t in 0u32..3, picks in proptest::collection::vec(0u64..729, 0..40)) {
        let p = CodeParams::new(q, n, t.min(n)).unwrap();
        let total = p.space_size_u64().unwrap();
        let words: Vec<Word> = picks.iter().map(|&r| Word::from_rank_u64(q, n as usize, r % total).unwrap()).collect();
        let x = greedy_distance_packing(&words, p.t).unwrap();
        for (i, a) in x.iter().enumerate() {
            for b in &x[i + 1..] {
                prop_assert!(a.distance(b).unwrap() > p.t as usize);
            }
        }
        // maximal: nothing from S can be added
        for w in &words {
            prop_assert!(x.iter().any(|c| c.distance(w).unwrap() <= p.t as usize));
        }
        prop_assert!(covers(&x, &words, p.t));
    }

    #[test]
    fn counters_agree_on_random_graphs(n in 0usize..=20, density in 0u32..90, seed in any::<u64>()) {
        let g = random_graph(n, density, seed);
        let budget = Budget::default();
        let expect = nat(oracle_count(&g));
        prop_assert_eq!(count_independent_sets(&g).unwrap(), expect.clone());
        prop_assert_eq!(count_independent_sets_naive(&g, &budget).unwrap(), expect.clone());
        prop_assert_eq!(count_independent_sets_component_naive(&g, &budget).unwrap(), expect.clone());
        let part = VertexSet::from_indices(n, (0..n).filter(|v| v % 3 == 0));
        prop_assert_eq!(count_by_split(&g, &part, CounterKind::Branching, &budget).unwrap(), expect.clone());
        prop_assert_eq!(count_by_split(&g, &part, CounterKind::ComponentNaive, &budget).unwrap(), expect);
    }

    #[test]
    fn maximum_independent_set_is_optimal(n in 0usize..=18, density in 0u32..90, seed in any::<u64>()) {
        let g = random_graph(n, density, seed);
        let best = max_independent_set(&g, &Budget::default()).unwrap();
        prop_assert_eq!(best.size, oracle_max(&g));
        prop_assert_eq!(best.witness.len(), best.size);
        prop_assert!(g.is_independent(&VertexSet::from_indices(n, best.witness.iter().copied())));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    /// Codes inside S are exactly the independent sets of G[S].
    #[test]
    fn independent_sets_are_exactly_codes(q in 2u32..4, n in 1u32..6, t in 0u32..3, picks in proptest::collection::vec(0u64..243, 0..13)) {
        let p = CodeParams::new(q, n, t.min(n)).unwrap();
        let total = p.space_size_u64().unwrap();
        let mut ranks: Vec<u64> = picks.iter().map(|&r| r % total).collect();
        ranks.sort_unstable();
        ranks.dedup();
        let digits: Vec<Vec<u32>> = ranks.iter().map(|&r| Word::from_rank_u64(q, n as usize, r).unwrap().digits()).collect();
        let words: Vec<Word> = digits.iter().map(|d| Word::from_digits(q, d).unwrap()).collect();
        let dg = DistanceGraph::new(p, &words).unwrap();
        let g = dg.bit_graph().unwrap();
        let mut listed: Vec<Vec<usize>> = enumerate_independent_sets(g, &Budget::default()).unwrap().collect();
        let min_distance = 2 * p.t as usize + 1;
        for set in &listed {
            for (i, &a) in set.iter().enumerate() {
                for &b in &set[i + 1..] {
                    prop_assert!(digits_distance(&dg.vertices()[a].digits(), &dg.vertices()[b].digits()) >= min_distance);
                }
            }
        }
        // brute force over subsets of S, using the vertex order of the graph
        let m = dg.len();
        let vd: Vec<Vec<u32>> = dg.vertices().iter().map(Word::digits).collect();
        let mut codes: Vec<Vec<usize>> = (0u32..1 << m)
            .map(|mask| (0..m).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|s: &Vec<usize>| s.iter().enumerate().all(|(i, &a)| s[i + 1..].iter().all(|&b| digits_distance(&vd[a], &vd[b]) >= min_distance)))
            .collect();
        codes.sort();
        listed.sort();
        prop_assert_eq!(listed, codes);
    }

    #[test]
    fn containers_cover_random_graphs(n in 1usize..=12, density in 5u32..80, seed in any::<u64>(), threshold in 1u64..40) {
        let g = random_graph(n, density, seed);
        let order: Vec<usize> = (0..n).rev().collect();
        let budget = Budget::default();
        let mut runner = ContainerRunner::new(&g, &order, StopRule::new(nat(threshold), budget).unwrap()).unwrap();
        let sets = all_independent_sets(&g, &budget).unwrap();
        let family = build_container_family(&mut runner, Some(&sets)).unwrap();
        let audit = audit_family(&mut runner, &family, &sets).unwrap();
        prop_assert!(audit.coverage);
        prop_assert!(audit.sum_container_isets >= nat(sets.len() as u64));
        for (fp, f) in &family.fingerprints {
            let container = VertexSet::from_indices(n, fp.iter().chain(f).copied());
            let cap = (Nat::one() << fp.len()) * nat(threshold);
            prop_assert!(runner.count(&container).unwrap() <= cap);
        }
    }
}
