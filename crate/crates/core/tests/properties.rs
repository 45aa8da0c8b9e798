use chordspan::io::{from_json, to_json};
use chordspan::{HalfInt, MopGraph};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph(max_n: usize) -> impl Strategy<Value = MopGraph> {
    (3..=max_n, any::<u64>()).prop_map(|(n, seed)| MopGraph::random(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn tcl_is_the_sum_of_layer_counts(g in graph(120)) {
        let sum: HalfInt = g.layer_counts().into_iter().sum();
        prop_assert_eq!(sum, HalfInt::from(g.tcl()));
    }

    #[test]
    fn layers_never_exceed_the_bound(g in graph(120)) {
        // 2 * max_layer <= n - 3
        prop_assert!(g.max_layer().doubled() as usize <= g.n().saturating_sub(3));
    }

    #[test]
    fn at_least_two_ears(g in graph(120)) {
        prop_assume!(g.n() >= 4);
        prop_assert!(g.count_ears() >= 2);
        let degree_two = (0..g.n()).filter(|&v| g.degree(v) == 2).count();
        prop_assert_eq!(degree_two, g.count_ears());
    }

    #[test]
    fn flipping_twice_restores(g in graph(60), pick in any::<prop::sample::Index>()) {
        prop_assume!(g.n() >= 4);
        let chord = g.chords()[pick.index(g.chords().len())];
        let once = g.flip(chord).unwrap();
        prop_assert!(once.is_valid());
        prop_assert!(!once.contains_chord(chord));
        let partner = g.flip_partner(chord).unwrap();
        prop_assert_eq!(once.flip(partner).unwrap(), g);
    }

    #[test]
    fn json_round_trip(g in graph(80), meta in any::<bool>()) {
        let text = to_json(&g, meta);
        prop_assert_eq!(from_json(&text).unwrap(), g.clone());
        prop_assert_eq!(to_json(&from_json(&text).unwrap(), meta), text);
    }

    #[test]
    fn subdivision_then_contraction(g in graph(60), pick in any::<prop::sample::Index>()) {
        let n = g.n();
        let e = pick.index(n);
        let bigger = g.subdivide(e, (e + 1) % n).unwrap();
        let layer = g.layer_counts()[e];
        let extra = if g.has_diameter() { HalfInt::from_doubled(3) } else { HalfInt::from_int(2) };
        prop_assert_eq!(HalfInt::from(bigger.tcl()), HalfInt::from(g.tcl()) + extra + layer);
        let new_vertex = if e == n - 1 { n } else { e + 1 };
        prop_assert_eq!(bigger.contract_ear(new_vertex).unwrap(), g);
    }
}
