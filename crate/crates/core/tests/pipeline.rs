use nbrw_core::birthdeath::{chain_for_biregular_from, chain_for_regular};
use nbrw_core::contraction::{contract, induced_nbrw_prefix_distribution, induced_srw_prefix_distribution};
use nbrw_core::erasure::{erased_prefix_distribution, move_sequence_distribution};
use nbrw_core::graph::{complete_bipartite, complete_graph, counterexample_graph, theta_graph};
use nbrw_core::stats::total_variation;
use nbrw_core::walkers::{enumerate_walk, enumerate_with, NbrwEdge, Network, WalkKind, Wrw};
use nbrw_core::{Rational, VertexKey};
use num_traits::{One, Signed, Zero};
use nbrw_core::walkers::PrefixDistribution;

// On a finite graph the cursor only sees "step back to the predecessor" or
// not, so cycles do not change the move law.
#[test]
fn erasure_moves_on_finite_regular_graphs_follow_the_chain() {
    let start = VertexKey::node(0);
    for (g, k) in [(complete_graph(4), 3), (complete_bipartite(3, 3), 3), (complete_graph(5), 4)] {
        let chain = chain_for_regular(k).unwrap();
        for n in [1, 5, 8] {
            assert_eq!(move_sequence_distribution(&g, &start, n).unwrap(), chain.move_law(n), "k={k} n={n}");
        }
    }
}

#[test]
fn erasure_moves_on_complete_bipartite_follow_the_biregular_chain() {
    // Side 0..3 has degree 4, side 3..7 degree 3.
    let g = complete_bipartite(3, 4);
    for (start, d) in [(0, 4), (3, 3)] {
        let chain = chain_for_biregular_from(4, 3, d).unwrap();
        let law = move_sequence_distribution(&g, &VertexKey::node(start), 9).unwrap();
        assert_eq!(law, chain.move_law(9), "start degree {d}");
    }
}

#[test]
fn erased_and_nonbacktracking_laws_differ_only_by_short_mass_on_k4() {
    let g = complete_graph(4);
    let start = VertexKey::node(0);
    let nb = enumerate_walk(WalkKind::Nbrw, Network::Simple(&g), &start, 3).unwrap();
    let mut last = None;
    // same parity: the gap oscillates between even and odd n
    for n in [4, 8, 12] {
        let erased = erased_prefix_distribution(&g, &start, n, 3).unwrap();
        assert!(erased.total().is_one());
        let tv = total_variation(&erased, &nb).unwrap();
        assert_eq!(tv, erased.short_mass, "n={n}");
        if let Some(prev) = last.replace(tv.clone()) {
            assert!(tv < prev);
        }
    }
}

// l1 distance between the erased law conditioned on reaching the horizon
// and the NBRW law.
fn conditional_gap(erased: &PrefixDistribution, nb: &PrefixDistribution) -> Rational {
    let done = Rational::one() - &erased.short_mass;
    let mut keys: Vec<_> = nb.entries.keys().chain(erased.entries.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|k| (erased.probability(k) / &done - nb.probability(k)).abs())
        .sum()
}

#[test]
fn completed_erasures_are_nonbacktracking_only_on_regular_graphs() {
    for (g, regular) in [(complete_graph(4), true), (complete_bipartite(3, 3), true), (counterexample_graph(), false)] {
        let start = g.origin().unwrap();
        let nb = enumerate_walk(WalkKind::Nbrw, Network::Simple(&g), &start, 3).unwrap();
        for n in [6, 9] {
            let erased = erased_prefix_distribution(&g, &start, n, 3).unwrap();
            assert_eq!(conditional_gap(&erased, &nb).is_zero(), regular, "n={n}");
        }
    }
}

#[test]
fn subdivide_contract_and_compare() {
    let g = theta_graph(&[1, 2, 2]).subdivide(1).unwrap();
    let (mg, map) = contract(&g).unwrap();
    assert_eq!(mg.edges().len(), 3);
    assert!(mg.edges().iter().all(|e| e.resistance == 2 || e.resistance == 4));
    let start = VertexKey::node(0);
    let m = 4;

    let srw = induced_srw_prefix_distribution(&g, &mg, &map, &start, m).unwrap();
    let wrw = enumerate_with(&Wrw::reflecting(&mg), &start, m, |s| s.clone()).unwrap();
    assert!(total_variation(&srw, &wrw).unwrap().is_zero());
    let conductance = enumerate_with(&Wrw::new(&mg), &start, m, |s| s.clone()).unwrap();
    assert!(total_variation(&srw, &conductance).unwrap() > Rational::zero());

    let nb = induced_nbrw_prefix_distribution(&g, &map, &start, m).unwrap();
    let edge = enumerate_with(&NbrwEdge(&mg), &start, m, |s| s.clone()).unwrap();
    assert!(total_variation(&nb, &edge).unwrap().is_zero());
}
