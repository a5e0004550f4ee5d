mod common;

use common::*;
use graphon_wl_core::bilabeled::{Generator, Term};
use graphon_wl_core::enumeration::enumerate_terms;
use graphon_wl_core::operators::{eval_term_hom, term_density};
use graphon_wl_core::treedecomp::{
    exact_treewidth, graph_to_simple_term, graph_to_term, make_nice, validate, NiceNode,
};
use graphon_wl_core::{MultiGraph, Rational};
use proptest::prelude::*;

/// Treewidth as the best elimination order over all orders.
fn naive_treewidth(g: &MultiGraph) -> usize {
    let n = g.vertex_count();
    let adjacency: Vec<Vec<bool>> = (0..n).map(|u| (0..n).map(|v| g.multiplicity(u, v) > 0).collect()).collect();
    permutations(n)
        .iter()
        .map(|order| {
            let mut adj = adjacency.clone();
            let mut gone = vec![false; n];
            let mut width = 0;
            for &v in order {
                let nbrs: Vec<usize> = (0..n).filter(|&u| !gone[u] && u != v && adj[v][u]).collect();
                width = width.max(nbrs.len());
                for &a in &nbrs {
                    for &b in &nbrs {
                        if a != b {
                            adj[a][b] = true;
                        }
                    }
                }
                gone[v] = true;
            }
            width
        })
        .min()
        .unwrap_or(0)
}

fn arb_connected_multigraph(max_v: usize, max_m: u32) -> impl Strategy<Value = MultiGraph> {
    (1..=max_v)
        .prop_flat_map(move |v| prop::collection::vec(0..=max_m, v * (v - 1) / 2).prop_map(move |m| multigraph_from(v, &m)))
        .prop_filter("connected", MultiGraph::is_connected)
}

fn generator(k: usize) -> impl Strategy<Value = Generator> {
    let neighbor = (0..k).prop_map(move |j| Generator::Neighbor(k, j));
    // With one slot there is no adjacency generator.
    let adjacency = (0..k, 1..k.max(2)).prop_map(move |(i, d)| match k {
        1 => Generator::Neighbor(1, 0),
        _ => Generator::Adjacency(k, i, (i + d) % k),
    });
    let adj_nei = (0..k, prop::collection::vec(any::<bool>(), k)).prop_map(move |(j, bits)| {
        let set = (0..k).filter(|&i| i != j && bits[i]).collect();
        Generator::AdjNei(k, j, set)
    });
    let permutation = Just((0..k).collect::<Vec<_>>()).prop_shuffle().prop_map(move |p| Generator::Permutation(k, p));
    prop_oneof![neighbor, adjacency, adj_nei, permutation]
}

fn arb_term() -> impl Strategy<Value = Term> {
    (1usize..=3).prop_flat_map(|k| {
        Just(Term::One(k)).prop_recursive(4, 12, 2, move |inner| {
            prop_oneof![
                (generator(k), inner.clone()).prop_map(|(g, t)| Term::compose(g, t)),
                (inner.clone(), inner).prop_map(|(a, b)| Term::schur(a, b)),
            ]
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn term_homomorphisms_match_the_oracle(t in arb_term(), w in arb_graphon(3)) {
        let b = t.eval().unwrap();
        prop_assume!(b.vertex_count() <= 7);
        let hom = eval_term_hom(&t, &w).unwrap();
        let oracle = naive_apply(&b, &w, &[Rational::one()]);
        prop_assert_eq!(hom.values().to_vec(), oracle);
        prop_assert_eq!(term_density(&t, &w).unwrap(), naive_density(b.graph(), &w));
    }

    #[test]
    fn decompositions_round_trip(g in arb_connected_multigraph(6, 2)) {
        let (width, td) = exact_treewidth(&g).unwrap();
        prop_assert_eq!(width, naive_treewidth(&g));
        prop_assert_eq!(validate(&g, &td).unwrap(), width);
        let nice = make_nice(&g, &td).unwrap();
        prop_assert_eq!(nice.validate(&g).unwrap(), width);
        let shapes_ok = nice.kinds().iter().enumerate().all(|(i, kind)| {
            let c = nice.children(i).len();
            match kind {
                NiceNode::Leaf => c == 0,
                NiceNode::Join => c == 2,
                _ => c == 1,
            }
        });
        prop_assert!(shapes_ok);

        let (core, _) = g.remove_isolated();
        let t = graph_to_term(&g, width + 1).unwrap();
        let (evaluated, _) = t.eval().unwrap().graph().remove_isolated();
        prop_assert!(naive_isomorphic(&evaluated, &core), "{} evaluates to {:?}", t, evaluated);
        prop_assert!(t.height() <= 2 * g.vertex_count());
    }

    #[test]
    fn simple_terms_round_trip(g in arb_connected_multigraph(6, 1)) {
        let (width, _) = exact_treewidth(&g).unwrap();
        let t = graph_to_simple_term(&g, width + 1).unwrap();
        prop_assert!(t.generators().iter().all(|g| matches!(g, Generator::AdjNei(..))));
        let (evaluated, _) = t.eval().unwrap().graph().remove_isolated();
        prop_assert!(evaluated.is_simple());
        prop_assert!(naive_isomorphic(&evaluated, &g.remove_isolated().0));
    }

    #[test]
    fn term_densities_of_graphs(g in arb_connected_multigraph(4, 3), w in arb_graphon(3)) {
        let (width, _) = exact_treewidth(&g).unwrap();
        let t = graph_to_term(&g, width + 1).unwrap();
        prop_assert_eq!(term_density(&t, &w).unwrap(), naive_density(&g, &w));
    }
}

#[test]
fn narrow_k_is_rejected() {
    let g = MultiGraph::complete(4);
    assert!(graph_to_term(&g, 3).is_err());
    assert!(graph_to_term(&g, 4).is_ok());
}

#[test]
fn enumerated_terms_evaluate_like_their_graphs() {
    let w = build_graphon(&[1, 2, 2], &[5, 3, 0, 4, 1, 2]);
    let terms = enumerate_terms(2, 2, 7).unwrap();
    assert!(terms.len() > 20, "{}", terms.len());
    for t in &terms {
        let b = t.eval().unwrap();
        assert_eq!(term_density(t, &w).unwrap(), naive_density(b.graph(), &w), "{t}");
    }
}
