mod common;

use common::*;
use graphon_wl_core::enumeration::{canonical_form, enumerate_patterns, find_distinguisher, EnumerationSpec};
use graphon_wl_core::operators::hom_density_bruteforce;
use graphon_wl_core::treedecomp::exact_treewidth;
use graphon_wl_core::{MultiGraph, Rational, StepGraphon};
use proptest::prelude::*;

fn spec(max_vertices: usize, max_mult: u32, tw: usize, connected: bool) -> EnumerationSpec {
    EnumerationSpec {
        max_vertices,
        max_edge_multiplicity: max_mult,
        treewidth_bound: tw,
        simple_only: max_mult == 1,
        connected_only: connected,
    }
}

/// All multigraphs up to isomorphism, by filtering every multiplicity vector.
fn naive_classes(max_v: usize, max_m: u32, tw: usize, connected: bool) -> Vec<MultiGraph> {
    let mut reps: Vec<MultiGraph> = Vec::new();
    for v in 1..=max_v {
        let slots = v * (v - 1) / 2;
        let total = (max_m as usize + 1).pow(slots as u32);
        for code in 0..total {
            let mut c = code;
            let mults: Vec<u32> = (0..slots)
                .map(|_| {
                    let m = (c % (max_m as usize + 1)) as u32;
                    c /= max_m as usize + 1;
                    m
                })
                .collect();
            let g = multigraph_from(v, &mults);
            if connected && !g.is_connected() {
                continue;
            }
            if exact_treewidth(&g).unwrap().0 > tw {
                continue;
            }
            if !reps.iter().any(|r| naive_isomorphic(r, &g)) {
                reps.push(g);
            }
        }
    }
    reps
}

fn count_by_order(gs: &[MultiGraph], max_v: usize) -> Vec<usize> {
    (1..=max_v).map(|v| gs.iter().filter(|g| g.vertex_count() == v).count()).collect()
}

#[test]
fn connected_simple_graph_counts() {
    let all = enumerate_patterns(&spec(6, 1, 5, true)).unwrap();
    assert_eq!(count_by_order(&all, 6), vec![1, 1, 2, 6, 21, 112]);
    let trees = enumerate_patterns(&spec(6, 1, 1, true)).unwrap();
    assert_eq!(count_by_order(&trees, 6), vec![1, 1, 1, 2, 3, 6]);
    let any = enumerate_patterns(&spec(4, 1, 3, false)).unwrap();
    assert_eq!(count_by_order(&any, 4), vec![1, 2, 4, 11]);
}

#[test]
fn patterns_match_the_naive_classes() {
    for (v, m, tw, connected) in [(4, 2, 1, true), (4, 2, 2, true), (4, 3, 3, true), (3, 2, 2, false), (4, 1, 2, false)] {
        let got = enumerate_patterns(&spec(v, m, tw, connected)).unwrap();
        let want = naive_classes(v, m, tw, connected);
        assert_eq!(got.len(), want.len(), "v={v} m={m} tw={tw} connected={connected}");
        for (i, a) in got.iter().enumerate() {
            assert!(want.iter().any(|b| naive_isomorphic(a, b)));
            for b in &got[i + 1..] {
                assert!(!naive_isomorphic(a, b));
            }
        }
    }
}

#[test]
fn oversized_specs_are_rejected() {
    assert!(enumerate_patterns(&spec(9, 1, 2, true)).is_err());
    assert!(enumerate_patterns(&spec(4, 4, 2, true)).is_err());
}

#[test]
fn distinguishers_respect_the_width_bound() {
    let k3 = StepGraphon::from_graph(&MultiGraph::complete(3)).unwrap();
    let flat = StepGraphon::constant(1, q(2, 3)).unwrap();
    let simple = EnumerationSpec::simple_graphs(0);
    assert_eq!(find_distinguisher(&k3, &flat, 2, &simple).unwrap(), None);
    let f = find_distinguisher(&k3, &flat, 3, &simple).unwrap().unwrap();
    assert_eq!(exact_treewidth(&f).unwrap().0, 2);
    let doubled = find_distinguisher(&k3, &flat, 2, &EnumerationSpec::multigraphs(0)).unwrap().unwrap();
    assert!(!doubled.is_simple());
    assert_eq!(exact_treewidth(&doubled).unwrap().0, 1);
    assert_ne!(hom_density_bruteforce(&f, &k3).unwrap(), hom_density_bruteforce(&f, &flat).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_forms_ignore_labels(
        (g, perm) in (1usize..=5).prop_flat_map(|v| (
            prop::collection::vec(0u32..=2, v * (v - 1) / 2).prop_map(move |m| multigraph_from(v, &m)),
            Just((0..v).collect::<Vec<_>>()).prop_shuffle(),
        ))
    ) {
        let h = g.relabel(&perm);
        prop_assert_eq!(canonical_form(&g), canonical_form(&h));
    }

    #[test]
    fn canonical_forms_separate_classes(
        (a, b) in (1usize..=4).prop_flat_map(|v| (
            prop::collection::vec(0u32..=2, v * (v - 1) / 2).prop_map(move |m| multigraph_from(v, &m)),
            prop::collection::vec(0u32..=2, v * (v - 1) / 2).prop_map(move |m| multigraph_from(v, &m)),
        ))
    ) {
        prop_assert_eq!(canonical_form(&a) == canonical_form(&b), naive_isomorphic(&a, &b));
    }

    #[test]
    fn densities_multiply_over_disjoint_unions(
        a in (1usize..=3).prop_flat_map(|v| prop::collection::vec(0u32..=2, v * (v - 1) / 2).prop_map(move |m| multigraph_from(v, &m))),
        b in (1usize..=3).prop_flat_map(|v| prop::collection::vec(0u32..=2, v * (v - 1) / 2).prop_map(move |m| multigraph_from(v, &m))),
        w in arb_graphon(3),
    ) {
        let union = a.disjoint_union(&b);
        let got = hom_density_bruteforce(&union, &w).unwrap();
        prop_assert_eq!(&got, &(naive_density(&a, &w) * naive_density(&b, &w)));
        prop_assert_eq!(got, naive_density(&union, &w));
    }

    #[test]
    fn simplify_is_idempotent(
        g in (1usize..=5).prop_flat_map(|v| prop::collection::vec(0u32..=3, v * (v - 1) / 2).prop_map(move |m| multigraph_from(v, &m)))
    ) {
        let s = g.simplify();
        prop_assert!(s.is_simple());
        prop_assert_eq!(s.simplify(), s.clone());
        let n = g.vertex_count();
        for u in 0..n {
            for v in 0..n {
                prop_assert_eq!(s.multiplicity(u, v) > 0, g.multiplicity(u, v) > 0);
            }
        }
    }

    #[test]
    fn graph_densities_count_homomorphisms(
        f in (1usize..=4).prop_flat_map(|v| prop::collection::vec(0u32..=2, v * (v - 1) / 2).prop_map(move |m| multigraph_from(v, &m))),
        g in (1usize..=4).prop_flat_map(arb_simple_graph),
    ) {
        let homs = all_maps(f.vertex_count(), g.vertex_count())
            .iter()
            .filter(|phi| f.edges().iter().all(|&(u, v, _)| g.multiplicity(phi[u], phi[v]) > 0))
            .count();
        let w = StepGraphon::from_graph(&g).unwrap();
        let scale = Rational::from(g.vertex_count() as i64).pow(f.vertex_count() as u32);
        prop_assert_eq!(hom_density_bruteforce(&f, &w).unwrap() * scale, Rational::from(homs as i64));
    }
}
