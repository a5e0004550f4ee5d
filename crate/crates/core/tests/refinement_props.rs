mod common;

use std::collections::BTreeMap;

use common::*;
use graphon_wl_core::bilabeled::Generator;
use graphon_wl_core::operators::{apply_operator, KTensor};
use graphon_wl_core::refinement::{
    compare_fingerprints, condexp, refine_jointly, stable_partition, Algorithm, Coloring, ModeFlag,
};
use graphon_wl_core::{MultiGraph, Rational, StepGraphon, TupleSpace};
use proptest::prelude::*;

fn algorithms() -> Vec<Algorithm> {
    vec![
        Algorithm::ColorRefinement(ModeFlag::Graphon),
        Algorithm::Oblivious { k: 1, mode: ModeFlag::Graphon },
        Algorithm::Oblivious { k: 2, mode: ModeFlag::Graphon },
        Algorithm::Simple { k: 1 },
        Algorithm::Simple { k: 2 },
    ]
}

fn refines(finer: &[u32], coarser: &[u32]) -> bool {
    let mut image = BTreeMap::new();
    finer.iter().zip(coarser).all(|(f, c)| *image.entry(*f).or_insert(*c) == *c)
}

fn same_partition(a: &[u32], b: &[u32]) -> bool {
    refines(a, b) && refines(b, a)
}

/// A graphon paired with a relabeled copy, a twin split of itself, or an
/// independent graphon.
fn arb_pair() -> impl Strategy<Value = (StepGraphon, StepGraphon)> {
    (arb_graphon(3), arb_graphon(3), 0usize..3, any::<prop::sample::Index>()).prop_map(|(u, other, kind, ix)| {
        let n = u.vertex_count();
        match kind {
            0 => {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.rotate_left(ix.index(n));
                let p = u.permute(&perm);
                (u, p)
            }
            1 => {
                let s = u.split_vertex(ix.index(n), &q(1, 3)).unwrap();
                (u, s)
            }
            _ => (u, other),
        }
    })
}

/// Textbook color refinement on a graph: repeatedly recolor by the multiset
/// of neighbor colors until the number of colors stops growing.
fn naive_color_refinement(g: &MultiGraph) -> Vec<u32> {
    let n = g.vertex_count();
    let mut colors = vec![0u32; n];
    loop {
        let signatures: Vec<(u32, Vec<u32>)> = (0..n)
            .map(|v| {
                let mut nbrs: Vec<u32> = g.neighbors()[v].iter().map(|&u| colors[u]).collect();
                nbrs.sort_unstable();
                (colors[v], nbrs)
            })
            .collect();
        let mut ids = BTreeMap::new();
        for s in &signatures {
            let next = ids.len() as u32;
            ids.entry(s.clone()).or_insert(next);
        }
        let next: Vec<u32> = signatures.iter().map(|s| ids[s]).collect();
        if same_partition(&next, &colors) {
            return next;
        }
        colors = next;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rounds_refine_and_stabilize(w in arb_graphon(3)) {
        for algo in algorithms() {
            let run = refine_jointly(&[&w], algo).unwrap();
            let c: &Coloring = &run.colorings[0];
            prop_assert!(c.stabilized);
            for r in 1..c.round_count() {
                prop_assert!(refines(&c.rounds[r], &c.rounds[r - 1]), "{:?} round {}", algo, r);
            }
            let last = c.round_count() - 1;
            prop_assert!(last >= 1);
            prop_assert!(same_partition(&c.rounds[last], &c.rounds[last - 1]));
            prop_assert!(c.round_count() <= TupleSpace::new(w.vertex_count(), algo.k()).len() + 2);
            for round in &run.fingerprints[0].rounds {
                let total: Rational = round.iter().map(|(_, m)| m.clone()).sum();
                prop_assert_eq!(total, Rational::one());
            }
        }
    }

    #[test]
    fn relabeling_keeps_fingerprints(w in arb_graphon(4), rot in 0usize..4) {
        let n = w.vertex_count();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left(rot % n);
        perm.reverse();
        let p = w.permute(&perm);
        for algo in algorithms() {
            prop_assert!(compare_fingerprints(&w, &p, algo).unwrap(), "{:?}", algo);
        }
    }

    #[test]
    fn coordinate_swaps_map_classes_to_classes(w in arb_graphon(3)) {
        for algo in [Algorithm::Oblivious { k: 2, mode: ModeFlag::Graphon }, Algorithm::Simple { k: 2 }] {
            let run = refine_jointly(&[&w], algo).unwrap();
            let space = TupleSpace::new(w.vertex_count(), 2);
            for colors in &run.colorings[0].rounds {
                let swapped: Vec<u32> = (0..space.len()).map(|x| colors[space.reindex(x, &[1, 0])]).collect();
                prop_assert!(same_partition(colors, &swapped));
            }
            let fp = &run.fingerprints[0];
            prop_assert_eq!(fp.rounds.len(), run.colorings[0].round_count());
        }
    }

    #[test]
    fn stable_partitions_are_invariant(w in arb_graphon(3), k in 1usize..=2) {
        let run = refine_jointly(&[&w], Algorithm::Oblivious { k, mode: ModeFlag::Graphon }).unwrap();
        let partition = stable_partition(&run.colorings[0]).unwrap();
        let n = w.vertex_count();
        let mut generators = Vec::new();
        for j in 0..k {
            generators.push(Generator::Neighbor(k, j));
            for i in 0..j {
                generators.push(Generator::Adjacency(k, i, j));
            }
        }
        for class in &partition {
            let indicator = KTensor::indicator(k, n, class).unwrap();
            prop_assert_eq!(condexp(&partition, &indicator, &w).unwrap(), indicator.clone());
            for g in &generators {
                let image = apply_operator(&g.to_graph().unwrap(), &w, &indicator).unwrap();
                prop_assert_eq!(condexp(&partition, &image, &w).unwrap(), image, "{}", g);
            }
        }
    }

    #[test]
    fn condexp_is_a_projection(w in arb_graphon(3), raw in arb_tensor(2, 3)) {
        let n = w.vertex_count();
        let run = refine_jointly(&[&w], Algorithm::Oblivious { k: 2, mode: ModeFlag::Graphon }).unwrap();
        let partition = stable_partition(&run.colorings[0]).unwrap();
        let f = KTensor::new(2, n, raw[..n * n].to_vec()).unwrap();
        let e = condexp(&partition, &f, &w).unwrap();
        prop_assert_eq!(condexp(&partition, &e, &w).unwrap(), e.clone());
        let g = KTensor::from_fn(2, n, |i| Rational::from(i as i64 % 2)).unwrap();
        let lhs = naive_inner(e.values(), g.values(), &w, 2);
        let rhs = naive_inner(f.values(), condexp(&partition, &g, &w).unwrap().values(), &w, 2);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn higher_order_equality_projects_down((u, w) in arb_pair()) {
        let eq = |k: usize| compare_fingerprints(&u, &w, Algorithm::Oblivious { k, mode: ModeFlag::Graphon }).unwrap();
        let (e1, e2, e3) = (eq(1), eq(2), eq(3));
        prop_assert!(!e3 || e2);
        prop_assert!(!e2 || e1);
        let s = |k: usize| compare_fingerprints(&u, &w, Algorithm::Simple { k }).unwrap();
        let (s1, s2) = (s(1), s(2));
        prop_assert!(!s2 || s1);
    }

    #[test]
    fn graph_mode_colref_matches_the_textbook(g in (1usize..=6).prop_flat_map(arb_simple_graph)) {
        let w = StepGraphon::from_graph(&g).unwrap();
        let run = refine_jointly(&[&w], Algorithm::ColorRefinement(ModeFlag::Graph)).unwrap();
        prop_assert!(same_partition(run.colorings[0].last(), &naive_color_refinement(&g)));
        let graphon_run = refine_jointly(&[&w], Algorithm::ColorRefinement(ModeFlag::Graphon)).unwrap();
        prop_assert!(same_partition(run.colorings[0].last(), graphon_run.colorings[0].last()));
    }

    #[test]
    fn colref_agrees_with_oblivious_two_wl(
        (g, h) in (2usize..=6).prop_flat_map(|n| (arb_simple_graph(n), arb_simple_graph(n)))
    ) {
        let (wg, wh) = (StepGraphon::from_graph(&g).unwrap(), StepGraphon::from_graph(&h).unwrap());
        let colref = compare_fingerprints(&wg, &wh, Algorithm::ColorRefinement(ModeFlag::Graph)).unwrap();
        let owl2 = compare_fingerprints(&wg, &wh, Algorithm::Oblivious { k: 2, mode: ModeFlag::Graph }).unwrap();
        let graphon = compare_fingerprints(&wg, &wh, Algorithm::ColorRefinement(ModeFlag::Graphon)).unwrap();
        prop_assert_eq!(colref, owl2);
        prop_assert_eq!(colref, graphon);
    }
}

#[test]
fn graph_mode_rejects_weighted_input() {
    let w = StepGraphon::constant(2, q(1, 2)).unwrap();
    assert!(refine_jointly(&[&w], Algorithm::ColorRefinement(ModeFlag::Graph)).is_err());
}
