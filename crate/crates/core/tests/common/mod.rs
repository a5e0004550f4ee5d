//! Brute-force oracles and proptest strategies shared by the integration tests.
#![allow(dead_code)]

use graphon_wl_core::bilabeled::BiLabeledGraph;
use graphon_wl_core::{MultiGraph, Rational, StepGraphon};
use proptest::prelude::*;

pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(p, d).unwrap()
}

pub const WEIGHTS: [(i64, i64); 6] = [(0, 1), (1, 4), (1, 3), (1, 2), (2, 3), (1, 1)];

/// Every map `[v] -> [n]`, as digit vectors with the first vertex most significant.
pub fn all_maps(v: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..v {
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..n).map(move |x| {
                    let mut m = m.clone();
                    m.push(x);
                    m
                })
            })
            .collect();
    }
    out
}

/// Position of a tuple in `[n]^k`, first coordinate most significant.
pub fn tuple_index(t: &[usize], n: usize) -> usize {
    t.iter().fold(0, |acc, &x| acc * n + x)
}

fn edge_weight(g: &MultiGraph, w: &StepGraphon, phi: &[usize]) -> Rational {
    g.edges().iter().map(|&(u, v, m)| w.weight(phi[u], phi[v]).pow(m)).product()
}

/// `t(F, W)` as a sum over all vertex maps.
pub fn naive_density(f: &MultiGraph, w: &StepGraphon) -> Rational {
    all_maps(f.vertex_count(), w.vertex_count())
        .iter()
        .map(|phi| {
            let mass: Rational = phi.iter().map(|&x| w.mass(x).clone()).product();
            mass * edge_weight(f, w, phi)
        })
        .sum()
}

/// `(T_F f)(x) = sum over maps fixing the inputs at x`, integrating every
/// non-input vertex, with `f` read at the outputs.
pub fn naive_apply(b: &BiLabeledGraph, w: &StepGraphon, f: &[Rational]) -> Vec<Rational> {
    let n = w.vertex_count();
    let k = b.inputs().len();
    let mut out = vec![Rational::zero(); n.pow(k as u32)];
    for phi in all_maps(b.vertex_count(), n) {
        let mut value = edge_weight(b.graph(), w, &phi);
        for v in 0..b.vertex_count() {
            if !b.inputs().contains(&v) {
                value *= w.mass(phi[v]);
            }
        }
        let ys: Vec<usize> = b.outputs().iter().map(|&v| phi[v]).collect();
        value *= &f[tuple_index(&ys, n)];
        let xs: Vec<usize> = b.inputs().iter().map(|&v| phi[v]).collect();
        out[tuple_index(&xs, n)] += value;
    }
    out
}

/// `sum mu^k(x) f(x) g(x)` over `[n]^k`.
pub fn naive_inner(f: &[Rational], g: &[Rational], w: &StepGraphon, k: usize) -> Rational {
    let n = w.vertex_count();
    all_maps(k, n)
        .iter()
        .map(|x| {
            let mass: Rational = x.iter().map(|&v| w.mass(v).clone()).product();
            let i = tuple_index(x, n);
            mass * &f[i] * &g[i]
        })
        .sum()
}

/// Brute-force isomorphism of multigraphs.
pub fn naive_isomorphic(a: &MultiGraph, b: &MultiGraph) -> bool {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.total_multiplicity() != b.total_multiplicity() {
        return false;
    }
    permutations(n).iter().any(|p| a.edges().iter().all(|&(u, v, m)| b.multiplicity(p[u], p[v]) == m))
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut p = p.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

pub fn weight_value(i: usize) -> Rational {
    let (p, d) = WEIGHTS[i % WEIGHTS.len()];
    q(p, d)
}

pub fn build_graphon(raw_masses: &[i64], weight_choices: &[usize]) -> StepGraphon {
    let n = raw_masses.len();
    let total: i64 = raw_masses.iter().sum();
    let masses = raw_masses.iter().map(|&m| q(m, total)).collect();
    let mut weights = vec![vec![Rational::zero(); n]; n];
    let mut it = weight_choices.iter();
    for x in 0..n {
        for y in x..n {
            let v = weight_value(*it.next().unwrap());
            weights[x][y] = v.clone();
            weights[y][x] = v;
        }
    }
    StepGraphon::new(masses, weights).unwrap()
}

pub fn arb_graphon(max_n: usize) -> impl Strategy<Value = StepGraphon> {
    (1..=max_n).prop_flat_map(|n| {
        (prop::collection::vec(1i64..=3, n), prop::collection::vec(0..WEIGHTS.len(), n * (n + 1) / 2))
            .prop_map(|(m, w)| build_graphon(&m, &w))
    })
}

/// Simple graphs on exactly `n` vertices.
pub fn arb_simple_graph(n: usize) -> impl Strategy<Value = MultiGraph> {
    prop::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
        let mut g = MultiGraph::empty(n);
        let mut it = bits.into_iter();
        for u in 0..n {
            for v in u + 1..n {
                if it.next().unwrap() {
                    g.add_edge(u, v, 1).unwrap();
                }
            }
        }
        g
    })
}

pub fn multigraph_from(v: usize, mults: &[u32]) -> MultiGraph {
    let mut g = MultiGraph::empty(v);
    let mut it = mults.iter();
    for a in 0..v {
        for b in a + 1..v {
            let m = *it.next().unwrap();
            if m > 0 {
                g.add_edge(a, b, m).unwrap();
            }
        }
    }
    g
}

/// Bi-labeled graphs with `k` inputs and `l` outputs on at most 4 vertices,
/// edge multiplicities at most 2.
pub fn arb_bilabeled(k: usize, l: usize) -> impl Strategy<Value = BiLabeledGraph> {
    (k.max(l).max(1)..=4).prop_flat_map(move |v| {
        let order: Vec<usize> = (0..v).collect();
        (
            prop::collection::vec(0u32..=2, v * (v - 1) / 2),
            Just(order.clone()).prop_shuffle(),
            Just(order).prop_shuffle(),
        )
            .prop_map(move |(mults, ins, outs)| {
                BiLabeledGraph::new(multigraph_from(v, &mults), ins[..k].to_vec(), outs[..l].to_vec()).unwrap()
            })
    })
}

pub fn arb_tensor(k: usize, n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-4i64..=4, 1i64..=3), n.pow(k as u32))
        .prop_map(|v| v.into_iter().map(|(p, d)| q(p, d)).collect())
}
