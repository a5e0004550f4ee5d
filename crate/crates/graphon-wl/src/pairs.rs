//! Seeded generation of graph and graphon pairs for the harness.
//!
//! Every pair id records the seed, the position and the kind of pair, so any
//! report can be regenerated from it.

use graphon_wl_core::{MultiGraph, Rational, StepGraphon};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphPair {
    pub id: String,
    pub left: MultiGraph,
    pub right: MultiGraph,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphonPair {
    pub id: String,
    pub left: StepGraphon,
    pub right: StepGraphon,
}

/// Edge weights drawn by the random graphon generator.
pub const WEIGHTS: [(i64, i64); 5] = [(0, 1), (1, 3), (1, 2), (2, 3), (1, 1)];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> MultiGraph {
    let edges: Vec<_> = all_pairs(n).into_iter().filter(|_| rng.gen_bool(p)).collect();
    MultiGraph::simple(n, &edges).expect("distinct pairs")
}

/// A uniformly random simple graph on `n` vertices with exactly `m` edges.
pub fn random_graph_with_edges(rng: &mut impl Rng, n: usize, m: usize) -> MultiGraph {
    let mut pairs = all_pairs(n);
    pairs.shuffle(rng);
    pairs.truncate(m);
    MultiGraph::simple(n, &pairs).expect("distinct pairs")
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

/// A disjoint union of cycles covering `n >= 3` vertices, randomly labeled.
fn random_two_regular(rng: &mut impl Rng, n: usize) -> MultiGraph {
    let mut lengths = Vec::new();
    let mut left = n;
    while left > 0 {
        let len = if left >= 6 && rng.gen_bool(0.5) { rng.gen_range(3..=left - 3) } else { left };
        lengths.push(len);
        left -= len;
    }
    let mut g = MultiGraph::empty(0);
    for len in lengths {
        g = g.disjoint_union(&MultiGraph::cycle(len));
    }
    g.relabel(&random_permutation(rng, n))
}

/// The pairs with known verdicts: `(C6, 2C3)`, `(K3, K3)` and `(K2, 2K1)`.
pub fn curated_graph_pairs() -> Vec<GraphPair> {
    let two_triangles = MultiGraph::complete(3).disjoint_union(&MultiGraph::complete(3));
    vec![
        GraphPair { id: "C6-2C3".into(), left: MultiGraph::cycle(6), right: two_triangles },
        GraphPair { id: "K3-K3".into(), left: MultiGraph::complete(3), right: MultiGraph::complete(3) },
        GraphPair { id: "K2-2K1".into(), left: MultiGraph::complete(2), right: MultiGraph::empty(2) },
    ]
}

/// Random simple-graph pairs on 2 to `max_n` vertices, cycling through four
/// kinds: equal edge counts, relabeled copies, 2-regular graphs, and
/// independent graphs of possibly different orders.
pub fn random_graph_pairs(seed: u64, count: usize, max_n: usize) -> Vec<GraphPair> {
    assert!(max_n >= 2);
    let mut rng = rng(seed);
    (0..count)
        .map(|i| {
            let kind = i % 4;
            let n = rng.gen_range(2..=max_n);
            let (left, right) = match kind {
                0 => {
                    let m = rng.gen_range(0..=n * (n - 1) / 2);
                    (random_graph_with_edges(&mut rng, n, m), random_graph_with_edges(&mut rng, n, m))
                }
                1 => {
                    let g = random_graph(&mut rng, n, 0.5);
                    let h = g.relabel(&random_permutation(&mut rng, n));
                    (g, h)
                }
                2 if max_n >= 3 => {
                    let n = n.max(3);
                    (random_two_regular(&mut rng, n), random_two_regular(&mut rng, n))
                }
                _ => {
                    let m = rng.gen_range(2..=max_n);
                    (random_graph(&mut rng, n, 0.5), random_graph(&mut rng, m, 0.5))
                }
            };
            GraphPair { id: format!("seed{seed}-{i}-g{kind}"), left, right }
        })
        .collect()
}

fn weight(rng: &mut impl Rng) -> Rational {
    let (p, q) = WEIGHTS[rng.gen_range(0..WEIGHTS.len())];
    Rational::new(p, q).expect("nonzero denominator")
}

/// Masses proportional to integers in `1..=3`; weights from [`WEIGHTS`],
/// diagonal included.
pub fn random_step_graphon(rng: &mut impl Rng, n: usize) -> StepGraphon {
    let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    let total: i64 = raw.iter().sum();
    let masses = raw.iter().map(|&r| Rational::new(r, total).expect("positive total")).collect();
    let mut weights = vec![vec![Rational::zero(); n]; n];
    for x in 0..n {
        for y in x..n {
            let w = weight(rng);
            weights[x][y] = w.clone();
            weights[y][x] = w;
        }
    }
    StepGraphon::new(masses, weights).expect("valid by construction")
}

/// A graph on `n` vertices where every vertex has degree `d` (`n d` even).
fn regular_graph(rng: &mut impl Rng, n: usize, d: usize) -> MultiGraph {
    // Circulant graphs are regular; relabel for variety.
    let mut g = MultiGraph::empty(n);
    for v in 0..n {
        for s in 1..=d / 2 {
            let u = (v + s) % n;
            if g.multiplicity(v, u) == 0 {
                g.add_edge(v, u, 1).expect("valid edge");
            }
        }
        if d % 2 == 1 {
            let u = (v + n / 2) % n;
            if g.multiplicity(v, u) == 0 {
                g.add_edge(v, u, 1).expect("valid edge");
            }
        }
    }
    g.relabel(&random_permutation(rng, n))
}

/// Random step-graphon pairs on at most `max_n` vertices, cycling through
/// four kinds: independent graphons, permuted copies, a graphon against a
/// twin split of itself, and a regular graph against the constant graphon of
/// the same edge density.
pub fn random_graphon_pairs(seed: u64, count: usize, max_n: usize) -> Vec<GraphonPair> {
    assert!(max_n >= 2);
    let mut rng = rng(seed);
    (0..count)
        .map(|i| {
            let kind = i % 4;
            let (left, right) = match kind {
                0 => {
                    let (n, m) = (rng.gen_range(1..=max_n), rng.gen_range(1..=max_n));
                    (random_step_graphon(&mut rng, n), random_step_graphon(&mut rng, m))
                }
                1 => {
                    let n = rng.gen_range(1..=max_n);
                    let w = random_step_graphon(&mut rng, n);
                    let p = w.permute(&random_permutation(&mut rng, n));
                    (w, p)
                }
                2 => {
                    let n = rng.gen_range(1..max_n);
                    let w = random_step_graphon(&mut rng, n);
                    let x = rng.gen_range(0..n);
                    let part = Rational::new(rng.gen_range(1..=2), 3).expect("nonzero denominator");
                    let split = w.split_vertex(x, &part).expect("split of a valid graphon");
                    (w, split)
                }
                _ => {
                    let n = rng.gen_range(2..=max_n);
                    let d = loop {
                        let d = rng.gen_range(0..n);
                        if n * d % 2 == 0 {
                            break d;
                        }
                    };
                    let g = regular_graph(&mut rng, n, d);
                    let c = Rational::new(d as i64, n as i64).expect("n > 0");
                    let w = StepGraphon::from_graph(&g).expect("nonempty graph");
                    (w, StepGraphon::constant(n, c).expect("valid constant"))
                }
            };
            GraphonPair { id: format!("seed{seed}-{i}-w{kind}"), left, right }
        })
        .collect()
}

/// The two weighted graphs of the standard counterexample: the uniform
/// triangle and the complete graph with loops and all weights `2/3`.
pub fn fig1_pair() -> GraphonPair {
    let left = StepGraphon::from_graph(&MultiGraph::complete(3)).expect("K3");
    let right = StepGraphon::constant(3, Rational::new(2, 3).expect("2/3")).expect("constant");
    GraphonPair { id: "fig1".into(), left, right }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_reproducible() {
        assert_eq!(random_graph_pairs(7, 20, 6), random_graph_pairs(7, 20, 6));
        assert_eq!(random_graphon_pairs(7, 20, 4), random_graphon_pairs(7, 20, 4));
        assert_ne!(random_graph_pairs(7, 20, 6), random_graph_pairs(8, 20, 6));
    }

    #[test]
    fn generated_pairs_respect_bounds() {
        for p in random_graph_pairs(3, 40, 6) {
            for g in [&p.left, &p.right] {
                assert!((2..=6).contains(&g.vertex_count()), "{}", p.id);
                assert!(g.is_simple());
            }
            if p.id.ends_with("g2") {
                assert!((0..p.left.vertex_count()).all(|v| p.left.degree(v) == 2), "{}", p.id);
            }
        }
        for p in random_graphon_pairs(3, 40, 4) {
            assert!(p.left.vertex_count() <= 4 && p.right.vertex_count() <= 4, "{}", p.id);
        }
    }

    #[test]
    fn regular_graphs_are_regular() {
        let mut r = rng(1);
        for (n, d) in [(4, 1), (4, 2), (4, 3), (3, 2), (6, 3)] {
            let g = regular_graph(&mut r, n, d);
            assert!((0..n).all(|v| g.degree(v) as usize == d), "n={n} d={d}");
        }
    }
}
