//! Enumeration of small patterns and terms, and distinguisher search.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::bilabeled::{are_isomorphic, BiLabeledGraph, Generator, Term, ISOMORPHISM_VERTEX_LIMIT};
use crate::error::{Error, Result};
use crate::graph::{MultiGraph, StepGraphon};
use crate::operators::hom_density_bruteforce;
use crate::treedecomp::exact_treewidth;

pub const MAX_PATTERN_VERTICES: usize = 6;
pub const MAX_PATTERN_MULTIPLICITY: u32 = 3;
/// Cap on the number of multiplicity assignments tried per underlying graph.
const ASSIGNMENT_BUDGET: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EnumerationSpec {
    pub max_vertices: usize,
    pub max_edge_multiplicity: u32,
    pub treewidth_bound: usize,
    pub simple_only: bool,
    pub connected_only: bool,
}

impl EnumerationSpec {
    /// Connected multigraphs with the default budget: at most 5 vertices and
    /// multiplicity 3.
    pub fn multigraphs(treewidth_bound: usize) -> Self {
        EnumerationSpec {
            max_vertices: 5,
            max_edge_multiplicity: 3,
            treewidth_bound,
            simple_only: false,
            connected_only: true,
        }
    }

    /// Connected simple graphs on at most 6 vertices.
    pub fn simple_graphs(treewidth_bound: usize) -> Self {
        EnumerationSpec {
            max_vertices: 6,
            max_edge_multiplicity: 1,
            treewidth_bound,
            simple_only: true,
            connected_only: true,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_vertices > MAX_PATTERN_VERTICES {
            return Err(Error::SizeLimitExceeded(format!(
                "patterns limited to {MAX_PATTERN_VERTICES} vertices"
            )));
        }
        if self.max_edge_multiplicity > MAX_PATTERN_MULTIPLICITY || self.max_edge_multiplicity == 0 {
            return Err(Error::SizeLimitExceeded(format!(
                "edge multiplicity must lie in 1..={MAX_PATTERN_MULTIPLICITY}"
            )));
        }
        Ok(())
    }
}

/// Pair-multiplicity vector under the relabeling `order` (new vertex `i` is
/// old vertex `order[i]`).
fn relabeled_key(adj: &[Vec<u32>], order: &[usize]) -> Vec<u32> {
    let n = order.len();
    let mut key = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            key.push(adj[order[i]][order[j]]);
        }
    }
    key
}

fn for_each_block_permutation(blocks: &[Vec<usize>], prefix: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    let Some((first, rest)) = blocks.split_first() else {
        visit(prefix);
        return;
    };
    let mut block = first.clone();
    block.sort_unstable();
    loop {
        let len = prefix.len();
        prefix.extend_from_slice(&block);
        for_each_block_permutation(rest, prefix, visit);
        prefix.truncate(len);
        if !next_permutation(&mut block) {
            break;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("successor exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn degree_blocks(g: &MultiGraph) -> Vec<Vec<usize>> {
    let adj = g.adjacency_matrix();
    let invariant = |v: usize| {
        let simple = adj[v].iter().filter(|&&m| m > 0).count();
        let mut neighbor_degrees: Vec<usize> = (0..g.vertex_count())
            .filter(|&u| adj[v][u] > 0)
            .map(|u| adj[u].iter().filter(|&&m| m > 0).count())
            .collect();
        neighbor_degrees.sort_unstable();
        (simple, g.degree(v), neighbor_degrees)
    };
    let mut by_invariant: BTreeMap<_, Vec<usize>> = BTreeMap::new();
    for v in 0..g.vertex_count() {
        by_invariant.entry(invariant(v)).or_default().push(v);
    }
    by_invariant.into_values().collect()
}

/// Canonical form: the smallest pair-multiplicity vector over relabelings
/// that order vertices by an isomorphism-invariant signature.
pub fn canonical_form(g: &MultiGraph) -> (usize, Vec<u32>) {
    let adj = g.adjacency_matrix();
    let blocks = degree_blocks(g);
    let mut best: Option<Vec<u32>> = None;
    for_each_block_permutation(&blocks, &mut Vec::new(), &mut |order| {
        let key = relabeled_key(&adj, order);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    });
    (g.vertex_count(), best.unwrap_or_default())
}

fn from_key(n: usize, key: &[u32]) -> MultiGraph {
    let mut g = MultiGraph::empty(n);
    let mut pos = 0;
    for i in 0..n {
        for j in i + 1..n {
            if key[pos] > 0 {
                g.add_edge(i, j, key[pos]).expect("valid edge");
            }
            pos += 1;
        }
    }
    g
}

/// One representative per isomorphism class, ordered by vertex count, then
/// total multiplicity, then canonical form.
pub fn enumerate_patterns(spec: &EnumerationSpec) -> Result<Vec<MultiGraph>> {
    spec.validate()?;
    let max_mult = if spec.simple_only { 1 } else { spec.max_edge_multiplicity };
    let mut found: BTreeSet<(usize, u32, Vec<u32>)> = BTreeSet::new();
    for n in 1..=spec.max_vertices {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut simple_reps = BTreeSet::new();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(b, _)| mask & (1 << b) != 0).map(|(_, &p)| p).collect();
            let g = MultiGraph::simple(n, &edges)?;
            if spec.connected_only && !g.is_connected() {
                continue;
            }
            simple_reps.insert(canonical_form(&g).1);
        }
        for key in simple_reps {
            let base = from_key(n, &key);
            if exact_treewidth(&base)?.0 > spec.treewidth_bound {
                continue;
            }
            let edges: Vec<(usize, usize)> = base.edges().iter().map(|&(u, v, _)| (u, v)).collect();
            let total = (max_mult as usize).checked_pow(edges.len() as u32);
            if total.is_none_or(|t| t > ASSIGNMENT_BUDGET) {
                return Err(Error::SizeLimitExceeded(format!(
                    "{} edges with multiplicity up to {max_mult}",
                    edges.len()
                )));
            }
            let mut mult = vec![1u32; edges.len()];
            loop {
                let g = MultiGraph::new(n, edges.iter().zip(&mult).map(|(&(u, v), &m)| (u, v, m)))?;
                found.insert((n, g.total_multiplicity(), canonical_form(&g).1));
                let Some(pos) = mult.iter().position(|&m| m < max_mult) else { break };
                mult[pos] += 1;
                for m in &mut mult[..pos] {
                    *m = 1;
                }
            }
        }
    }
    Ok(found.into_iter().map(|(n, _, key)| from_key(n, &key)).collect())
}

/// The first pattern of treewidth at most `k - 1` whose densities differ.
/// The treewidth bound of `spec` is replaced by `k - 1`.
pub fn find_distinguisher(
    w1: &StepGraphon,
    w2: &StepGraphon,
    k: usize,
    spec: &EnumerationSpec,
) -> Result<Option<MultiGraph>> {
    let spec = EnumerationSpec { treewidth_bound: k.saturating_sub(1), ..*spec };
    for f in enumerate_patterns(&spec)? {
        if hom_density_bruteforce(&f, w1)? != hom_density_bruteforce(&f, w2)? {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// Cheap isomorphism invariant used to bucket candidate terms.
fn term_bucket(g: &BiLabeledGraph) -> (usize, u32, Vec<u32>, Vec<u32>) {
    let graph = g.graph();
    let mut degrees: Vec<u32> = (0..graph.vertex_count()).map(|v| graph.degree(v)).collect();
    degrees.sort_unstable();
    let inputs = g.inputs().iter().map(|&v| graph.degree(v)).collect();
    (graph.vertex_count(), graph.total_multiplicity(), degrees, inputs)
}

/// Terms over `{Neighbor(k, j)} ∪ {Adjacency(k, i, j)}` with at most
/// `max_size` syntax nodes and height at most `max_height`, one per
/// isomorphism class of the evaluated bi-labeled graph. Evaluations with more
/// than the isomorphism vertex limit are skipped.
pub fn enumerate_terms(k: usize, max_height: usize, max_size: usize) -> Result<Vec<Term>> {
    Generator::One(k).validate()?;
    let mut generators = Vec::new();
    for j in 0..k {
        generators.push(Generator::Neighbor(k, j));
    }
    for i in 0..k {
        for j in i + 1..k {
            generators.push(Generator::Adjacency(k, i, j));
        }
    }
    let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); max_size + 1];
    let mut terms: Vec<Term> = Vec::new();
    let mut buckets: BTreeMap<(usize, u32, Vec<u32>, Vec<u32>), Vec<(usize, BiLabeledGraph)>> = BTreeMap::new();
    let mut offer = |term: Term, terms: &mut Vec<Term>, by_size: &mut Vec<Vec<usize>>, size: usize| -> Result<()> {
        if term.height() > max_height {
            return Ok(());
        }
        let g = term.eval()?;
        if g.vertex_count() > ISOMORPHISM_VERTEX_LIMIT {
            return Ok(());
        }
        let bucket = buckets.entry(term_bucket(&g)).or_default();
        for (_, other) in bucket.iter() {
            if are_isomorphic(other, &g)? {
                return Ok(());
            }
        }
        bucket.push((terms.len(), g));
        by_size[size].push(terms.len());
        terms.push(term);
        Ok(())
    };
    if max_size >= 1 {
        offer(Term::One(k), &mut terms, &mut by_size, 1)?;
    }
    for size in 2..=max_size {
        for &t in &by_size[size - 1].clone() {
            for g in &generators {
                offer(Term::compose(g.clone(), terms[t].clone()), &mut terms, &mut by_size, size)?;
            }
        }
        for left_size in 1..size - 1 {
            let right_size = size - 1 - left_size;
            if left_size > right_size {
                break;
            }
            for &a in &by_size[left_size].clone() {
                for &b in &by_size[right_size].clone() {
                    if left_size == right_size && b < a {
                        continue;
                    }
                    offer(Term::schur(terms[a].clone(), terms[b].clone()), &mut terms, &mut by_size, size)?;
                }
            }
        }
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    fn spec(max_vertices: usize, mult: u32, tw: usize, simple: bool) -> EnumerationSpec {
        EnumerationSpec {
            max_vertices,
            max_edge_multiplicity: mult,
            treewidth_bound: tw,
            simple_only: simple,
            connected_only: true,
        }
    }

    #[test]
    fn pattern_examples() {
        let small = enumerate_patterns(&spec(2, 2, 1, false)).unwrap();
        assert_eq!(small.len(), 3);
        assert_eq!(small[2].edges(), &[(0, 1, 2)]);
        assert_eq!(enumerate_patterns(&spec(3, 1, 1, true)).unwrap().len(), 3);
        let with_triangle = enumerate_patterns(&spec(3, 1, 2, true)).unwrap();
        assert_eq!(with_triangle.len(), 4);
        assert_eq!(with_triangle[3], MultiGraph::complete(3));
    }

    #[test]
    fn connected_simple_graph_counts() {
        // Connected graphs on 1..=6 vertices: 1, 1, 2, 6, 21, 112.
        let all = enumerate_patterns(&spec(6, 1, 5, true)).unwrap();
        assert_eq!(all.len(), 1 + 1 + 2 + 6 + 21 + 112);
        let mut any = spec(4, 1, 3, true);
        any.connected_only = false;
        assert_eq!(enumerate_patterns(&any).unwrap().len(), 1 + 2 + 4 + 11);
    }

    #[test]
    fn limits_are_enforced() {
        assert!(enumerate_patterns(&spec(7, 1, 1, true)).is_err());
        assert!(enumerate_patterns(&spec(3, 4, 1, false)).is_err());
    }

    #[test]
    fn distinguisher_examples() {
        let left = StepGraphon::from_graph(&MultiGraph::complete(3)).unwrap();
        let right = StepGraphon::constant(3, Rational::new(2, 3).unwrap()).unwrap();
        let budget = EnumerationSpec::multigraphs(0);
        let c2 = MultiGraph::new(2, [(0, 1, 2)]).unwrap();
        assert_eq!(find_distinguisher(&left, &right, 2, &budget).unwrap(), Some(c2));
        assert_eq!(find_distinguisher(&left, &right, 1, &budget).unwrap(), None);
        let c6 = StepGraphon::from_graph(&MultiGraph::cycle(6)).unwrap();
        let tt = StepGraphon::from_graph(&MultiGraph::complete(3).disjoint_union(&MultiGraph::complete(3))).unwrap();
        let simple = spec(3, 1, 2, true);
        assert_eq!(find_distinguisher(&c6, &tt, 3, &simple).unwrap(), Some(MultiGraph::complete(3)));
    }

    #[test]
    fn canonical_form_is_invariant() {
        let g = MultiGraph::new(5, [(0, 1, 2), (1, 2, 1), (2, 3, 3), (3, 4, 1), (4, 0, 1)]).unwrap();
        let h = g.relabel(&[3, 0, 4, 1, 2]);
        assert_eq!(canonical_form(&g), canonical_form(&h));
        let other = MultiGraph::new(5, [(0, 1, 1), (1, 2, 2), (2, 3, 3), (3, 4, 1), (4, 0, 1)]).unwrap();
        assert_ne!(canonical_form(&g), canonical_form(&other));
    }

    #[test]
    fn term_enumeration_dedups() {
        let terms = enumerate_terms(2, 3, 4).unwrap();
        assert!(terms.len() > 5);
        let graphs: Vec<_> = terms.iter().map(|t| t.eval().unwrap()).collect();
        for i in 0..graphs.len() {
            for j in 0..i {
                assert!(!are_isomorphic(&graphs[i], &graphs[j]).unwrap());
            }
        }
        assert!(terms.iter().all(|t| t.height() <= 3));
    }
}
