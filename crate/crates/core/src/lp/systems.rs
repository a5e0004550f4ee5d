use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use super::{feasible_under_symmetry, Feasibility, LinearSystem};
use crate::bilabeled::{BiLabeledGraph, Generator};
use crate::error::{Error, Result};
use crate::graph::{MultiGraph, StepGraphon, TupleSpace};
use crate::matrix::RationalMatrix;
use crate::operators::operator_matrix;
use crate::rational::Rational;

/// Largest number of variables any builder here will create.
pub const VARIABLE_LIMIT: usize = 200_000;

/// A set of pairs `(v, w)` with `v` in `G` and `w` in `H`, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialMap {
    pairs: Vec<(usize, usize)>,
}

impl PartialMap {
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        PartialMap { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn with(&self, pair: (usize, usize)) -> PartialMap {
        match self.pairs.binary_search(&pair) {
            Ok(_) => self.clone(),
            Err(pos) => {
                let mut pairs = self.pairs.clone();
                pairs.insert(pos, pair);
                PartialMap { pairs }
            }
        }
    }
}

/// Whether `pi` is an injective map that preserves adjacency and non-adjacency.
pub fn is_partial_isomorphism(pi: &PartialMap, g: &MultiGraph, h: &MultiGraph) -> bool {
    let p = &pi.pairs;
    for (i, &(v, w)) in p.iter().enumerate() {
        for &(v2, w2) in &p[..i] {
            if (v == v2) != (w == w2) {
                return false;
            }
            if v != v2 && (g.multiplicity(v, v2) > 0) != (h.multiplicity(w, w2) > 0) {
                return false;
            }
        }
    }
    true
}

/// The system `L^k(G, H)` with its variable catalog.
#[derive(Clone, Debug)]
pub struct LkSystem {
    pub system: LinearSystem,
    pub k: usize,
    pub g_vertices: usize,
    pub h_vertices: usize,
    pub maps: Vec<PartialMap>,
    index: BTreeMap<PartialMap, usize>,
    /// Variable permutations induced by automorphisms of `G` and of `H`.
    symmetries: Vec<Vec<usize>>,
}

impl LkSystem {
    pub fn variable(&self, pi: &PartialMap) -> Option<usize> {
        self.index.get(pi).copied()
    }

    pub fn symmetries(&self) -> &[Vec<usize>] {
        &self.symmetries
    }

    /// Feasibility of the system, solved modulo the automorphisms of both graphs.
    pub fn solve(&self) -> Feasibility {
        feasible_under_symmetry(&self.system, &self.symmetries).expect("automorphisms are symmetries of L^k")
    }
}

fn binomial_sum(n: usize, k: usize) -> usize {
    let mut total: usize = 0;
    let mut term: usize = 1;
    for i in 0..=k.min(n) {
        total = total.saturating_add(term);
        term = term.saturating_mul(n - i) / (i + 1);
    }
    total
}

fn map_name(pi: &PartialMap) -> String {
    let mut s = String::from("X{");
    for (i, (v, w)) in pi.pairs.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "({v},{w})");
    }
    s.push('}');
    s
}

/// Variables `X_pi` for every set of at most `k` pairs; marginals, the
/// normalization `X_{} = 1`, and `X_pi = 0` for sets that are not partial
/// isomorphisms. When `(v, w)` already lies in `pi` the corresponding summand
/// is `X_pi` itself.
pub fn build_lk(g: &MultiGraph, h: &MultiGraph, k: usize) -> Result<LkSystem> {
    g.require_simple()?;
    h.require_simple()?;
    let (n, m) = (g.vertex_count(), h.vertex_count());
    let pair_count = n * m;
    if binomial_sum(pair_count, k) > VARIABLE_LIMIT {
        return Err(Error::SizeLimitExceeded(format!(
            "L^{k} over {n} x {m} vertices has too many variables"
        )));
    }
    let mut maps = vec![PartialMap::default()];
    let mut frontier = vec![PartialMap::default()];
    for _ in 0..k {
        let mut next = Vec::new();
        for pi in &frontier {
            let start = pi.pairs.last().map_or(0, |&(v, w)| v * m + w + 1);
            for p in start..pair_count {
                next.push(pi.with((p / m, p % m)));
            }
        }
        maps.extend(next.iter().cloned());
        frontier = next;
    }
    let mut system = LinearSystem::new();
    let mut index = BTreeMap::new();
    for pi in &maps {
        let var = system.add_variable(map_name(pi), true);
        index.insert(pi.clone(), var);
    }
    system.add_equality([(index[&PartialMap::default()], Rational::one())], Rational::one());
    for pi in maps.iter().filter(|pi| pi.len() < k) {
        let x = index[pi];
        for w in 0..m {
            let terms = (0..n).map(|v| (index[&pi.with((v, w))], Rational::one()));
            system.add_equality(terms.chain([(x, -Rational::one())]), Rational::zero());
        }
        for v in 0..n {
            let terms = (0..m).map(|w| (index[&pi.with((v, w))], Rational::one()));
            system.add_equality(terms.chain([(x, -Rational::one())]), Rational::zero());
        }
    }
    for pi in &maps {
        if !is_partial_isomorphism(pi, g, h) {
            system.add_equality([(index[pi], Rational::one())], Rational::zero());
        }
    }
    let induced = |f: &dyn Fn(usize, usize) -> (usize, usize)| -> Vec<usize> {
        maps.iter()
            .map(|pi| index[&PartialMap::new(pi.pairs.iter().map(|&(v, w)| f(v, w)).collect())])
            .collect()
    };
    let mut symmetries = Vec::new();
    for sigma in g.automorphism_generators() {
        symmetries.push(induced(&|v, w| (sigma[v], w)));
    }
    for tau in h.automorphism_generators() {
        symmetries.push(induced(&|v, w| (v, tau[w])));
    }
    Ok(LkSystem { system, k, g_vertices: n, h_vertices: m, maps, index, symmetries })
}

/// Reads the level-`level` matrix `S[v][w] = X_{(v_1,w_1),...}` off an
/// `L^k` witness, rows indexed by `[n_G]^level` and columns by `[n_H]^level`.
pub fn lk_level_matrix(lk: &LkSystem, witness: &[Rational], level: usize) -> Result<RationalMatrix> {
    if level > lk.k {
        return Err(Error::ShapeMismatch(format!("level {level} above k = {}", lk.k)));
    }
    let rs = TupleSpace::new(lk.g_vertices, level);
    let cs = TupleSpace::new(lk.h_vertices, level);
    let mut s = RationalMatrix::zeros(rs.len(), cs.len());
    for r in 0..rs.len() {
        let v = rs.decode(r).coordinates;
        for c in 0..cs.len() {
            let w = cs.decode(c).coordinates;
            let pi = PartialMap::new(v.iter().copied().zip(w.iter().copied()).collect());
            let var = lk.variable(&pi).expect("sets of at most k pairs are cataloged");
            s.set(r, c, witness[var].clone());
        }
    }
    Ok(s)
}

/// Doubly stochastic `X` with `A X = X B`, where `X[v][w]` has index `v m + w`.
pub fn build_doubly_stochastic_commutant(g: &MultiGraph, h: &MultiGraph) -> Result<LinearSystem> {
    g.require_simple()?;
    h.require_simple()?;
    let (n, m) = (g.vertex_count(), h.vertex_count());
    let (a, b) = (g.adjacency_matrix(), h.adjacency_matrix());
    let mut system = LinearSystem::new();
    for v in 0..n {
        for w in 0..m {
            system.add_variable(format!("X({v},{w})"), true);
        }
    }
    let var = |v: usize, w: usize| v * m + w;
    for v in 0..n {
        system.add_equality((0..m).map(|w| (var(v, w), Rational::one())), Rational::one());
    }
    for w in 0..m {
        system.add_equality((0..n).map(|v| (var(v, w), Rational::one())), Rational::one());
    }
    for v in 0..n {
        for w in 0..m {
            let left = (0..n).filter(|&u| a[v][u] > 0).map(|u| (var(u, w), Rational::from(a[v][u])));
            let right = (0..m).filter(|&u| b[u][w] > 0).map(|u| (var(v, u), -Rational::from(b[u][w])));
            system.add_equality(left.chain(right), Rational::zero());
        }
    }
    Ok(system)
}

/// Families of bi-labeled graphs whose operators a Markov operator must commute with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorFamily {
    /// All `j`-neighbor and `ij`-adjacency graphs on `k` slots.
    Oblivious,
    /// For `k = 1`: the one-input one-output edge and the neighbor graph,
    /// i.e. the kernel operator `T_W` and averaging.
    Kernel,
    /// All neighbor-with-edges graphs on `k` slots.
    Simple,
}

impl OperatorFamily {
    pub fn graphs(self, k: usize) -> Result<Vec<BiLabeledGraph>> {
        let mut out = Vec::new();
        match self {
            OperatorFamily::Oblivious => {
                for j in 0..k {
                    out.push(Generator::Neighbor(k, j).to_graph()?);
                }
                for i in 0..k {
                    for j in i + 1..k {
                        out.push(Generator::Adjacency(k, i, j).to_graph()?);
                    }
                }
            }
            OperatorFamily::Kernel => {
                if k != 1 {
                    return Err(Error::ArityMismatch { expected: 1, found: k });
                }
                out.push(BiLabeledGraph::new(MultiGraph::complete(2), vec![0], vec![1])?);
                out.push(Generator::Neighbor(1, 0).to_graph()?);
            }
            OperatorFamily::Simple => {
                for j in 0..k {
                    for mask in 0u32..(1 << k) {
                        if mask & (1 << j) == 0 {
                            let set = (0..k).filter(|i| mask & (1 << i) != 0).collect();
                            out.push(Generator::AdjNei(k, j, set).to_graph()?);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// A Markov-commutant system; `S[x][y]` has variable index `x * m^k + y`.
#[derive(Clone, Debug)]
pub struct MarkovSystem {
    pub system: LinearSystem,
    pub k: usize,
    pub rows: usize,
    pub cols: usize,
}

/// `S` from functions on `W`'s `[m]^k` to functions on `U`'s `[n]^k`:
/// nonnegative, `S 1 = 1`, `S* 1 = 1` for the adjoint with respect to the
/// two product measures, and `T_F(U) S = S T_F(W)` for every `F` in the family.
pub fn build_markov_commutant(
    u: &StepGraphon,
    w: &StepGraphon,
    k: usize,
    family: OperatorFamily,
    permutation_invariant: bool,
) -> Result<MarkovSystem> {
    let rs = TupleSpace::new(u.vertex_count(), k);
    let cs = TupleSpace::new(w.vertex_count(), k);
    let too_big = || Error::SizeLimitExceeded(format!("Markov system of order {k}"));
    let rows = TupleSpace::checked_len(u.vertex_count(), k).ok_or_else(too_big)?;
    let cols = TupleSpace::checked_len(w.vertex_count(), k).ok_or_else(too_big)?;
    if rows.saturating_mul(cols) > VARIABLE_LIMIT {
        return Err(too_big());
    }
    let mut system = LinearSystem::new();
    for x in 0..rows {
        for y in 0..cols {
            system.add_variable(format!("S({x},{y})"), true);
        }
    }
    let var = |x: usize, y: usize| x * cols + y;
    for x in 0..rows {
        system.add_equality((0..cols).map(|y| (var(x, y), Rational::one())), Rational::one());
    }
    for y in 0..cols {
        system.add_equality(
            (0..rows).map(|x| (var(x, y), rs.product_weight(x, u.masses()))),
            cs.product_weight(y, w.masses()),
        );
    }
    let mut graphs = family.graphs(k)?;
    if permutation_invariant {
        for i in 0..k.saturating_sub(1) {
            let mut perm: Vec<usize> = (0..k).collect();
            perm.swap(i, i + 1);
            graphs.push(Generator::Permutation(k, perm).to_graph()?);
        }
    }
    for f in &graphs {
        let mu = operator_matrix(f, u)?;
        let mw = operator_matrix(f, w)?;
        let mw_cols: Vec<Vec<(usize, Rational)>> = (0..cols)
            .map(|y| (0..cols).filter(|&z| !mw.get(z, y).is_zero()).map(|z| (z, mw.get(z, y).clone())).collect())
            .collect();
        for x in 0..rows {
            let mu_row: Vec<(usize, &Rational)> =
                mu.row(x).iter().enumerate().filter(|(_, a)| !a.is_zero()).collect();
            for y in 0..cols {
                let left = mu_row.iter().map(|&(z, a)| (var(z, y), a.clone()));
                let right = mw_cols[y].iter().map(|(z, b)| (var(x, *z), -b));
                system.add_equality(left.chain(right), Rational::zero());
            }
        }
    }
    Ok(MarkovSystem { system, k, rows, cols })
}

/// The matrix `S` encoded by a witness of a Markov-commutant system.
pub fn markov_solution_matrix(ms: &MarkovSystem, witness: &[Rational]) -> RationalMatrix {
    let mut s = RationalMatrix::zeros(ms.rows, ms.cols);
    for x in 0..ms.rows {
        for y in 0..ms.cols {
            s.set(x, y, witness[x * ms.cols + y].clone());
        }
    }
    s
}

/// The operator `f -> f(x_{perm[0]}, ..., x_{perm[k-1]})` on `[n]^k`.
pub fn permutation_matrix(n: usize, perm: &[usize]) -> RationalMatrix {
    let space = TupleSpace::new(n, perm.len());
    let mut m = RationalMatrix::zeros(space.len(), space.len());
    for x in 0..space.len() {
        m.set(x, space.reindex(x, perm), Rational::one());
    }
    m
}

/// `Forget(k, j) . S . Introduce(k, j)`, with the forget operator of `U`'s
/// masses on the left and the introduce operator of `W`'s on the right.
pub fn step_down(
    s: &RationalMatrix,
    u_masses: &[Rational],
    w_masses: &[Rational],
    k: usize,
    j: usize,
) -> Result<RationalMatrix> {
    let (n, m) = (u_masses.len(), w_masses.len());
    let expected = (TupleSpace::checked_len(n, k), TupleSpace::checked_len(m, k));
    if k == 0 || j >= k || expected != (Some(s.rows()), Some(s.cols())) {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} matrix for order {k} over {n} and {m} vertices",
            s.rows(),
            s.cols()
        )));
    }
    let (big_u, small_u) = (TupleSpace::new(n, k), TupleSpace::new(n, k - 1));
    let (big_w, small_w) = (TupleSpace::new(m, k), TupleSpace::new(m, k - 1));
    let insert = |space: &TupleSpace, small: &[usize], y: usize| {
        let mut full = small.to_vec();
        full.insert(j, y);
        space.encode(&full)
    };
    let mut out = RationalMatrix::zeros(small_u.len(), small_w.len());
    for a in 0..small_u.len() {
        let xa = small_u.decode(a).coordinates;
        for b in 0..small_w.len() {
            let xb = small_w.decode(b).coordinates;
            let mut acc = Rational::zero();
            for (y, mass) in u_masses.iter().enumerate() {
                let row = insert(&big_u, &xa, y);
                let mut inner = Rational::zero();
                for z in 0..m {
                    inner += s.get(row, insert(&big_w, &xb, z));
                }
                acc += mass * inner;
            }
            out.set(a, b, acc);
        }
    }
    Ok(out)
}
