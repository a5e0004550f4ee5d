//! Multigraphs, step graphons and tuple indexing over `[n]^k`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A loop-free multigraph. Edges are stored once per unordered pair as
/// `(u, v, multiplicity)` with `u < v`, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(usize, usize, u32)>,
}

impl MultiGraph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        MultiGraph { n, edges: Vec::new() }
    }

    /// Builds a multigraph from `(u, v, multiplicity)` triples. Endpoints may be
    /// given in either order; repeated pairs accumulate their multiplicities.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, u32)>) -> Result<Self> {
        let mut g = MultiGraph::empty(n);
        for (u, v, m) in edges {
            g.add_edge(u, v, m)?;
        }
        Ok(g)
    }

    /// Simple graph from an edge list.
    pub fn simple(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        MultiGraph::new(n, edges.iter().map(|&(u, v)| (u, v, 1)))
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v, 1));
            }
        }
        MultiGraph { n, edges }
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "simple cycles need at least three vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        MultiGraph::simple(n, &edges).expect("cycle edges are valid")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        MultiGraph::simple(n, &edges).expect("path edges are valid")
    }

    pub fn add_edge(&mut self, u: usize, v: usize, multiplicity: u32) -> Result<()> {
        if u >= self.n {
            return Err(Error::VertexOutOfRange { index: u, bound: self.n });
        }
        if v >= self.n {
            return Err(Error::VertexOutOfRange { index: v, bound: self.n });
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if multiplicity == 0 {
            return Err(Error::ZeroMultiplicity(u, v));
        }
        let key = (u.min(v), u.max(v));
        match self.edges.binary_search_by(|e| (e.0, e.1).cmp(&key)) {
            Ok(i) => self.edges[i].2 += multiplicity,
            Err(i) => self.edges.insert(i, (key.0, key.1, multiplicity)),
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, u32)] {
        &self.edges
    }

    /// Number of edges counted with multiplicity.
    pub fn total_multiplicity(&self) -> u32 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        let key = (u.min(v), u.max(v));
        self.edges
            .binary_search_by(|e| (e.0, e.1).cmp(&key))
            .map(|i| self.edges[i].2)
            .unwrap_or(0)
    }

    pub fn is_simple(&self) -> bool {
        self.edges.iter().all(|e| e.2 == 1)
    }

    /// Fails with `NotSimple` on the first parallel edge.
    pub fn require_simple(&self) -> Result<()> {
        match self.edges.iter().find(|e| e.2 > 1) {
            Some(&(u, v, multiplicity)) => Err(Error::NotSimple { u, v, multiplicity }),
            None => Ok(()),
        }
    }

    /// Replaces every multiplicity by one.
    pub fn simplify(&self) -> MultiGraph {
        MultiGraph {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v, _)| (u, v, 1)).collect(),
        }
    }

    /// Vertices of `other` are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &MultiGraph) -> MultiGraph {
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v, m)| (u + shift, v + shift, m)));
        MultiGraph { n: self.n + other.n, edges }
    }

    /// Multiplicity matrix, row-major.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u32>> {
        let mut a = vec![vec![0; self.n]; self.n];
        for &(u, v, m) in &self.edges {
            a[u][v] = m;
            a[v][u] = m;
        }
        a
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v, _) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Degree counted with multiplicity.
    pub fn degree(&self, v: usize) -> u32 {
        self.edges
            .iter()
            .filter(|e| e.0 == v || e.1 == v)
            .map(|e| e.2)
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.neighbors();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Renames vertex `v` to `perm[v]`. `perm` must be a permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> MultiGraph {
        assert_eq!(perm.len(), self.n);
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v, m)| {
                let (a, b) = (perm[u], perm[v]);
                (a.min(b), a.max(b), m)
            })
            .collect();
        edges.sort_unstable();
        MultiGraph { n: self.n, edges }
    }

    /// Drops isolated vertices; returns the graph and the kept original indices.
    pub fn remove_isolated(&self) -> (MultiGraph, Vec<usize>) {
        let mut used = vec![false; self.n];
        for &(u, v, _) in &self.edges {
            used[u] = true;
            used[v] = true;
        }
        let kept: Vec<usize> = (0..self.n).filter(|&v| used[v]).collect();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in kept.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .map(|&(u, v, m)| (index[u], index[v], m))
            .collect();
        (MultiGraph { n: kept.len(), edges }, kept)
    }

    /// Induced multigraph on the sorted vertex subset `vertices`.
    pub fn induced(&self, vertices: &[usize]) -> MultiGraph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut g = MultiGraph::empty(vertices.len());
        for &(u, v, m) in &self.edges {
            if index[u] != usize::MAX && index[v] != usize::MAX {
                g.add_edge(index[u], index[v], m).expect("induced edge is valid");
            }
        }
        g
    }

    /// Generators of the automorphism group as maps `v -> perm[v]`, found
    /// along the point-stabilizer chain of `0, 1, ...`. A search that exceeds
    /// its node budget is abandoned, so on hard inputs the generators may span
    /// only a subgroup. Every returned map is an automorphism.
    pub fn automorphism_generators(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency_matrix();
        let invariant: Vec<(u32, Vec<u32>)> = (0..self.n)
            .map(|v| {
                let mut nbrs: Vec<u32> = (0..self.n).filter(|&u| adj[v][u] > 0).map(|u| self.degree(u)).collect();
                nbrs.sort_unstable();
                (self.degree(v), nbrs)
            })
            .collect();
        let mut generators: Vec<Vec<usize>> = Vec::new();
        for i in (0..self.n).rev() {
            for j in i + 1..self.n {
                if invariant[i] != invariant[j] || orbit_of(i, self.n, &generators)[j] {
                    continue;
                }
                let mut image = vec![usize::MAX; self.n];
                for (v, slot) in image.iter_mut().enumerate().take(i) {
                    *slot = v;
                }
                image[i] = j;
                let mut used = vec![false; self.n];
                for &w in &image[..=i] {
                    used[w] = true;
                }
                let mut budget = AUTOMORPHISM_BUDGET;
                if extend_automorphism(&adj, &invariant, &mut image, &mut used, i + 1, &mut budget) {
                    generators.push(image);
                }
            }
        }
        generators
    }
}

const AUTOMORPHISM_BUDGET: usize = 1 << 16;

fn orbit_of(start: usize, n: usize, generators: &[Vec<usize>]) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for g in generators {
            if !seen[g[v]] {
                seen[g[v]] = true;
                stack.push(g[v]);
            }
        }
    }
    seen
}

fn extend_automorphism(
    adj: &[Vec<u32>],
    invariant: &[(u32, Vec<u32>)],
    image: &mut [usize],
    used: &mut [bool],
    next: usize,
    budget: &mut usize,
) -> bool {
    let n = image.len();
    if next == n {
        return true;
    }
    for w in 0..n {
        if used[w] || invariant[w] != invariant[next] {
            continue;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        if (0..next).any(|u| adj[u][next] != adj[image[u]][w]) {
            continue;
        }
        image[next] = w;
        used[w] = true;
        if extend_automorphism(adj, invariant, image, used, next + 1, budget) {
            return true;
        }
        used[w] = false;
    }
    image[next] = usize::MAX;
    false
}

/// A finite step graphon: vertex masses summing to one and a symmetric weight
/// matrix with entries in `[0, 1]`. Diagonal entries are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepGraphon {
    masses: Vec<Rational>,
    weights: Vec<Rational>,
}

impl StepGraphon {
    /// Validates and builds a step graphon from masses and a square weight matrix.
    pub fn new(masses: Vec<Rational>, weights: Vec<Vec<Rational>>) -> Result<Self> {
        let n = masses.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if weights.len() != n || weights.iter().any(|row| row.len() != n) {
            return Err(Error::ShapeMismatch(alloc::format!(
                "{n} masses need a {n}x{n} weight matrix"
            )));
        }
        for (vertex, mass) in masses.iter().enumerate() {
            if !mass.is_positive() {
                return Err(Error::ZeroMass { vertex, mass: mass.clone() });
            }
        }
        let total: Rational = masses.iter().sum();
        if !total.is_one() {
            return Err(Error::MassSumNotOne(total));
        }
        let one = Rational::one();
        for (row, values) in weights.iter().enumerate() {
            for (col, value) in values.iter().enumerate() {
                if value.is_negative() || *value > one {
                    return Err(Error::WeightOutOfRange { row, col, value: value.clone() });
                }
            }
        }
        for row in 0..n {
            for col in row + 1..n {
                if weights[row][col] != weights[col][row] {
                    return Err(Error::AsymmetricWeights { row, col });
                }
            }
        }
        Ok(StepGraphon {
            masses,
            weights: weights.into_iter().flatten().collect(),
        })
    }

    /// Uniform masses `1/n`, weight 1 on edges and 0 elsewhere.
    pub fn from_graph(g: &MultiGraph) -> Result<Self> {
        let n = g.vertex_count();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        g.require_simple()?;
        let mass = Rational::new(1, n as i64).expect("n > 0");
        let mut weights = vec![vec![Rational::zero(); n]; n];
        for &(u, v, _) in g.edges() {
            weights[u][v] = Rational::one();
            weights[v][u] = Rational::one();
        }
        StepGraphon::new(vec![mass; n], weights)
    }

    /// Uniform masses and a constant weight everywhere, including the diagonal.
    pub fn constant(n: usize, weight: Rational) -> Result<Self> {
        let mass = Rational::new(1, n.max(1) as i64).expect("nonzero");
        StepGraphon::new(vec![mass; n], vec![vec![weight; n]; n])
    }

    pub fn vertex_count(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    pub fn mass(&self, x: usize) -> &Rational {
        &self.masses[x]
    }

    pub fn weight(&self, x: usize, y: usize) -> &Rational {
        &self.weights[x * self.masses.len() + y]
    }

    pub fn weight_rows(&self) -> Vec<Vec<Rational>> {
        let n = self.vertex_count();
        self.weights.chunks(n).map(|row| row.to_vec()).collect()
    }

    /// Renames vertex `x` to `perm[x]`.
    pub fn permute(&self, perm: &[usize]) -> StepGraphon {
        let n = self.vertex_count();
        assert_eq!(perm.len(), n);
        let mut masses = vec![Rational::zero(); n];
        let mut weights = vec![Rational::zero(); n * n];
        for x in 0..n {
            masses[perm[x]] = self.masses[x].clone();
            for y in 0..n {
                weights[perm[x] * n + perm[y]] = self.weight(x, y).clone();
            }
        }
        StepGraphon { masses, weights }
    }

    /// Splits vertex `x` into two twins carrying `part` and `1 - part` of its mass.
    /// The result is the same graphon on a finer partition.
    pub fn split_vertex(&self, x: usize, part: &Rational) -> Result<StepGraphon> {
        let n = self.vertex_count();
        let mut masses = self.masses.clone();
        let keep = &masses[x] * part;
        let rest = &masses[x] - &keep;
        masses[x] = keep;
        masses.push(rest);
        let rows = self.weight_rows();
        let mut weights = Vec::with_capacity(n + 1);
        for row in &rows {
            let mut r = row.clone();
            r.push(row[x].clone());
            weights.push(r);
        }
        let mut twin = rows[x].clone();
        twin.push(rows[x][x].clone());
        weights.push(twin);
        StepGraphon::new(masses, weights)
    }

    /// True for 0/1 weights, zero diagonal and uniform masses, i.e. the image of
    /// a simple graph under [`StepGraphon::from_graph`].
    pub fn is_simple_graph(&self) -> bool {
        let n = self.vertex_count();
        let uniform = Rational::new(1, n as i64).expect("n > 0");
        self.masses.iter().all(|m| *m == uniform)
            && (0..n).all(|x| self.weight(x, x).is_zero())
            && self.weights.iter().all(|w| w.is_zero() || w.is_one())
    }

    /// Inverse of [`StepGraphon::from_graph`].
    pub fn to_graph(&self) -> Result<MultiGraph> {
        if !self.is_simple_graph() {
            return Err(Error::ModeViolation);
        }
        let n = self.vertex_count();
        let mut g = MultiGraph::empty(n);
        for x in 0..n {
            for y in x + 1..n {
                if self.weight(x, y).is_one() {
                    g.add_edge(x, y, 1)?;
                }
            }
        }
        Ok(g)
    }
}

/// A `k`-tuple of vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KTupleIndex {
    pub coordinates: Vec<usize>,
}

impl KTupleIndex {
    pub fn k(&self) -> usize {
        self.coordinates.len()
    }

    /// The tuple with the `j`th coordinate replaced by `y`.
    pub fn substitute(&self, j: usize, y: usize) -> KTupleIndex {
        let mut coordinates = self.coordinates.clone();
        coordinates[j] = y;
        KTupleIndex { coordinates }
    }
}

/// Row-major indexing of `[n]^k`; coordinate 0 is the most significant digit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TupleSpace {
    pub n: usize,
    pub k: usize,
}

impl TupleSpace {
    pub fn new(n: usize, k: usize) -> Self {
        TupleSpace { n, k }
    }

    /// `n^k`, or `None` on overflow.
    pub fn checked_len(n: usize, k: usize) -> Option<usize> {
        let mut len: usize = 1;
        for _ in 0..k {
            len = len.checked_mul(n)?;
        }
        Some(len)
    }

    pub fn len(&self) -> usize {
        TupleSpace::checked_len(self.n, self.k).expect("tuple space too large")
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn stride(&self, j: usize) -> usize {
        self.n.pow((self.k - 1 - j) as u32)
    }

    pub fn encode(&self, coordinates: &[usize]) -> usize {
        debug_assert_eq!(coordinates.len(), self.k);
        coordinates.iter().fold(0, |acc, &c| acc * self.n + c)
    }

    pub fn decode(&self, mut index: usize) -> KTupleIndex {
        let mut coordinates = vec![0; self.k];
        for j in (0..self.k).rev() {
            coordinates[j] = index % self.n;
            index /= self.n;
        }
        KTupleIndex { coordinates }
    }

    pub fn coordinate(&self, index: usize, j: usize) -> usize {
        (index / self.stride(j)) % self.n
    }

    /// Index of the tuple with coordinate `j` replaced by `y`.
    pub fn substitute(&self, index: usize, j: usize, y: usize) -> usize {
        let stride = self.stride(j);
        let current = (index / stride) % self.n;
        index - current * stride + y * stride
    }

    pub fn tuples(&self) -> impl Iterator<Item = KTupleIndex> + '_ {
        (0..self.len()).map(move |i| self.decode(i))
    }

    /// Product measure `prod_i weights[x_i]` of the tuple at `index`.
    pub fn product_weight(&self, index: usize, weights: &[Rational]) -> Rational {
        let mut acc = Rational::one();
        let mut rest = index;
        for _ in 0..self.k {
            acc *= &weights[rest % self.n];
            rest /= self.n;
        }
        acc
    }

    /// Index of the tuple whose `i`th coordinate is coordinate `map[i]` of `index`.
    pub fn reindex(&self, index: usize, map: &[usize]) -> usize {
        let t = self.decode(index);
        let coords: Vec<usize> = map.iter().map(|&m| t.coordinates[m]).collect();
        self.encode(&coords)
    }
}
