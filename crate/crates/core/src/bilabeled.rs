//! Bi-labeled graphs, their generator families and the term language.
//!
//! A bi-labeled graph is a multigraph together with a vector of distinct input
//! vertices and a vector of distinct output vertices. Composition glues the
//! outputs of the left operand to the inputs of the right one, the Schur
//! product glues inputs to inputs, and transposition swaps the two vectors.
//! All slot indices in this module are 0-based.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::graph::MultiGraph;

/// Largest vertex count accepted by [`are_isomorphic`].
pub const ISOMORPHISM_VERTEX_LIMIT: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiLabeledGraph {
    graph: MultiGraph,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

fn check_labels(n: usize, labels: &[usize]) -> Result<()> {
    let mut seen = vec![false; n];
    for &v in labels {
        if v >= n {
            return Err(Error::VertexOutOfRange { index: v, bound: n });
        }
        if seen[v] {
            return Err(Error::LabelCollision(v));
        }
        seen[v] = true;
    }
    Ok(())
}

impl BiLabeledGraph {
    pub fn new(graph: MultiGraph, inputs: Vec<usize>, outputs: Vec<usize>) -> Result<Self> {
        check_labels(graph.vertex_count(), &inputs)?;
        check_labels(graph.vertex_count(), &outputs)?;
        Ok(BiLabeledGraph { graph, inputs, outputs })
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn input_arity(&self) -> usize {
        self.inputs.len()
    }

    pub fn output_arity(&self) -> usize {
        self.outputs.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Glues output `i` of `self` to input `i` of `other`. Inputs come from
    /// `self`, outputs from `other`; parallel edges accumulate.
    pub fn compose(&self, other: &BiLabeledGraph) -> Result<BiLabeledGraph> {
        if self.output_arity() != other.input_arity() {
            return Err(Error::ArityMismatch {
                expected: self.output_arity(),
                found: other.input_arity(),
            });
        }
        let (graph, map) = glue(&self.graph, &self.outputs, &other.graph, &other.inputs);
        let outputs = other.outputs.iter().map(|&v| map[v]).collect();
        BiLabeledGraph::new(graph, self.inputs.clone(), outputs)
    }

    /// Glues input `i` of `self` to input `i` of `other`; both operands must be
    /// in `M^{k,0}`.
    pub fn schur(&self, other: &BiLabeledGraph) -> Result<BiLabeledGraph> {
        if self.output_arity() != 0 {
            return Err(Error::HasOutputs(self.output_arity()));
        }
        if other.output_arity() != 0 {
            return Err(Error::HasOutputs(other.output_arity()));
        }
        if self.input_arity() != other.input_arity() {
            return Err(Error::ArityMismatch {
                expected: self.input_arity(),
                found: other.input_arity(),
            });
        }
        let (graph, _) = glue(&self.graph, &self.inputs, &other.graph, &other.inputs);
        BiLabeledGraph::new(graph, self.inputs.clone(), Vec::new())
    }

    pub fn transpose(&self) -> BiLabeledGraph {
        BiLabeledGraph {
            graph: self.graph.clone(),
            inputs: self.outputs.clone(),
            outputs: self.inputs.clone(),
        }
    }

    /// The same graph with the output labels dropped.
    pub fn drop_outputs(&self) -> BiLabeledGraph {
        BiLabeledGraph {
            graph: self.graph.clone(),
            inputs: self.inputs.clone(),
            outputs: Vec::new(),
        }
    }

    /// Vertices that carry neither an input nor an output label.
    pub fn unlabeled_vertices(&self) -> Vec<usize> {
        let mut labeled = vec![false; self.vertex_count()];
        for &v in self.inputs.iter().chain(&self.outputs) {
            labeled[v] = true;
        }
        (0..self.vertex_count()).filter(|&v| !labeled[v]).collect()
    }
}

/// Disjoint union of `left` and `right` where `right_glue[i]` is identified
/// with `left_glue[i]`. Returns the glued graph and the map from `right`'s
/// vertices to the result.
fn glue(
    left: &MultiGraph,
    left_glue: &[usize],
    right: &MultiGraph,
    right_glue: &[usize],
) -> (MultiGraph, Vec<usize>) {
    let mut map = vec![usize::MAX; right.vertex_count()];
    for (&r, &l) in right_glue.iter().zip(left_glue) {
        map[r] = l;
    }
    let mut next = left.vertex_count();
    for slot in map.iter_mut() {
        if *slot == usize::MAX {
            *slot = next;
            next += 1;
        }
    }
    let mut graph = left.clone();
    let mut grown = MultiGraph::empty(next);
    for &(u, v, m) in graph.edges() {
        grown.add_edge(u, v, m).expect("left edges stay valid");
    }
    graph = grown;
    for &(u, v, m) in right.edges() {
        // Distinct right vertices map to distinct result vertices, so no loops.
        graph.add_edge(map[u], map[v], m).expect("glued edge is valid");
    }
    (graph, map)
}

/// The generator families. `k` is the number of slots; every index is 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// `k` isolated input vertices, no outputs.
    One(usize),
    /// `(k, j)`: forget slot `j` and introduce a fresh vertex there.
    Neighbor(usize, usize),
    /// `(k, i, j)`: an edge between slots `i` and `j`.
    Adjacency(usize, usize, usize),
    /// `(k, j)`: `k` inputs, outputs on every slot except `j`.
    Introduce(usize, usize),
    /// `(k, j)`: transpose of `Introduce(k, j)`.
    Forget(usize, usize),
    /// `(k, pi)`: output `i` sits on vertex `pi[i]`.
    Permutation(usize, Vec<usize>),
    /// `(k, j, V)`: edges from every slot in `V` to slot `j`, then a `j`-neighbor step.
    AdjNei(usize, usize, Vec<usize>),
    /// `(k, j1, V, j2)` over `k + 1` slots: forget `j1`, add edges from `V` to
    /// `j1`, introduce `j2`.
    NonObliviousSimple(usize, usize, Vec<usize>, usize),
}

fn bad(msg: alloc::string::String) -> Error {
    Error::BadGeneratorIndex(msg)
}

fn check_slot(k: usize, j: usize) -> Result<()> {
    if k == 0 {
        return Err(bad("k must be positive".into()));
    }
    if j >= k {
        return Err(bad(format!("slot {j} out of range for k = {k}")));
    }
    Ok(())
}

fn check_set(k: usize, j: usize, set: &[usize]) -> Result<()> {
    for (pos, &i) in set.iter().enumerate() {
        check_slot(k, i)?;
        if i == j {
            return Err(bad(format!("set contains the neighbor slot {j}")));
        }
        if set[..pos].contains(&i) {
            return Err(bad(format!("slot {i} repeated in set")));
        }
    }
    Ok(())
}

impl Generator {
    pub fn k(&self) -> usize {
        match *self {
            Generator::One(k)
            | Generator::Neighbor(k, _)
            | Generator::Adjacency(k, _, _)
            | Generator::Introduce(k, _)
            | Generator::Forget(k, _)
            | Generator::Permutation(k, _)
            | Generator::AdjNei(k, _, _)
            | Generator::NonObliviousSimple(k, _, _, _) => k,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Generator::One(k) => {
                if *k == 0 {
                    return Err(bad("k must be positive".into()));
                }
            }
            Generator::Neighbor(k, j) | Generator::Introduce(k, j) | Generator::Forget(k, j) => {
                check_slot(*k, *j)?
            }
            Generator::Adjacency(k, i, j) => {
                check_slot(*k, *i)?;
                check_slot(*k, *j)?;
                if i == j {
                    return Err(bad(format!("adjacency needs distinct slots, got {i} twice")));
                }
            }
            Generator::Permutation(k, perm) => {
                if perm.len() != *k {
                    return Err(bad(format!("permutation of length {} for k = {k}", perm.len())));
                }
                let mut seen = vec![false; *k];
                for &p in perm {
                    check_slot(*k, p)?;
                    if seen[p] {
                        return Err(bad(format!("{p} repeated in permutation")));
                    }
                    seen[p] = true;
                }
            }
            Generator::AdjNei(k, j, set) => {
                check_slot(*k, *j)?;
                check_set(*k, *j, set)?;
            }
            Generator::NonObliviousSimple(k, j1, set, j2) => {
                check_slot(k + 1, *j1)?;
                check_slot(k + 1, *j2)?;
                check_set(k + 1, *j1, set)?;
            }
        }
        Ok(())
    }

    /// Number of input labels of the generated graph.
    pub fn input_arity(&self) -> usize {
        match self {
            Generator::Forget(k, _) => k - 1,
            other => other.k(),
        }
    }

    /// Number of output labels of the generated graph.
    pub fn output_arity(&self) -> usize {
        match self {
            Generator::One(_) => 0,
            Generator::Introduce(k, _) => k - 1,
            other => other.k(),
        }
    }

    /// Whether the generator lies in `M^{k,k}` and may be composed onto terms.
    pub fn is_square(&self) -> bool {
        !matches!(self, Generator::One(_) | Generator::Introduce(..) | Generator::Forget(..))
    }

    /// Contribution to the height of a term.
    pub fn height_increment(&self) -> usize {
        match self {
            Generator::Neighbor(..) | Generator::AdjNei(..) | Generator::NonObliviousSimple(..) => 1,
            _ => 0,
        }
    }

    /// Builds the bi-labeled graph of this generator.
    pub fn to_graph(&self) -> Result<BiLabeledGraph> {
        self.validate()?;
        let identity = |k: usize| (0..k).collect::<Vec<_>>();
        match self {
            Generator::One(k) => BiLabeledGraph::new(MultiGraph::empty(*k), identity(*k), Vec::new()),
            Generator::Neighbor(k, j) => {
                let mut outputs = identity(*k);
                outputs[*j] = *k;
                BiLabeledGraph::new(MultiGraph::empty(k + 1), identity(*k), outputs)
            }
            Generator::Adjacency(k, i, j) => {
                let g = MultiGraph::new(*k, [(*i, *j, 1)])?;
                BiLabeledGraph::new(g, identity(*k), identity(*k))
            }
            Generator::Introduce(k, j) => {
                let outputs = (0..*k).filter(|v| v != j).collect();
                BiLabeledGraph::new(MultiGraph::empty(*k), identity(*k), outputs)
            }
            Generator::Forget(k, j) => Ok(Generator::Introduce(*k, *j).to_graph()?.transpose()),
            Generator::Permutation(k, perm) => {
                BiLabeledGraph::new(MultiGraph::empty(*k), identity(*k), perm.clone())
            }
            Generator::AdjNei(k, j, set) => {
                let g = MultiGraph::new(k + 1, set.iter().map(|&i| (i, *k, 1)))?;
                let mut outputs = identity(*k);
                outputs[*j] = *k;
                BiLabeledGraph::new(g, identity(*k), outputs)
            }
            Generator::NonObliviousSimple(k, j1, set, j2) => {
                let wide = k + 1;
                let mut acc = Generator::Forget(wide, *j1).to_graph()?;
                for &i in set {
                    acc = acc.compose(&Generator::Adjacency(wide, i, *j1).to_graph()?)?;
                }
                acc.compose(&Generator::Introduce(wide, *j2).to_graph()?)
            }
        }
    }
}

/// Terms over square generators: the all-one leaf, composition of a generator
/// onto a term, and the Schur product of two terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    One(usize),
    Compose(Generator, Box<Term>),
    Schur(Box<Term>, Box<Term>),
}

impl Term {
    pub fn compose(generator: Generator, inner: Term) -> Term {
        Term::Compose(generator, Box::new(inner))
    }

    pub fn schur(left: Term, right: Term) -> Term {
        Term::Schur(Box::new(left), Box::new(right))
    }

    /// Checks the grammar and returns the common `k`.
    pub fn arity(&self) -> Result<usize> {
        match self {
            Term::One(k) => {
                Generator::One(*k).validate()?;
                Ok(*k)
            }
            Term::Compose(g, inner) => {
                g.validate()?;
                if !g.is_square() {
                    return Err(bad(format!("{g:?} is not in M^(k,k)")));
                }
                let k = inner.arity()?;
                if g.k() != k {
                    return Err(Error::ArityMismatch { expected: k, found: g.k() });
                }
                Ok(k)
            }
            Term::Schur(a, b) => {
                let ka = a.arity()?;
                let kb = b.arity()?;
                if ka != kb {
                    return Err(Error::ArityMismatch { expected: ka, found: kb });
                }
                Ok(ka)
            }
        }
    }

    pub fn height(&self) -> usize {
        match self {
            Term::One(_) => 0,
            Term::Compose(g, inner) => inner.height() + g.height_increment(),
            Term::Schur(a, b) => a.height().max(b.height()),
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Term::One(_) => 1,
            Term::Compose(_, inner) => 1 + inner.size(),
            Term::Schur(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Evaluates the term to a bi-labeled graph in `M^{k,0}`.
    pub fn eval(&self) -> Result<BiLabeledGraph> {
        self.arity()?;
        self.eval_unchecked()
    }

    fn eval_unchecked(&self) -> Result<BiLabeledGraph> {
        match self {
            Term::One(k) => Generator::One(*k).to_graph(),
            Term::Compose(g, inner) => g.to_graph()?.compose(&inner.eval_unchecked()?),
            Term::Schur(a, b) => a.eval_unchecked()?.schur(&b.eval_unchecked()?),
        }
    }

    /// Every generator occurring in the term, in pre-order.
    pub fn generators(&self) -> Vec<&Generator> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                Term::One(_) => {}
                Term::Compose(g, inner) => {
                    out.push(g);
                    stack.push(inner);
                }
                Term::Schur(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
            }
        }
        out
    }
}

/// Convenience wrapper for [`Term::eval`].
pub fn eval_term(term: &Term) -> Result<BiLabeledGraph> {
    term.eval()
}

/// Convenience wrapper for [`Generator::to_graph`].
pub fn make_generator(generator: &Generator) -> Result<BiLabeledGraph> {
    generator.to_graph()
}

fn write_set(f: &mut fmt::Formatter<'_>, set: &[usize]) -> fmt::Result {
    write!(f, "(")?;
    for (pos, i) in set.iter().enumerate() {
        if pos > 0 {
            write!(f, " ")?;
        }
        write!(f, "{}", i + 1)?;
    }
    write!(f, ")")
}

/// S-expression syntax with 1-based slots, e.g. `(A 2 1 2)`.
impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::One(k) => write!(f, "(one {k})"),
            Generator::Neighbor(k, j) => write!(f, "(N {k} {})", j + 1),
            Generator::Adjacency(k, i, j) => write!(f, "(A {k} {} {})", i + 1, j + 1),
            Generator::Introduce(k, j) => write!(f, "(I {k} {})", j + 1),
            Generator::Forget(k, j) => write!(f, "(F {k} {})", j + 1),
            Generator::Permutation(k, perm) => {
                write!(f, "(P {k}")?;
                for p in perm {
                    write!(f, " {}", p + 1)?;
                }
                write!(f, ")")
            }
            Generator::AdjNei(k, j, set) => {
                write!(f, "(S {k} {} ", j + 1)?;
                write_set(f, set)?;
                write!(f, ")")
            }
            Generator::NonObliviousSimple(k, j1, set, j2) => {
                write!(f, "(NS {k} {} ", j1 + 1)?;
                write_set(f, set)?;
                write!(f, " {})", j2 + 1)
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::One(k) => write!(f, "(one {k})"),
            Term::Compose(g, inner) => write!(f, "(comp {g} {inner})"),
            Term::Schur(a, b) => write!(f, "(schur {a} {b})"),
        }
    }
}

/// Multiset of vertex signatures; equal for isomorphic bi-labeled graphs.
fn vertex_signature(g: &BiLabeledGraph, v: usize) -> (u32, usize, Option<usize>, Option<usize>) {
    (
        g.graph.degree(v),
        g.graph.edges().iter().filter(|e| e.0 == v || e.1 == v).count(),
        g.inputs.iter().position(|&x| x == v),
        g.outputs.iter().position(|&x| x == v),
    )
}

/// Decides whether an edge-multiplicity-preserving bijection maps inputs to
/// inputs and outputs to outputs position by position.
pub fn are_isomorphic(a: &BiLabeledGraph, b: &BiLabeledGraph) -> Result<bool> {
    let n = a.vertex_count();
    if n.max(b.vertex_count()) > ISOMORPHISM_VERTEX_LIMIT {
        return Err(Error::SizeLimitExceeded(format!(
            "isomorphism test limited to {ISOMORPHISM_VERTEX_LIMIT} vertices"
        )));
    }
    if n != b.vertex_count()
        || a.inputs.len() != b.inputs.len()
        || a.outputs.len() != b.outputs.len()
        || a.graph.edges().len() != b.graph.edges().len()
        || a.graph.total_multiplicity() != b.graph.total_multiplicity()
    {
        return Ok(false);
    }
    let sig_a: Vec<_> = (0..n).map(|v| vertex_signature(a, v)).collect();
    let sig_b: Vec<_> = (0..n).map(|v| vertex_signature(b, v)).collect();
    let mut sorted_a = sig_a.clone();
    let mut sorted_b = sig_b.clone();
    sorted_a.sort_unstable();
    sorted_b.sort_unstable();
    if sorted_a != sorted_b {
        return Ok(false);
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let forced = a.inputs.iter().zip(&b.inputs).chain(a.outputs.iter().zip(&b.outputs));
    for (&va, &vb) in forced {
        if map[va] == usize::MAX {
            if used[vb] {
                return Ok(false);
            }
            map[va] = vb;
            used[vb] = true;
        } else if map[va] != vb {
            return Ok(false);
        }
    }
    let mut fixed: Vec<usize> = (0..n).filter(|&v| map[v] != usize::MAX).collect();
    for (pos, &u) in fixed.iter().enumerate() {
        for &v in &fixed[..pos] {
            if a.graph.multiplicity(u, v) != b.graph.multiplicity(map[u], map[v]) {
                return Ok(false);
            }
        }
    }
    let free: Vec<usize> = (0..n).filter(|&v| map[v] == usize::MAX).collect();
    let adj_a = a.graph.adjacency_matrix();
    let adj_b = b.graph.adjacency_matrix();
    Ok(extend(&free, 0, &mut map, &mut used, &mut fixed, &adj_a, &adj_b, &sig_a, &sig_b))
}

#[allow(clippy::too_many_arguments)]
fn extend(
    free: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
    mapped: &mut Vec<usize>,
    adj_a: &[Vec<u32>],
    adj_b: &[Vec<u32>],
    sig_a: &[(u32, usize, Option<usize>, Option<usize>)],
    sig_b: &[(u32, usize, Option<usize>, Option<usize>)],
) -> bool {
    let Some(&v) = free.get(depth) else {
        return true;
    };
    for w in 0..map.len() {
        if used[w] || sig_a[v] != sig_b[w] {
            continue;
        }
        if mapped.iter().any(|&u| adj_a[v][u] != adj_b[w][map[u]]) {
            continue;
        }
        map[v] = w;
        used[w] = true;
        mapped.push(v);
        if extend(free, depth + 1, map, used, mapped, adj_a, adj_b, sig_a, sig_b) {
            return true;
        }
        mapped.pop();
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}
