//! Homomorphism functions, densities and the operators of bi-labeled graphs
//! on step graphons.
//!
//! For `F` with input vector `a` and output vector `b`,
//! `(T_F f)(x_a) = sum prod_{v not an input} mu(x_v) prod_{uv} W(x_u, x_v)^m f(x_b)`,
//! the sum ranging over assignments of every vertex that is not an input.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::bilabeled::{BiLabeledGraph, Term};
use crate::error::{Error, Result};
use crate::graph::{MultiGraph, StepGraphon, TupleSpace};
use crate::matrix::RationalMatrix;
use crate::rational::Rational;

/// Largest `n^k` accepted for a dense tensor.
pub const TENSOR_LEN_LIMIT: usize = 1 << 20;
/// Largest number of vertex assignments a single brute-force sum may visit.
pub const ASSIGNMENT_LIMIT: u128 = 1 << 30;

/// A function on `[n]^k`, stored densely in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KTensor {
    k: usize,
    n: usize,
    values: Vec<Rational>,
}

fn tensor_len(n: usize, k: usize) -> Result<usize> {
    match TupleSpace::checked_len(n, k) {
        Some(len) if len <= TENSOR_LEN_LIMIT => Ok(len),
        _ => Err(Error::SizeLimitExceeded(format!("tensor over [{n}]^{k}"))),
    }
}

impl KTensor {
    pub fn new(k: usize, n: usize, values: Vec<Rational>) -> Result<Self> {
        let len = tensor_len(n, k)?;
        if values.len() != len {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a tensor over [{n}]^{k}",
                values.len()
            )));
        }
        Ok(KTensor { k, n, values })
    }

    pub fn constant(k: usize, n: usize, value: Rational) -> Result<Self> {
        let len = tensor_len(n, k)?;
        Ok(KTensor { k, n, values: vec![value; len] })
    }

    pub fn ones(k: usize, n: usize) -> Result<Self> {
        KTensor::constant(k, n, Rational::one())
    }

    pub fn zeros(k: usize, n: usize) -> Result<Self> {
        KTensor::constant(k, n, Rational::zero())
    }

    pub fn from_fn(k: usize, n: usize, f: impl FnMut(usize) -> Rational) -> Result<Self> {
        let len = tensor_len(n, k)?;
        Ok(KTensor { k, n, values: (0..len).map(f).collect() })
    }

    /// Indicator of a set of tuple indices.
    pub fn indicator(k: usize, n: usize, members: &[usize]) -> Result<Self> {
        let mut t = KTensor::zeros(k, n)?;
        for &i in members {
            t.values[i] = Rational::one();
        }
        Ok(t)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn space(&self) -> TupleSpace {
        TupleSpace::new(self.n, self.k)
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, index: usize) -> &Rational {
        &self.values[index]
    }

    pub fn at(&self, coordinates: &[usize]) -> &Rational {
        &self.values[self.space().encode(coordinates)]
    }

    /// The value of a tensor over `[n]^0`.
    pub fn scalar(&self) -> Option<&Rational> {
        (self.k == 0).then(|| &self.values[0])
    }

    fn check_same_shape(&self, other: &KTensor) -> Result<()> {
        if self.k != other.k || self.n != other.n {
            return Err(Error::ShapeMismatch(format!(
                "tensors over [{}]^{} and [{}]^{}",
                self.n, self.k, other.n, other.k
            )));
        }
        Ok(())
    }

    pub fn pointwise_mul(&self, other: &KTensor) -> Result<KTensor> {
        self.check_same_shape(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(KTensor { k: self.k, n: self.n, values })
    }

    pub fn max_abs(&self) -> Rational {
        self.values.iter().map(Rational::abs).max().unwrap_or_else(Rational::zero)
    }

    /// `f ⊗ 1`: the tensor over `[n]^{k+1}` ignoring its last coordinate.
    pub fn extend_by_one(&self) -> Result<KTensor> {
        let n = self.n;
        KTensor::from_fn(self.k + 1, n, |i| self.values[i / n].clone())
    }
}

fn check_graphon(f: &KTensor, w: &StepGraphon) -> Result<()> {
    if f.n != w.vertex_count() {
        return Err(Error::ShapeMismatch(format!(
            "tensor over [{}] for a graphon on {} vertices",
            f.n,
            w.vertex_count()
        )));
    }
    Ok(())
}

/// `sum f(x) g(x) prod_i mu(x_i)`.
pub fn inner_product(f: &KTensor, g: &KTensor, w: &StepGraphon) -> Result<Rational> {
    f.check_same_shape(g)?;
    check_graphon(f, w)?;
    let space = f.space();
    Ok(f.values
        .iter()
        .zip(&g.values)
        .enumerate()
        .filter(|(_, (a, b))| !a.is_zero() && !b.is_zero())
        .map(|(i, (a, b))| a * b * space.product_weight(i, w.masses()))
        .sum())
}

/// Enumerates assignments of the non-input vertices of `g` for fixed input
/// values, handing each full assignment and its weight to `visit`.
struct Assignments<'a> {
    w: &'a StepGraphon,
    order: Vec<usize>,
    /// For `order[i]`: edges `(other vertex, multiplicity)` to input vertices
    /// or to vertices earlier in `order`.
    back_edges: Vec<Vec<(usize, u32)>>,
    input_edges: Vec<(usize, usize, u32)>,
    inputs: Vec<usize>,
}

impl<'a> Assignments<'a> {
    fn new(g: &BiLabeledGraph, w: &'a StepGraphon) -> Result<Self> {
        let n = g.vertex_count();
        let mut is_input = vec![false; n];
        for &v in g.inputs() {
            is_input[v] = true;
        }
        // Put output vertices last so that nothing depends on them early.
        let mut order: Vec<usize> = (0..n).filter(|&v| !is_input[v]).collect();
        order.sort_by_key(|v| g.outputs().contains(v));
        let cost = (w.vertex_count() as u128).checked_pow(order.len() as u32);
        if cost.is_none_or(|c| c > ASSIGNMENT_LIMIT) {
            return Err(Error::SizeLimitExceeded(format!(
                "{} free vertices over {} graphon vertices",
                order.len(),
                w.vertex_count()
            )));
        }
        let mut rank = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        let mut back_edges = vec![Vec::new(); order.len()];
        let mut input_edges = Vec::new();
        for &(u, v, m) in g.graph().edges() {
            match (is_input[u], is_input[v]) {
                (true, true) => input_edges.push((u, v, m)),
                (true, false) => back_edges[rank[v]].push((u, m)),
                (false, true) => back_edges[rank[u]].push((v, m)),
                (false, false) => {
                    if rank[u] > rank[v] {
                        back_edges[rank[u]].push((v, m));
                    } else {
                        back_edges[rank[v]].push((u, m));
                    }
                }
            }
        }
        Ok(Assignments { w, order, back_edges, input_edges, inputs: g.inputs().to_vec() })
    }

    fn for_each(&self, input_values: &[usize], values: &mut [usize], visit: &mut impl FnMut(&[usize], &Rational)) {
        for (&v, &x) in self.inputs.iter().zip(input_values) {
            values[v] = x;
        }
        let mut weight = Rational::one();
        for &(u, v, m) in &self.input_edges {
            weight *= self.w.weight(values[u], values[v]).pow(m);
            if weight.is_zero() {
                return;
            }
        }
        self.descend(0, weight, values, visit);
    }

    fn descend(&self, depth: usize, weight: Rational, values: &mut [usize], visit: &mut impl FnMut(&[usize], &Rational)) {
        let Some(&v) = self.order.get(depth) else {
            visit(values, &weight);
            return;
        };
        for x in 0..self.w.vertex_count() {
            values[v] = x;
            let mut next = &weight * self.w.mass(x);
            for &(u, m) in &self.back_edges[depth] {
                if next.is_zero() {
                    break;
                }
                next *= self.w.weight(x, values[u]).pow(m);
            }
            if !next.is_zero() {
                self.descend(depth + 1, next, values, visit);
            }
        }
    }
}

/// Applies the operator of `f_graph` to a tensor whose arity is the output arity.
pub fn apply_operator(f_graph: &BiLabeledGraph, w: &StepGraphon, f: &KTensor) -> Result<KTensor> {
    check_graphon(f, w)?;
    if f.k != f_graph.output_arity() {
        return Err(Error::ShapeMismatch(format!(
            "tensor of arity {} for {} outputs",
            f.k,
            f_graph.output_arity()
        )));
    }
    let n = w.vertex_count();
    let in_space = TupleSpace::new(n, f_graph.input_arity());
    let out_space = f.space();
    let assignments = Assignments::new(f_graph, w)?;
    let mut values = vec![0; f_graph.vertex_count()];
    let mut out_coords = vec![0; f.k];
    KTensor::from_fn(f_graph.input_arity(), n, |a| {
        let mut acc = Rational::zero();
        let input_values = in_space.decode(a).coordinates;
        assignments.for_each(&input_values, &mut values, &mut |vals, weight| {
            for (c, &b) in out_coords.iter_mut().zip(f_graph.outputs()) {
                *c = vals[b];
            }
            let fb = &f.values[out_space.encode(&out_coords)];
            if !fb.is_zero() {
                acc += weight * fb;
            }
        });
        acc
    })
}

/// The homomorphism function of a bi-labeled graph without outputs.
pub fn hom_function(f_graph: &BiLabeledGraph, w: &StepGraphon) -> Result<KTensor> {
    if f_graph.output_arity() != 0 {
        return Err(Error::HasOutputs(f_graph.output_arity()));
    }
    apply_operator(f_graph, w, &KTensor::ones(0, w.vertex_count())?)
}

/// `t(F, W)`: the sum over all vertex maps of the mass times edge weights.
pub fn hom_density_bruteforce(f: &MultiGraph, w: &StepGraphon) -> Result<Rational> {
    let unlabeled = BiLabeledGraph::new(f.clone(), Vec::new(), Vec::new())?;
    Ok(hom_function(&unlabeled, w)?.values[0].clone())
}

/// The homomorphism function of a term, built generator by generator.
pub fn eval_term_hom(t: &Term, w: &StepGraphon) -> Result<KTensor> {
    t.arity()?;
    eval_hom(t, w)
}

fn eval_hom(t: &Term, w: &StepGraphon) -> Result<KTensor> {
    match t {
        Term::One(k) => KTensor::ones(*k, w.vertex_count()),
        Term::Compose(g, inner) => apply_operator(&g.to_graph()?, w, &eval_hom(inner, w)?),
        Term::Schur(a, b) => eval_hom(a, w)?.pointwise_mul(&eval_hom(b, w)?),
    }
}

/// `<1, hom function of t>`.
pub fn term_density(t: &Term, w: &StepGraphon) -> Result<Rational> {
    let h = eval_term_hom(t, w)?;
    inner_product(&KTensor::ones(h.k, h.n)?, &h, w)
}

/// The matrix of the operator of `f_graph`: rows indexed by `[n]^inputs`,
/// columns by `[n]^outputs`, so that `apply_operator` is `M f`.
pub fn operator_matrix(f_graph: &BiLabeledGraph, w: &StepGraphon) -> Result<RationalMatrix> {
    let n = w.vertex_count();
    let rows = tensor_len(n, f_graph.input_arity())?;
    let cols = tensor_len(n, f_graph.output_arity())?;
    if rows.saturating_mul(cols) > TENSOR_LEN_LIMIT {
        return Err(Error::SizeLimitExceeded(format!("operator matrix of size {rows}x{cols}")));
    }
    let in_space = TupleSpace::new(n, f_graph.input_arity());
    let out_space = TupleSpace::new(n, f_graph.output_arity());
    let assignments = Assignments::new(f_graph, w)?;
    let mut m = RationalMatrix::zeros(rows, cols);
    let mut values = vec![0; f_graph.vertex_count()];
    let mut out_coords = vec![0; f_graph.output_arity()];
    for a in 0..rows {
        let input_values = in_space.decode(a).coordinates;
        assignments.for_each(&input_values, &mut values, &mut |vals, weight| {
            for (c, &b) in out_coords.iter_mut().zip(f_graph.outputs()) {
                *c = vals[b];
            }
            m.add_at(a, out_space.encode(&out_coords), weight);
        });
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilabeled::Generator;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn fig1_left() -> StepGraphon {
        StepGraphon::from_graph(&MultiGraph::complete(3)).unwrap()
    }

    fn fig1_right() -> StepGraphon {
        StepGraphon::constant(3, r("2/3")).unwrap()
    }

    fn c2() -> MultiGraph {
        MultiGraph::new(2, [(0, 1, 2)]).unwrap()
    }

    fn edge_term() -> Term {
        Term::compose(Generator::Adjacency(2, 0, 1), Term::One(2))
    }

    #[test]
    fn inner_product_examples() {
        let w = fig1_left();
        let one = KTensor::ones(1, 3).unwrap();
        assert_eq!(inner_product(&one, &one, &w), Ok(Rational::one()));
        let degree = KTensor::constant(1, 3, r("2/3")).unwrap();
        assert_eq!(inner_product(&one, &degree, &w), Ok(r("2/3")));
        let short = KTensor::ones(1, 2).unwrap();
        assert!(matches!(inner_product(&short, &short, &w), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn figure_one_densities() {
        let (left, right) = (fig1_left(), fig1_right());
        let k2 = MultiGraph::complete(2);
        let k3 = MultiGraph::complete(3);
        assert_eq!(hom_density_bruteforce(&k2, &left), Ok(r("2/3")));
        assert_eq!(hom_density_bruteforce(&k2, &right), Ok(r("2/3")));
        assert_eq!(hom_density_bruteforce(&c2(), &left), Ok(r("2/3")));
        assert_eq!(hom_density_bruteforce(&c2(), &right), Ok(r("4/9")));
        assert_eq!(hom_density_bruteforce(&k3, &left), Ok(r("2/9")));
        assert_eq!(hom_density_bruteforce(&k3, &right), Ok(r("8/27")));
    }

    #[test]
    fn hom_function_examples() {
        let w = fig1_left();
        let k2 = edge_term().eval().unwrap();
        let h = hom_function(&k2, &w).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(h.at(&[x, y]), w.weight(x, y));
            }
        }
        let one = Term::One(2).eval().unwrap();
        assert_eq!(hom_function(&one, &w).unwrap(), KTensor::ones(2, 3).unwrap());
        let pendant = BiLabeledGraph::new(MultiGraph::complete(2), vec![0], vec![]).unwrap();
        assert_eq!(hom_function(&pendant, &w).unwrap(), KTensor::constant(1, 3, r("2/3")).unwrap());
        let a = Generator::Adjacency(2, 0, 1).to_graph().unwrap();
        assert_eq!(hom_function(&a, &w), Err(Error::HasOutputs(2)));
    }

    #[test]
    fn apply_operator_examples() {
        let w = fig1_left();
        let a = Generator::Adjacency(2, 0, 1).to_graph().unwrap();
        let out = apply_operator(&a, &w, &KTensor::ones(2, 3).unwrap()).unwrap();
        assert_eq!(out.at(&[0, 1]), &Rational::one());
        assert_eq!(out.at(&[2, 2]), &Rational::zero());
        let nb = Generator::Neighbor(2, 1).to_graph().unwrap();
        let ones = KTensor::ones(2, 3).unwrap();
        assert_eq!(apply_operator(&nb, &w, &ones).unwrap(), ones);
        let edge = BiLabeledGraph::new(MultiGraph::complete(2), vec![0], vec![1]).unwrap();
        let delta = KTensor::indicator(1, 3, &[0]).unwrap();
        let out = apply_operator(&edge, &w, &delta).unwrap();
        let expected = KTensor::from_fn(1, 3, |x| w.weight(x, 0) * r("1/3")).unwrap();
        assert_eq!(out, expected);
        assert!(matches!(apply_operator(&edge, &w, &ones), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn term_examples() {
        let right = fig1_right();
        let edge = eval_term_hom(&edge_term(), &right).unwrap();
        assert_eq!(edge, KTensor::constant(2, 3, r("2/3")).unwrap());
        let c2_term = Term::schur(edge_term(), edge_term());
        assert_eq!(eval_term_hom(&c2_term, &right).unwrap(), KTensor::constant(2, 3, r("4/9")).unwrap());
        assert_eq!(term_density(&c2_term, &right), Ok(r("4/9")));
        assert_eq!(term_density(&c2_term, &fig1_left()), Ok(r("2/3")));
        assert_eq!(term_density(&Term::One(3), &right), Ok(Rational::one()));
        let point = StepGraphon::constant(1, r("1/2")).unwrap();
        let t = Term::compose(Generator::Neighbor(2, 0), c2_term);
        assert_eq!(eval_term_hom(&t, &point).unwrap().values(), &[r("1/4")]);
    }

    #[test]
    fn operator_matrix_examples() {
        let w = fig1_left();
        let a = operator_matrix(&Generator::Adjacency(2, 0, 1).to_graph().unwrap(), &w).unwrap();
        for row in 0..9 {
            for col in 0..9 {
                let expected = if row == col { w.weight(row / 3, row % 3).clone() } else { Rational::zero() };
                assert_eq!(a.get(row, col), &expected);
            }
        }
        let nb = operator_matrix(&Generator::Neighbor(2, 1).to_graph().unwrap(), &w).unwrap();
        assert!(nb.row_sums().iter().all(Rational::is_one));
        assert_eq!(nb.get(0, 2), &r("1/3"));
        assert_eq!(nb.get(0, 3), &Rational::zero());
        let swap = operator_matrix(&Generator::Permutation(2, vec![1, 0]).to_graph().unwrap(), &w).unwrap();
        assert_eq!(swap.get(1, 3), &Rational::one());
        assert_eq!(swap.get(1, 1), &Rational::zero());
        let f = KTensor::from_fn(2, 3, |i| Rational::from(i as i64)).unwrap();
        let nbg = Generator::Neighbor(2, 1).to_graph().unwrap();
        assert_eq!(nb.apply(f.values()).unwrap(), apply_operator(&nbg, &w, &f).unwrap().values());
    }
}
