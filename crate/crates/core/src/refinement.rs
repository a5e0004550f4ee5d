//! Color refinement, oblivious k-WL and simple k-WL on step graphons.
//!
//! Colors are interned descriptors in a [`ColorTable`]. Structures that are
//! compared must be refined against the same table, which is what
//! [`refine_jointly`] does.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{StepGraphon, TupleSpace};
use crate::operators::KTensor;
use crate::rational::Rational;

/// Largest `n^k` accepted by the k-tuple refinements.
pub const TUPLE_LIMIT: usize = 1 << 16;
/// Largest `k` accepted by the k-tuple refinements.
pub const MAX_K: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModeFlag {
    /// Masses weigh substituted vertices; initial colors are the weights only.
    Graphon,
    /// Substituted vertices are counted; initial colors are atomic types.
    Graph,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    ColorRefinement(ModeFlag),
    Oblivious { k: usize, mode: ModeFlag },
    Simple { k: usize },
}

impl Algorithm {
    pub fn k(&self) -> usize {
        match *self {
            Algorithm::ColorRefinement(_) => 1,
            Algorithm::Oblivious { k, .. } | Algorithm::Simple { k } => k,
        }
    }

    fn mode(&self) -> ModeFlag {
        match *self {
            Algorithm::ColorRefinement(mode) | Algorithm::Oblivious { mode, .. } => mode,
            Algorithm::Simple { .. } => ModeFlag::Graphon,
        }
    }
}

/// A color before interning.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Descriptor {
    Unit,
    /// `W(x_i, x_j)` for `i < j` in lexicographic order.
    Weights(Vec<Rational>),
    /// Per pair `i < j`: 2 for equal vertices, 1 for adjacent, 0 otherwise.
    AtomicType(Vec<u8>),
    /// The previous color and, per part, the sorted nonzero totals per color.
    Refined { prev: u32, parts: Vec<Vec<(u32, Rational)>> },
}

#[derive(Clone, Debug, Default)]
pub struct ColorTable {
    ids: BTreeMap<Descriptor, u32>,
    descriptors: Vec<Descriptor>,
}

impl ColorTable {
    pub fn new() -> Self {
        ColorTable::default()
    }

    pub fn intern(&mut self, descriptor: Descriptor) -> u32 {
        if let Some(&id) = self.ids.get(&descriptor) {
            return id;
        }
        let id = self.descriptors.len() as u32;
        self.descriptors.push(descriptor.clone());
        self.ids.insert(descriptor, id);
        id
    }

    pub fn descriptor(&self, id: u32) -> &Descriptor {
        &self.descriptors[id as usize]
    }

    pub fn len(&self) -> usize {
        self.descriptors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.descriptors.is_empty()
    }
}

/// Per-round colors of every tuple in `[n]^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub k: usize,
    pub n: usize,
    pub rounds: Vec<Vec<u32>>,
    pub stabilized: bool,
}

impl Coloring {
    pub fn round_count(&self) -> usize {
        self.rounds.len()
    }

    pub fn last(&self) -> &[u32] {
        self.rounds.last().expect("at least one round")
    }

    pub fn class_count(&self, round: usize) -> usize {
        let mut ids = self.rounds[round].clone();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }

    /// Classes of a round, in order of their smallest member.
    pub fn partition_at(&self, round: usize) -> Vec<Vec<usize>> {
        partition_of(&self.rounds[round])
    }
}

fn partition_of(colors: &[u32]) -> Vec<Vec<usize>> {
    let mut slot: BTreeMap<u32, usize> = BTreeMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, c) in colors.iter().enumerate() {
        let s = *slot.entry(*c).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[s].push(i);
    }
    classes
}

/// Per round, the mass of every color class, sorted by color id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub rounds: Vec<Vec<(u32, Rational)>>,
}

impl Fingerprint {
    pub fn terminal(&self) -> &[(u32, Rational)] {
        self.rounds.last().map_or(&[], Vec::as_slice)
    }
}

#[derive(Clone, Debug)]
pub struct RefinementRun {
    pub algorithm: Algorithm,
    pub table: ColorTable,
    pub colorings: Vec<Coloring>,
    pub fingerprints: Vec<Fingerprint>,
}

impl RefinementRun {
    /// First round at which two fingerprints of this run differ, comparing
    /// missing rounds of the shorter one as empty.
    pub fn first_difference(&self, a: usize, b: usize) -> Option<usize> {
        let (fa, fb) = (&self.fingerprints[a].rounds, &self.fingerprints[b].rounds);
        (0..fa.len().max(fb.len())).find(|&r| fa.get(r) != fb.get(r))
    }
}

struct Refiner<'a> {
    w: &'a StepGraphon,
    space: TupleSpace,
    algorithm: Algorithm,
    /// Weight of a substituted vertex: its mass, or 1 when counting.
    vertex_weight: Vec<Rational>,
    /// `(j, V)` pairs for simple k-WL, `V` as a bit mask.
    simple_parts: Vec<(usize, u32)>,
}

impl<'a> Refiner<'a> {
    fn new(w: &'a StepGraphon, algorithm: Algorithm) -> Result<Self> {
        let k = algorithm.k();
        let n = w.vertex_count();
        if k == 0 || k > MAX_K {
            return Err(Error::SizeLimitExceeded(format!("k = {k} outside 1..={MAX_K}")));
        }
        match TupleSpace::checked_len(n, k) {
            Some(len) if len <= TUPLE_LIMIT => {}
            _ => return Err(Error::SizeLimitExceeded(format!("[{n}]^{k} has too many tuples"))),
        }
        let vertex_weight = match algorithm.mode() {
            ModeFlag::Graphon => w.masses().to_vec(),
            ModeFlag::Graph => {
                if !w.is_simple_graph() {
                    return Err(Error::ModeViolation);
                }
                vec![Rational::one(); n]
            }
        };
        let mut simple_parts = Vec::new();
        if let Algorithm::Simple { .. } = algorithm {
            for j in 0..k {
                for set in 0u32..(1 << k) {
                    if set & (1 << j) == 0 {
                        simple_parts.push((j, set));
                    }
                }
            }
        }
        Ok(Refiner { w, space: TupleSpace::new(n, k), algorithm, vertex_weight, simple_parts })
    }

    fn initial(&self, table: &mut ColorTable) -> Vec<u32> {
        let k = self.space.k;
        (0..self.space.len())
            .map(|index| {
                let x = self.space.decode(index).coordinates;
                let descriptor = match self.algorithm {
                    Algorithm::ColorRefinement(_) | Algorithm::Simple { .. } => Descriptor::Unit,
                    Algorithm::Oblivious { mode: ModeFlag::Graphon, .. } => Descriptor::Weights(
                        pairs(k).map(|(i, j)| self.w.weight(x[i], x[j]).clone()).collect(),
                    ),
                    Algorithm::Oblivious { mode: ModeFlag::Graph, .. } => Descriptor::AtomicType(
                        pairs(k)
                            .map(|(i, j)| {
                                if x[i] == x[j] {
                                    2
                                } else if self.w.weight(x[i], x[j]).is_one() {
                                    1
                                } else {
                                    0
                                }
                            })
                            .collect(),
                    ),
                };
                table.intern(descriptor)
            })
            .collect()
    }

    fn step(&self, colors: &[u32], table: &mut ColorTable) -> Vec<u32> {
        let n = self.space.n;
        let descriptors: Vec<Descriptor> = (0..self.space.len())
            .map(|index| {
                let parts = match self.algorithm {
                    Algorithm::ColorRefinement(_) => {
                        let mut acc = BTreeMap::new();
                        for y in 0..n {
                            add(&mut acc, colors[y], &self.vertex_weight[y] * self.w.weight(index, y));
                        }
                        vec![finish(acc)]
                    }
                    Algorithm::Oblivious { k, .. } => (0..k)
                        .map(|j| {
                            let mut acc = BTreeMap::new();
                            for y in 0..n {
                                let c = colors[self.space.substitute(index, j, y)];
                                add(&mut acc, c, self.vertex_weight[y].clone());
                            }
                            finish(acc)
                        })
                        .collect(),
                    Algorithm::Simple { k } => {
                        let x = self.space.decode(index).coordinates;
                        self.simple_parts
                            .iter()
                            .map(|&(j, set)| {
                                let mut acc = BTreeMap::new();
                                for y in 0..n {
                                    let mut value = self.vertex_weight[y].clone();
                                    for i in (0..k).filter(|i| set & (1 << i) != 0) {
                                        if value.is_zero() {
                                            break;
                                        }
                                        value *= self.w.weight(x[i], y);
                                    }
                                    add(&mut acc, colors[self.space.substitute(index, j, y)], value);
                                }
                                finish(acc)
                            })
                            .collect()
                    }
                };
                Descriptor::Refined { prev: colors[index], parts }
            })
            .collect();
        descriptors.into_iter().map(|d| table.intern(d)).collect()
    }

    fn fingerprint(&self, colors: &[u32]) -> Vec<(u32, Rational)> {
        let mut acc = BTreeMap::new();
        for (index, &c) in colors.iter().enumerate() {
            add(&mut acc, c, self.space.product_weight(index, self.w.masses()));
        }
        finish(acc)
    }
}

fn pairs(k: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..k).flat_map(move |i| (i + 1..k).map(move |j| (i, j)))
}

fn add(acc: &mut BTreeMap<u32, Rational>, color: u32, value: Rational) {
    if !value.is_zero() {
        *acc.entry(color).or_insert_with(Rational::zero) += value;
    }
}

fn finish(acc: BTreeMap<u32, Rational>) -> Vec<(u32, Rational)> {
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

fn distinct(colors: &[u32]) -> usize {
    let mut ids = colors.to_vec();
    ids.sort_unstable();
    ids.dedup();
    ids.len()
}

/// Refines every graphon against one shared table until all of them are
/// stable. Rounds are kept through the first round that repeats the
/// previous partition.
pub fn refine_jointly(graphons: &[&StepGraphon], algorithm: Algorithm) -> Result<RefinementRun> {
    let refiners = graphons
        .iter()
        .map(|w| Refiner::new(w, algorithm))
        .collect::<Result<Vec<_>>>()?;
    let mut table = ColorTable::new();
    let mut rounds: Vec<Vec<Vec<u32>>> = refiners.iter().map(|r| vec![r.initial(&mut table)]).collect();
    let mut stable = vec![false; refiners.len()];
    while stable.iter().any(|s| !s) {
        for (i, refiner) in refiners.iter().enumerate() {
            let last = rounds[i].last().expect("initial round");
            let next = refiner.step(last, &mut table);
            // Every refined color records its predecessor, so equal class
            // counts mean equal partitions.
            if distinct(&next) == distinct(last) {
                stable[i] = true;
            }
            rounds[i].push(next);
        }
    }
    let k = algorithm.k();
    let mut colorings = Vec::new();
    let mut fingerprints = Vec::new();
    for (refiner, rounds) in refiners.iter().zip(rounds) {
        fingerprints.push(Fingerprint { rounds: rounds.iter().map(|c| refiner.fingerprint(c)).collect() });
        colorings.push(Coloring { k, n: refiner.space.n, rounds, stabilized: true });
    }
    Ok(RefinementRun { algorithm, table, colorings, fingerprints })
}

fn refine_one(w: &StepGraphon, algorithm: Algorithm) -> Result<(Coloring, Fingerprint)> {
    let mut run = refine_jointly(&[w], algorithm)?;
    Ok((run.colorings.remove(0), run.fingerprints.remove(0)))
}

/// Color refinement with vertices weighted by their masses.
pub fn color_refinement(w: &StepGraphon) -> Result<(Coloring, Fingerprint)> {
    refine_one(w, Algorithm::ColorRefinement(ModeFlag::Graphon))
}

pub fn oblivious_kwl(w: &StepGraphon, k: usize, mode: ModeFlag) -> Result<(Coloring, Fingerprint)> {
    refine_one(w, Algorithm::Oblivious { k, mode })
}

pub fn simple_kwl(w: &StepGraphon, k: usize) -> Result<(Coloring, Fingerprint)> {
    refine_one(w, Algorithm::Simple { k })
}

/// Outcome of comparing two structures under one refinement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub equal: bool,
    pub first_difference: Option<usize>,
    pub rounds: usize,
}

pub fn compare_detailed(w1: &StepGraphon, w2: &StepGraphon, algorithm: Algorithm) -> Result<Comparison> {
    let run = refine_jointly(&[w1, w2], algorithm)?;
    let first_difference = run.first_difference(0, 1);
    Ok(Comparison {
        equal: first_difference.is_none(),
        first_difference,
        rounds: run.colorings[0].round_count().max(run.colorings[1].round_count()),
    })
}

pub fn compare_fingerprints(w1: &StepGraphon, w2: &StepGraphon, algorithm: Algorithm) -> Result<bool> {
    Ok(compare_detailed(w1, w2, algorithm)?.equal)
}

/// Color classes of the final round of a stabilized coloring.
pub fn stable_partition(coloring: &Coloring) -> Result<Vec<Vec<usize>>> {
    if !coloring.stabilized || coloring.rounds.is_empty() {
        return Err(Error::NotStabilized);
    }
    Ok(partition_of(coloring.last()))
}

/// Replaces `f` on every class by its `mu`-weighted average over the class.
pub fn condexp(partition: &[Vec<usize>], f: &KTensor, w: &StepGraphon) -> Result<KTensor> {
    if f.n() != w.vertex_count() {
        return Err(Error::ShapeMismatch(format!(
            "tensor over [{}] for a graphon on {} vertices",
            f.n(),
            w.vertex_count()
        )));
    }
    let space = f.space();
    let mut seen = vec![false; space.len()];
    for &i in partition.iter().flatten() {
        if i >= seen.len() || seen[i] {
            return Err(Error::ShapeMismatch(format!("index {i} is not covered exactly once")));
        }
        seen[i] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::ShapeMismatch("partition does not cover every tuple".into()));
    }
    let mut values = vec![Rational::zero(); space.len()];
    for class in partition {
        let mut mass = Rational::zero();
        let mut total = Rational::zero();
        for &i in class {
            let m = space.product_weight(i, w.masses());
            total += &m * f.get(i);
            mass += m;
        }
        let mean = total / mass;
        for &i in class {
            values[i] = mean.clone();
        }
    }
    KTensor::new(f.k(), f.n(), values)
}
