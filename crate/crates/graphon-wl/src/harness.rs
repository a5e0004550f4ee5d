//! Cross-checks between the equivalent characterizations of WL
//! indistinguishability, run on small graph and graphon pairs.
//!
//! Each pair yields an [`EquivalenceReport`] holding the verdict of every
//! characterization and a classification. Contradictory definite verdicts
//! between characterizations that are known to be equivalent give
//! [`Classification::PaperViolation`]; a reverse direction that would need an
//! unbounded pattern search and finds nothing gives
//! [`Classification::InconclusiveBudget`].

use std::fmt;

use graphon_wl_core::enumeration::{enumerate_patterns, EnumerationSpec};
use graphon_wl_core::lp::{
    build_doubly_stochastic_commutant, build_lk, build_markov_commutant, feasible, lk_level_matrix,
    markov_solution_matrix, OperatorFamily,
};
use graphon_wl_core::matrix::RationalMatrix;
use graphon_wl_core::operators::hom_density_bruteforce;
use graphon_wl_core::refinement::{
    compare_detailed, refine_jointly, Algorithm, Comparison, ModeFlag, RefinementRun,
};
use graphon_wl_core::{MultiGraph, Rational, Result, StepGraphon};

use crate::pairs::{fig1_pair, GraphPair, GraphonPair};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Colref,
    Kwl,
    Graphon,
    Simple,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Colref => "colref",
            Suite::Kwl => "kwl",
            Suite::Graphon => "graphon",
            Suite::Simple => "simple",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Consistent,
    PaperViolation(String),
    InconclusiveBudget(String),
}

impl Classification {
    pub fn is_violation(&self) -> bool {
        matches!(self, Classification::PaperViolation(_))
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Consistent => f.write_str("Consistent"),
            Classification::PaperViolation(d) => write!(f, "PaperViolation({d})"),
            Classification::InconclusiveBudget(d) => write!(f, "InconclusiveBudget({d})"),
        }
    }
}

/// Verdicts of the individual characterizations; `None` when not checked.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verdicts {
    pub fingerprints_equal: Option<bool>,
    /// First round whose fingerprints differ.
    pub first_difference: Option<usize>,
    pub lp_feasible: Option<bool>,
    /// The Markov system without the permutation constraints.
    pub lp_feasible_without_permutations: Option<bool>,
    pub densities_equal: Option<bool>,
    pub patterns_checked: usize,
    pub distinguisher: Option<MultiGraph>,
    /// Whether the stable partitions have the same class sizes and
    /// class-to-class degrees.
    pub partition_parameters_equal: Option<bool>,
}

/// A feasible solution read as an operator from functions on the right
/// object's `[m]^k` to functions on the left object's `[n]^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovWitness {
    pub source: String,
    pub k: usize,
    pub left_masses: Vec<Rational>,
    pub right_masses: Vec<Rational>,
    pub matrix: RationalMatrix,
    pub permutation_invariant: bool,
    pub commutes_with_neighbors: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub pair_id: String,
    pub suite: Suite,
    pub k: usize,
    pub verdicts: Verdicts,
    pub classification: Classification,
    /// Divergences worth a look that are not contradictions.
    pub findings: Vec<String>,
    pub witnesses: Vec<MarkovWitness>,
}

fn word(b: Option<bool>, yes: &str, no: &str) -> String {
    match b {
        Some(true) => yes.into(),
        Some(false) => no.into(),
        None => "-".into(),
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = &self.verdicts;
        let mut fp = word(v.fingerprints_equal, "EQUAL", "DIFFER");
        if let Some(r) = v.first_difference {
            fp.push_str(&format!("@{r}"));
        }
        write!(
            f,
            "{} {} k={} fingerprints={} lp={} densities={}/{}",
            self.suite,
            self.pair_id,
            self.k,
            fp,
            word(v.lp_feasible, "FEASIBLE", "INFEASIBLE"),
            word(v.densities_equal, "EQUAL", "DIFFER"),
            v.patterns_checked,
        )?;
        if let Some(d) = v.lp_feasible_without_permutations {
            write!(f, " lp-noperm={}", if d { "FEASIBLE" } else { "INFEASIBLE" })?;
        }
        if let Some(g) = &v.distinguisher {
            write!(f, " distinguisher={:?}", g.edges())?;
        }
        write!(f, " -> {}", self.classification)?;
        for finding in &self.findings {
            write!(f, "\n  finding: {finding}")?;
        }
        Ok(())
    }
}

impl EquivalenceReport {
    fn new(pair_id: &str, suite: Suite, k: usize) -> Self {
        EquivalenceReport {
            pair_id: pair_id.to_string(),
            suite,
            k,
            verdicts: Verdicts::default(),
            classification: Classification::Consistent,
            findings: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    fn violation(&mut self, detail: String) {
        match &mut self.classification {
            Classification::PaperViolation(d) => {
                d.push_str("; ");
                d.push_str(&detail);
            }
            c => *c = Classification::PaperViolation(detail),
        }
    }

    fn inconclusive(&mut self, detail: String) {
        if self.classification == Classification::Consistent {
            self.classification = Classification::InconclusiveBudget(detail);
        }
    }
}

/// True when some report contains a contradiction.
pub fn any_violation(reports: &[EquivalenceReport]) -> bool {
    reports.iter().any(|r| r.classification.is_violation())
}

fn graphon(g: &MultiGraph) -> Result<StepGraphon> {
    StepGraphon::from_graph(g)
}

/// `hom(F, G)`, recovered from the density of `F` in the graphon of `G`.
fn hom_count(f: &MultiGraph, g: &MultiGraph, w: &StepGraphon) -> Result<Rational> {
    let scale = Rational::from(g.vertex_count()).pow(f.vertex_count() as u32);
    Ok(hom_density_bruteforce(f, w)? * scale)
}

/// The first pattern on which `value` differs between the two sides.
fn first_disagreement(
    patterns: &[MultiGraph],
    mut value: impl FnMut(&MultiGraph) -> Result<(Rational, Rational)>,
) -> Result<Option<MultiGraph>> {
    for f in patterns {
        let (a, b) = value(f)?;
        if a != b {
            return Ok(Some(f.clone()));
        }
    }
    Ok(None)
}

/// Fingerprint comparison of two graphs in graph mode. Fingerprints carry
/// normalized masses, so graphs of different orders are told apart by their
/// vertex counts, as a counting refinement would.
fn compare_graphs(run: &RefinementRun, g: &MultiGraph, h: &MultiGraph) -> (bool, Option<usize>) {
    if g.vertex_count() != h.vertex_count() {
        return (false, Some(0));
    }
    let d = run.first_difference(0, 1);
    (d.is_none(), d)
}

/// Per final color: class size and, for each member, the number of
/// neighbors in every final color. Equitable partitions give one degree
/// vector per class.
type ClassParameters = std::collections::BTreeMap<u32, (usize, Vec<Vec<(u32, u32)>>)>;

fn partition_parameters(run: &RefinementRun, index: usize, g: &MultiGraph) -> ClassParameters {
    let colors = run.colorings[index].last();
    let neighbors = g.neighbors();
    let mut out = ClassParameters::new();
    for v in 0..g.vertex_count() {
        let mut degrees = std::collections::BTreeMap::new();
        for &u in &neighbors[v] {
            *degrees.entry(colors[u]).or_insert(0u32) += g.multiplicity(u, v);
        }
        let entry = out.entry(colors[v]).or_default();
        entry.0 += 1;
        let degrees: Vec<(u32, u32)> = degrees.into_iter().collect();
        if !entry.1.contains(&degrees) {
            entry.1.push(degrees);
        }
    }
    out
}

fn tree_patterns() -> Result<Vec<MultiGraph>> {
    enumerate_patterns(&EnumerationSpec {
        max_vertices: 5,
        max_edge_multiplicity: 1,
        treewidth_bound: 1,
        simple_only: true,
        connected_only: true,
    })
}

/// Color refinement against tree homomorphism counts and fractional
/// isomorphism, on simple graphs.
pub fn run_colref_suite(pairs: &[GraphPair]) -> Result<Vec<EquivalenceReport>> {
    let trees = tree_patterns()?;
    pairs.iter().map(|p| colref_report(p, &trees)).collect()
}

fn colref_report(p: &GraphPair, trees: &[MultiGraph]) -> Result<EquivalenceReport> {
    let mut report = EquivalenceReport::new(&p.id, Suite::Colref, 1);
    let (wg, wh) = (graphon(&p.left)?, graphon(&p.right)?);
    let run = refine_jointly(&[&wg, &wh], Algorithm::ColorRefinement(ModeFlag::Graph))?;
    let (equal, first) = compare_graphs(&run, &p.left, &p.right);
    report.verdicts.fingerprints_equal = Some(equal);
    report.verdicts.first_difference = first;

    let (pg, ph) = (partition_parameters(&run, 0, &p.left), partition_parameters(&run, 1, &p.right));
    for (side, params) in [("left", &pg), ("right", &ph)] {
        if params.values().any(|(_, degrees)| degrees.len() != 1) {
            report.violation(format!("stable partition of the {side} graph is not equitable"));
        }
    }
    let parameters_equal = p.left.vertex_count() == p.right.vertex_count() && pg == ph;
    report.verdicts.partition_parameters_equal = Some(parameters_equal);

    let system = build_doubly_stochastic_commutant(&p.left, &p.right)?;
    let solution = feasible(&system);
    report.verdicts.lp_feasible = Some(solution.is_feasible());
    if let Some(x) = solution.witness() {
        let n = p.left.vertex_count();
        let m = p.right.vertex_count();
        let rows = (0..n).map(|v| x[v * m..(v + 1) * m].to_vec()).collect();
        report.witnesses.push(MarkovWitness {
            source: format!("colref {}", p.id),
            k: 1,
            left_masses: wg.masses().to_vec(),
            right_masses: wh.masses().to_vec(),
            matrix: RationalMatrix::from_rows(rows)?,
            permutation_invariant: true,
            commutes_with_neighbors: true,
        });
    }

    let distinguisher = first_disagreement(trees, |f| {
        Ok((hom_count(f, &p.left, &wg)?, hom_count(f, &p.right, &wh)?))
    })?;
    report.verdicts.patterns_checked = trees.len();
    report.verdicts.densities_equal = Some(distinguisher.is_none());
    report.verdicts.distinguisher = distinguisher.clone();

    if equal != solution.is_feasible() {
        report.violation(format!(
            "fingerprints {} but AX = XB is {}",
            if equal { "equal" } else { "differ" },
            if solution.is_feasible() { "feasible" } else { "infeasible" }
        ));
    }
    if equal != parameters_equal {
        report.violation("fingerprint verdict disagrees with the stable partition parameters".into());
    }
    if equal && distinguisher.is_some() {
        report.violation("equal fingerprints but a tree count differs".into());
    }
    if !equal && distinguisher.is_none() {
        report.inconclusive(format!("no distinguishing tree among {} on at most 5 vertices", trees.len()));
    }
    Ok(report)
}

/// Oblivious `(k+1)`-WL in graph mode against `L^{k+1}` and homomorphism
/// counts from graphs of treewidth at most `k`.
pub fn run_kwl_suite(pairs: &[GraphPair], k: usize) -> Result<Vec<EquivalenceReport>> {
    let patterns = enumerate_patterns(&EnumerationSpec {
        max_vertices: 5,
        max_edge_multiplicity: 1,
        treewidth_bound: k,
        simple_only: true,
        connected_only: true,
    })?;
    pairs.iter().map(|p| kwl_report(p, k, &patterns)).collect()
}

fn kwl_report(p: &GraphPair, k: usize, patterns: &[MultiGraph]) -> Result<EquivalenceReport> {
    let mut report = EquivalenceReport::new(&p.id, Suite::Kwl, k);
    let (wg, wh) = (graphon(&p.left)?, graphon(&p.right)?);
    let run = refine_jointly(&[&wg, &wh], Algorithm::Oblivious { k: k + 1, mode: ModeFlag::Graph })?;
    let (equal, first) = compare_graphs(&run, &p.left, &p.right);
    report.verdicts.fingerprints_equal = Some(equal);
    report.verdicts.first_difference = first;

    let lk = build_lk(&p.left, &p.right, k + 1)?;
    let solution = lk.solve();
    report.verdicts.lp_feasible = Some(solution.is_feasible());
    if let Some(x) = solution.witness() {
        report.witnesses.push(MarkovWitness {
            source: format!("L^{} {}", k + 1, p.id),
            k: k + 1,
            left_masses: wg.masses().to_vec(),
            right_masses: wh.masses().to_vec(),
            matrix: lk_level_matrix(&lk, x, k + 1)?,
            permutation_invariant: true,
            commutes_with_neighbors: true,
        });
    }

    let distinguisher = first_disagreement(patterns, |f| {
        Ok((hom_count(f, &p.left, &wg)?, hom_count(f, &p.right, &wh)?))
    })?;
    report.verdicts.patterns_checked = patterns.len();
    report.verdicts.densities_equal = Some(distinguisher.is_none());
    report.verdicts.distinguisher = distinguisher.clone();

    if equal != solution.is_feasible() {
        report.violation(format!(
            "oblivious {}-WL fingerprints {} but L^{} is {}",
            k + 1,
            if equal { "equal" } else { "differ" },
            k + 1,
            if solution.is_feasible() { "feasible" } else { "infeasible" }
        ));
    }
    if equal && distinguisher.is_some() {
        report.violation(format!("equal fingerprints but a treewidth-{k} count differs"));
    }
    if !equal && distinguisher.is_none() {
        report.inconclusive(format!("no distinguisher among {} patterns", patterns.len()));
    }
    Ok(report)
}

/// Densities on the two sides, or the first pattern where they differ.
fn density_distinguisher(
    patterns: &[MultiGraph],
    u: &StepGraphon,
    w: &StepGraphon,
) -> Result<Option<MultiGraph>> {
    first_disagreement(patterns, |f| Ok((hom_density_bruteforce(f, u)?, hom_density_bruteforce(f, w)?)))
}

fn graphon_patterns(k: usize) -> Result<Vec<MultiGraph>> {
    enumerate_patterns(&EnumerationSpec {
        max_vertices: 4,
        max_edge_multiplicity: 3,
        treewidth_bound: k.saturating_sub(1),
        simple_only: false,
        connected_only: true,
    })
}

/// Oblivious `k`-WL on step graphons against multigraph densities of
/// treewidth below `k` and Markov operators commuting with the `k`-slot
/// neighbor and adjacency operators.
pub fn run_graphon_suite(pairs: &[GraphonPair], k: usize) -> Result<Vec<EquivalenceReport>> {
    let patterns = graphon_patterns(k)?;
    pairs.iter().map(|p| graphon_report(p, k, &patterns)).collect()
}

fn graphon_report(p: &GraphonPair, k: usize, patterns: &[MultiGraph]) -> Result<EquivalenceReport> {
    let mut report = EquivalenceReport::new(&p.id, Suite::Graphon, k);
    let cmp = compare_detailed(&p.left, &p.right, Algorithm::Oblivious { k, mode: ModeFlag::Graphon })?;
    report.verdicts.fingerprints_equal = Some(cmp.equal);
    report.verdicts.first_difference = cmp.first_difference;

    let distinguisher = density_distinguisher(patterns, &p.left, &p.right)?;
    report.verdicts.patterns_checked = patterns.len();
    report.verdicts.densities_equal = Some(distinguisher.is_none());
    report.verdicts.distinguisher = distinguisher.clone();
    if cmp.equal && distinguisher.is_some() {
        report.violation("equal fingerprints but a multigraph density differs".into());
    }
    if !cmp.equal && distinguisher.is_none() {
        report.inconclusive(format!("no distinguisher among {} multigraphs", patterns.len()));
    }

    for permutation_invariant in [true, false] {
        let ms = build_markov_commutant(&p.left, &p.right, k, OperatorFamily::Oblivious, permutation_invariant)?;
        let solution = feasible(&ms.system);
        let feasible_now = solution.is_feasible();
        if permutation_invariant {
            report.verdicts.lp_feasible = Some(feasible_now);
        } else {
            report.verdicts.lp_feasible_without_permutations = Some(feasible_now);
        }
        if let Some(x) = solution.witness() {
            report.witnesses.push(MarkovWitness {
                source: format!("markov k={k} {}", p.id),
                k,
                left_masses: p.left.masses().to_vec(),
                right_masses: p.right.masses().to_vec(),
                matrix: markov_solution_matrix(&ms, x),
                permutation_invariant,
                commutes_with_neighbors: true,
            });
        }
        if feasible_now != cmp.equal {
            report.findings.push(format!(
                "Markov system{} is {} while fingerprints {}; left {:?} right {:?}",
                if permutation_invariant { "" } else { " without permutations" },
                if feasible_now { "feasible" } else { "infeasible" },
                if cmp.equal { "agree" } else { "differ" },
                p.left,
                p.right,
            ));
        }
    }
    Ok(report)
}

/// Simple `k`-WL against densities of simple graphs of treewidth below `k`.
pub fn run_simple_suite(pairs: &[GraphonPair], k: usize) -> Result<Vec<EquivalenceReport>> {
    let patterns = enumerate_patterns(&EnumerationSpec {
        max_vertices: 5,
        max_edge_multiplicity: 1,
        treewidth_bound: k.saturating_sub(1),
        simple_only: true,
        connected_only: true,
    })?;
    pairs
        .iter()
        .map(|p| {
            let mut report = EquivalenceReport::new(&p.id, Suite::Simple, k);
            let cmp = compare_detailed(&p.left, &p.right, Algorithm::Simple { k })?;
            report.verdicts.fingerprints_equal = Some(cmp.equal);
            report.verdicts.first_difference = cmp.first_difference;
            let distinguisher = density_distinguisher(&patterns, &p.left, &p.right)?;
            report.verdicts.patterns_checked = patterns.len();
            report.verdicts.densities_equal = Some(distinguisher.is_none());
            report.verdicts.distinguisher = distinguisher.clone();
            if cmp.equal && distinguisher.is_some() {
                report.violation("equal fingerprints but a simple-graph density differs".into());
            }
            if !cmp.equal && distinguisher.is_none() {
                report.inconclusive(format!("no distinguisher among {} simple graphs", patterns.len()));
            }
            Ok(report)
        })
        .collect()
}

/// Everything reported about the standard pair of fractionally isomorphic
/// weighted graphs.
#[derive(Clone, Debug)]
pub struct Fig1Report {
    pub pair: GraphonPair,
    pub colref: Comparison,
    pub oblivious2: Comparison,
    pub simple2: Comparison,
    pub simple3: Comparison,
    /// `t(C2)` on the left and right graphon.
    pub c2_densities: (Rational, Rational),
    pub k2_densities: (Rational, Rational),
    pub k3_densities: (Rational, Rational),
    /// Markov operator commuting with the kernel operator and averaging.
    pub kernel_markov: Option<MarkovWitness>,
}

impl fmt::Display for Fig1Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = |c: &Comparison| match c.first_difference {
            None => "EQUAL".to_string(),
            Some(r) => format!("DIFFER at round {r}"),
        };
        writeln!(f, "left:  {:?}", self.pair.left)?;
        writeln!(f, "right: {:?}", self.pair.right)?;
        writeln!(f, "color refinement: {}", verdict(&self.colref))?;
        writeln!(
            f,
            "kernel Markov system (k=1): {}",
            if self.kernel_markov.is_some() { "FEASIBLE" } else { "INFEASIBLE" }
        )?;
        writeln!(f, "oblivious 2-WL: {}", verdict(&self.oblivious2))?;
        writeln!(f, "simple 2-WL: {}", verdict(&self.simple2))?;
        writeln!(f, "simple 3-WL: {}", verdict(&self.simple3))?;
        writeln!(f, "t(K2): {} vs {}", self.k2_densities.0, self.k2_densities.1)?;
        writeln!(f, "t(C2): {} vs {}", self.c2_densities.0, self.c2_densities.1)?;
        write!(f, "t(K3): {} vs {}", self.k3_densities.0, self.k3_densities.1)
    }
}

pub fn counterexample_fig1() -> Result<Fig1Report> {
    let pair = fig1_pair();
    let (u, w) = (&pair.left, &pair.right);
    let densities = |f: &MultiGraph| -> Result<(Rational, Rational)> {
        Ok((hom_density_bruteforce(f, u)?, hom_density_bruteforce(f, w)?))
    };
    let ms = build_markov_commutant(u, w, 1, OperatorFamily::Kernel, false)?;
    let kernel_markov = feasible(&ms.system).witness().map(|x| MarkovWitness {
        source: "fig1 kernel".into(),
        k: 1,
        left_masses: u.masses().to_vec(),
        right_masses: w.masses().to_vec(),
        matrix: markov_solution_matrix(&ms, x),
        permutation_invariant: true,
        commutes_with_neighbors: true,
    });
    Ok(Fig1Report {
        colref: compare_detailed(u, w, Algorithm::ColorRefinement(ModeFlag::Graphon))?,
        oblivious2: compare_detailed(u, w, Algorithm::Oblivious { k: 2, mode: ModeFlag::Graphon })?,
        simple2: compare_detailed(u, w, Algorithm::Simple { k: 2 })?,
        simple3: compare_detailed(u, w, Algorithm::Simple { k: 3 })?,
        c2_densities: densities(&MultiGraph::new(2, [(0, 1, 2)])?)?,
        k2_densities: densities(&MultiGraph::complete(2))?,
        k3_densities: densities(&MultiGraph::complete(3))?,
        kernel_markov,
        pair,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::curated_graph_pairs;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d).unwrap()
    }

    #[test]
    fn fig1_verdicts() {
        let r = counterexample_fig1().unwrap();
        assert!(r.colref.equal);
        assert_eq!(r.oblivious2.first_difference, Some(0));
        assert!(r.simple2.equal);
        assert!(!r.simple3.equal);
        assert_eq!(r.c2_densities, (q(2, 3), q(4, 9)));
        assert_eq!(r.k2_densities, (q(2, 3), q(2, 3)));
        assert_eq!(r.k3_densities, (q(2, 9), q(8, 27)));
        assert!(r.kernel_markov.is_some());
    }

    #[test]
    fn curated_colref_and_kwl() {
        let pairs = curated_graph_pairs();
        let colref = run_colref_suite(&pairs).unwrap();
        let expect = [true, true, false];
        for (r, e) in colref.iter().zip(expect) {
            assert_eq!(r.verdicts.fingerprints_equal, Some(e), "{r}");
            assert_eq!(r.verdicts.lp_feasible, Some(e), "{r}");
            assert_eq!(r.verdicts.densities_equal, Some(e), "{r}");
            assert_eq!(r.classification, Classification::Consistent, "{r}");
        }
        let k1 = run_kwl_suite(&pairs[..1], 1).unwrap();
        assert_eq!(k1[0].verdicts.lp_feasible, Some(true));
        assert_eq!(k1[0].verdicts.fingerprints_equal, Some(true));
        let k2 = run_kwl_suite(&pairs[..1], 2).unwrap();
        assert_eq!(k2[0].verdicts.lp_feasible, Some(false));
        assert_eq!(k2[0].verdicts.fingerprints_equal, Some(false));
        assert!(k2[0].verdicts.distinguisher.is_some());
        assert_eq!(k2[0].classification, Classification::Consistent);
    }

    #[test]
    fn fig1_graphon_and_simple_suites() {
        let pair = fig1_pair();
        let k2 = run_graphon_suite(std::slice::from_ref(&pair), 2).unwrap();
        let v = &k2[0].verdicts;
        assert_eq!(v.fingerprints_equal, Some(false));
        assert_eq!(v.lp_feasible, Some(false));
        assert_eq!(v.distinguisher, Some(MultiGraph::new(2, [(0, 1, 2)]).unwrap()));
        assert_eq!(k2[0].classification, Classification::Consistent);
        assert!(k2[0].findings.is_empty(), "{}", k2[0]);

        let k1 = run_graphon_suite(std::slice::from_ref(&pair), 1).unwrap();
        assert_eq!(k1[0].verdicts.fingerprints_equal, Some(true));
        assert_eq!(k1[0].verdicts.lp_feasible, Some(true));
        assert_eq!(k1[0].classification, Classification::Consistent);

        let s2 = run_simple_suite(std::slice::from_ref(&pair), 2).unwrap();
        assert_eq!(s2[0].verdicts.fingerprints_equal, Some(true));
        assert_eq!(s2[0].verdicts.densities_equal, Some(true));
        let s3 = run_simple_suite(std::slice::from_ref(&pair), 3).unwrap();
        assert_eq!(s3[0].verdicts.fingerprints_equal, Some(false));
        assert_eq!(s3[0].verdicts.distinguisher, Some(MultiGraph::complete(3)));
    }

    #[test]
    fn identical_pairs_are_consistent() {
        let w = fig1_pair().right;
        let p = GraphonPair { id: "same".into(), left: w.clone(), right: w };
        for r in run_graphon_suite(std::slice::from_ref(&p), 2).unwrap() {
            assert_eq!(r.classification, Classification::Consistent);
            assert_eq!(r.verdicts.lp_feasible, Some(true));
        }
    }

    #[test]
    fn different_orders_are_not_equivalent() {
        let g = MultiGraph::cycle(3);
        let p = GraphPair { id: "C3-2C3".into(), left: g.clone(), right: g.disjoint_union(&g) };
        let r = &run_kwl_suite(std::slice::from_ref(&p), 1).unwrap()[0];
        assert_eq!(r.verdicts.fingerprints_equal, Some(false));
        assert_eq!(r.verdicts.lp_feasible, Some(false));
        assert_eq!(r.classification, Classification::Consistent, "{r}");
    }
}
