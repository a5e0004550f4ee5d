//! Tree decompositions, exact treewidth for small graphs, nice tree
//! decompositions and their compilation into terms.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::bilabeled::{Generator, Term};
use crate::error::{Error, Result};
use crate::graph::MultiGraph;

/// Largest vertex count accepted by [`exact_treewidth`].
pub const TREEWIDTH_VERTEX_LIMIT: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub tree_edges: Vec<(usize, usize)>,
    pub root: Option<usize>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<usize>>, tree_edges: Vec<(usize, usize)>, root: Option<usize>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { bags, tree_edges, root }
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    /// Maximum bag size minus one; zero when every bag is empty.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    fn adjacency(&self) -> Result<Vec<Vec<usize>>> {
        let t = self.node_count();
        if t == 0 {
            return Err(Error::NotATree("no nodes".into()));
        }
        if self.tree_edges.len() != t - 1 {
            return Err(Error::NotATree(format!(
                "{} edges for {t} nodes",
                self.tree_edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); t];
        for &(a, b) in &self.tree_edges {
            if a >= t || b >= t || a == b {
                return Err(Error::NotATree(format!("bad tree edge ({a}, {b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        if reachable(&adj, 0, |_| true).iter().filter(|&&r| r).count() != t {
            return Err(Error::NotATree("tree is disconnected".into()));
        }
        if let Some(r) = self.root {
            if r >= t {
                return Err(Error::NotATree(format!("root {r} out of range")));
            }
        }
        Ok(adj)
    }
}

fn reachable(adj: &[Vec<usize>], start: usize, allowed: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(a) = queue.pop_front() {
        for &b in &adj[a] {
            if !seen[b] && allowed(b) {
                seen[b] = true;
                queue.push_back(b);
            }
        }
    }
    seen
}

/// Checks the three decomposition axioms and returns the width.
pub fn validate(g: &MultiGraph, td: &TreeDecomposition) -> Result<usize> {
    let adj = td.adjacency()?;
    let n = g.vertex_count();
    let mut holders = vec![Vec::new(); n];
    for (node, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                return Err(Error::VertexOutOfRange { index: v, bound: n });
            }
            holders[v].push(node);
        }
    }
    for &(u, v, _) in g.edges() {
        let covered = td
            .bags
            .iter()
            .any(|b| b.binary_search(&u).is_ok() && b.binary_search(&v).is_ok());
        if !covered {
            return Err(Error::EdgeNotCovered(u, v));
        }
    }
    for (v, nodes) in holders.iter().enumerate() {
        let Some(&first) = nodes.first() else {
            return Err(Error::VertexBagsDisconnected(v));
        };
        let seen = reachable(&adj, first, |node| td.bags[node].binary_search(&v).is_ok());
        if nodes.iter().any(|&node| !seen[node]) {
            return Err(Error::VertexBagsDisconnected(v));
        }
    }
    Ok(td.width())
}

/// Vertices outside `set` and other than `v` reachable from `v` through `set`.
fn q_set(adj: &[u32], set: u32, v: usize) -> u32 {
    let mut visited = 1u32 << v;
    let mut frontier = 1u32 << v;
    let mut out = 0u32;
    while frontier != 0 {
        let x = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = adj[x] & !visited;
        visited |= fresh;
        out |= fresh & !set;
        frontier |= fresh & set;
    }
    out
}

/// Exact treewidth by dynamic programming over the set of already
/// eliminated vertices, with a decomposition of that width.
pub fn exact_treewidth(g: &MultiGraph) -> Result<(usize, TreeDecomposition)> {
    let n = g.vertex_count();
    if n > TREEWIDTH_VERTEX_LIMIT {
        return Err(Error::SizeLimitExceeded(format!(
            "exact treewidth limited to {TREEWIDTH_VERTEX_LIMIT} vertices"
        )));
    }
    if n == 0 {
        return Ok((0, TreeDecomposition::new(vec![Vec::new()], Vec::new(), Some(0))));
    }
    let mut adj = vec![0u32; n];
    for &(u, v, _) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let full = (1u32 << n) - 1;
    // best[S]: smallest achievable max |Q| when S is eliminated first.
    let mut best = vec![i32::MAX; 1 << n];
    let mut choice = vec![usize::MAX; 1 << n];
    best[0] = -1;
    for set in 1..=full {
        let mut bits = set;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = set & !(1 << v);
            let cost = best[rest as usize].max(q_set(&adj, rest, v).count_ones() as i32);
            if cost < best[set as usize] {
                best[set as usize] = cost;
                choice[set as usize] = v;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut set = full;
    while set != 0 {
        let v = choice[set as usize];
        order.push(v);
        set &= !(1 << v);
    }
    order.reverse();
    let td = decomposition_from_ordering(n, &adj, &order);
    let width = best[full as usize].max(0) as usize;
    debug_assert_eq!(td.width(), width);
    Ok((width, td))
}

/// Standard bag construction: eliminating `order[i]` creates the bag of it and
/// its later neighbours in the fill-in graph.
fn decomposition_from_ordering(n: usize, adj: &[u32], order: &[usize]) -> TreeDecomposition {
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut eliminated = 0u32;
    let mut bags = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for (i, &v) in order.iter().enumerate() {
        let later = q_set(adj, eliminated, v);
        let mut bag = vec![v];
        let mut bits = later;
        while bits != 0 {
            bag.push(bits.trailing_zeros() as usize);
            bits &= bits - 1;
        }
        let parent = if later == 0 {
            // Disconnected pieces hang off the final bag.
            (i + 1 < n).then_some(n - 1)
        } else {
            bag[1..].iter().map(|&u| position[u]).min()
        };
        if let Some(p) = parent {
            edges.push((i, p));
        }
        bags.push(bag);
        eliminated |= 1 << v;
    }
    TreeDecomposition::new(bags, edges, Some(n - 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NiceNode {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

/// A rooted decomposition whose nodes are leaves, introduce, forget or
/// binary join nodes; leaf and root bags are empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    bags: Vec<Vec<usize>>,
    kinds: Vec<NiceNode>,
    children: Vec<Vec<usize>>,
    root: usize,
}

impl NiceTreeDecomposition {
    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn kinds(&self) -> &[NiceNode] {
        &self.kinds
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn count(&self, pred: impl Fn(&NiceNode) -> bool) -> usize {
        self.kinds.iter().filter(|k| pred(k)).count()
    }

    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let edges = (0..self.node_count())
            .flat_map(|a| self.children[a].iter().map(move |&b| (a, b)))
            .collect();
        TreeDecomposition::new(self.bags.clone(), edges, Some(self.root))
    }

    /// Checks the nice-form invariants and the decomposition axioms for `g`.
    pub fn validate(&self, g: &MultiGraph) -> Result<usize> {
        let fail = |msg: alloc::string::String| Err(Error::NotNice(msg));
        if !self.bags[self.root].is_empty() {
            return fail(format!("root bag {:?} is not empty", self.bags[self.root]));
        }
        for node in 0..self.node_count() {
            let bag = &self.bags[node];
            let kids = &self.children[node];
            let child_bag = |i: usize| &self.bags[kids[i]];
            let ok = match self.kinds[node] {
                NiceNode::Leaf => kids.is_empty() && bag.is_empty(),
                NiceNode::Introduce(v) => {
                    kids.len() == 1 && child_bag(0).binary_search(&v).is_err() && {
                        let mut grown = child_bag(0).clone();
                        grown.push(v);
                        grown.sort_unstable();
                        &grown == bag
                    }
                }
                NiceNode::Forget(v) => {
                    kids.len() == 1 && bag.binary_search(&v).is_err() && {
                        let mut grown = bag.clone();
                        grown.push(v);
                        grown.sort_unstable();
                        &grown == child_bag(0)
                    }
                }
                NiceNode::Join => kids.len() == 2 && child_bag(0) == bag && child_bag(1) == bag,
            };
            if !ok {
                return fail(format!("node {node} ({:?}) does not match its bags", self.kinds[node]));
            }
        }
        validate(g, &self.to_tree_decomposition())
    }

    fn push(&mut self, bag: Vec<usize>, kind: NiceNode, children: Vec<usize>) -> usize {
        self.bags.push(bag);
        self.kinds.push(kind);
        self.children.push(children);
        self.bags.len() - 1
    }

    /// Chains forget then introduce nodes on top of `node` until its bag is `target`.
    fn morph(&mut self, mut node: usize, target: &[usize]) -> usize {
        let start = self.bags[node].clone();
        for &v in start.iter().filter(|v| target.binary_search(v).is_err()) {
            let bag: Vec<usize> = self.bags[node].iter().copied().filter(|&u| u != v).collect();
            node = self.push(bag, NiceNode::Forget(v), vec![node]);
        }
        for &v in target.iter().filter(|v| start.binary_search(v).is_err()) {
            let mut bag = self.bags[node].clone();
            bag.push(v);
            bag.sort_unstable();
            node = self.push(bag, NiceNode::Introduce(v), vec![node]);
        }
        node
    }
}

/// Expands a decomposition into nice form without increasing its width.
pub fn make_nice(g: &MultiGraph, td: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    validate(g, td)?;
    let adj = td.adjacency()?;
    let root = td.root.unwrap_or(0);
    let mut nice = NiceTreeDecomposition {
        bags: Vec::new(),
        kinds: Vec::new(),
        children: Vec::new(),
        root: 0,
    };
    let top = build_nice(&mut nice, td, &adj, root, usize::MAX);
    nice.root = nice.morph(top, &[]);
    Ok(nice)
}

fn build_nice(
    nice: &mut NiceTreeDecomposition,
    td: &TreeDecomposition,
    adj: &[Vec<usize>],
    node: usize,
    parent: usize,
) -> usize {
    let bag = &td.bags[node];
    let mut branches = Vec::new();
    for &child in adj[node].iter().filter(|&&c| c != parent) {
        let sub = build_nice(nice, td, adj, child, node);
        branches.push(nice.morph(sub, bag));
    }
    if branches.is_empty() {
        let leaf = nice.push(Vec::new(), NiceNode::Leaf, Vec::new());
        return nice.morph(leaf, bag);
    }
    let mut acc = branches[0];
    for &other in &branches[1..] {
        acc = nice.push(bag.clone(), NiceNode::Join, vec![acc, other]);
    }
    acc
}

fn check_width(ntd: &NiceTreeDecomposition, k: usize) -> Result<()> {
    if k == 0 || ntd.width() >= k {
        return Err(Error::WidthExceedsK { width: ntd.width(), limit: k.saturating_sub(1) });
    }
    Ok(())
}

/// Compiles a nice decomposition of `g` into a term over neighbor, adjacency
/// and permutation generators whose evaluation is `g` plus isolated vertices.
pub fn nice_td_to_term(g: &MultiGraph, ntd: &NiceTreeDecomposition, k: usize) -> Result<Term> {
    ntd.validate(g)?;
    check_width(ntd, k)?;
    let (term, _) = compile(g, ntd, ntd.root, k);
    Ok(term)
}

fn compile(g: &MultiGraph, ntd: &NiceTreeDecomposition, node: usize, k: usize) -> (Term, Vec<Option<usize>>) {
    let kids = &ntd.children[node];
    match ntd.kinds[node] {
        NiceNode::Leaf => (Term::One(k), vec![None; k]),
        NiceNode::Introduce(v) => {
            let (term, mut slots) = compile(g, ntd, kids[0], k);
            let j = slots.iter().position(Option::is_none).expect("bag fits in k slots");
            slots[j] = Some(v);
            (Term::compose(Generator::Neighbor(k, j), term), slots)
        }
        NiceNode::Forget(v) => {
            let (mut term, mut slots) = compile(g, ntd, kids[0], k);
            let jv = slots.iter().position(|&s| s == Some(v)).expect("forgotten vertex is in a slot");
            for (ju, slot) in slots.iter().enumerate() {
                if let Some(u) = *slot {
                    for _ in 0..g.multiplicity(u, v) {
                        term = Term::compose(Generator::Adjacency(k, ju, jv), term);
                    }
                }
            }
            slots[jv] = None;
            (Term::compose(Generator::Neighbor(k, jv), term), slots)
        }
        NiceNode::Join => {
            let (left, slots) = compile(g, ntd, kids[0], k);
            let (right, right_slots) = compile(g, ntd, kids[1], k);
            // pi[i] is the left slot receiving the content of right slot i.
            let mut pi = vec![usize::MAX; k];
            let mut taken = vec![false; k];
            for (i, s) in right_slots.iter().enumerate() {
                if let Some(v) = s {
                    let target = slots.iter().position(|t| t == &Some(*v)).expect("join bags agree");
                    pi[i] = target;
                    taken[target] = true;
                }
            }
            let mut spare = (0..k).filter(|&t| !taken[t]);
            for p in pi.iter_mut().filter(|p| **p == usize::MAX) {
                *p = spare.next().expect("slot counts agree");
            }
            let right = if pi.iter().enumerate().all(|(i, &p)| i == p) {
                right
            } else {
                Term::compose(Generator::Permutation(k, pi), right)
            };
            (Term::schur(left, right), slots)
        }
    }
}

/// Compiles a nice decomposition of a simple graph into a term over
/// neighbor-with-edges generators only. Every vertex keeps one slot for its
/// whole lifetime, so joins need no re-alignment; edges are added when their
/// first endpoint is forgotten.
pub fn nice_td_to_simple_term(g: &MultiGraph, ntd: &NiceTreeDecomposition, k: usize) -> Result<Term> {
    g.require_simple()?;
    ntd.validate(g)?;
    check_width(ntd, k)?;
    let mut slot = vec![usize::MAX; g.vertex_count()];
    let mut stack = vec![ntd.root];
    while let Some(node) = stack.pop() {
        if let NiceNode::Forget(v) = ntd.kinds[node] {
            let child = ntd.children[node][0];
            let mut used = vec![false; k];
            for &u in ntd.bags[child].iter().filter(|&&u| u != v) {
                used[slot[u]] = true;
            }
            slot[v] = used.iter().position(|&x| !x).expect("bag fits in k slots");
        }
        stack.extend(&ntd.children[node]);
    }
    Ok(compile_simple(g, ntd, ntd.root, k, &slot))
}

fn compile_simple(g: &MultiGraph, ntd: &NiceTreeDecomposition, node: usize, k: usize, slot: &[usize]) -> Term {
    let kids = &ntd.children[node];
    match ntd.kinds[node] {
        NiceNode::Leaf => Term::One(k),
        NiceNode::Introduce(v) => {
            Term::compose(Generator::AdjNei(k, slot[v], Vec::new()), compile_simple(g, ntd, kids[0], k, slot))
        }
        NiceNode::Forget(v) => {
            let mut set: Vec<usize> = ntd.bags[kids[0]]
                .iter()
                .filter(|&&u| g.multiplicity(u, v) > 0)
                .map(|&u| slot[u])
                .collect();
            set.sort_unstable();
            Term::compose(Generator::AdjNei(k, slot[v], set), compile_simple(g, ntd, kids[0], k, slot))
        }
        NiceNode::Join => Term::schur(
            compile_simple(g, ntd, kids[0], k, slot),
            compile_simple(g, ntd, kids[1], k, slot),
        ),
    }
}

/// Convenience pipeline: exact treewidth witness, nice form, term.
pub fn graph_to_term(g: &MultiGraph, k: usize) -> Result<Term> {
    let (_, td) = exact_treewidth(g)?;
    nice_td_to_term(g, &make_nice(g, &td)?, k)
}

/// Like [`graph_to_term`] but producing a term over neighbor-with-edges generators.
pub fn graph_to_simple_term(g: &MultiGraph, k: usize) -> Result<Term> {
    g.require_simple()?;
    let (_, td) = exact_treewidth(g)?;
    nice_td_to_simple_term(g, &make_nice(g, &td)?, k)
}
