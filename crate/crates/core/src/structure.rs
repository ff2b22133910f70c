//! The relationship graph and containment poset of a degree-two code.
//!
//! Both structures carry an `alive` vertex set so that deleting a neuron is a
//! cheap in-place operation that keeps the original labels. The graph of a
//! deletion is the induced subgraph and the poset of a deletion is the
//! induced suborder, so deleting from the structures is the same as
//! rebuilding them from the deleted code.

use crate::error::{Error, Result};
use crate::ideal::CanonicalForm;
use crate::set::NeuronSet;

/// `ij` is an edge iff no canonical-form element has variable set `{i, j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelGraph {
    pub n: usize,
    alive: NeuronSet,
    adj: Vec<NeuronSet>,
}

/// `i < j` iff `x_i (1 − x_j)` is in the canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContainmentPoset {
    pub n: usize,
    alive: NeuronSet,
    /// `below[i]` is the order ideal `I(i) = { j : j < i }`.
    below: Vec<NeuronSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeoResult {
    pub chordal: bool,
    /// A perfect elimination order when chordal: each vertex's later
    /// neighbors form a clique.
    pub order: Option<Vec<usize>>,
}

fn require_degree_two(cf: &CanonicalForm) -> Result<()> {
    match cf.degree_witness() {
        Some(f) => Err(Error::NotDegreeTwo { witness: f.to_string(), degree: f.degree() }),
        None => Ok(()),
    }
}

pub fn build_graph(cf: &CanonicalForm) -> Result<RelGraph> {
    require_degree_two(cf)?;
    let n = cf.n;
    let all = NeuronSet::full(n);
    let mut adj: Vec<NeuronSet> = (0..n).map(|i| all.without(i)).collect();
    for f in cf.iter() {
        let mut it = f.support().iter();
        let (i, j) = (it.next().unwrap(), it.next().unwrap());
        adj[i] = adj[i].without(j);
        adj[j] = adj[j].without(i);
    }
    Ok(RelGraph { n, alive: all, adj })
}

pub fn build_poset(cf: &CanonicalForm) -> Result<ContainmentPoset> {
    require_degree_two(cf)?;
    let n = cf.n;
    let mut below = vec![NeuronSet::EMPTY; n];
    for f in cf.iter().filter(|f| f.pos.len() == 1 && f.neg.len() == 1) {
        let (i, j) = (f.pos.min().unwrap(), f.neg.min().unwrap());
        below[j] = below[j].with(i);
    }
    let p = ContainmentPoset { n, alive: NeuronSet::full(n), below };
    p.check_axioms()?;
    Ok(p)
}

impl RelGraph {
    /// Graph on `[n]` from an explicit edge list (0-based).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![NeuronSet::EMPTY; n];
        for &(i, j) in edges {
            if i != j {
                adj[i] = adj[i].with(j);
                adj[j] = adj[j].with(i);
            }
        }
        RelGraph { n, alive: NeuronSet::full(n), adj }
    }

    pub fn vertices(&self) -> NeuronSet {
        self.alive
    }

    /// `N(i)` among live vertices.
    pub fn neighbors(&self, i: usize) -> NeuronSet {
        self.adj[i].intersection(self.alive)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.alive.contains(i) && self.alive.contains(j) && self.adj[i].contains(j)
    }

    /// Sorted `(i, j)` pairs with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.alive
            .iter()
            .flat_map(|i| self.neighbors(i).iter().filter(move |&j| j > i).map(move |j| (i, j)))
            .collect()
    }

    pub fn is_clique(&self, s: NeuronSet) -> bool {
        s.is_subset(self.alive) && s.iter().all(|i| s.without(i).is_subset(self.adj[i]))
    }

    pub fn is_simplicial(&self, i: usize) -> bool {
        self.is_clique(self.neighbors(i))
    }

    pub fn remove(&mut self, i: usize) {
        self.alive = self.alive.without(i);
    }

    /// Induced subgraph on `keep` (labels unchanged).
    pub fn induced(&self, keep: NeuronSet) -> RelGraph {
        RelGraph { n: self.n, alive: self.alive.intersection(keep), adj: self.adj.clone() }
    }

    /// The graph is a single chordless cycle through every live vertex.
    pub fn is_cycle(&self) -> bool {
        let v = self.alive.len();
        if v < 3 || self.alive.iter().any(|i| self.neighbors(i).len() != 2) {
            return false;
        }
        // connected + 2-regular
        let start = self.alive.min().unwrap();
        let mut seen = NeuronSet::singleton(start);
        let mut frontier = vec![start];
        while let Some(x) = frontier.pop() {
            for y in self.neighbors(x).difference(seen).iter() {
                seen = seen.with(y);
                frontier.push(y);
            }
        }
        seen == self.alive
    }
}

impl ContainmentPoset {
    pub fn elements(&self) -> NeuronSet {
        self.alive
    }

    /// `i < j`.
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.alive.contains(i) && self.alive.contains(j) && self.below[j].contains(i)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.lt(i, j) || self.lt(j, i)
    }

    /// `I(i)` among live elements.
    pub fn ideal(&self, i: usize) -> NeuronSet {
        self.below[i].intersection(self.alive)
    }

    /// `{ j : i < j }` among live elements: the neurons whose sets contain `U_i`.
    pub fn above(&self, i: usize) -> NeuronSet {
        self.alive.iter().filter(|&j| self.below[j].contains(i)).collect()
    }

    pub fn is_minimal(&self, i: usize) -> bool {
        self.ideal(i).is_empty()
    }

    pub fn remove(&mut self, i: usize) {
        self.alive = self.alive.without(i);
    }

    /// Sorted strict relations `(i, j)` meaning `i < j`.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.alive.iter().flat_map(|j| self.ideal(j).iter().map(move |i| (i, j))).collect();
        v.sort_unstable();
        v
    }

    /// Cover relations of the Hasse diagram.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.relations()
            .into_iter()
            .filter(|&(i, j)| !self.ideal(j).iter().any(|m| m != i && self.lt(i, m)))
            .collect()
    }

    fn check_axioms(&self) -> Result<()> {
        for i in self.alive.iter() {
            if self.below[i].contains(i) {
                return Err(Error::OrderAxiomViolation(format!("{} < {}", i + 1, i + 1)));
            }
            for j in self.ideal(i).iter() {
                if self.below[j].contains(i) {
                    return Err(Error::OrderAxiomViolation(format!("{} < {} and {} < {}", i + 1, j + 1, j + 1, i + 1)));
                }
                for k in self.ideal(j).iter() {
                    if !self.below[i].contains(k) {
                        return Err(Error::OrderAxiomViolation(format!(
                            "{} < {} < {} but not {} < {}",
                            k + 1,
                            j + 1,
                            i + 1,
                            k + 1,
                            i + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `order` lists every live element once, smaller elements first.
    pub fn is_linear_extension(&self, order: &[usize]) -> bool {
        let mut pos = vec![usize::MAX; self.n];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        order.len() == self.alive.len()
            && self.alive.iter().all(|v| pos[v] != usize::MAX)
            && self.relations().iter().all(|&(i, j)| pos[i] < pos[j])
    }
}

/// Maximum cardinality search with lowest-index tie-breaking; the reverse of
/// the visit order is checked to be a perfect elimination order.
pub fn chordality(g: &RelGraph) -> PeoResult {
    let order = mcs_elimination_order(g);
    if is_perfect_elimination_order(g, &order) {
        PeoResult { chordal: true, order: Some(order) }
    } else {
        PeoResult { chordal: false, order: None }
    }
}

fn mcs_elimination_order(g: &RelGraph) -> Vec<usize> {
    let mut weight = vec![0usize; g.n];
    let mut unvisited = g.vertices();
    let mut visit = Vec::with_capacity(unvisited.len());
    while let Some(first) = unvisited.min() {
        let v = unvisited.iter().fold(first, |best, v| if weight[v] > weight[best] { v } else { best });
        visit.push(v);
        unvisited = unvisited.without(v);
        for u in g.neighbors(v).intersection(unvisited).iter() {
            weight[u] += 1;
        }
    }
    visit.reverse();
    visit
}

/// Each vertex's neighbors appearing later in `order` form a clique, and
/// `order` is a permutation of the live vertices.
pub fn is_perfect_elimination_order(g: &RelGraph, order: &[usize]) -> bool {
    if order.len() != g.vertices().len() || NeuronSet::from_indices(order.iter().copied()) != g.vertices() {
        return false;
    }
    let mut later = g.vertices();
    for &v in order {
        later = later.without(v);
        if !g.is_clique(g.neighbors(v).intersection(later)) {
            return false;
        }
    }
    true
}

/// `1 + max` later-neighbor count along a perfect elimination order.
pub fn max_clique_size(g: &RelGraph, peo: &[usize]) -> Result<usize> {
    if !is_perfect_elimination_order(g, peo) {
        return Err(Error::InvalidPeo(format!("{:?}", peo.iter().map(|v| v + 1).collect::<Vec<_>>())));
    }
    let mut later = g.vertices();
    let mut best = 0;
    for &v in peo {
        later = later.without(v);
        best = best.max(1 + g.neighbors(v).intersection(later).len());
    }
    Ok(best)
}

/// Maximal cliques `{v} ∪ later neighbors` along a perfect elimination order
/// (deduplicated; non-maximal ones are dropped).
pub fn peo_cliques(g: &RelGraph, peo: &[usize]) -> Vec<NeuronSet> {
    let mut later = g.vertices();
    let mut cliques: Vec<NeuronSet> = Vec::new();
    for &v in peo {
        later = later.without(v);
        cliques.push(g.neighbors(v).intersection(later).with(v));
    }
    let maximal: Vec<NeuronSet> = cliques
        .iter()
        .filter(|c| !cliques.iter().any(|d| d != *c && c.is_subset(*d)))
        .copied()
        .collect();
    let mut out = maximal;
    out.sort_unstable();
    out.dedup();
    out
}

/// Lowest-indexed neuron that is simplicial in `g` and minimal in `p`.
pub fn find_elimination_neuron(g: &RelGraph, p: &ContainmentPoset) -> Option<usize> {
    g.vertices().iter().find(|&i| g.is_simplicial(i) && p.is_minimal(i))
}
