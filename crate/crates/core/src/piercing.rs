//! Recognition of inductively pierced codes and piercing orders.
//!
//! Orientation: [`PiercingOrder::steps`] is the *removal* sequence. Index 0
//! is the first neuron removed, which is the last one pierced (the outermost
//! piercing). Rebuilding the code walks the steps backwards.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::code::{Code, IntervalRef};
use crate::error::{Error, Result};
use crate::ideal::{canonical_form, canonical_form_capped, CanonicalForm, PseudoMonomial, CANONICAL_FORM_CAP};
use crate::set::NeuronSet;
use crate::structure::{
    build_graph, build_poset, chordality, find_elimination_neuron, max_clique_size, ContainmentPoset, RelGraph,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiercingStep {
    /// 0-based neuron index.
    pub neuron: usize,
    pub sigma: NeuronSet,
    pub tau: NeuronSet,
    pub rank: usize,
}

impl PiercingStep {
    pub fn new(neuron: usize, sigma: NeuronSet, tau: NeuronSet) -> Self {
        debug_assert!(sigma.is_subset(tau) && !tau.contains(neuron));
        PiercingStep { neuron, sigma, tau, rank: tau.difference(sigma).len() }
    }

    pub fn interval(&self) -> IntervalRef {
        IntervalRef::new(self.sigma, self.tau)
    }
}

impl fmt::Display for PiercingStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pierce neuron={} sigma={} tau={} rank={}", self.neuron + 1, self.sigma, self.tau, self.rank)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiercingOrder {
    pub n: usize,
    /// Removal order: first removed (last pierced) first.
    pub steps: Vec<PiercingStep>,
    /// `{neuron} ∪ N(neuron)` recorded at each step, parallel to `steps`.
    pub cliques: Vec<NeuronSet>,
}

impl PiercingOrder {
    /// Neurons in removal order.
    pub fn removal_order(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.neuron).collect()
    }

    /// Neurons in the order they are pierced (reverse of removal).
    pub fn piercing_sequence(&self) -> Vec<usize> {
        self.steps.iter().rev().map(|s| s.neuron).collect()
    }

    pub fn max_rank(&self) -> usize {
        self.steps.iter().map(|s| s.rank).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecognitionVerdict {
    Pierced { order: PiercingOrder, k: usize },
    /// The canonical form has an element of degree ≥ 3.
    NotDegreeTwo { witness: PseudoMonomial },
    NotChordal,
}

impl RecognitionVerdict {
    pub fn is_pierced(&self) -> bool {
        matches!(self, RecognitionVerdict::Pierced { .. })
    }

    pub fn order(&self) -> Option<&PiercingOrder> {
        match self {
            RecognitionVerdict::Pierced { order, .. } => Some(order),
            _ => None,
        }
    }

    pub fn k(&self) -> Option<usize> {
        match self {
            RecognitionVerdict::Pierced { k, .. } => Some(*k),
            _ => None,
        }
    }
}

/// Everything the recognizer derives from a code, kept for reporting.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub cf: CanonicalForm,
    pub graph: Option<RelGraph>,
    pub poset: Option<ContainmentPoset>,
    pub verdict: RecognitionVerdict,
}

#[derive(Clone, Copy, Debug)]
pub struct RecognizeOptions {
    /// Recompute the canonical form of every partial deletion and compare its
    /// structures with the incrementally deleted ones. Exponential; debugging only.
    pub cross_check_deletions: bool,
    /// Largest neuron count accepted by the canonical-form computation.
    pub max_neurons: usize,
}

impl Default for RecognizeOptions {
    fn default() -> Self {
        RecognizeOptions { cross_check_deletions: false, max_neurons: CANONICAL_FORM_CAP }
    }
}

/// Checks that deleting `i` from `c` leaves `iv` inside the deletion and that
/// the codewords containing `i` are exactly `iv` with `i` added.
pub fn verify_abstract_piercing(c: &Code, i: usize, iv: &IntervalRef) -> bool {
    if iv.tau.contains(i) || i >= c.n() {
        return false;
    }
    let rest = c.strip(NeuronSet::singleton(i));
    if !rest.interval_contained(iv) {
        return false;
    }
    let with_i: Vec<NeuronSet> = c.words().iter().copied().filter(|w| w.contains(i)).collect();
    let expected = 1usize << iv.rank();
    if with_i.len() != expected || !with_i.iter().all(|w| iv.contains(w.without(i))) {
        return false;
    }
    rest.words().iter().all(|&w| c.contains(w))
}

pub fn compute_piercing_order(c: &Code) -> Result<RecognitionVerdict> {
    Ok(analyze(c, RecognizeOptions::default())?.verdict)
}

/// Canonical form, degree-two check, structures, then greedy removal of
/// elimination neurons.
pub fn analyze(c: &Code, opts: RecognizeOptions) -> Result<Analysis> {
    let cf = canonical_form_capped(c, opts.max_neurons)?;
    if let Some(witness) = cf.degree_witness() {
        return Ok(Analysis { cf, graph: None, poset: None, verdict: RecognitionVerdict::NotDegreeTwo { witness } });
    }
    let graph = build_graph(&cf)?;
    let poset = build_poset(&cf)?;
    let peo = chordality(&graph);
    if !peo.chordal {
        return Ok(Analysis { cf, graph: Some(graph), poset: Some(poset), verdict: RecognitionVerdict::NotChordal });
    }
    let order = eliminate(c, &graph, &poset, opts)?;
    let k = order.max_rank();
    let clique = max_clique_size(&graph, peo.order.as_ref().unwrap())?;
    if c.n() > 0 && clique != k + 1 {
        return Err(Error::ConsistencyFailure(format!("max rank {k} but largest clique has size {clique}")));
    }
    Ok(Analysis { cf, graph: Some(graph), poset: Some(poset), verdict: RecognitionVerdict::Pierced { order, k } })
}

fn eliminate(c: &Code, graph: &RelGraph, poset: &ContainmentPoset, opts: RecognizeOptions) -> Result<PiercingOrder> {
    let (mut g, mut p) = (graph.clone(), poset.clone());
    let mut steps = Vec::with_capacity(c.n());
    let mut cliques = Vec::with_capacity(c.n());
    let mut removed = NeuronSet::EMPTY;
    while !g.vertices().is_empty() {
        let i = find_elimination_neuron(&g, &p).ok_or_else(|| {
            Error::ConsistencyFailure("chordal degree-two code without an elimination neuron".into())
        })?;
        let sigma = p.above(i);
        let nbrs = g.neighbors(i);
        steps.push(PiercingStep::new(i, sigma, sigma.union(nbrs)));
        cliques.push(nbrs.with(i));
        g.remove(i);
        p.remove(i);
        removed = removed.with(i);
        if opts.cross_check_deletions {
            cross_check(c, removed, &g, &p)?;
        }
    }
    Ok(PiercingOrder { n: c.n(), steps, cliques })
}

fn cross_check(c: &Code, removed: NeuronSet, g: &RelGraph, p: &ContainmentPoset) -> Result<()> {
    let stripped = c.strip(removed);
    let cf = canonical_form(&stripped)?;
    // The stripped code keeps dead neurons, which appear as degree-one
    // elements x_i; drop them before building structures.
    let live = CanonicalForm {
        n: cf.n,
        elements: cf.elements.into_iter().filter(|f| f.support().intersection(removed).is_empty()).collect(),
    };
    let g2 = build_graph(&live)?.induced(g.vertices());
    let p2 = build_poset(&live)?;
    let same_graph = g.vertices().iter().all(|i| g.neighbors(i) == g2.neighbors(i));
    let same_poset = g.vertices().iter().all(|i| p.ideal(i) == p2.ideal(i).intersection(g.vertices()) && p.above(i) == p2.above(i).intersection(g.vertices()));
    if same_graph && same_poset {
        Ok(())
    } else {
        Err(Error::ConsistencyFailure(format!("structures diverge after removing {removed}")))
    }
}

/// Minimal `k`: the largest step rank, cross-checked against the largest
/// clique of `g` along the removal order (which is a perfect elimination
/// order).
pub fn min_k(order: &PiercingOrder, g: &RelGraph) -> Result<usize> {
    let k = order.max_rank();
    let clique = max_clique_size(g, &order.removal_order())?;
    if order.n > 0 && clique != k + 1 {
        return Err(Error::ConsistencyFailure(format!("max rank {k} but largest clique has size {clique}")));
    }
    Ok(k)
}

/// Rebuilds the code from `{∅}` by applying the steps in piercing order.
/// Each step's interval must already be present when it is applied.
pub fn replay(order: &PiercingOrder) -> Result<Code> {
    let mut code = Code::new(order.n, [NeuronSet::EMPTY])?;
    for step in order.steps.iter().rev() {
        let iv = step.interval();
        if !code.interval_contained(&iv) {
            return Err(Error::ReplayMismatch(format!("neuron {}: interval {iv} is not in the code built so far", step.neuron + 1)));
        }
        code = code.pierce(step.neuron, &iv);
    }
    Ok(code)
}

/// [`replay`] and compare against `c`.
pub fn check_replay(order: &PiercingOrder, c: &Code) -> Result<()> {
    let rebuilt = replay(order)?;
    if &rebuilt == c {
        Ok(())
    } else {
        Err(Error::ReplayMismatch(format!("rebuilt {rebuilt} differs from {c}")))
    }
}

const GENERATOR_RETRIES: usize = 50;

/// A random code built by `n` successive piercings of rank at most `k_cap`.
/// Deterministic for a given seed.
pub fn random_pierced_code(n: usize, k_cap: usize, seed: u64) -> Result<(Code, PiercingOrder)> {
    assert!(n >= 1, "need at least one neuron");
    let mut attempt = 0u64;
    loop {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        let (code, order) = generate(n, k_cap, &mut rng)?;
        let (canon, map) = code.canonicalize()?;
        if map.is_identity() {
            debug_assert_eq!(canon, code);
            return Ok((code, order));
        }
        attempt += 1;
    }
}

fn generate(n: usize, k_cap: usize, rng: &mut ChaCha8Rng) -> Result<(Code, PiercingOrder)> {
    let mut code = Code::new(n, [NeuronSet::EMPTY])?;
    let mut pierced = Vec::with_capacity(n);
    for m in 0..n {
        let present = NeuronSet::full(m);
        let (sigma, tau) = sample_interval(&code, present, k_cap.min(m), rng);
        let step = PiercingStep::new(m, sigma, tau);
        code = code.pierce(m, &step.interval());
        pierced.push((step, tau.difference(sigma).with(m)));
    }
    pierced.reverse();
    let (steps, cliques) = pierced.into_iter().unzip();
    Ok((code, PiercingOrder { n, steps, cliques }))
}

fn sample_interval(code: &Code, present: NeuronSet, max_rank: usize, rng: &mut ChaCha8Rng) -> (NeuronSet, NeuronSet) {
    let words = code.words();
    let mut gamma = NeuronSet::EMPTY;
    for _ in 0..GENERATOR_RETRIES {
        gamma = *words.choose(rng).unwrap();
        let sigma: NeuronSet = gamma.iter().filter(|_| rng.gen_bool(0.5)).collect();
        let rank = rng.gen_range(0..=max_rank);
        if let Some(tau) = grow_interval(code, present, sigma, rank, rng) {
            return (sigma, tau);
        }
    }
    (gamma, gamma)
}

/// Greedily extends `[sigma, sigma]` by random free neurons while the
/// interval stays inside the code.
fn grow_interval(code: &Code, present: NeuronSet, sigma: NeuronSet, rank: usize, rng: &mut ChaCha8Rng) -> Option<NeuronSet> {
    if !code.contains(sigma) {
        return None;
    }
    let mut tau = sigma;
    for _ in 0..rank {
        let iv = IntervalRef::new(sigma, tau);
        let candidates: Vec<usize> = present
            .difference(tau)
            .iter()
            .filter(|&j| iv.members().all(|w| code.contains(w.with(j))))
            .collect();
        tau = tau.with(*candidates.choose(rng)?);
    }
    Some(tau)
}
