//! Attaching sets, splittability, accessibility and the minimal ball
//! realization dimension.

use serde::{Deserialize, Serialize};

use crate::code::IntervalRef;
use crate::error::{Error, Result};
use crate::piercing::RecognitionVerdict;
use crate::set::NeuronSet;
use crate::structure::{ContainmentPoset, RelGraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitEntry {
    /// A clique of size `k`.
    pub sigma: NeuronSet,
    pub attaching: NeuronSet,
    /// `(A, B)` when the attaching set splits into two incomparable chains.
    /// `A` holds the smallest member; `B` may be empty.
    pub partition: Option<(NeuronSet, NeuronSet)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCertificate {
    pub k: usize,
    pub entries: Vec<SplitEntry>,
    pub splittable: bool,
}

impl SplitCertificate {
    pub fn entry(&self, sigma: NeuronSet) -> Option<&SplitEntry> {
        self.entries.iter().find(|e| e.sigma == sigma)
    }

    /// The first entry that fails to split.
    pub fn witness(&self) -> Option<&SplitEntry> {
        self.entries.iter().find(|e| e.partition.is_none())
    }
}

/// `{ i ∉ sigma : sigma ⊆ N(i) }`.
pub fn attaching_set(g: &RelGraph, sigma: NeuronSet) -> Result<NeuronSet> {
    if !sigma.is_subset(g.vertices()) || !g.is_clique(sigma) {
        return Err(Error::NotAClique(sigma));
    }
    let s: NeuronSet = g.vertices().difference(sigma).iter().filter(|&i| sigma.is_subset(g.neighbors(i))).collect();
    debug_assert!(s.iter().all(|i| g.neighbors(i).intersection(s).is_empty()), "attaching set {s} not independent");
    Ok(s)
}

/// Splits `s` by the comparability graph of `p`: at most two components,
/// each a chain.
pub fn split_chains(p: &ContainmentPoset, s: NeuronSet) -> Option<(NeuronSet, NeuronSet)> {
    let mut rest = s;
    let mut parts = Vec::new();
    while let Some(start) = rest.min() {
        let mut comp = NeuronSet::singleton(start);
        let mut frontier = comp;
        while let Some(v) = frontier.min() {
            frontier = frontier.without(v);
            for u in rest.difference(comp).iter().filter(|&u| p.comparable(u, v)) {
                comp = comp.with(u);
                frontier = frontier.with(u);
            }
        }
        rest = rest.difference(comp);
        parts.push(comp);
    }
    let is_chain = |c: NeuronSet| c.iter().all(|i| c.iter().all(|j| i == j || p.comparable(i, j)));
    match parts.as_slice() {
        [] => Some((NeuronSet::EMPTY, NeuronSet::EMPTY)),
        [a] if is_chain(*a) => Some((*a, NeuronSet::EMPTY)),
        [a, b] if is_chain(*a) && is_chain(*b) => Some((*a, *b)),
        _ => None,
    }
}

/// Checks every `k`-subset of the recorded cliques of size `k + 1`.
pub fn is_splittable(g: &RelGraph, p: &ContainmentPoset, cliques: &[NeuronSet]) -> SplitCertificate {
    let k = cliques.iter().map(|c| c.len()).max().unwrap_or(1).saturating_sub(1);
    let mut sigmas: Vec<NeuronSet> = cliques
        .iter()
        .filter(|c| c.len() == k + 1)
        .flat_map(|&c| c.iter().map(move |v| c.without(v)))
        .collect();
    sigmas.sort_unstable();
    sigmas.dedup();
    if k == 0 {
        sigmas.clear();
    }
    let entries: Vec<SplitEntry> = sigmas
        .into_iter()
        .map(|sigma| {
            let attaching = attaching_set(g, sigma).expect("subset of a clique is a clique");
            SplitEntry { sigma, attaching, partition: split_chains(p, attaching) }
        })
        .collect();
    let splittable = entries.iter().all(|e| e.partition.is_some());
    SplitCertificate { k, entries, splittable }
}

/// Rank below `k` is always accessible. At rank `k` the bottom must meet the
/// attaching set of `tau \ sigma` in exactly one side of its stored partition.
pub fn is_accessible(iv: &IntervalRef, cert: &SplitCertificate) -> Result<bool> {
    is_accessible_within(iv, cert, NeuronSet(u64::MAX))
}

/// [`is_accessible`] with the attaching set and partition restricted to
/// `present` (used while a realization is only partially built).
pub fn is_accessible_within(iv: &IntervalRef, cert: &SplitCertificate, present: NeuronSet) -> Result<bool> {
    if !cert.splittable {
        return Err(Error::NotSplittable);
    }
    if iv.rank() < cert.k {
        return Ok(true);
    }
    let Some(entry) = cert.entry(iv.free()) else {
        // Not a clique of the full code: empty attaching set.
        return Ok(iv.rank() == cert.k);
    };
    let (a, b) = entry.partition.expect("splittable");
    let (a, b) = (a.intersection(present), b.intersection(present));
    let meet = iv.sigma.intersection(a.union(b));
    Ok(meet == a || meet == b)
}

/// `1` for `k = 0`, otherwise `k` when splittable and `k + 1` when not.
pub fn min_realization_dim(verdict: &RecognitionVerdict, cert: &SplitCertificate) -> Result<usize> {
    let k = verdict.k().ok_or(Error::NotPierced)?;
    Ok(match k {
        0 => 1,
        _ if cert.splittable => k,
        _ => k + 1,
    })
}
