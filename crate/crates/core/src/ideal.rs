//! Pseudo-monomials over F2 and the canonical form of a code's neural ideal.
//!
//! The ideal itself is never materialized. A pseudo-monomial lies in the
//! ideal exactly when it vanishes on every codeword, so membership is a scan
//! over the code.

use std::collections::BTreeSet;
use std::fmt;

use crate::code::Code;
use crate::error::{Error, Result};
use crate::set::NeuronSet;

/// Default cap on `n` for [`canonical_form`].
pub const CANONICAL_FORM_CAP: usize = 20;
/// Cap on `n` for [`canonical_form_oracle`].
pub const ORACLE_CAP: usize = 12;

/// `∏_{i∈pos} x_i · ∏_{j∈neg} (1 − x_j)` with `pos ∩ neg = ∅`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PseudoMonomial {
    pub pos: NeuronSet,
    pub neg: NeuronSet,
}

impl PseudoMonomial {
    pub fn new(pos: NeuronSet, neg: NeuronSet) -> Self {
        assert!(pos.intersection(neg).is_empty(), "pseudo-monomial factors overlap");
        PseudoMonomial { pos, neg }
    }

    /// `x_i x_j` (0-based).
    pub fn product(i: usize, j: usize) -> Self {
        Self::new(NeuronSet::from_indices([i, j]), NeuronSet::EMPTY)
    }

    /// `x_i (1 − x_j)` (0-based).
    pub fn mixed(i: usize, j: usize) -> Self {
        Self::new(NeuronSet::singleton(i), NeuronSet::singleton(j))
    }

    /// The indicator of `sigma`: `x` for members, `1 − x` for the rest of `[n]`.
    pub fn indicator(sigma: NeuronSet, n: usize) -> Self {
        Self::new(sigma, NeuronSet::full(n).difference(sigma))
    }

    pub fn degree(&self) -> u32 {
        (self.pos.len() + self.neg.len()) as u32
    }

    /// Variables the pseudo-monomial depends on.
    pub fn support(&self) -> NeuronSet {
        self.pos.union(self.neg)
    }

    /// Value at the 0/1 point `w`: 1 iff `pos ⊆ w` and `neg ∩ w = ∅`.
    #[inline]
    pub fn evaluate(&self, w: NeuronSet) -> bool {
        self.pos.is_subset(w) && self.neg.intersection(w).is_empty()
    }

    #[inline]
    pub fn divides(&self, g: &PseudoMonomial) -> bool {
        self.pos.is_subset(g.pos) && self.neg.is_subset(g.neg)
    }

    pub fn in_ideal(&self, c: &Code) -> bool {
        c.words().iter().all(|&w| !self.evaluate(w))
    }
}

/// Paper notation with 1-based labels, e.g. `x1*x3` or `x2*(1-x4)`.
impl fmt::Display for PseudoMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors = self
            .pos
            .iter()
            .map(|i| format!("x{}", i + 1))
            .chain(self.neg.iter().map(|j| format!("(1-x{})", j + 1)));
        let s: Vec<String> = factors.collect();
        if s.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&s.join("*"))
        }
    }
}

impl fmt::Debug for PseudoMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The divisibility-minimal pseudo-monomials of the neural ideal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalForm {
    pub n: usize,
    pub elements: BTreeSet<PseudoMonomial>,
}

impl CanonicalForm {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, f: &PseudoMonomial) -> bool {
        self.elements.contains(f)
    }

    pub fn iter(&self) -> impl Iterator<Item = &PseudoMonomial> {
        self.elements.iter()
    }

    /// All elements have degree exactly two (vacuously true when empty).
    pub fn is_degree_two(&self) -> bool {
        self.elements.iter().all(|f| f.degree() == 2)
    }

    /// An element of degree other than two, preferring the highest degree.
    pub fn degree_witness(&self) -> Option<PseudoMonomial> {
        self.elements
            .iter()
            .filter(|f| f.degree() != 2)
            .max_by_key(|f| (f.degree(), std::cmp::Reverse(**f)))
            .copied()
    }

    /// `σ` is a codeword iff every element vanishes on it.
    pub fn admits(&self, w: NeuronSet) -> bool {
        self.elements.iter().all(|f| !f.evaluate(w))
    }

    /// Sorted strings in paper notation.
    pub fn to_strings(&self) -> Vec<String> {
        let mut v: Vec<String> = self.elements.iter().map(ToString::to_string).collect();
        v.sort();
        v
    }

    /// Elements not involving any neuron of `s`, relabeled as
    /// [`Code::delete_neurons`] relabels.
    pub fn delete_neurons(&self, s: NeuronSet) -> CanonicalForm {
        let keep = NeuronSet::full(self.n).difference(s);
        let squeeze = |m: NeuronSet| -> NeuronSet {
            keep.iter().enumerate().filter(|&(_, i)| m.contains(i)).map(|(k, _)| k).collect()
        };
        let elements = self
            .elements
            .iter()
            .filter(|f| f.support().intersection(s).is_empty())
            .map(|f| PseudoMonomial::new(squeeze(f.pos), squeeze(f.neg)))
            .collect();
        CanonicalForm { n: keep.len(), elements }
    }
}

/// Canonical form by increasing-degree enumeration with divisibility pruning.
pub fn canonical_form(c: &Code) -> Result<CanonicalForm> {
    canonical_form_capped(c, CANONICAL_FORM_CAP)
}

pub fn canonical_form_capped(c: &Code, cap: usize) -> Result<CanonicalForm> {
    if c.n() > cap {
        return Err(Error::LimitExceeded { what: "canonical form", n: c.n(), cap });
    }
    Ok(CanonicalForm { n: c.n(), elements: degree_bounded_scan(c, c.n()) })
}

/// Minimal pseudo-monomials of degree at most `max_degree` lying in the
/// ideal. This is the part of the canonical form of degree `≤ max_degree`; it
/// says nothing about higher-degree elements.
pub fn degree_bounded_scan(c: &Code, max_degree: usize) -> BTreeSet<PseudoMonomial> {
    let n = c.n();
    let mut found: Vec<PseudoMonomial> = Vec::new();
    for d in 1..=max_degree.min(n) {
        let mut level = Vec::new();
        for support in combinations(n, d) {
            for pos in support.subsets() {
                let f = PseudoMonomial { pos, neg: support.difference(pos) };
                // anything dividing f has lower degree, so it is already in `found`
                if found.iter().any(|g| g.divides(&f)) {
                    continue;
                }
                if f.in_ideal(c) {
                    level.push(f);
                }
            }
        }
        found.extend(level);
    }
    found.into_iter().collect()
}

/// Independent cross-check: scan all `3^n − 1` pseudo-monomials, keep those in
/// the ideal, then keep the divisibility-minimal ones by pairwise comparison.
pub fn canonical_form_oracle(c: &Code) -> Result<CanonicalForm> {
    let n = c.n();
    if n > ORACLE_CAP {
        return Err(Error::LimitExceeded { what: "canonical form oracle", n, cap: ORACLE_CAP });
    }
    let total = 3usize.pow(n as u32);
    let mut members = Vec::new();
    for code in 1..total {
        let (mut pos, mut neg, mut t) = (0u64, 0u64, code);
        for i in 0..n {
            match t % 3 {
                1 => pos |= 1 << i,
                2 => neg |= 1 << i,
                _ => {}
            }
            t /= 3;
        }
        let f = PseudoMonomial { pos: NeuronSet(pos), neg: NeuronSet(neg) };
        if f.in_ideal(c) {
            members.push(f);
        }
    }
    let elements = members
        .iter()
        .filter(|f| !members.iter().any(|g| g != *f && g.divides(f)))
        .copied()
        .collect();
    Ok(CanonicalForm { n, elements })
}

/// All `d`-element subsets of `[n]` as masks (Gosper's hack).
fn combinations(n: usize, d: usize) -> impl Iterator<Item = NeuronSet> {
    let limit = 1u64 << n;
    let start = if d == 0 { 0 } else { (1u64 << d) - 1 };
    let mut cur = (d <= n).then_some(start);
    std::iter::from_fn(move || {
        let c = cur?;
        if c >= limit && d > 0 {
            return None;
        }
        cur = if c == 0 {
            None
        } else {
            let lo = c & c.wrapping_neg();
            let r = c + lo;
            let next = (((r ^ c) >> 2) / lo) | r;
            (next < limit).then_some(next)
        };
        Some(NeuronSet(c))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(labels: &[usize]) -> NeuronSet {
        NeuronSet::from_labels(labels)
    }

    fn code_c() -> Code {
        Code::from_compact(3, &["12", "13", "23", "1", "2", "3", ""]).unwrap()
    }

    fn code_d() -> Code {
        Code::from_compact(4, &["12", "14", "23", "34", "1", "2", "3", "4", ""]).unwrap()
    }

    #[test]
    fn indicator() {
        assert_eq!(PseudoMonomial::indicator(s(&[1]), 3).to_string(), "x1*(1-x2)*(1-x3)");
        assert_eq!(PseudoMonomial::indicator(s(&[]), 2).to_string(), "(1-x1)*(1-x2)");
        assert_eq!(PseudoMonomial::indicator(s(&[1, 2]), 2).to_string(), "x1*x2");
    }

    #[test]
    fn evaluate() {
        assert!(PseudoMonomial::product(0, 1).evaluate(s(&[1, 2, 3])));
        assert!(!PseudoMonomial::mixed(0, 1).evaluate(s(&[1, 2])));
        assert!(PseudoMonomial::mixed(2, 0).evaluate(s(&[3])));
    }

    #[test]
    fn divides() {
        let x1 = PseudoMonomial::new(s(&[1]), s(&[]));
        let g = PseudoMonomial::new(s(&[1, 2]), s(&[3]));
        assert!(x1.divides(&g));
        assert!(!PseudoMonomial::mixed(0, 1).divides(&PseudoMonomial::product(0, 1)));
        assert!(g.divides(&g));
    }

    #[test]
    fn membership() {
        let x123 = PseudoMonomial::new(s(&[1, 2, 3]), s(&[]));
        assert!(x123.in_ideal(&code_c()));
        assert!(!PseudoMonomial::product(0, 1).in_ideal(&code_c()));
        assert!(PseudoMonomial::product(0, 2).in_ideal(&code_d()));
    }

    #[test]
    fn fixtures() {
        assert_eq!(canonical_form(&code_c()).unwrap().to_strings(), ["x1*x2*x3"]);
        assert_eq!(canonical_form(&code_d()).unwrap().to_strings(), ["x1*x3", "x2*x4"]);
        assert!(canonical_form(&Code::power_set(4)).unwrap().is_empty());
    }

    #[test]
    fn oracle_on_small_codes() {
        assert_eq!(canonical_form_oracle(&code_c()).unwrap().to_strings(), ["x1*x2*x3"]);
        let one = Code::from_compact(1, &["1", ""]).unwrap();
        assert!(canonical_form_oracle(&one).unwrap().is_empty());
    }

    #[test]
    fn bounded_scan() {
        let d2: Vec<String> = degree_bounded_scan(&code_d(), 2).iter().map(ToString::to_string).collect();
        assert_eq!(d2, ["x1*x3", "x2*x4"]);
        assert!(degree_bounded_scan(&code_c(), 2).is_empty());
        assert!(degree_bounded_scan(&Code::power_set(4), 2).is_empty());
    }

    #[test]
    fn degree_two_predicate() {
        assert!(canonical_form(&code_d()).unwrap().is_degree_two());
        let cf = canonical_form(&code_c()).unwrap();
        assert!(!cf.is_degree_two());
        assert_eq!(cf.degree_witness().unwrap().to_string(), "x1*x2*x3");
        assert!(canonical_form(&Code::power_set(3)).unwrap().is_degree_two());
    }

    #[test]
    fn caps() {
        let big = Code::power_set(0);
        assert!(canonical_form_capped(&big, 0).is_ok());
        let c = Code::from_compact(3, &["1", ""]).unwrap();
        assert!(matches!(canonical_form_capped(&c, 2), Err(Error::LimitExceeded { .. })));
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).count(), 10);
        assert_eq!(combinations(4, 4).count(), 1);
        assert_eq!(combinations(3, 0).count(), 1);
        assert!(combinations(6, 3).all(|m| m.len() == 3));
    }
}
