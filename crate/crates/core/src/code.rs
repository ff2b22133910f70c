//! Combinatorial codes, intervals and deletions.
//!
//! A [`Code`] is a set of codewords over `n` neurons. Codewords are
//! [`NeuronSet`] masks kept sorted and deduplicated, so membership is a binary
//! search and two codes compare equal iff they have the same codewords.
//!
//! Two text encodings are accepted by [`Code::parse`]:
//!
//! ```text
//! n=5
//! 123,45,12,1,2,4,5,;
//! ```
//!
//! where each codeword lists its 1-based labels (separated by `.` once labels
//! exceed 9, e.g. `1.3.10`), an empty entry is the empty codeword and a
//! trailing `;` is optional; or a JSON document
//! `{"n": 5, "codewords": [[1,2,3], [4,5], []]}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::{NeuronSet, MAX_NEURONS};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Code {
    n: usize,
    words: Vec<NeuronSet>,
}

/// The interval `[sigma, tau]` of all sets between `sigma` and `tau`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct IntervalRef {
    pub sigma: NeuronSet,
    pub tau: NeuronSet,
}

impl IntervalRef {
    /// Panics if `sigma` is not a subset of `tau`.
    pub fn new(sigma: NeuronSet, tau: NeuronSet) -> Self {
        assert!(sigma.is_subset(tau), "interval bottom {sigma} is not below top {tau}");
        IntervalRef { sigma, tau }
    }

    pub fn try_new(sigma: NeuronSet, tau: NeuronSet) -> Option<Self> {
        sigma.is_subset(tau).then_some(IntervalRef { sigma, tau })
    }

    pub fn point(sigma: NeuronSet) -> Self {
        IntervalRef { sigma, tau: sigma }
    }

    /// `tau \ sigma`.
    pub fn free(&self) -> NeuronSet {
        self.tau.difference(self.sigma)
    }

    pub fn rank(&self) -> usize {
        self.free().len()
    }

    pub fn members(&self) -> impl Iterator<Item = NeuronSet> + '_ {
        self.free().subsets().map(move |s| s.union(self.sigma))
    }

    pub fn contains(&self, w: NeuronSet) -> bool {
        self.sigma.is_subset(w) && w.is_subset(self.tau)
    }
}

impl fmt::Display for IntervalRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.sigma, self.tau)
    }
}

/// What happened to an original neuron during [`Code::canonicalize`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NeuronFate {
    /// Kept, with this new 0-based index.
    Kept(usize),
    /// Appeared in no codeword.
    Dropped,
    /// Identical behavior to the lower original neuron `into` (0-based).
    Merged { into: usize },
}

/// Relabeling produced by [`Code::canonicalize`], indexed by original neuron.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeuronMap {
    pub fates: Vec<NeuronFate>,
}

impl NeuronMap {
    pub fn identity(n: usize) -> Self {
        NeuronMap { fates: (0..n).map(NeuronFate::Kept).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.fates.iter().enumerate().all(|(i, f)| *f == NeuronFate::Kept(i))
    }

    /// New index of an original neuron, following merges.
    pub fn image(&self, original: usize) -> Option<usize> {
        match self.fates.get(original)? {
            NeuronFate::Kept(j) => Some(*j),
            NeuronFate::Dropped => None,
            NeuronFate::Merged { into } => self.image(*into),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CodeDoc {
    n: usize,
    codewords: Vec<Vec<usize>>,
}

impl Code {
    /// Builds a code, deduplicating codewords. Bits at or above `n` are an error.
    pub fn new(n: usize, words: impl IntoIterator<Item = NeuronSet>) -> Result<Self> {
        if n > MAX_NEURONS {
            return Err(Error::TooManyNeurons { n, max: MAX_NEURONS });
        }
        let full = NeuronSet::full(n);
        let mut words: Vec<NeuronSet> = words.into_iter().collect();
        if let Some(bad) = words.iter().find(|w| !w.is_subset(full)) {
            let label = bad.difference(full).min().unwrap() + 1;
            return Err(Error::NeuronOutOfRange { label, n });
        }
        words.sort_unstable();
        words.dedup();
        Ok(Code { n, words })
    }

    fn from_sorted(n: usize, mut words: Vec<NeuronSet>) -> Self {
        words.sort_unstable();
        words.dedup();
        Code { n, words }
    }

    /// Codewords given as lists of 1-based labels.
    pub fn from_labels(n: usize, words: &[&[usize]]) -> Result<Self> {
        let mut masks = Vec::with_capacity(words.len());
        for w in words {
            let mut m = NeuronSet::EMPTY;
            for &l in *w {
                if l == 0 || l > n {
                    return Err(Error::NeuronOutOfRange { label: l, n });
                }
                m = m.with(l - 1);
            }
            masks.push(m);
        }
        Code::new(n, masks)
    }

    /// Codewords in the compact notation `"123"` (labels 1..=9 only); the
    /// empty string is the empty codeword.
    pub fn from_compact(n: usize, words: &[&str]) -> Result<Self> {
        let mut masks = Vec::with_capacity(words.len());
        for (k, w) in words.iter().enumerate() {
            masks.push(parse_word(w, n, 0).map_err(|e| match e {
                Error::Parse { msg, .. } => Error::Parse { line: 0, msg: format!("codeword {k}: {msg}") },
                e => e,
            })?);
        }
        Code::new(n, masks)
    }

    /// The full power set `2^[n]`.
    pub fn power_set(n: usize) -> Self {
        Code { n, words: NeuronSet::full(n).subsets().collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[NeuronSet] {
        &self.words
    }

    pub fn contains(&self, w: NeuronSet) -> bool {
        self.words.binary_search(&w).is_ok()
    }

    /// Union of all codewords.
    pub fn support(&self) -> NeuronSet {
        self.words.iter().fold(NeuronSet::EMPTY, |a, &w| a.union(w))
    }

    /// Parses either accepted format; conventions are not enforced.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            return Self::parse_json(text);
        }
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing `n=<int>` header".into() })?;
        let n: usize = header
            .strip_prefix("n=")
            .or_else(|| header.strip_prefix("n ="))
            .map(str::trim)
            .ok_or(Error::Parse { line: ln, msg: format!("expected `n=<int>`, found `{header}`") })?
            .parse()
            .map_err(|_| Error::Parse { line: ln, msg: format!("invalid neuron count in `{header}`") })?;
        if n > MAX_NEURONS {
            return Err(Error::TooManyNeurons { n, max: MAX_NEURONS });
        }
        let (ln, body) = lines.next().ok_or(Error::Parse { line: ln + 1, msg: "missing codeword line".into() })?;
        if let Some((extra, _)) = lines.next() {
            return Err(Error::Parse { line: extra, msg: "unexpected content after the codeword line".into() });
        }
        let body = body.strip_suffix(';').unwrap_or(body);
        let words = body
            .split(',')
            .map(|tok| parse_word(tok.trim(), n, ln))
            .collect::<Result<Vec<_>>>()?;
        Code::new(n, words)
    }

    fn parse_json(text: &str) -> Result<Self> {
        let doc: CodeDoc = serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        if doc.n > MAX_NEURONS {
            return Err(Error::TooManyNeurons { n: doc.n, max: MAX_NEURONS });
        }
        let refs: Vec<&[usize]> = doc.codewords.iter().map(Vec::as_slice).collect();
        Code::from_labels(doc.n, &refs)
    }

    /// Codewords in display order: larger codewords first, then by labels.
    pub fn display_order(&self) -> Vec<NeuronSet> {
        let mut ws = self.words.clone();
        ws.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.labels().cmp(&b.labels())));
        ws
    }

    /// Two-line text format, ending in `;`.
    pub fn to_text(&self) -> String {
        let toks: Vec<String> = self.display_order().into_iter().map(|w| format_word(w, self.n)).collect();
        format!("n={}\n{};\n", self.n, toks.join(","))
    }

    pub fn to_json(&self) -> String {
        let doc = CodeDoc { n: self.n, codewords: self.display_order().into_iter().map(NeuronSet::labels).collect() };
        serde_json::to_string_pretty(&doc).expect("code document serializes")
    }

    /// Enforces the standing conventions: unused neurons are dropped, neurons
    /// with identical behavior are merged into the lowest label, and the
    /// survivors are relabeled order-preservingly. A missing empty codeword
    /// is an error.
    pub fn canonicalize(&self) -> Result<(Code, NeuronMap)> {
        if !self.contains(NeuronSet::EMPTY) {
            return Err(Error::MissingEmptyCodeword);
        }
        // column[i] = set of codeword indices containing neuron i
        let columns: Vec<Vec<usize>> = (0..self.n)
            .map(|i| (0..self.words.len()).filter(|&k| self.words[k].contains(i)).collect())
            .collect();
        let mut fates = vec![NeuronFate::Dropped; self.n];
        let mut kept = NeuronSet::EMPTY;
        let mut next = 0;
        for i in 0..self.n {
            if columns[i].is_empty() {
                continue;
            }
            if let Some(j) = kept.iter().find(|&j| columns[j] == columns[i]) {
                fates[i] = NeuronFate::Merged { into: j };
                continue;
            }
            fates[i] = NeuronFate::Kept(next);
            kept = kept.with(i);
            next += 1;
        }
        let words = self.words.iter().map(|&w| compress(w.intersection(kept), kept)).collect();
        Ok((Code::from_sorted(next, words), NeuronMap { fates }))
    }

    /// True when the conventions hold: the empty codeword is present, every
    /// neuron fires somewhere, and no two neurons behave identically.
    pub fn satisfies_conventions(&self) -> bool {
        self.canonicalize().map(|(c, m)| c.n == self.n && m.is_identity()).unwrap_or(false)
    }

    /// Removes the neurons of `s` from every codeword and relabels the
    /// remaining neurons order-preservingly.
    pub fn delete_neurons(&self, s: NeuronSet) -> Code {
        let keep = NeuronSet::full(self.n).difference(s);
        let words = self.words.iter().map(|&w| compress(w.intersection(keep), keep)).collect();
        Code::from_sorted(keep.len(), words)
    }

    /// Like [`delete_neurons`](Self::delete_neurons) but keeps the original
    /// labels, so the deleted neurons simply stop appearing.
    pub fn strip(&self, s: NeuronSet) -> Code {
        let words = self.words.iter().map(|&w| w.difference(s)).collect();
        Code::from_sorted(self.n, words)
    }

    /// Every member of the interval is a codeword.
    pub fn interval_contained(&self, iv: &IntervalRef) -> bool {
        iv.members().all(|w| self.contains(w))
    }

    /// The restriction to `s` (deleting everything else) is all of `2^s`.
    pub fn is_full_power_set_on(&self, s: NeuronSet) -> bool {
        let mut seen: Vec<NeuronSet> = self.words.iter().map(|w| w.intersection(s)).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == 1usize << s.len()
    }

    /// Adds every codeword of `[sigma ∪ {i}, tau ∪ {i}]`.
    pub fn pierce(&self, i: usize, iv: &IntervalRef) -> Code {
        let mut words = self.words.clone();
        words.extend(iv.members().map(|w| w.with(i)));
        Code::from_sorted(self.n, words)
    }
}

/// Maps the bits of `w` (a subset of `keep`) onto consecutive low bits.
fn compress(w: NeuronSet, keep: NeuronSet) -> NeuronSet {
    keep.iter().enumerate().filter(|&(_, i)| w.contains(i)).map(|(k, _)| k).collect()
}

fn parse_word(tok: &str, n: usize, line: usize) -> Result<NeuronSet> {
    let mut m = NeuronSet::EMPTY;
    if tok.is_empty() {
        return Ok(m);
    }
    let labels: Vec<&str> = if tok.contains('.') {
        tok.split('.').collect()
    } else {
        tok.char_indices().map(|(k, c)| &tok[k..k + c.len_utf8()]).collect()
    };
    for l in labels {
        let v: usize = l
            .trim()
            .parse()
            .map_err(|_| Error::Parse { line, msg: format!("malformed token `{tok}`") })?;
        if v == 0 || v > n {
            return Err(Error::NeuronOutOfRange { label: v, n });
        }
        m = m.with(v - 1);
    }
    Ok(m)
}

fn format_word(w: NeuronSet, n: usize) -> String {
    let labels = w.labels().into_iter().map(|l| l.to_string());
    if n <= 9 {
        labels.collect()
    } else {
        labels.collect::<Vec<_>>().join(".")
    }
}

/// Paper notation: `{123, 45, 1, ∅}` style.
impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, w) in self.display_order().into_iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            if w.is_empty() {
                f.write_str("∅")?;
            } else {
                f.write_str(&format_word(w, self.n))?;
            }
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Code(n={}, {})", self.n, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex11() -> Code {
        Code::from_compact(5, &["123", "45", "12", "1", "2", "4", "5", ""]).unwrap()
    }

    fn set(labels: &[usize]) -> NeuronSet {
        NeuronSet::from_labels(labels)
    }

    #[test]
    fn parses_text_with_trailing_empty_entry() {
        let c = Code::parse("n=5\n123,45,12,1,2,4,5,;\n").unwrap();
        assert_eq!(c.len(), 8);
        assert_eq!(c, ex11());
    }

    #[test]
    fn parses_empty_code() {
        let c = Code::parse("n=0\n;").unwrap();
        assert_eq!(c.n(), 0);
        assert_eq!(c.words(), &[NeuronSet::EMPTY]);
    }

    #[test]
    fn parse_deduplicates() {
        let c = Code::parse("n=2\n12,21").unwrap();
        assert_eq!(c.words(), &[set(&[1, 2])]);
    }

    #[test]
    fn parses_dotted_labels_and_json() {
        let c = Code::parse("n=10\n1.3.10,2,;").unwrap();
        assert!(c.contains(set(&[1, 3, 10])));
        let j = Code::parse(r#"{"n": 10, "codewords": [[1,3,10],[2],[]]}"#).unwrap();
        assert_eq!(c, j);
        assert_eq!(Code::parse(&c.to_json()).unwrap(), c);
        assert_eq!(Code::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Code::parse("123,4"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Code::parse("n=3\n14,;"), Err(Error::NeuronOutOfRange { label: 4, n: 3 })));
        assert!(matches!(Code::parse("n=3\n1x,;"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Code::parse("n=3"), Err(Error::Parse { .. })));
        assert!(matches!(Code::parse("n=99\n;"), Err(Error::TooManyNeurons { .. })));
    }

    #[test]
    fn canonicalize_drops_unused_neuron() {
        let raw = Code::from_compact(3, &["12", "1", "2", ""]).unwrap();
        let (c, map) = raw.canonicalize().unwrap();
        assert_eq!(c, Code::from_compact(2, &["12", "1", "2", ""]).unwrap());
        assert_eq!(map.fates[2], NeuronFate::Dropped);
    }

    #[test]
    fn canonicalize_merges_duplicates_into_lowest() {
        let raw = Code::from_compact(2, &["12", ""]).unwrap();
        let (c, map) = raw.canonicalize().unwrap();
        assert_eq!(c, Code::from_compact(1, &["1", ""]).unwrap());
        assert_eq!(map.fates[1], NeuronFate::Merged { into: 0 });
        assert_eq!(map.image(1), Some(0));
    }

    #[test]
    fn canonicalize_requires_empty_codeword() {
        let raw = Code::from_compact(2, &["12", "1", "2"]).unwrap();
        assert_eq!(raw.canonicalize(), Err(Error::MissingEmptyCodeword));
    }

    #[test]
    fn canonicalize_is_idempotent_on_example() {
        let (c, map) = ex11().canonicalize().unwrap();
        assert!(map.is_identity());
        assert_eq!(c, ex11());
    }

    #[test]
    fn deletion() {
        let d = ex11().delete_neurons(set(&[3]));
        // labels 4,5 become 3,4 after relabeling
        assert_eq!(d, Code::from_compact(4, &["12", "34", "1", "2", "3", "4", ""]).unwrap());
        assert_eq!(ex11().delete_neurons(NeuronSet::EMPTY), ex11());
        let one = Code::from_compact(1, &["1", ""]).unwrap();
        assert_eq!(one.delete_neurons(set(&[1])).words(), &[NeuronSet::EMPTY]);
    }

    #[test]
    fn intervals() {
        let c = ex11();
        assert!(c.interval_contained(&IntervalRef::point(set(&[1, 2]))));
        assert!(c.interval_contained(&IntervalRef::new(set(&[]), set(&[1, 2]))));
        assert!(c.interval_contained(&IntervalRef::new(set(&[]), set(&[4, 5]))));
        assert!(c.interval_contained(&IntervalRef::new(set(&[1, 2]), set(&[1, 2, 3]))));
        assert!(!c.interval_contained(&IntervalRef::point(set(&[1, 3]))));
    }

    #[test]
    fn full_power_set_restriction() {
        assert!(Code::power_set(4).is_full_power_set_on(NeuronSet::full(4)));
        assert!(ex11().is_full_power_set_on(set(&[1, 2])));
        let c = Code::from_compact(3, &["12", "13", "23", "1", "2", "3", ""]).unwrap();
        assert!(!c.is_full_power_set_on(set(&[1, 2, 3])));
    }

    #[test]
    fn text_round_trip_keeps_paper_style() {
        assert_eq!(ex11().to_text(), "n=5\n123,12,45,1,2,4,5,;\n");
    }
}
