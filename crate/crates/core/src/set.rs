use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest supported neuron count; codewords are stored as `u64` masks.
pub const MAX_NEURONS: usize = 63;

/// A subset of `[n]` stored as a bitmask, bit `i` standing for neuron `i + 1`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NeuronSet(pub u64);

impl NeuronSet {
    pub const EMPTY: NeuronSet = NeuronSet(0);

    /// `{0, 1, …, n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 64);
        if n >= 64 {
            NeuronSet(u64::MAX)
        } else {
            NeuronSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        NeuronSet(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        NeuronSet(it.into_iter().fold(0, |m, i| m | (1u64 << i)))
    }

    /// Builds a set from 1-based labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        Self::from_indices(labels.iter().map(|&l| l - 1))
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_subset(self, other: NeuronSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn union(self, other: NeuronSet) -> Self {
        NeuronSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: NeuronSet) -> Self {
        NeuronSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: NeuronSet) -> Self {
        NeuronSet(self.0 & !other.0)
    }

    #[inline]
    pub fn with(self, i: usize) -> Self {
        NeuronSet(self.0 | 1u64 << i)
    }

    #[inline]
    pub fn without(self, i: usize) -> Self {
        NeuronSet(self.0 & !(1u64 << i))
    }

    pub fn min(self) -> Option<usize> {
        (!self.is_empty()).then(|| self.0.trailing_zeros() as usize)
    }

    /// Ascending 0-based indices.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// 1-based labels in ascending order.
    pub fn labels(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// All subsets of `self`, in increasing mask order.
    pub fn subsets(self) -> Subsets {
        Subsets { full: self.0, next: Some(0) }
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

/// Standard subset-of-mask enumeration (`s = (s - full) & full`).
pub struct Subsets {
    full: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = NeuronSet;

    fn next(&mut self) -> Option<NeuronSet> {
        let cur = self.next?;
        let nxt = cur.wrapping_sub(self.full) & self.full;
        self.next = (nxt != 0).then_some(nxt);
        Some(NeuronSet(cur))
    }
}

impl FromIterator<usize> for NeuronSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Self::from_indices(iter)
    }
}

/// `{1,3,4}` with 1-based labels.
impl fmt::Display for NeuronSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, l) in self.labels().into_iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for NeuronSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
