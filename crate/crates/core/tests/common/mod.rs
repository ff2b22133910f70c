#![allow(dead_code)]

use std::path::PathBuf;

use pierced::ideal::{canonical_form, CanonicalForm};
use pierced::io::read_code;
use pierced::piercing::{analyze, Analysis, RecognizeOptions};
use pierced::split::{is_splittable, SplitCertificate};
use pierced::{Code, ContainmentPoset, IntervalRef, NeuronSet, RelGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn fixture(name: &str) -> Code {
    read_code(&data(name)).unwrap()
}

pub fn s(labels: &[usize]) -> NeuronSet {
    NeuronSet::from_labels(labels)
}

pub fn full_analysis(c: &Code) -> (Analysis, Option<SplitCertificate>) {
    let a = analyze(c, RecognizeOptions::default()).unwrap();
    let cert = a.verdict.order().map(|o| is_splittable(a.graph.as_ref().unwrap(), a.poset.as_ref().unwrap(), &o.cliques));
    (a, cert)
}

/// A code on `n` neurons: the empty word plus each nonempty word with
/// probability `p`.
pub fn random_code(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Code {
    let words = (0..1u64 << n).filter(|&w| w == 0 || rng.gen_bool(p)).map(NeuronSet);
    Code::new(n, words).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Canonical form of `c` with the neurons of `removed` ignored (they are
/// absent from every word, so they only contribute `x_i`).
pub fn live_cf(c: &Code, removed: NeuronSet) -> CanonicalForm {
    let cf = canonical_form(&c.strip(removed)).unwrap();
    CanonicalForm { n: cf.n, elements: cf.elements.into_iter().filter(|f| f.support().intersection(removed).is_empty()).collect() }
}

/// Interval membership by listing every word between `sigma` and `tau`
/// from scratch.
pub fn naive_interval_contained(c: &Code, iv: &IntervalRef) -> bool {
    let free: Vec<usize> = (0..64).filter(|&i| iv.tau.0 >> i & 1 == 1 && iv.sigma.0 >> i & 1 == 0).collect();
    (0..1u64 << free.len()).all(|bits| {
        let mut w = iv.sigma.0;
        for (k, &i) in free.iter().enumerate() {
            if bits >> k & 1 == 1 {
                w |= 1 << i;
            }
        }
        c.words().iter().any(|x| x.0 == w)
    })
}

/// No induced cycle of length at least four, by subset enumeration.
pub fn brute_chordal(g: &RelGraph) -> bool {
    let verts: Vec<usize> = g.vertices().iter().collect();
    for bits in 0u64..1 << verts.len() {
        if bits.count_ones() < 4 {
            continue;
        }
        let sub: Vec<usize> = verts.iter().enumerate().filter(|(k, _)| bits >> k & 1 == 1).map(|(_, &v)| v).collect();
        let deg = |v: usize| sub.iter().filter(|&&u| u != v && g.has_edge(u, v)).count();
        if sub.iter().all(|&v| deg(v) == 2) && connected(g, &sub) {
            return false;
        }
    }
    true
}

fn connected(g: &RelGraph, sub: &[usize]) -> bool {
    let mut seen = vec![sub[0]];
    let mut stack = vec![sub[0]];
    while let Some(v) = stack.pop() {
        for &u in sub {
            if !seen.contains(&u) && g.has_edge(u, v) {
                seen.push(u);
                stack.push(u);
            }
        }
    }
    seen.len() == sub.len()
}

/// Some split of `s` into two chains with no comparabilities across, found
/// by trying every subset as one side.
pub fn exhaustive_split(p: &ContainmentPoset, s: NeuronSet) -> bool {
    let members: Vec<usize> = s.iter().collect();
    let chain = |c: &[usize]| c.iter().all(|&i| c.iter().all(|&j| i == j || p.comparable(i, j)));
    (0u64..1 << members.len()).any(|bits| {
        let (a, b): (Vec<usize>, Vec<usize>) = members.iter().partition(|&&i| bits >> members.iter().position(|&m| m == i).unwrap() & 1 == 1);
        chain(&a) && chain(&b) && a.iter().all(|&i| b.iter().all(|&j| !p.comparable(i, j)))
    })
}

/// Applies a permutation of neuron indices to every word.
pub fn relabel(c: &Code, perm: &[usize]) -> Code {
    let words = c.words().iter().map(|w| w.iter().map(|i| perm[i]).collect::<NeuronSet>());
    Code::new(c.n(), words).unwrap()
}
