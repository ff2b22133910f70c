//! Independent checks that a realization realizes a code.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::{Code, IntervalRef};
use crate::geometry::{dist, interval_sign, sign_vector, Realization, Sign, WitnessRegistry, DEFAULT_TOLERANCE};
use crate::ideal::CanonicalForm;
use crate::set::NeuronSet;
use crate::structure::build_graph;

const CHUNK: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessReport {
    pub ok: bool,
    pub witnessed: usize,
    /// Codewords without a verified interior point.
    pub missing: Vec<NeuronSet>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub ok: bool,
    pub samples: usize,
    pub discarded: usize,
    /// Observed codewords with their counts.
    pub observed: BTreeMap<NeuronSet, usize>,
    /// Observed codewords that are not in the code.
    pub violations: Vec<NeuronSet>,
    /// `|observed ∩ C| / |C|`.
    pub coverage: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationReport {
    pub ok: bool,
    pub failures: Vec<String>,
}

/// Finds an interior point of every codeword's atom, from a rank-0 entry or
/// by nudging a registered point off its boundaries.
pub fn witness_check(r: &Realization, c: &Code, reg: &WitnessRegistry) -> WitnessReport {
    let mut missing = Vec::new();
    for &w in c.words() {
        if atom_witness(r, w, reg).is_none() {
            missing.push(w);
        }
    }
    WitnessReport { ok: missing.is_empty(), witnessed: c.len() - missing.len(), missing }
}

/// An interior point of the atom of `w`, if one can be derived from `reg`.
pub fn atom_witness(r: &Realization, w: NeuronSet, reg: &WitnessRegistry) -> Option<Vec<f64>> {
    let strict = |p: &[f64]| {
        sign_vector(&r.balls, p, DEFAULT_TOLERANCE).iter().enumerate().all(|(i, &s)| s == sign_for(w, i))
    };
    if let Some(p) = reg.get(&IntervalRef::point(w)) {
        if strict(p) {
            return Some(p.clone());
        }
    }
    let mut candidates: Vec<(&IntervalRef, &Vec<f64>)> = reg.iter().filter(|(iv, _)| iv.contains(w)).collect();
    candidates.sort_by_key(|(iv, _)| iv.rank());
    candidates.into_iter().find_map(|(iv, p)| nudge(r, iv, w, p).filter(|q| strict(q)))
}

fn sign_for(w: NeuronSet, i: usize) -> Sign {
    if w.contains(i) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Moves `p` off each boundary of `iv.free()` to the side `w` requires,
/// using the minimum-norm step for the linearized constraints.
fn nudge(r: &Realization, iv: &IntervalRef, w: NeuronSet, p: &[f64]) -> Option<Vec<f64>> {
    let zero: Vec<usize> = iv.free().iter().collect();
    let normals: Vec<Vec<f64>> = zero
        .iter()
        .map(|&i| {
            let b = &r.balls[i];
            p.iter().zip(&b.center).map(|(x, c)| (x - c) / b.radius).collect()
        })
        .collect();
    let rhs: Vec<f64> = zero.iter().map(|&i| if w.contains(i) { -1.0 } else { 1.0 }).collect();
    let gram: Vec<Vec<f64>> =
        normals.iter().map(|a| normals.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect()).collect();
    let coef = solve(gram, rhs)?;
    let mut dir = vec![0.0; p.len()];
    for (n, c) in normals.iter().zip(&coef) {
        for (d, x) in dir.iter_mut().zip(n) {
            *d += c * x;
        }
    }
    // Step scale: the nearest non-zero boundary bounds how far we may go.
    let room = (0..r.n())
        .filter(|i| !iv.free().contains(*i))
        .map(|i| {
            debug_assert!(interval_sign(iv, i) != Sign::Zero);
            r.balls[i].signed_distance(p).abs()
        })
        .fold(f64::INFINITY, f64::min)
        .min(zero.iter().map(|&i| r.balls[i].radius).fold(f64::INFINITY, f64::min));
    let dn = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
    if dn == 0.0 || !room.is_finite() {
        return (zero.is_empty()).then(|| p.to_vec());
    }
    let mut t = 0.5 * room / dn;
    for _ in 0..60 {
        let q: Vec<f64> = p.iter().zip(&dir).map(|(x, d)| x + t * d).collect();
        if zero.iter().all(|&i| sign_for(w, i) == crate::geometry::sign_vector(&r.balls[i..=i], &q, DEFAULT_TOLERANCE)[0]) {
            return Some(q);
        }
        t *= 0.5;
    }
    None
}

/// Gaussian elimination with partial pivoting on a tiny system.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            let (top, bottom) = a.split_at_mut(row);
            for (t, &p) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *t -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Uniform samples in the inflated bounding box; any observed codeword
/// outside `c` is a violation. Points within tolerance of a boundary are
/// discarded.
pub fn monte_carlo_code_check(r: &Realization, c: &Code, samples: usize, seed: u64) -> MonteCarloReport {
    let (lo, hi) = r.bounding_box();
    let chunks = samples.div_ceil(CHUNK);
    let partials: Vec<(BTreeMap<NeuronSet, usize>, usize)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let count = CHUNK.min(samples - chunk * CHUNK);
            let mut seen = BTreeMap::new();
            let mut discarded = 0;
            let mut p = vec![0.0; r.dim];
            for _ in 0..count {
                for (k, x) in p.iter_mut().enumerate() {
                    *x = if hi[k] > lo[k] { rng.gen_range(lo[k]..hi[k]) } else { lo[k] };
                }
                if r.balls.iter().any(|b| b.signed_distance(&p).abs() <= DEFAULT_TOLERANCE) {
                    discarded += 1;
                    continue;
                }
                *seen.entry(r.codeword_at(&p)).or_insert(0) += 1;
            }
            (seen, discarded)
        })
        .collect();
    let mut observed = BTreeMap::new();
    let mut discarded = 0;
    for (seen, d) in partials {
        discarded += d;
        for (w, k) in seen {
            *observed.entry(w).or_insert(0) += k;
        }
    }
    let violations: Vec<NeuronSet> = observed.keys().copied().filter(|&w| !c.contains(w)).collect();
    let hit = observed.keys().filter(|&&w| c.contains(w)).count();
    let coverage = if c.is_empty() { 1.0 } else { hit as f64 / c.len() as f64 };
    MonteCarloReport { ok: violations.is_empty(), samples, discarded, observed, violations, coverage }
}

/// Disjointness for `x_i x_j`, containment for `x_i(1 - x_j)`, and crossing
/// boundaries for every edge of the relationship graph.
pub fn pairwise_relation_check(r: &Realization, cf: &CanonicalForm) -> RelationReport {
    let mut failures = Vec::new();
    let gap = |i: usize, j: usize| dist(&r.balls[i].center, &r.balls[j].center);
    for f in cf.iter() {
        if f.neg.is_empty() && f.pos.len() == 2 {
            let (i, j) = two(f.pos);
            if gap(i, j) <= r.balls[i].radius + r.balls[j].radius {
                failures.push(format!("{} and {} should be disjoint ({f})", i + 1, j + 1));
            }
        } else if f.pos.len() == 1 && f.neg.len() == 1 {
            let (i, j) = (f.pos.min().unwrap(), f.neg.min().unwrap());
            if gap(i, j) + r.balls[i].radius >= r.balls[j].radius {
                failures.push(format!("{} should lie inside {} ({f})", i + 1, j + 1));
            }
        } else {
            failures.push(format!("{f} is not of degree two"));
        }
    }
    match build_graph(cf) {
        Ok(g) => {
            for (i, j) in g.edges() {
                let (a, b) = (&r.balls[i], &r.balls[j]);
                let d = gap(i, j);
                if !((a.radius - b.radius).abs() < d && d < a.radius + b.radius) {
                    failures.push(format!("boundaries of {} and {} should cross", i + 1, j + 1));
                }
            }
        }
        Err(e) => failures.push(e.to_string()),
    }
    RelationReport { ok: failures.is_empty(), failures }
}

fn two(s: NeuronSet) -> (usize, usize) {
    let mut it = s.iter();
    (it.next().unwrap(), it.next().unwrap())
}

/// Registry of sample points, one per observed codeword, for verifying a
/// realization that arrived without witnesses.
pub fn sampled_registry(r: &Realization, samples: usize, seed: u64) -> WitnessRegistry {
    let (lo, hi) = r.bounding_box();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reg = WitnessRegistry::default();
    let mut p = vec![0.0; r.dim];
    for _ in 0..samples {
        for (k, x) in p.iter_mut().enumerate() {
            *x = if hi[k] > lo[k] { rng.gen_range(lo[k]..hi[k]) } else { lo[k] };
        }
        if r.balls.iter().any(|b| b.signed_distance(&p).abs() <= DEFAULT_TOLERANCE) {
            continue;
        }
        let iv = IntervalRef::point(r.codeword_at(&p));
        reg.entries.entry(iv).or_insert_with(|| p.clone());
    }
    // Ball centers are often the only practical witnesses for tiny atoms.
    for b in &r.balls {
        let iv = IntervalRef::point(r.codeword_at(&b.center));
        reg.entries.entry(iv).or_insert_with(|| b.center.clone());
    }
    reg
}
