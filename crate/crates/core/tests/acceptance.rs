//! Acceptance run: one line per criterion, nonzero exit if any fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::*;
use pierced::geometry::{realize, well_formed_check, GeometryConfig, DEFAULT_TOLERANCE};
use pierced::ideal::{canonical_form, canonical_form_oracle, PseudoMonomial};
use pierced::piercing::{check_replay, random_pierced_code, verify_abstract_piercing};
use pierced::split::min_realization_dim;
use pierced::structure::is_perfect_elimination_order;
use pierced::verify::{monte_carlo_code_check, pairwise_relation_check, witness_check};
use pierced::{Code, Error, IntervalRef, NeuronSet, Realization, RecognitionVerdict, RelGraph, WitnessRegistry};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("canonical-form fixtures", Duration::from_secs(1), canonical_form_fixtures),
        ("oracle equivalence", Duration::from_secs(60), oracle_equivalence),
        ("recognition fixtures", Duration::from_secs(1), recognition_fixtures),
        ("structural properties", Duration::from_secs(300), structural_properties),
        ("realization correctness", Duration::from_secs(120), realization_correctness),
        ("dimension gate", Duration::from_secs(1), dimension_gate),
        ("randomized end-to-end", Duration::from_secs(600), randomized_end_to_end),
        ("mutation sensitivity", Duration::from_secs(10), mutation_sensitivity),
    ];
    let mut failed = 0;
    for (k, (name, budget, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget of {budget:?}")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!("criterion {}: {} {name} ({:.2?}): {detail}", k + 1, if ok { "PASS" } else { "FAIL" }, took);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

fn pm(pos: &[usize], neg: &[usize]) -> PseudoMonomial {
    PseudoMonomial::new(s(pos), s(neg))
}

fn canonical_form_fixtures() -> Outcome {
    let cases = [
        ("code_c.code", vec![pm(&[1, 2, 3], &[])]),
        ("code_d.code", vec![pm(&[1, 3], &[]), pm(&[2, 4], &[])]),
        ("full4.code", vec![]),
    ];
    for (name, expected) in cases {
        let got = canonical_form(&fixture(name)).map_err(|e| e.to_string())?.elements;
        let expected: BTreeSet<PseudoMonomial> = expected.into_iter().collect();
        ensure!(got == expected, "{name}: got {got:?}");
    }
    ensure!(Code::power_set(4) == fixture("full4.code"), "full4 fixture is not the power set");
    Ok("3 fixtures exact".into())
}

fn oracle_equivalence() -> Outcome {
    let mut r = rng(2024);
    for k in 0..200 {
        let n = 1 + k % 7;
        let c = random_code(n, 0.35, &mut r);
        let (fast, slow) = (canonical_form(&c).unwrap(), canonical_form_oracle(&c).unwrap());
        ensure!(fast == slow, "code {k} {c}: {fast:?} vs {slow:?}");
    }
    Ok("200 codes, n <= 7".into())
}

/// Checks that removing neurons in `removal` order is a sequence of
/// abstract piercings of rank at most `k`, with the interval of each
/// neuron read off the code directly.
fn valid_removal_sequence(c: &Code, removal: &[usize], k: usize) -> Result<(), String> {
    let mut removed = NeuronSet::EMPTY;
    for &i in removal {
        let current = c.strip(removed);
        let with_i: Vec<NeuronSet> = current.words().iter().filter(|w| w.contains(i)).map(|w| w.without(i)).collect();
        let sigma = with_i.iter().fold(NeuronSet::full(c.n()), |a, &w| a.intersection(w));
        let tau = with_i.iter().fold(NeuronSet::EMPTY, |a, &w| a.union(w));
        let iv = IntervalRef::new(sigma, tau);
        ensure!(iv.rank() <= k, "neuron {} has rank {}", i + 1, iv.rank());
        ensure!(verify_abstract_piercing(&current, i, &iv), "neuron {} is not a piercing", i + 1);
        removed = removed.with(i);
    }
    Ok(())
}

fn recognition_fixtures() -> Outcome {
    let nine = fixture("nine.code");
    let (a, cert) = full_analysis(&nine);
    ensure!(a.verdict.k() == Some(2), "nine: {:?}", a.verdict);
    let natural: Vec<usize> = (0..9).rev().collect();
    valid_removal_sequence(&nine, &natural, 2).map_err(|e| format!("nine, natural order: {e}"))?;
    let cert = cert.unwrap();
    ensure!(cert.splittable, "nine not splittable");
    let entry = cert.entry(s(&[3, 4])).ok_or("nine: no entry for {3,4}")?;
    ensure!(entry.partition == Some((s(&[5, 9]), s(&[7]))), "nine: partition {:?}", entry.partition);
    ensure!(min_realization_dim(&a.verdict, &cert) == Ok(2), "nine: min dim");

    let five = fixture("five.code");
    let (a, cert) = full_analysis(&five);
    let cert = cert.unwrap();
    ensure!(a.verdict.k() == Some(2), "five: {:?}", a.verdict);
    ensure!(!cert.splittable, "five splittable");
    let w = cert.witness().ok_or("five: no witness")?;
    ensure!(w.attaching == s(&[3, 4, 5]), "five: witness {}", w.attaching);
    let p = a.poset.as_ref().unwrap();
    ensure!(w.attaching.iter().all(|i| w.attaching.iter().all(|j| i == j || !p.comparable(i, j))), "five: not an antichain");
    ensure!(min_realization_dim(&a.verdict, &cert) == Ok(3), "five: min dim");

    let (c, _) = full_analysis(&fixture("code_c.code"));
    ensure!(matches!(c.verdict, RecognitionVerdict::NotDegreeTwo { .. }), "C: {:?}", c.verdict);
    let (d, _) = full_analysis(&fixture("code_d.code"));
    ensure!(d.verdict == RecognitionVerdict::NotChordal, "D: {:?}", d.verdict);
    Ok("nine, five, C, D as expected".into())
}

/// Largest clique by subset enumeration.
fn brute_max_clique(g: &RelGraph) -> usize {
    g.vertices().subsets().filter(|&c| g.is_clique(c)).map(NeuronSet::len).max().unwrap_or(0)
}

fn structural_properties() -> Outcome {
    let mut checked_cliques = 0;
    for seed in 0..500u64 {
        let n = 1 + (seed as usize * 7 + 3) % 10;
        let k_cap = seed as usize % 4;
        let (c, _) = random_pierced_code(n, k_cap, 1000 + seed).map_err(|e| e.to_string())?;
        let (a, _) = full_analysis(&c);
        let Some(order) = a.verdict.order() else {
            return Err(format!("seed {seed}: {c} not pierced"));
        };
        let (g, p) = (a.graph.as_ref().unwrap(), a.poset.as_ref().unwrap());
        let removal = order.removal_order();
        ensure!(is_perfect_elimination_order(g, &removal), "seed {seed}: removal order not a PEO");
        ensure!(p.is_linear_extension(&removal), "seed {seed}: removal order not a linear extension");
        let k = a.verdict.k().unwrap();
        ensure!(k <= k_cap, "seed {seed}: k={k} exceeds cap {k_cap}");
        ensure!(brute_max_clique(g) == k + 1, "seed {seed}: k={k} but max clique {}", brute_max_clique(g));

        let mut removed = NeuronSet::EMPTY;
        for step in &order.steps {
            let i = step.neuron;
            let live = NeuronSet::full(n).difference(removed);
            let mut expected = live_cf(&c, removed.with(i)).elements;
            expected.extend(live.difference(step.tau).without(i).iter().map(|j| PseudoMonomial::product(i, j)));
            expected.extend(step.sigma.iter().map(|j| PseudoMonomial::mixed(i, j)));
            ensure!(live_cf(&c, removed).elements == expected, "seed {seed}: decomposition fails at {step}");
            removed = removed.with(i);
        }

        for i in 0..n {
            let del = NeuronSet::singleton(i);
            ensure!(
                canonical_form(&c.delete_neurons(del)).unwrap() == a.cf.delete_neurons(del),
                "seed {seed}: deletion of {} changes the canonical form",
                i + 1
            );
        }

        check_replay(order, &c).map_err(|e| format!("seed {seed}: {e}"))?;

        for clique in g.vertices().subsets().filter(|q| q.len() == k + 1 && g.is_clique(*q)) {
            ensure!(c.is_full_power_set_on(clique), "seed {seed}: restriction to {clique} is not full");
            checked_cliques += 1;
        }
    }
    Ok(format!("500 codes, {checked_cliques} maximum cliques"))
}

struct Checks {
    well_formed: bool,
    witnesses: bool,
    pairwise: bool,
    violations: usize,
    coverage: f64,
}

impl Checks {
    fn ok(&self) -> bool {
        self.well_formed && self.witnesses && self.pairwise && self.violations == 0
    }
}

fn run_checks(r: &Realization, reg: &WitnessRegistry, c: &Code, samples: usize, seed: u64) -> Checks {
    let cf = canonical_form(c).unwrap();
    let mc = monte_carlo_code_check(r, c, samples, seed);
    Checks {
        well_formed: well_formed_check(r, DEFAULT_TOLERANCE).ok,
        witnesses: witness_check(r, c, reg).ok,
        pairwise: pairwise_relation_check(r, &cf).ok,
        violations: mc.violations.len(),
        coverage: mc.coverage,
    }
}

fn build(c: &Code, dim: usize, seed: u64) -> pierced::Result<(Realization, WitnessRegistry)> {
    let (a, cert) = full_analysis(c);
    let order = a.verdict.order().ok_or(Error::NotPierced)?;
    realize(c, order, dim, cert.as_ref(), &GeometryConfig { seed, ..GeometryConfig::default() })
}

fn realization_correctness() -> Outcome {
    let mut notes = Vec::new();
    for (name, dim) in [("nine.code", 2), ("five.code", 3), ("full4.code", 3), ("ex11.code", 1)] {
        let c = fixture(name);
        let (r, reg) = build(&c, dim, 0).map_err(|e| format!("{name}: {e}"))?;
        let ch = run_checks(&r, &reg, &c, 1_000_000, 1);
        ensure!(
            ch.ok(),
            "{name}: well-formed={} witnesses={} pairwise={} violations={}",
            ch.well_formed,
            ch.witnesses,
            ch.pairwise,
            ch.violations
        );
        notes.push(format!("{name} R^{dim} coverage {:.2}", ch.coverage));
    }
    Ok(notes.join(", "))
}

fn dimension_gate() -> Outcome {
    let mut refused = 0;
    let mut codes: Vec<(String, Code)> =
        ["nine.code", "five.code", "full4.code", "ex11.code"].iter().map(|n| (n.to_string(), fixture(n))).collect();
    codes.extend((0..10).map(|seed| (format!("generated {seed}"), random_pierced_code(6, 3, seed).unwrap().0)));
    for (name, c) in &codes {
        let (a, _) = full_analysis(c);
        let k = a.verdict.k().unwrap();
        if k == 0 {
            continue;
        }
        ensure!(matches!(build(c, k - 1, 0), Err(Error::DimensionTooSmall { .. })), "{name}: dim {} accepted", k - 1);
        refused += 1;
    }
    ensure!(matches!(build(&fixture("five.code"), 2, 0), Err(Error::DimensionTooSmall { .. })), "five: dim 2 accepted");
    Ok(format!("{} refusals", refused + 1))
}

fn randomized_end_to_end() -> Outcome {
    let mut dims = [0usize; 4];
    for seed in 0..100u64 {
        let n = 4 + seed as usize % 5;
        let (c, _) = random_pierced_code(n, 1 + seed as usize % 2, 5000 + seed).map_err(|e| e.to_string())?;
        let (a, cert) = full_analysis(&c);
        let dim = min_realization_dim(&a.verdict, cert.as_ref().unwrap()).map_err(|e| e.to_string())?;
        let (r, reg) = build(&c, dim, seed).map_err(|e| format!("seed {seed} {c} in R^{dim}: {e}"))?;
        let ch = run_checks(&r, &reg, &c, 100_000, seed);
        ensure!(
            ch.ok(),
            "seed {seed} {c} in R^{dim}: well-formed={} witnesses={} pairwise={} violations={}",
            ch.well_formed,
            ch.witnesses,
            ch.pairwise,
            ch.violations
        );
        dims[dim.min(3)] += 1;
    }
    Ok(format!("100 codes; in R^1: {}, R^2: {}, R^3: {}", dims[1], dims[2], dims[3]))
}

fn mutation_sensitivity() -> Outcome {
    let c = fixture("nine.code");
    let (r, reg) = build(&c, 2, 0).map_err(|e| e.to_string())?;
    let mut detected = Vec::new();
    for i in 0..r.n() {
        let mut m = r.clone();
        m.balls[i].radius *= 2.0;
        if !run_checks(&m, &reg, &c, 100_000, 3).ok() {
            detected.push(i + 1);
        }
    }
    ensure!(!detected.is_empty(), "no doubled radius was detected");
    Ok(format!("doubling detected for neurons {detected:?} of 9"))
}
