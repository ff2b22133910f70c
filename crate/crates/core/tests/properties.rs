mod common;

use common::*;
use pierced::geometry::{realize, GeometryConfig};
use pierced::ideal::{canonical_form, canonical_form_oracle, degree_bounded_scan, PseudoMonomial};
use pierced::piercing::{check_replay, compute_piercing_order, random_pierced_code, verify_abstract_piercing};
use pierced::split::{attaching_set, min_realization_dim};
use pierced::structure::{build_graph, build_poset, chordality, find_elimination_neuron};
use pierced::{Code, IntervalRef, NeuronSet, RelGraph};
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn arb_code(max_n: usize) -> impl Strategy<Value = Code> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(0u64..1 << n, 0..(1usize << n)).prop_map(move |ws| {
            Code::new(n, ws.into_iter().chain([0]).map(NeuronSet)).unwrap()
        })
    })
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = RelGraph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
            let edges: Vec<(usize, usize)> = pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e).collect();
            RelGraph::from_edges(n, &edges)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonical_form_matches_oracle(c in arb_code(6)) {
        prop_assert_eq!(canonical_form(&c).unwrap(), canonical_form_oracle(&c).unwrap());
    }

    #[test]
    fn codeword_criterion(c in arb_code(6)) {
        let cf = canonical_form(&c).unwrap();
        for w in NeuronSet::full(c.n()).subsets() {
            prop_assert_eq!(cf.admits(w), c.contains(w));
        }
    }

    #[test]
    fn full_degree_scan_is_the_canonical_form(c in arb_code(6)) {
        prop_assert_eq!(degree_bounded_scan(&c, c.n()), canonical_form(&c).unwrap().elements);
    }

    #[test]
    fn deletion_commutes(c in arb_code(6), i in 0usize..6, j in 0usize..6) {
        let n = c.n();
        let (i, j) = (i % n, j % n);
        prop_assume!(i != j);
        let once = c.delete_neurons(NeuronSet::singleton(i));
        let j_after = if j > i { j - 1 } else { j };
        let twice = once.delete_neurons(NeuronSet::singleton(j_after));
        prop_assert_eq!(twice, c.delete_neurons(NeuronSet::from_indices([i, j])));
    }

    #[test]
    fn canonicalize_is_idempotent(c in arb_code(6)) {
        let (once, _) = c.canonicalize().unwrap();
        let (twice, map) = once.canonicalize().unwrap();
        prop_assert!(map.is_identity());
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn interval_contained_matches_naive(c in arb_code(6), a in any::<u64>(), b in any::<u64>()) {
        let tau = NeuronSet(a & NeuronSet::full(c.n()).0);
        let sigma = NeuronSet(b & tau.0);
        let iv = IntervalRef::new(sigma, tau);
        prop_assert_eq!(c.interval_contained(&iv), naive_interval_contained(&c, &iv));
    }

    #[test]
    fn deletion_lemma(c in arb_code(6), i in 0usize..6) {
        let i = i % c.n();
        let del = NeuronSet::singleton(i);
        prop_assert_eq!(canonical_form(&c.delete_neurons(del)).unwrap(), canonical_form(&c).unwrap().delete_neurons(del));
    }

    #[test]
    fn chordality_matches_brute_force(g in arb_graph(8)) {
        let res = chordality(&g);
        prop_assert_eq!(res.chordal, brute_chordal(&g));
    }

    #[test]
    fn greedy_safety(c in arb_code(5)) {
        let (c, _) = c.canonicalize().unwrap();
        prop_assume!(c.n() >= 2);
        let pierced = compute_piercing_order(&c).unwrap().is_pierced();
        for i in 0..c.n() {
            let with_i: Vec<NeuronSet> = c.words().iter().filter(|w| w.contains(i)).map(|w| w.without(i)).collect();
            let sigma = with_i.iter().fold(NeuronSet::full(c.n()), |acc, &w| acc.intersection(w));
            let tau = with_i.iter().fold(NeuronSet::EMPTY, |acc, &w| acc.union(w));
            let iv = IntervalRef::new(sigma, tau);
            if verify_abstract_piercing(&c, i, &iv) {
                let (rest, _) = c.delete_neurons(NeuronSet::singleton(i)).canonicalize().unwrap();
                prop_assert_eq!(compute_piercing_order(&rest).unwrap().is_pierced(), pierced, "neuron {}", i + 1);
            }
        }
    }
}

fn generated(count: u64, max_n: usize, max_k: usize) -> impl Iterator<Item = (u64, Code)> {
    (0..count).map(move |seed| {
        let n = 1 + (seed as usize * 7 + 3) % max_n;
        let k = seed as usize % (max_k + 1);
        (seed, random_pierced_code(n, k, seed).unwrap().0)
    })
}

#[test]
fn generated_codes_are_pierced_and_replay() {
    for (seed, c) in generated(150, 9, 3) {
        let verdict = compute_piercing_order(&c).unwrap();
        let order = verdict.order().unwrap_or_else(|| panic!("seed {seed}: {c} not pierced"));
        check_replay(order, &c).unwrap();
    }
}

#[test]
fn star_decomposition_every_step() {
    for (seed, c) in generated(120, 8, 3) {
        let verdict = compute_piercing_order(&c).unwrap();
        let mut removed = NeuronSet::EMPTY;
        for step in &verdict.order().unwrap().steps {
            let i = step.neuron;
            let current = c.strip(removed);
            assert!(verify_abstract_piercing(&current, i, &step.interval()), "seed {seed} step {step}");
            let live = NeuronSet::full(c.n()).difference(removed);
            let mut expected = live_cf(&c, removed.with(i)).elements;
            expected.extend(live.difference(step.tau).without(i).iter().map(|j| PseudoMonomial::product(i, j)));
            expected.extend(step.sigma.iter().map(|j| PseudoMonomial::mixed(i, j)));
            assert_eq!(live_cf(&c, removed).elements, expected, "seed {seed} step {step}");
            removed = removed.with(i);
        }
    }
}

#[test]
fn neighborhood_monotonicity_and_elimination_neuron() {
    for (seed, c) in generated(120, 9, 3) {
        let cf = canonical_form(&c).unwrap();
        let (g, p) = (build_graph(&cf).unwrap(), build_poset(&cf).unwrap());
        assert!(find_elimination_neuron(&g, &p).is_some(), "seed {seed}");
        for (j, i) in p.relations() {
            assert!(p.lt(j, i));
            assert!(g.neighbors(j).is_subset(p.ideal(i).union(g.neighbors(i))), "seed {seed}: {} < {}", j + 1, i + 1);
            for l in p.elements().iter().filter(|&l| p.lt(i, l)) {
                assert!(p.lt(j, l), "seed {seed}: transitivity");
            }
        }
    }
}

#[test]
fn splittability_matches_exhaustive_search() {
    for (seed, c) in generated(200, 10, 3) {
        let (a, cert) = full_analysis(&c);
        let (g, p) = (a.graph.as_ref().unwrap(), a.poset.as_ref().unwrap());
        let cert = cert.unwrap();
        for e in &cert.entries {
            assert_eq!(attaching_set(g, e.sigma).unwrap(), e.attaching);
            assert!(e.attaching.iter().all(|x| g.neighbors(x).intersection(e.attaching).is_empty()), "seed {seed}");
            assert_eq!(e.partition.is_some(), exhaustive_split(p, e.attaching), "seed {seed} clique {}", e.sigma);
            if let Some((pa, pb)) = e.partition {
                assert_eq!(pa.union(pb), e.attaching);
                assert!(pa.intersection(pb).is_empty());
                assert!(pa.iter().all(|x| pa.iter().all(|y| x == y || p.comparable(x, y))));
                assert!(pb.iter().all(|x| pb.iter().all(|y| x == y || p.comparable(x, y))));
                assert!(pa.iter().all(|x| pb.iter().all(|y| !p.comparable(x, y))));
            }
        }
    }
}

#[test]
fn relabeling_preserves_verdicts() {
    for (seed, c) in generated(100, 8, 3) {
        let mut perm: Vec<usize> = (0..c.n()).collect();
        perm.shuffle(&mut rng(seed ^ 0xABCD));
        let d = relabel(&c, &perm);
        let (a, ca) = full_analysis(&c);
        let (b, cb) = full_analysis(&d);
        assert_eq!(a.verdict.k(), b.verdict.k(), "seed {seed}");
        let (ca, cb) = (ca.unwrap(), cb.unwrap());
        assert_eq!(ca.splittable, cb.splittable, "seed {seed}");
        assert_eq!(min_realization_dim(&a.verdict, &ca).unwrap(), min_realization_dim(&b.verdict, &cb).unwrap());
    }
}

#[test]
fn realization_is_deterministic() {
    let c = fixture("nine.code");
    let (a, cert) = full_analysis(&c);
    let order = a.verdict.order().unwrap();
    let cfg = GeometryConfig { seed: 5, ..GeometryConfig::default() };
    let (r1, w1) = realize(&c, order, 2, cert.as_ref(), &cfg).unwrap();
    let (r2, w2) = realize(&c, order, 2, cert.as_ref(), &cfg).unwrap();
    for (x, y) in r1.balls.iter().zip(&r2.balls) {
        assert_eq!(x.radius.to_bits(), y.radius.to_bits());
        assert!(x.center.iter().zip(&y.center).all(|(u, v)| u.to_bits() == v.to_bits()));
    }
    assert_eq!(w1, w2);
}

#[test]
fn registry_is_complete_one_dimension_up() {
    for (seed, c) in generated(30, 6, 2) {
        let (a, cert) = full_analysis(&c);
        let k = a.verdict.k().unwrap();
        let order = a.verdict.order().unwrap();
        let cfg = GeometryConfig { seed, ..GeometryConfig::default() };
        let (_, reg) = realize(&c, order, k + 1, cert.as_ref(), &cfg).unwrap();
        for &tau in c.words() {
            for sigma in tau.subsets() {
                let iv = IntervalRef::new(sigma, tau);
                if iv.rank() <= k && c.interval_contained(&iv) {
                    assert!(reg.get(&iv).is_some(), "seed {seed}: {c} lacks a witness for {iv}");
                }
            }
        }
    }
}

#[test]
fn higher_dimensional_regressions() {
    let cases = [
        ("n=8\n134,135,167,678,12,13,14,15,16,17,67,68,78,1,2,3,6,7,8,;", 4, 83),
        ("n=7\n1234,1256,123,124,125,126,156,234,256,12,15,16,17,23,24,25,26,56,1,2,5,6,7,;", 3, 278),
    ];
    for (text, dim, seed) in cases {
        let c = Code::parse(text).unwrap();
        let (a, cert) = full_analysis(&c);
        let cfg = GeometryConfig { seed, ..GeometryConfig::default() };
        let (r, reg) = realize(&c, a.verdict.order().unwrap(), dim, cert.as_ref(), &cfg).unwrap();
        assert!(pierced::verify::witness_check(&r, &c, &reg).ok);
        assert!(pierced::geometry::well_formed_check(&r, pierced::geometry::DEFAULT_TOLERANCE).ok);
        assert!(pierced::verify::monte_carlo_code_check(&r, &c, 20_000, seed).violations.is_empty());
    }
}
