//! Realizes many generated codes and reports any that fail a check.
//!
//! `cargo run --release --example sweep -- [count] [max_n] [max_k] [extra_dim]`

use pierced::geometry::{realize, well_formed_check, GeometryConfig, DEFAULT_TOLERANCE};
use pierced::ideal::canonical_form;
use pierced::piercing::{analyze, random_pierced_code, RecognizeOptions};
use pierced::split::{is_splittable, min_realization_dim};
use pierced::verify::{monte_carlo_code_check, pairwise_relation_check, witness_check};

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("numeric argument"));
    let count = args.next().unwrap_or(500);
    let max_n = args.next().unwrap_or(10).max(2);
    let max_k = args.next().unwrap_or(3).max(1);
    let extra = args.next().unwrap_or(0);
    let mut failures = 0;
    for seed in 0..count as u64 {
        let n = 2 + seed as usize % (max_n - 1);
        let (c, _) = random_pierced_code(n, 1 + seed as usize % max_k, seed).unwrap();
        let a = analyze(&c, RecognizeOptions::default()).unwrap();
        let order = a.verdict.order().unwrap();
        let cert = is_splittable(a.graph.as_ref().unwrap(), a.poset.as_ref().unwrap(), &order.cliques);
        let dim = min_realization_dim(&a.verdict, &cert).unwrap() + extra;
        let cfg = GeometryConfig { seed, ..GeometryConfig::default() };
        let problem = match realize(&c, order, dim, Some(&cert), &cfg) {
            Err(e) => Some(e.to_string()),
            Ok((r, reg)) => {
                let wf = well_formed_check(&r, DEFAULT_TOLERANCE).ok;
                let wit = witness_check(&r, &c, &reg).ok;
                let pair = pairwise_relation_check(&r, &canonical_form(&c).unwrap()).ok;
                let mc = monte_carlo_code_check(&r, &c, 20_000, seed).violations.len();
                (!(wf && wit && pair && mc == 0)).then(|| format!("well-formed={wf} witnesses={wit} pairwise={pair} violations={mc}"))
            }
        };
        if let Some(p) = problem {
            failures += 1;
            println!("seed {seed} n={n} dim={dim} {c}: {p}");
        }
    }
    println!("{failures} failures of {count}");
}
