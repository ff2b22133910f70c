mod common;

use common::data;
use pierced::cli::{run, EXIT_INPUT, EXIT_NOT_PIERCED, EXIT_OK, EXIT_VERIFY_FAILED};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn pierced(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("pierced").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn analyze_reports_structures() {
    let r = pierced(&["analyze", &path("nine.code")]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.contains("x9*(1-x5)"));
    assert!(r.out.contains("minimal k: 2"));
    assert!(r.out.contains("minimal dimension: 2"));
    assert!(r.err.starts_with("config: seed=0 tolerance=1e-9"));
}

#[test]
fn failure_verdicts_exit_two() {
    let c = pierced(&["analyze", &path("code_c.code")]);
    assert_eq!(c.code, EXIT_NOT_PIERCED);
    assert!(c.out.contains("not inductively pierced: CF contains x1*x2*x3 (degree 3)"));
    let d = pierced(&["piercing-order", &path("code_d.code")]);
    assert_eq!(d.code, EXIT_NOT_PIERCED);
    assert!(d.err.contains("G(C) is a 4-cycle (not chordal)"), "{}", d.err);
}

#[test]
fn structured_piercing_order() {
    let r = pierced(&["--format", "structured", "piercing-order", &path("ex11.code")]);
    assert_eq!(r.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["k"], 1);
    assert_eq!(v["removal_order"].as_array().unwrap().len(), 5);
}

#[test]
fn min_dim_explains_partition() {
    let r = pierced(&["min-dim", "--explain", &path("nine.code")]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("{5,9}") && r.out.contains("{7}"), "{}", r.out);
    let r = pierced(&["min-dim", &path("five.code")]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains('3'));
}

#[test]
fn input_errors_exit_four() {
    let r = pierced(&["analyze", "/nonexistent/code.txt"]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("/nonexistent/code.txt"));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.code");
    std::fs::write(&bad, "n=2\n12,1,;").unwrap();
    let r = pierced(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    std::fs::write(&bad, "n=2\n12,1").unwrap();
    assert_eq!(pierced(&["analyze", bad.to_str().unwrap()]).code, EXIT_INPUT);
    assert_eq!(pierced(&["realize", &path("five.code"), "--dim", "2"]).code, EXIT_INPUT);
    assert_eq!(pierced(&["no-such-command"]).code, EXIT_INPUT);
}

#[test]
fn realize_verify_render_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nine.json");
    let out = out.to_str().unwrap();
    let r = pierced(&["--samples", "20000", "realize", &path("nine.code"), "-o", out]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let v = pierced(&["--samples", "20000", "verify", out, &path("nine.code")]);
    assert_eq!(v.code, EXIT_OK, "{}", v.err);
    let wrong = pierced(&["--samples", "20000", "verify", out, &path("ex11.code")]);
    assert_ne!(wrong.code, EXIT_OK);

    let svg = dir.path().join("nine.svg");
    let r = pierced(&["render", out, "-o", svg.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let text = std::fs::read_to_string(svg).unwrap();
    assert!(text.starts_with("<svg") && text.matches("<circle").count() == 9);
}

#[test]
fn verify_detects_a_grown_ball() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ex11.json");
    let r = pierced(&["realize", &path("ex11.code"), "-o", out.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let balls = doc["balls"].as_array_mut().unwrap();
    for b in balls.iter_mut() {
        let radius = b["radius"].as_f64().unwrap();
        b["radius"] = (radius * 1e3).into();
    }
    std::fs::write(&out, serde_json::to_string(&doc).unwrap()).unwrap();
    let v = pierced(&["verify", out.to_str().unwrap(), &path("ex11.code")]);
    assert_eq!(v.code, EXIT_VERIFY_FAILED, "{}", v.err);
}

#[test]
fn runs_are_deterministic() {
    let a = pierced(&["--seed", "9", "random-pierced", "--n", "7", "--k", "2"]);
    let b = pierced(&["--seed", "9", "random-pierced", "--n", "7", "--k", "2"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.out, b.out);
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("gen.code");
    std::fs::write(&code, &a.out).unwrap();
    let x = pierced(&["--samples", "5000", "realize", code.to_str().unwrap()]);
    let y = pierced(&["--samples", "5000", "realize", code.to_str().unwrap()]);
    assert_eq!(x.code, EXIT_OK, "{}", x.err);
    assert_eq!(x.out, y.out);
}

#[test]
fn config_file_sets_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "seed = 41\nsamples = 1234\n").unwrap();
    let r = pierced(&["--config", cfg.to_str().unwrap(), "analyze", &path("ex11.code")]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.err.contains("seed=41") && r.err.contains("samples=1234"), "{}", r.err);
    let r = pierced(&["--config", cfg.to_str().unwrap(), "--seed", "2", "analyze", &path("ex11.code")]);
    assert!(r.err.contains("seed=2"));
    std::fs::write(&cfg, "sead = 1\n").unwrap();
    assert_eq!(pierced(&["--config", cfg.to_str().unwrap(), "analyze", &path("ex11.code")]).code, EXIT_INPUT);
}
