//! The `pierced` command-line interface.
//!
//! Exit codes: 0 success, 1 internal error, 2 code not inductively pierced,
//! 3 verification failure, 4 input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::code::Code;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::geometry::{realize, well_formed_check, Realization, WitnessRegistry};
use crate::ideal::canonical_form_capped;
use crate::io::{read_code, read_realization, realization_to_json};
use crate::piercing::{analyze, random_pierced_code, Analysis, RecognitionVerdict, RecognizeOptions};
use crate::split::{is_splittable, min_realization_dim, SplitCertificate};
use crate::svg::render_svg;
use crate::verify::{monte_carlo_code_check, pairwise_relation_check, sampled_registry, witness_check};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_NOT_PIERCED: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "pierced", version, about = "Recognize and realize inductively pierced codes")]
pub struct Cli {
    /// Random seed (overrides the config file).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Monte Carlo samples per verification.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// TOML config file.
    #[arg(long, global = true, env = "PIERCED_CONFIG")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Canonical form, structures, verdict, minimal k and dimension.
    Analyze { code: PathBuf },
    /// Print the piercing order, first removed neuron first.
    PiercingOrder { code: PathBuf },
    /// Minimal dimension of a well-formed realization by open balls.
    MinDim {
        code: PathBuf,
        /// Show attaching sets and partitions.
        #[arg(long)]
        explain: bool,
    },
    /// Build and verify a realization.
    Realize {
        code: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a realization against a code.
    Verify { realization: PathBuf, code: PathBuf },
    /// Draw a planar realization as SVG.
    Render {
        realization: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate a random inductively pierced code.
    RandomPierced {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let cfg = match effective_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: config: {e}");
            return EXIT_INPUT;
        }
    };
    let _ = writeln!(err, "config: {cfg}");
    let mut ctx = Ctx { cfg, format: cli.format, out, err };
    match ctx.dispatch(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::NeuronOutOfRange { .. }
        | Error::TooManyNeurons { .. }
        | Error::MissingEmptyCodeword
        | Error::LimitExceeded { .. }
        | Error::DimensionTooSmall { .. }
        | Error::UnsupportedDimension(_)
        | Error::Io(_) => EXIT_INPUT,
        Error::NotPierced | Error::NotDegreeTwo { .. } => EXIT_NOT_PIERCED,
        _ => EXIT_INTERNAL,
    }
}

fn effective_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(s) = cli.samples {
        cfg.samples = s;
    }
    if let Command::Realize { output: Some(o), .. } | Command::Render { output: Some(o), .. } = &cli.command {
        cfg.output = Some(o.clone());
    }
    Ok(cfg)
}

struct Ctx<'a> {
    cfg: RunConfig,
    format: Format,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Everything the analysis commands report.
struct Report {
    code: Code,
    analysis: Analysis,
    split: Option<SplitCertificate>,
    min_dim: Option<usize>,
}

impl Ctx<'_> {
    fn dispatch(&mut self, cmd: &Command) -> Result<i32> {
        match cmd {
            Command::Analyze { code } => self.analyze(code),
            Command::PiercingOrder { code } => self.piercing_order(code),
            Command::MinDim { code, explain } => self.min_dim(code, *explain),
            Command::Realize { code, dim, output } => self.realize(code, *dim, output.as_deref()),
            Command::Verify { realization, code } => self.verify(realization, code),
            Command::Render { realization, output } => self.render(realization, output.as_deref()),
            Command::RandomPierced { n, k } => self.random(*n, *k),
        }
    }

    fn load(&mut self, path: &Path) -> Result<Code> {
        let raw = read_code(path)?;
        let (code, map) = raw.canonicalize()?;
        if !map.is_identity() {
            writeln!(self.err, "note: code canonicalized to n={} (unused or duplicate neurons removed)", code.n())?;
        }
        Ok(code)
    }

    fn report(&mut self, path: &Path) -> Result<Report> {
        let code = self.load(path)?;
        let opts = RecognizeOptions { max_neurons: self.cfg.max_neurons, ..Default::default() };
        let analysis = analyze(&code, opts)?;
        let (split, min_dim) = match &analysis.verdict {
            RecognitionVerdict::Pierced { order, .. } => {
                let cert = is_splittable(analysis.graph.as_ref().unwrap(), analysis.poset.as_ref().unwrap(), &order.cliques);
                let d = min_realization_dim(&analysis.verdict, &cert)?;
                (Some(cert), Some(d))
            }
            _ => (None, None),
        };
        Ok(Report { code, analysis, split, min_dim })
    }

    fn emit(&mut self, v: &Value) -> Result<()> {
        writeln!(self.out, "{}", serde_json::to_string_pretty(v).expect("json"))?;
        Ok(())
    }

    fn analyze(&mut self, path: &Path) -> Result<i32> {
        let rep = self.report(path)?;
        let a = &rep.analysis;
        if self.format == Format::Structured {
            let v = json!({
                "n": rep.code.n(),
                "codewords": rep.code.display_order().iter().map(|w| w.labels()).collect::<Vec<_>>(),
                "canonical_form": a.cf.to_strings(),
                "degree_two": a.cf.is_degree_two(),
                "edges": a.graph.as_ref().map(|g| labeled_pairs(&g.edges())),
                "covers": a.poset.as_ref().map(|p| labeled_pairs(&p.covers())),
                "verdict": verdict_json(a),
                "k": a.verdict.k(),
                "splittable": rep.split.as_ref().map(|s| s.splittable),
                "min_dim": rep.min_dim,
            });
            self.emit(&v)?;
        } else {
            writeln!(self.out, "code: {} (n={}, {} codewords)", rep.code, rep.code.n(), rep.code.len())?;
            writeln!(self.out, "canonical form: {}", join_or_none(&a.cf.to_strings()))?;
            writeln!(self.out, "degree two: {}", yes_no(a.cf.is_degree_two()))?;
            if let (Some(g), Some(p)) = (&a.graph, &a.poset) {
                let edges: Vec<String> = g.edges().iter().map(|(i, j)| format!("{}-{}", i + 1, j + 1)).collect();
                let covers: Vec<String> = p.covers().iter().map(|(i, j)| format!("{}<{}", i + 1, j + 1)).collect();
                writeln!(self.out, "G(C) edges: {}", join_or_none(&edges))?;
                writeln!(self.out, "P(C) covers: {}", join_or_none(&covers))?;
                writeln!(self.out, "chordal: {}", yes_no(a.verdict != RecognitionVerdict::NotChordal))?;
            }
            match &a.verdict {
                RecognitionVerdict::Pierced { order, k } => {
                    let seq: Vec<String> = order.removal_order().iter().map(|i| (i + 1).to_string()).collect();
                    writeln!(self.out, "inductively pierced: yes")?;
                    writeln!(self.out, "removal order: {}", seq.join(", "))?;
                    writeln!(self.out, "minimal k: {k}")?;
                    writeln!(self.out, "splittable: {}", yes_no(rep.split.as_ref().unwrap().splittable))?;
                    writeln!(self.out, "minimal dimension: {}", rep.min_dim.unwrap())?;
                }
                _ => writeln!(self.out, "{}", failure_message(a))?,
            }
        }
        Ok(if a.verdict.is_pierced() { EXIT_OK } else { EXIT_NOT_PIERCED })
    }

    fn piercing_order(&mut self, path: &Path) -> Result<i32> {
        let rep = self.report(path)?;
        let Some(order) = rep.analysis.verdict.order() else {
            writeln!(self.err, "{}", failure_message(&rep.analysis))?;
            return Ok(EXIT_NOT_PIERCED);
        };
        if self.format == Format::Structured {
            let steps: Vec<Value> = order
                .steps
                .iter()
                .map(|s| json!({"neuron": s.neuron + 1, "sigma": s.sigma.labels(), "tau": s.tau.labels(), "rank": s.rank}))
                .collect();
            self.emit(&json!({"removal_order": steps, "k": order.max_rank()}))?;
        } else {
            for s in &order.steps {
                writeln!(self.out, "{s}")?;
            }
        }
        Ok(EXIT_OK)
    }

    fn min_dim(&mut self, path: &Path, explain: bool) -> Result<i32> {
        let rep = self.report(path)?;
        let (Some(dim), Some(cert)) = (rep.min_dim, &rep.split) else {
            writeln!(self.err, "{}", failure_message(&rep.analysis))?;
            return Ok(EXIT_NOT_PIERCED);
        };
        if self.format == Format::Structured {
            let entries: Vec<Value> = cert
                .entries
                .iter()
                .map(|e| {
                    json!({
                        "clique": e.sigma.labels(),
                        "attaching": e.attaching.labels(),
                        "partition": e.partition.map(|(a, b)| [a.labels(), b.labels()]),
                    })
                })
                .collect();
            let mut v = json!({"min_dim": dim, "k": cert.k, "splittable": cert.splittable});
            if explain {
                v["cliques"] = Value::Array(entries);
            }
            self.emit(&v)?;
        } else {
            writeln!(self.out, "{dim}")?;
            if explain {
                writeln!(self.out, "k={} splittable={}", cert.k, yes_no(cert.splittable))?;
                for e in &cert.entries {
                    let part = match e.partition {
                        Some((a, b)) => format!("{a} + {b}"),
                        None => "no split into two incomparable chains".to_string(),
                    };
                    writeln!(self.out, "clique {}: attaching {} partition {}", e.sigma, e.attaching, part)?;
                }
            }
        }
        Ok(EXIT_OK)
    }

    fn realize(&mut self, path: &Path, dim: Option<usize>, output: Option<&Path>) -> Result<i32> {
        let rep = self.report(path)?;
        let (Some(min), Some(cert)) = (rep.min_dim, &rep.split) else {
            writeln!(self.err, "{}", failure_message(&rep.analysis))?;
            return Ok(EXIT_NOT_PIERCED);
        };
        let order = rep.analysis.verdict.order().unwrap();
        let dim = dim.unwrap_or(min);
        let (r, reg) = realize(&rep.code, order, dim, Some(cert), &self.cfg.geometry())?;
        let doc = realization_to_json(&r, Some(&reg));
        match output {
            Some(p) => std::fs::write(p, &doc)?,
            None => self.out.write_all(doc.as_bytes())?,
        }
        self.check(&r, &rep.code, Some(&reg))
    }

    fn verify(&mut self, realization: &Path, code: &Path) -> Result<i32> {
        let (r, reg) = read_realization(realization)?;
        let c = self.load(code)?;
        if r.n() != c.n() {
            return Err(Error::Parse { line: 0, msg: format!("realization has {} balls but the code has {} neurons", r.n(), c.n()) });
        }
        let code = self.check(&r, &c, reg.as_ref())?;
        Ok(code)
    }

    /// Runs the four checks, reports on stderr (text) or stdout (structured
    /// verify), and maps failure to exit code 3.
    fn check(&mut self, r: &Realization, c: &Code, reg: Option<&WitnessRegistry>) -> Result<i32> {
        let tol = self.cfg.tolerance;
        let sampled;
        let reg = match reg {
            Some(reg) => reg,
            None => {
                sampled = sampled_registry(r, self.cfg.samples, self.cfg.seed);
                &sampled
            }
        };
        let wf = well_formed_check(r, tol);
        let wit = witness_check(r, c, reg);
        let mc = monte_carlo_code_check(r, c, self.cfg.samples, self.cfg.seed);
        let rel = match canonical_form_capped(c, self.cfg.max_neurons) {
            Ok(cf) if cf.is_degree_two() => Some(pairwise_relation_check(r, &cf)),
            Ok(_) => None,
            Err(e) => return Err(e),
        };
        let ok = wf.ok && wit.ok && mc.ok && rel.as_ref().is_none_or(|x| x.ok);
        if self.format == Format::Structured {
            let v = json!({
                "ok": ok,
                "well_formed": wf,
                "witnesses": {"ok": wit.ok, "witnessed": wit.witnessed, "missing": wit.missing.iter().map(|w| w.labels()).collect::<Vec<_>>()},
                "monte_carlo": {
                    "ok": mc.ok,
                    "samples": mc.samples,
                    "discarded": mc.discarded,
                    "violations": mc.violations.iter().map(|w| w.labels()).collect::<Vec<_>>(),
                    "coverage": mc.coverage,
                },
                "pairwise": rel,
            });
            writeln!(self.err, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
        } else {
            writeln!(self.err, "well-formed: {}", pass_fail(wf.ok))?;
            for i in &wf.issues {
                writeln!(self.err, "  {i}")?;
            }
            writeln!(self.err, "witnesses: {} ({}/{} codewords)", pass_fail(wit.ok), wit.witnessed, c.len())?;
            for w in &wit.missing {
                writeln!(self.err, "  no witness for {w}")?;
            }
            writeln!(
                self.err,
                "monte carlo: {} ({} samples, {} violations, coverage {:.3})",
                pass_fail(mc.ok),
                mc.samples,
                mc.violations.len(),
                mc.coverage
            )?;
            if mc.coverage < 1.0 {
                writeln!(self.err, "  warning: some codewords were not sampled (small atoms)")?;
            }
            match &rel {
                Some(rel) => {
                    writeln!(self.err, "pairwise relations: {}", pass_fail(rel.ok))?;
                    for f in &rel.failures {
                        writeln!(self.err, "  {f}")?;
                    }
                }
                None => writeln!(self.err, "pairwise relations: skipped (code is not degree two)")?,
            }
        }
        Ok(if ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
    }

    fn render(&mut self, realization: &Path, output: Option<&Path>) -> Result<i32> {
        let (r, _) = read_realization(realization)?;
        let svg = render_svg(&r)?;
        match output {
            Some(p) => std::fs::write(p, svg)?,
            None => self.out.write_all(svg.as_bytes())?,
        }
        Ok(EXIT_OK)
    }

    fn random(&mut self, n: usize, k: usize) -> Result<i32> {
        if n == 0 || n > crate::set::MAX_NEURONS {
            return Err(Error::TooManyNeurons { n, max: crate::set::MAX_NEURONS });
        }
        let (code, _) = random_pierced_code(n, k, self.cfg.seed)?;
        if self.format == Format::Structured {
            writeln!(self.out, "{}", code.to_json())?;
        } else {
            write!(self.out, "{}", code.to_text())?;
        }
        Ok(EXIT_OK)
    }
}

fn failure_message(a: &Analysis) -> String {
    match &a.verdict {
        RecognitionVerdict::NotDegreeTwo { witness } => {
            format!("not inductively pierced: CF contains {witness} (degree {})", witness.degree())
        }
        RecognitionVerdict::NotChordal => match &a.graph {
            Some(g) if g.is_cycle() => {
                format!("not inductively pierced: G(C) is a {}-cycle (not chordal)", g.vertices().len())
            }
            _ => "not inductively pierced: G(C) is not chordal".to_string(),
        },
        RecognitionVerdict::Pierced { .. } => "inductively pierced".to_string(),
    }
}

fn verdict_json(a: &Analysis) -> Value {
    match &a.verdict {
        RecognitionVerdict::Pierced { order, k } => json!({
            "pierced": true,
            "k": k,
            "removal_order": order.removal_order().iter().map(|i| i + 1).collect::<Vec<_>>(),
        }),
        _ => json!({"pierced": false, "reason": failure_message(a)}),
    }
}

fn labeled_pairs(pairs: &[(usize, usize)]) -> Vec<[usize; 2]> {
    pairs.iter().map(|&(i, j)| [i + 1, j + 1]).collect()
}

fn join_or_none(items: &[String]) -> String {
    if items.is_empty() {
        "(none)".to_string()
    } else {
        items.join(", ")
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pass_fail(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}
