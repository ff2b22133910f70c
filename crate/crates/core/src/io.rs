//! Realization documents and code files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::code::{Code, IntervalRef};
use crate::error::{Error, Result};
use crate::geometry::{Ball, Realization, WitnessRegistry};
use crate::set::NeuronSet;

#[derive(Serialize, Deserialize)]
struct BallDoc {
    center: Vec<f64>,
    radius: f64,
}

/// A registered point; neuron labels are 1-based.
#[derive(Serialize, Deserialize)]
struct WitnessDoc {
    sigma: Vec<usize>,
    tau: Vec<usize>,
    point: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RealizationDoc {
    dim: usize,
    balls: Vec<BallDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witnesses: Option<Vec<WitnessDoc>>,
}

/// Pretty JSON. Floats use the shortest representation that reads back to
/// the same value.
pub fn realization_to_json(r: &Realization, reg: Option<&WitnessRegistry>) -> String {
    let doc = RealizationDoc {
        dim: r.dim,
        balls: r.balls.iter().map(|b| BallDoc { center: b.center.clone(), radius: b.radius }).collect(),
        witnesses: reg.map(|reg| {
            reg.iter()
                .map(|(iv, p)| WitnessDoc { sigma: iv.sigma.labels(), tau: iv.tau.labels(), point: p.clone() })
                .collect()
        }),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

pub fn realization_from_json(text: &str) -> Result<(Realization, Option<WitnessRegistry>)> {
    let doc: RealizationDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
    let n = doc.balls.len();
    let mut balls = Vec::with_capacity(n);
    for (i, b) in doc.balls.into_iter().enumerate() {
        if b.center.len() != doc.dim {
            return Err(Error::Parse { line: 0, msg: format!("ball {} has {} coordinates, expected {}", i + 1, b.center.len(), doc.dim) });
        }
        if !(b.radius > 0.0 && b.radius.is_finite()) || !b.center.iter().all(|x| x.is_finite()) {
            return Err(Error::Parse { line: 0, msg: format!("ball {} is not a proper ball", i + 1) });
        }
        balls.push(Ball::new(b.center, b.radius));
    }
    let reg = match doc.witnesses {
        None => None,
        Some(ws) => {
            let mut reg = WitnessRegistry::default();
            for w in ws {
                let label_set = |ls: &[usize]| -> Result<NeuronSet> {
                    if let Some(&bad) = ls.iter().find(|&&l| l == 0 || l > n) {
                        return Err(Error::NeuronOutOfRange { label: bad, n });
                    }
                    Ok(NeuronSet::from_labels(ls))
                };
                let (sigma, tau) = (label_set(&w.sigma)?, label_set(&w.tau)?);
                let iv = IntervalRef::try_new(sigma, tau)
                    .ok_or_else(|| Error::Parse { line: 0, msg: format!("witness interval [{sigma}, {tau}] is not an interval") })?;
                if w.point.len() != doc.dim {
                    return Err(Error::Parse { line: 0, msg: format!("witness for {iv} has wrong dimension") });
                }
                reg.insert(iv, w.point);
            }
            Some(reg)
        }
    };
    Ok((Realization { dim: doc.dim, balls }, reg))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_code(path: &Path) -> Result<Code> {
    Code::parse(&read(path)?)
}

pub fn read_realization(path: &Path) -> Result<(Realization, Option<WitnessRegistry>)> {
    realization_from_json(&read(path)?)
}
