//! Well-formed realizations by open balls.
//!
//! Balls are added one neuron at a time in piercing order. Each new ball is
//! centered at a registered point where its interval is pierceable and made
//! small enough to leave every other registered point untouched. Fresh
//! witnesses for the new intervals are found by walking along boundary
//! intersections one constraint at a time.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::code::{Code, IntervalRef};
use crate::error::{Error, Result};
use crate::piercing::{check_replay, PiercingOrder, PiercingStep};
use crate::set::NeuronSet;
use crate::split::SplitCertificate;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Radii below this abort the construction (and trigger a rescale).
pub const MIN_RADIUS: f64 = 1e-12;
const SHRINK: f64 = 0.25;
const RESCALE_FACTOR: f64 = 1e3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Self {
        assert!(radius > 0.0 && radius.is_finite(), "radius must be positive and finite");
        assert!(center.iter().all(|x| x.is_finite()), "center must be finite");
        Ball { center, radius }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// `|p - center| - radius`: negative inside, positive outside.
    pub fn signed_distance(&self, p: &[f64]) -> f64 {
        dist(p, &self.center) - self.radius
    }

    /// Strict membership in the open ball.
    pub fn contains(&self, p: &[f64]) -> bool {
        dist2(p, &self.center) < self.radius * self.radius
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub dim: usize,
    /// Indexed by neuron.
    pub balls: Vec<Ball>,
}

impl Realization {
    pub fn n(&self) -> usize {
        self.balls.len()
    }

    /// The codeword of the atom containing `p` (strict membership).
    pub fn codeword_at(&self, p: &[f64]) -> NeuronSet {
        self.balls.iter().enumerate().filter(|(_, b)| b.contains(p)).map(|(i, _)| i).collect()
    }

    /// Bounding box of all balls, inflated by the largest radius.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let pad = self.balls.iter().map(|b| b.radius).fold(0.0, f64::max);
        let lo = (0..self.dim)
            .map(|k| self.balls.iter().map(|b| b.center[k] - b.radius).fold(f64::INFINITY, f64::min) - pad)
            .collect();
        let hi = (0..self.dim)
            .map(|k| self.balls.iter().map(|b| b.center[k] + b.radius).fold(f64::NEG_INFINITY, f64::max) + pad)
            .collect();
        (lo, hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Zero,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Zero => "0",
            Sign::Minus => "-",
        })
    }
}

/// Inside, on, or outside the closure of each ball, with boundary detection
/// within `tol`.
pub fn sign_vector(balls: &[Ball], p: &[f64], tol: f64) -> Vec<Sign> {
    balls.iter().map(|b| sign_of(b.signed_distance(p), tol)).collect()
}

fn sign_of(sd: f64, tol: f64) -> Sign {
    if sd.abs() <= tol {
        Sign::Zero
    } else if sd < 0.0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// The sign neuron `i` must have at a point where `iv` is pierceable.
pub fn interval_sign(iv: &IntervalRef, i: usize) -> Sign {
    if iv.sigma.contains(i) {
        Sign::Plus
    } else if iv.tau.contains(i) {
        Sign::Zero
    } else {
        Sign::Minus
    }
}

/// `+` on sigma, `0` on tau minus sigma, `-` elsewhere.
pub fn matches_interval(signs: &[Sign], iv: &IntervalRef) -> bool {
    signs.iter().enumerate().all(|(i, &s)| s == interval_sign(iv, i))
}

/// The sphere `{center + radius * u : u a unit vector in span(basis)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereFlat {
    pub center: Vec<f64>,
    pub radius: f64,
    /// Orthonormal; one more vector than the sphere's dimension.
    pub basis: Vec<Vec<f64>>,
}

impl SphereFlat {
    pub fn of_ball(b: &Ball) -> Self {
        SphereFlat { center: b.center.clone(), radius: b.radius, basis: identity(b.dim()) }
    }

    /// Dimension of the sphere itself (0 for a pair of points).
    pub fn dim(&self) -> usize {
        self.basis.len() - 1
    }

    /// The two points of a 0-dimensional sphere.
    pub fn points(&self) -> Option<[Vec<f64>; 2]> {
        (self.basis.len() == 1).then(|| {
            let e = &self.basis[0];
            [axpy(&self.center, self.radius, e), axpy(&self.center, -self.radius, e)]
        })
    }

    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        let v = sub(p, &self.center);
        let inflat: f64 = self.basis.iter().map(|e| dot(e, &v).powi(2)).sum();
        let off = (norm2(&v) - inflat).max(0.0).sqrt();
        off <= tol && (inflat.sqrt() - self.radius).abs() <= tol
    }

    /// Closest point of the sphere to `p`.
    pub fn nearest(&self, p: &[f64]) -> Vec<f64> {
        let v = self.project(&sub(p, &self.center));
        let n = norm(&v);
        if n <= 1e-15 * self.radius.max(1.0) {
            axpy(&self.center, self.radius, &self.basis[0])
        } else {
            axpy(&self.center, self.radius / n, &v)
        }
    }

    fn project(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for e in &self.basis {
            let c = dot(e, v);
            for (o, x) in out.iter_mut().zip(e) {
                *o += c * x;
            }
        }
        out
    }

    /// Cuts the sphere with the boundary of `b`.
    fn cut(&self, b: &Ball, tol: f64) -> Result<Option<SphereFlat>> {
        let diff = sub(&b.center, &self.center);
        let w: Vec<f64> = self.basis.iter().map(|e| dot(e, &diff)).collect();
        let wn = norm(&w);
        let dist_sq = norm2(&diff);
        let big_r = self.radius;
        if self.basis.len() == 1 {
            let [p, q] = self.points().unwrap();
            if b.signed_distance(&p).abs() <= tol || b.signed_distance(&q).abs() <= tol {
                return Err(Error::DegenerateConfiguration("boundary passes through a 0-sphere".into()));
            }
            return Ok(None);
        }
        if wn <= tol {
            let reach = (big_r * big_r + dist_sq - wn * wn).max(0.0).sqrt();
            if (reach - b.radius).abs() <= tol {
                return Err(Error::DegenerateConfiguration("concentric boundaries".into()));
            }
            return Ok(None);
        }
        let h = (big_r * big_r + dist_sq - b.radius * b.radius) / 2.0;
        let t = h / wn;
        let rad2 = (big_r - t) * (big_r + t);
        if rad2.abs().sqrt() <= tol {
            return Err(Error::DegenerateConfiguration("tangent boundaries".into()));
        }
        if rad2 < 0.0 {
            return Ok(None);
        }
        let w_hat: Vec<f64> = w.iter().map(|x| x / wn).collect();
        let mut center = self.center.clone();
        for (e, &c) in self.basis.iter().zip(&w_hat) {
            for (o, x) in center.iter_mut().zip(e) {
                *o += t * c * x;
            }
        }
        let coeffs = complement_basis(&w_hat);
        let basis = coeffs
            .iter()
            .map(|cf| {
                let mut v = vec![0.0; self.center.len()];
                for (e, &c) in self.basis.iter().zip(cf) {
                    for (o, x) in v.iter_mut().zip(e) {
                        *o += c * x;
                    }
                }
                v
            })
            .collect();
        Ok(Some(SphereFlat { center, radius: rad2.sqrt(), basis }))
    }
}

/// Intersects the boundaries of `balls` one at a time. `None` means the
/// boundaries do not meet; tangency and concentric overlap are errors.
pub fn sphere_flat_intersection(balls: &[&Ball], tol: f64) -> Result<Option<SphereFlat>> {
    let Some((first, rest)) = balls.split_first() else {
        return Err(Error::DegenerateConfiguration("no spheres to intersect".into()));
    };
    let mut s = SphereFlat::of_ball(first);
    for b in rest {
        match s.cut(b, tol)? {
            Some(next) => s = next,
            None => return Ok(None),
        }
    }
    Ok(Some(s))
}

/// Either all of space or a boundary intersection; moves stay on it.
#[derive(Clone, Debug)]
enum Surface {
    Space(usize),
    Sphere(SphereFlat),
}

impl Surface {
    fn tangent(&self, x: &[f64], v: &[f64]) -> Vec<f64> {
        match self {
            Surface::Space(_) => v.to_vec(),
            Surface::Sphere(s) => {
                let pv = s.project(v);
                let radial = s.project(&sub(x, &s.center));
                let r2 = norm2(&radial);
                if r2 == 0.0 {
                    return pv;
                }
                axpy(&pv, -dot(&pv, &radial) / r2, &radial)
            }
        }
    }

    fn tangent_basis(&self, x: &[f64]) -> Vec<Vec<f64>> {
        match self {
            Surface::Space(d) => identity(*d),
            Surface::Sphere(s) => {
                let mut out: Vec<Vec<f64>> = Vec::new();
                for e in &s.basis {
                    let mut t = self.tangent(x, e);
                    for o in &out {
                        t = axpy(&t, -dot(&t, o), o);
                    }
                    let n = norm(&t);
                    if n > 1e-6 {
                        out.push(t.iter().map(|v| v / n).collect());
                    }
                }
                out
            }
        }
    }

    fn advance(&self, x: &[f64], dir: &[f64], step: f64) -> Vec<f64> {
        match self {
            Surface::Space(_) => axpy(x, step, dir),
            Surface::Sphere(s) => {
                let moved = s.project(&axpy(&sub(x, &s.center), step, dir));
                let n = norm(&moved);
                axpy(&s.center, s.radius / n, &moved)
            }
        }
    }

    fn radius(&self) -> f64 {
        match self {
            Surface::Space(_) => f64::INFINITY,
            Surface::Sphere(s) => s.radius,
        }
    }

    fn movable(&self) -> bool {
        match self {
            Surface::Space(_) => true,
            Surface::Sphere(s) => s.basis.len() >= 2,
        }
    }
}

/// Map from intervals to points where they are pierceable.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WitnessRegistry {
    pub entries: BTreeMap<IntervalRef, Vec<f64>>,
}

impl WitnessRegistry {
    pub fn get(&self, iv: &IntervalRef) -> Option<&Vec<f64>> {
        self.entries.get(iv)
    }

    pub fn insert(&mut self, iv: IntervalRef, p: Vec<f64>) {
        self.entries.insert(iv, p);
    }

    pub fn remove(&mut self, iv: &IntervalRef) -> Option<Vec<f64>> {
        self.entries.remove(iv)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IntervalRef, &Vec<f64>)> {
        self.entries.iter()
    }

    /// Entries whose sign vector does not match their interval.
    pub fn unsound(&self, balls: &[Ball], tol: f64) -> Vec<IntervalRef> {
        self.entries
            .iter()
            .filter(|(iv, p)| !matches_interval(&sign_vector(balls, p, tol), iv))
            .map(|(iv, _)| *iv)
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct GeometryConfig {
    pub tolerance: f64,
    pub seed: u64,
    pub fallback_samples: usize,
    pub max_rescales: usize,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig { tolerance: DEFAULT_TOLERANCE, seed: 0, fallback_samples: 100_000, max_rescales: 2 }
    }
}

/// Smallest dimension admitting a well-formed ball realization, and why a
/// smaller one fails.
pub fn check_dimension(k: usize, dim: usize, split: Option<&SplitCertificate>) -> Result<()> {
    let splittable = split.is_some_and(|s| s.splittable);
    let min = match k {
        0 => 1,
        _ if splittable => k,
        _ => k + 1,
    };
    if dim >= min {
        return Ok(());
    }
    let reason = if k == 0 {
        "a realization needs at least one dimension".to_string()
    } else if dim < k {
        format!("a clique of size {} forces independent balls, impossible below dimension {k}", k + 1)
    } else if split.is_none() {
        "dimension k requires a splittability certificate".to_string()
    } else {
        format!("the code is not splittable, so dimension {k} is impossible")
    };
    Err(Error::DimensionTooSmall { dim, min, reason })
}

/// Builds a well-formed realization of `c` in `R^dim` following `order`.
pub fn realize(
    c: &Code,
    order: &PiercingOrder,
    dim: usize,
    split: Option<&SplitCertificate>,
    cfg: &GeometryConfig,
) -> Result<(Realization, WitnessRegistry)> {
    check_dimension(order.max_rank(), dim, split)?;
    check_replay(order, c)?;
    let mut scale = 1.0;
    let mut attempt = 0;
    loop {
        match Builder::new(dim, scale, cfg).run(order) {
            Err(Error::RadiusUnderflow { .. }) if attempt < cfg.max_rescales => {
                attempt += 1;
                scale *= RESCALE_FACTOR;
            }
            other => return other,
        }
    }
}

struct Builder<'a> {
    dim: usize,
    scale: f64,
    cfg: &'a GeometryConfig,
    balls: Vec<Option<Ball>>,
    present: NeuronSet,
    reg: WitnessRegistry,
    rng: ChaCha8Rng,
}

impl<'a> Builder<'a> {
    fn new(dim: usize, scale: f64, cfg: &'a GeometryConfig) -> Self {
        Builder {
            dim,
            scale,
            cfg,
            balls: Vec::new(),
            present: NeuronSet::EMPTY,
            reg: WitnessRegistry::default(),
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        }
    }

    fn tol(&self) -> f64 {
        self.cfg.tolerance
    }

    fn ball(&self, i: usize) -> &Ball {
        self.balls[i].as_ref().expect("ball placed")
    }

    fn run(mut self, order: &PiercingOrder) -> Result<(Realization, WitnessRegistry)> {
        self.balls = vec![None; order.n];
        let sequence: Vec<&PiercingStep> = order.steps.iter().rev().collect();
        let Some((first, rest)) = sequence.split_first() else {
            return Ok((Realization { dim: self.dim, balls: Vec::new() }, self.reg));
        };
        self.place_base(first.neuron);
        for (idx, step) in rest.iter().enumerate() {
            let needed: BTreeSet<IntervalRef> = rest[idx + 1..].iter().map(|s| s.interval()).collect();
            self.add_piercing_ball(step, &needed)?;
        }
        let balls = self.balls.into_iter().map(|b| b.expect("every neuron placed")).collect();
        Ok((Realization { dim: self.dim, balls }, self.reg))
    }

    fn place_base(&mut self, a: usize) {
        let dim = self.dim;
        let origin = vec![0.0; dim];
        let along = |t: f64| {
            let mut p = vec![0.0; dim];
            p[0] = t;
            p
        };
        self.balls[a] = Some(Ball::new(origin.clone(), self.scale));
        self.present = NeuronSet::singleton(a);
        let single = NeuronSet::singleton(a);
        self.reg.insert(IntervalRef::new(NeuronSet::EMPTY, single), along(self.scale));
        self.reg.insert(IntervalRef::point(single), origin);
        self.reg.insert(IntervalRef::point(NeuronSet::EMPTY), along(3.0 * self.scale));
    }

    fn add_piercing_ball(&mut self, step: &PiercingStep, needed: &BTreeSet<IntervalRef>) -> Result<()> {
        let tol = self.tol();
        let iv = step.interval();
        let n = step.neuron;
        let p = self
            .reg
            .get(&iv)
            .cloned()
            .ok_or_else(|| Error::NoPointFound(format!("no registered point for {iv}")))?;

        let free = iv.free();
        let flat = if free.is_empty() {
            None
        } else {
            let fb: Vec<&Ball> = free.iter().map(|i| self.ball(i)).collect();
            Some(
                sphere_flat_intersection(&fb, tol)?
                    .ok_or_else(|| Error::DegenerateConfiguration(format!("boundaries of {free} do not meet")))?,
            )
        };
        let opposite = flat.as_ref().and_then(|s| s.points()).map(|[a, b]| if dist(&a, &p) > dist(&b, &p) { a } else { b });

        let mut radius = f64::INFINITY;
        for (other, q) in self.reg.iter() {
            if *other != iv {
                radius = radius.min(SHRINK * dist(&p, q));
            }
        }
        for i in self.present.iter() {
            let b = self.ball(i);
            radius = radius.min(SHRINK * if free.contains(i) { b.radius } else { b.signed_distance(&p).abs() });
        }
        if let Some(s) = &flat {
            radius = radius.min(SHRINK * s.radius);
        }
        if let Some(q) = &opposite {
            radius = radius.min(SHRINK * dist(&p, q));
        }
        if !radius.is_finite() {
            radius = self.scale;
        }
        if radius < MIN_RADIUS {
            return Err(Error::RadiusUnderflow { radius, min: MIN_RADIUS });
        }

        self.balls[n] = Some(Ball::new(p.clone(), radius));
        self.present = self.present.with(n);
        self.reg.remove(&iv);

        // The old interval moves off the new ball.
        let moved = match (&flat, &opposite) {
            (_, Some(q)) => Some(q.clone()),
            (None, None) => Some(self.offset_in_space(&p, &iv, 3.0 * radius)),
            (Some(s), None) => {
                let surface = Surface::Sphere(s.clone());
                let dir = surface.tangent_basis(&p).into_iter().next();
                dir.map(|d| surface.advance(&p, &d, 3.0 * radius))
            }
        };
        if let Some(q) = moved.filter(|q| self.pierceable_at(&iv, q)) {
            self.reg.insert(iv, q);
        }

        // Intervals whose top contains the new neuron.
        let gamma = free.with(n);
        let others: Vec<usize> = free.iter().collect();
        let max_rank = self.dim;
        for code in 0..3usize.pow(others.len() as u32) {
            for n_in_sigma in [false, true] {
                let (mut plus, mut zero) = (iv.sigma, NeuronSet::EMPTY);
                let mut c = code;
                for &j in &others {
                    match c % 3 {
                        0 => {}
                        1 => zero = zero.with(j),
                        _ => plus = plus.with(j),
                    }
                    c /= 3;
                }
                if n_in_sigma {
                    plus = plus.with(n);
                } else {
                    zero = zero.with(n);
                }
                if zero.len() > max_rank {
                    continue;
                }
                let new_iv = IntervalRef::new(plus, plus.union(zero));
                match self.find_point(&new_iv, gamma, &p, Some(n)) {
                    Ok(x) => self.reg.insert(new_iv, x),
                    Err(e) if needed.contains(&new_iv) || zero.len() < self.dim => return Err(e),
                    Err(_) => {}
                }
            }
        }

        let balls = self.placed();
        if let Some(bad) = self.reg.unsound(&balls, tol).first() {
            return Err(Error::ConsistencyFailure(format!("witness for {bad} invalid after placing neuron {}", n + 1)));
        }
        if let Some(missing) = needed.iter().find(|iv| iv.tau.is_subset(self.present) && self.reg.get(iv).is_none()) {
            return Err(Error::NoPointFound(format!("interval {missing} lost its witness")));
        }
        Ok(())
    }

    /// Balls placed so far, with unplaced neurons as far-away dummies so
    /// indices line up. Unplaced neurons never lie in any interval here.
    fn placed(&self) -> Vec<Ball> {
        let far = 1e300;
        self.balls
            .iter()
            .map(|b| {
                b.clone().unwrap_or_else(|| {
                    let mut c = vec![0.0; self.dim];
                    c[0] = far;
                    Ball::new(c, 1.0)
                })
            })
            .collect()
    }

    fn pierceable_at(&self, iv: &IntervalRef, x: &[f64]) -> bool {
        self.present.iter().all(|i| sign_of(self.ball(i).signed_distance(x), self.tol()) == interval_sign(iv, i))
    }

    fn slack(&self, iv: &IntervalRef, i: usize, x: &[f64]) -> f64 {
        let sd = self.ball(i).signed_distance(x);
        match interval_sign(iv, i) {
            Sign::Plus => -sd,
            Sign::Minus => sd,
            Sign::Zero => -sd.abs(),
        }
    }

    fn worst_slack(&self, iv: &IntervalRef, strict: NeuronSet, x: &[f64]) -> f64 {
        strict.iter().map(|i| self.slack(iv, i, x)).fold(f64::INFINITY, f64::min)
    }

    fn offset_in_space(&self, p: &[f64], iv: &IntervalRef, step: f64) -> Vec<f64> {
        let surface = Surface::Space(self.dim);
        for e in surface.tangent_basis(p) {
            for sgn in [1.0, -1.0] {
                let q = axpy(p, sgn * step, &e);
                if self.pierceable_at(iv, &q) {
                    return q;
                }
            }
        }
        axpy(p, step, &identity(self.dim)[0])
    }

    fn boundary_surface(&self, set: NeuronSet) -> Result<Option<Surface>> {
        if set.is_empty() {
            return Ok(Some(Surface::Space(self.dim)));
        }
        let bs: Vec<&Ball> = set.iter().map(|i| self.ball(i)).collect();
        Ok(sphere_flat_intersection(&bs, self.tol())?.map(Surface::Sphere))
    }

    /// A point where `iv` is pierceable near `near`. `gamma` holds the
    /// neurons whose boundaries pass close to `near`; every other ball must
    /// already have the right sign there.
    fn find_point(&mut self, iv: &IntervalRef, gamma: NeuronSet, near: &[f64], last: Option<usize>) -> Result<Vec<f64>> {
        let zero = iv.free();
        if zero.len() > self.dim || !zero.is_subset(gamma) {
            return Err(Error::NoPointFound(format!("{iv}: too many boundaries")));
        }
        let rest = gamma.difference(zero);
        let mut walk_order: Vec<usize> = rest.iter().filter(|&i| Some(i) != last).collect();
        if let Some(l) = last.filter(|&l| rest.contains(l)) {
            walk_order.push(l);
        }
        let found = if gamma.len() <= self.dim {
            match self.boundary_surface(gamma) {
                Ok(Some(Surface::Sphere(t))) => {
                    let x0 = t.nearest(near);
                    self.walk(iv, &walk_order, x0)
                }
                _ => None,
            }
        } else {
            self.walk_from_pair(iv, zero, &walk_order, near)
        };
        let found = match found {
            Some(x) => Some(x),
            None => self.sample(iv, gamma, near),
        };
        let x = found.ok_or_else(|| Error::NoPointFound(iv.to_string()))?;
        let x = self.center(iv, x)?;
        if self.pierceable_at(iv, &x) {
            Ok(x)
        } else {
            Err(Error::NoPointFound(iv.to_string()))
        }
    }

    /// With `dim + 1` nearby boundaries, one of them (`j`) is left out: start
    /// at whichever point of the remaining 0-sphere has the right sign for `j`.
    fn walk_from_pair(&mut self, iv: &IntervalRef, zero: NeuronSet, order: &[usize], near: &[f64]) -> Option<Vec<f64>> {
        let tol = self.tol();
        for (pos, &j) in order.iter().enumerate().rev() {
            let mut rest_order = order.to_vec();
            rest_order.remove(pos);
            let set = zero.union(rest_order.iter().copied().collect());
            let Ok(Some(Surface::Sphere(t))) = self.boundary_surface(set) else { continue };
            let Some(mut pts) = t.points() else { continue };
            pts.sort_by(|a, b| dist(a, near).total_cmp(&dist(b, near)));
            for x0 in pts {
                if self.slack(iv, j, &x0) > tol {
                    if let Some(x) = self.walk(iv, &rest_order, x0) {
                        return Some(x);
                    }
                }
            }
        }
        None
    }

    /// Starting on every boundary in `order` (and those of `iv.free()`),
    /// leaves them one at a time toward the required side.
    fn walk(&mut self, iv: &IntervalRef, order: &[usize], mut x: Vec<f64>) -> Option<Vec<f64>> {
        let tol = self.tol();
        let zero = iv.free();
        for (k, &i) in order.iter().enumerate() {
            let pending: NeuronSet = order[k + 1..].iter().copied().collect();
            let surface = self.boundary_surface(zero.union(pending)).ok()??;
            if !surface.movable() {
                return None;
            }
            let strict = self.present.difference(zero).difference(pending).without(i);
            let b = self.ball(i).clone();
            let mut g = sub(&x, &b.center);
            if interval_sign(iv, i) == Sign::Plus {
                g.iter_mut().for_each(|v| *v = -*v);
            }
            let mut dir = surface.tangent(&x, &g);
            if norm(&dir) <= 1e-12 * norm(&g) {
                let r: Vec<f64> = (0..self.dim).map(|_| self.rng.gen_range(-1.0..1.0)).collect();
                dir = surface.tangent(&x, &r);
            }
            let dn = norm(&dir);
            if dn == 0.0 {
                return None;
            }
            dir.iter_mut().for_each(|v| *v /= dn);
            let m = self.worst_slack(iv, strict, &x);
            if m <= tol {
                return None;
            }
            let mut s = 0.5 * m.min(surface.radius()).min(b.radius);
            let mut next = None;
            for _ in 0..80 {
                let y = surface.advance(&x, &dir, s);
                if self.slack(iv, i, &y) > tol && self.worst_slack(iv, strict, &y) > tol {
                    next = Some(y);
                    break;
                }
                s *= 0.5;
            }
            x = next?;
        }
        Some(x)
    }

    /// Pattern search along the zero-boundary intersection maximizing the
    /// smallest slack, so later balls have room.
    fn center(&mut self, iv: &IntervalRef, x: Vec<f64>) -> Result<Vec<f64>> {
        let zero = iv.free();
        let Some(surface) = self.boundary_surface(zero)? else { return Ok(x) };
        if !surface.movable() {
            return Ok(x);
        }
        let strict = self.present.difference(zero);
        let mut best = x;
        let mut score = self.worst_slack(iv, strict, &best);
        if !(score > 0.0 && score.is_finite()) {
            return Ok(best);
        }
        let mut h = score;
        let h_min = score * 1e-3;
        for _ in 0..400 {
            if h < h_min {
                break;
            }
            let mut improved = false;
            'dirs: for e in surface.tangent_basis(&best) {
                for sgn in [1.0, -1.0] {
                    let y = surface.advance(&best, &e.iter().map(|v| sgn * v).collect::<Vec<_>>(), h);
                    let sc = self.worst_slack(iv, strict, &y);
                    if sc > score * (1.0 + 1e-9) {
                        best = y;
                        score = sc;
                        improved = true;
                        break 'dirs;
                    }
                }
            }
            if !improved {
                h *= 0.5;
            }
        }
        Ok(best)
    }

    /// Seeded rejection sampling on the zero-boundary intersection near `near`.
    fn sample(&mut self, iv: &IntervalRef, gamma: NeuronSet, near: &[f64]) -> Option<Vec<f64>> {
        let tol = self.tol();
        let surface = self.boundary_surface(iv.free()).ok()??;
        let strict = self.present.difference(iv.free());
        let width = 4.0 * gamma.iter().map(|i| self.ball(i).radius).fold(f64::INFINITY, f64::min);
        for _ in 0..self.cfg.fallback_samples {
            let x = match &surface {
                Surface::Space(d) => (0..*d).map(|k| near[k] + self.rng.gen_range(-width..width)).collect(),
                Surface::Sphere(s) => {
                    let coef: Vec<f64> = s.basis.iter().map(|_| self.rng.gen_range(-1.0..1.0)).collect();
                    let cn = norm(&coef);
                    if cn == 0.0 {
                        continue;
                    }
                    let mut x = s.center.clone();
                    for (e, c) in s.basis.iter().zip(&coef) {
                        x = axpy(&x, s.radius * c / cn, e);
                    }
                    x
                }
            };
            if self.worst_slack(iv, strict, &x) > tol {
                return Some(x);
            }
        }
        None
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct WellFormedReport {
    pub ok: bool,
    pub issues: Vec<String>,
}

/// Every set of at most `dim` boundaries meets in a sphere of the right
/// dimension or not at all, and no `dim + 1` boundaries share a point.
/// Only sets whose boundaries pairwise cross are examined.
pub fn well_formed_check(r: &Realization, tol: f64) -> WellFormedReport {
    let n = r.n();
    let mut issues = Vec::new();
    let mut cross = vec![NeuronSet::EMPTY; n];
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&r.balls[i], &r.balls[j]);
            let d = dist(&a.center, &b.center);
            let lo = (a.radius - b.radius).abs();
            let hi = a.radius + b.radius;
            if d > lo + tol && d < hi - tol {
                cross[i] = cross[i].with(j);
                cross[j] = cross[j].with(i);
            } else if (d - lo).abs() <= tol || (d - hi).abs() <= tol {
                issues.push(format!("boundaries of {} and {} are tangent or coincide", i + 1, j + 1));
            }
        }
    }
    let mut stack: Vec<(Vec<usize>, NeuronSet)> = (0..n).map(|i| (vec![i], cross[i].difference(NeuronSet::full(i + 1)))).collect();
    while let Some((set, cand)) = stack.pop() {
        if set.len() >= 2 {
            let bs: Vec<&Ball> = set.iter().map(|&i| &r.balls[i]).collect();
            let labels: Vec<usize> = set.iter().map(|i| i + 1).collect();
            match sphere_flat_intersection(&bs, tol) {
                Ok(Some(_)) if set.len() > r.dim => issues.push(format!("boundaries {labels:?} share a point")),
                Ok(Some(s)) if s.radius <= tol => issues.push(format!("boundaries {labels:?} meet in a degenerate sphere")),
                Ok(_) => {}
                Err(e) => issues.push(format!("boundaries {labels:?}: {e}")),
            }
        }
        if set.len() <= r.dim {
            for j in cand.iter() {
                let mut next = set.clone();
                next.push(j);
                stack.push((next, cand.intersection(cross[j]).difference(NeuronSet::full(j + 1))));
            }
        }
    }
    issues.sort();
    WellFormedReport { ok: issues.is_empty(), issues }
}

fn identity(d: usize) -> Vec<Vec<f64>> {
    (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

/// Orthonormal basis of the complement of unit vector `w`.
fn complement_basis(w: &[f64]) -> Vec<Vec<f64>> {
    let m = w.len();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(m.saturating_sub(1));
    for e in identity(m) {
        let mut v = axpy(&e, -dot(&e, w), w);
        for o in &out {
            v = axpy(&v, -dot(&v, o), o);
        }
        let n = norm(&v);
        if n > 1e-6 {
            out.push(v.iter().map(|x| x / n).collect());
        }
        if out.len() + 1 == m {
            break;
        }
    }
    out
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a + t * b`.
pub(crate) fn axpy(a: &[f64], t: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * y).collect()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a)
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    norm2(a).sqrt()
}

pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist2(a, b).sqrt()
}
