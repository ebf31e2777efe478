//! Certified bounds where no closed form is available.
//!
//! Lower bounds for `d^min` come from explicit competitors `f: G → E` with
//! `f(z) = 0`. Upper bounds for the Lempert function, `d^max` and the Coman
//! function come from explicit analytic discs whose validity is certified by
//! boundary sampling. Every reported number is the value of a concrete
//! witness, so it is a true bound whatever the optimizer does.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disc::{automorphism_raw, check_disc};
use crate::domains::{disc_validity, AnalyticDisc, DomainSpec, PolydiscChart, DEFAULT_DISC_MARGIN};
use crate::exact::{dmax_eval, green_disc, green_exact};
use crate::point::EQUALITY_RADIUS;
use crate::simplex::minimize;
use crate::weights::WeightMap;
use crate::{Error, Point, Result};

/// Images of distinct fibers closer than this are rescored conservatively.
pub const NEAR_COLLISION_RADIUS: f64 = 1e-6;

/// Search budget and seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub seed: u64,
    pub restarts: usize,
    pub max_evals: usize,
    pub blaschke_degree_max: usize,
    pub disc_degree_max: usize,
    pub tolerance: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 0,
            restarts: 8,
            max_evals: 4000,
            blaschke_degree_max: 3,
            disc_degree_max: 4,
            tolerance: 1e-9,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_evals == 0 || self.disc_degree_max == 0 || !(self.tolerance > 0.0) {
            return Err(Error::InvalidInput(format!("search configuration must be positive: {self:?}")));
        }
        Ok(())
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// The inner map `ℓ: G → E` of a candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Functional {
    /// `z ↦ Σ c_j z_j / sup_G |Σ c_j z_j|`.
    Linear { coefficients: Vec<Complex64> },
    /// `z ↦ z^β / sup_G |z^β|`.
    Monomial { exponents: Vec<u32> },
}

/// `f = φ ∘ B ∘ ℓ` with `ℓ` a normalized functional, `B` the Blaschke product
/// with the given zeros (the identity when there are none) and `φ` the disc
/// automorphism sending `B(ℓ(z))` to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateMap {
    pub functional: Functional,
    /// `sup_G |numerator of ℓ|`; finite and positive.
    pub norm: f64,
    pub zeros: Vec<Complex64>,
}

impl CandidateMap {
    pub fn new(dom: &DomainSpec, functional: Functional, zeros: Vec<Complex64>) -> Result<Self> {
        for &b in &zeros {
            check_disc(b)?;
        }
        let norm = match &functional {
            Functional::Linear { coefficients } => {
                if coefficients.len() != dom.dim() {
                    return Err(Error::DimensionMismatch { expected: dom.dim(), got: coefficients.len() });
                }
                dom.linear_sup(coefficients)
            }
            Functional::Monomial { exponents } => {
                if exponents.len() != dom.dim() {
                    return Err(Error::DimensionMismatch { expected: dom.dim(), got: exponents.len() });
                }
                if exponents.iter().all(|&e| e == 0) {
                    None
                } else {
                    dom.monomial_sup(exponents)
                }
            }
        };
        match norm {
            Some(norm) if norm > 0.0 && norm.is_finite() => Ok(CandidateMap { functional, norm, zeros }),
            _ => Err(Error::InvalidInput(format!("{functional:?} is not bounded on {dom:?}"))),
        }
    }

    /// `B(ℓ(x))`.
    pub fn inner(&self, x: &[Complex64]) -> Complex64 {
        let l = match &self.functional {
            Functional::Linear { coefficients } => coefficients.iter().zip(x).map(|(c, v)| c * v).sum::<Complex64>(),
            Functional::Monomial { exponents } => {
                x.iter().zip(exponents).map(|(v, &e)| v.powu(e)).product::<Complex64>()
            }
        } / self.norm;
        if self.zeros.is_empty() {
            return l;
        }
        self.zeros.iter().map(|&b| automorphism_raw(b, 0.0, l)).product()
    }

    /// `f(x)` for the candidate normalized to vanish at `z`.
    pub fn eval_at(&self, z: &Point, x: &Point) -> Complex64 {
        automorphism_raw(self.inner(z.coords()), 0.0, self.inner(x.coords()))
    }

    /// `∏_{μ ∈ f(|p|)} |μ|^{sup p(f⁻¹(μ))}`, a lower bound for `d^min_G(p, z)`.
    ///
    /// Fibers are the images within the equality radius. When two distinct
    /// fibers lie within [`NEAR_COLLISION_RADIUS`], the score with those
    /// fibers merged is also computed and the smaller value is reported.
    pub fn score(&self, p: &WeightMap, z: &Point) -> Result<f64> {
        let images: Vec<(Complex64, f64)> = p.entries().iter().map(|(a, w)| (self.eval_at(z, a), *w)).collect();
        let fine = fiber_score(&images, EQUALITY_RADIUS)?;
        let near = images.iter().enumerate().any(|(i, (x, _))| {
            images[i + 1..].iter().any(|(y, _)| {
                let d = (x - y).norm();
                d > EQUALITY_RADIUS && d <= NEAR_COLLISION_RADIUS
            })
        });
        if near {
            Ok(fine.min(fiber_score(&images, NEAR_COLLISION_RADIUS)?))
        } else {
            Ok(fine)
        }
    }
}

fn fiber_score(images: &[(Complex64, f64)], radius: f64) -> Result<f64> {
    let mut fibers: Vec<(Complex64, f64)> = Vec::new();
    for &(mu, w) in images {
        match fibers.iter_mut().find(|(c, _)| (c - mu).norm() <= radius) {
            Some((_, v)) => *v = v.max(w),
            None => fibers.push((mu, w)),
        }
    }
    let pushed = WeightMap::new(1, fibers.into_iter().map(|(mu, w)| (Point::from(mu), w)))?;
    Ok(green_disc(&pushed, &Point::origin(1))?.value)
}

/// An analytic disc with the parameters at which it meets its prescribed points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscWitness {
    pub disc: AnalyticDisc,
    pub nodes: Vec<(Complex64, Point)>,
    /// Validity margin used for certification.
    pub margin: f64,
}

impl DiscWitness {
    /// Re-check validity and the interpolation conditions to within `tol`.
    pub fn verify(&self, dom: &DomainSpec, tol: f64) -> bool {
        disc_validity(&self.disc, dom, self.margin)
            && self.nodes.iter().all(|(lambda, target)| self.disc.eval(*lambda).distance(target) <= tol)
    }
}

/// A bound interval with the witnesses that certify each side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundInterval {
    pub lower: f64,
    pub upper: f64,
    pub lower_witness: Option<CandidateMap>,
    pub upper_witness: Option<DiscWitness>,
    /// Which route produced each side, or why a side is missing.
    pub notes: Vec<String>,
}

impl BoundInterval {
    fn unbounded() -> Self {
        BoundInterval { lower: 0.0, upper: 1.0, lower_witness: None, upper_witness: None, notes: Vec::new() }
    }

    fn exact(value: f64, note: impl Into<String>) -> Self {
        BoundInterval { lower: value, upper: value, notes: vec![note.into()], ..Self::unbounded() }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        self.lower - tol <= v && v <= self.upper + tol
    }
}

fn check_inputs(dom: &DomainSpec, p: &WeightMap, z: &Point, cfg: &SearchConfig) -> Result<()> {
    cfg.validate()?;
    dom.validate()?;
    p.ensure_dim_of(dom)?;
    dom.ensure_contains(z)?;
    p.support().try_for_each(|a| dom.ensure_contains(a))
}

// ---------------------------------------------------------------------------
// d^min lower bounds

/// Search space of a candidate: a fixed functional shape plus real parameters.
#[derive(Clone)]
enum Shape {
    Linear,
    Monomial(Vec<u32>),
}

fn squash(u: Complex64) -> Complex64 {
    u / (1.0 + u.norm())
}

fn unsquash(b: Complex64) -> Complex64 {
    b / (1.0 - b.norm())
}

fn decode(dom: &DomainSpec, shape: &Shape, degree: usize, x: &[f64]) -> Option<CandidateMap> {
    let n = dom.dim();
    let (functional, rest) = match shape {
        Shape::Linear => {
            let c = (0..n).map(|j| Complex64::new(x[2 * j], x[2 * j + 1])).collect();
            (Functional::Linear { coefficients: c }, &x[2 * n..])
        }
        Shape::Monomial(e) => (Functional::Monomial { exponents: e.clone() }, x),
    };
    let zeros = (0..degree).map(|k| squash(Complex64::new(rest[2 * k], rest[2 * k + 1]))).collect();
    CandidateMap::new(dom, functional, zeros).ok()
}

fn encode(c: &CandidateMap) -> (Shape, Vec<f64>) {
    let mut x = Vec::new();
    let shape = match &c.functional {
        Functional::Linear { coefficients } => {
            x.extend(coefficients.iter().flat_map(|v| [v.re, v.im]));
            Shape::Linear
        }
        Functional::Monomial { exponents } => Shape::Monomial(exponents.clone()),
    };
    x.extend(c.zeros.iter().flat_map(|&b| {
        let u = unsquash(b);
        [u.re, u.im]
    }));
    (shape, x)
}

/// The unnormalized functionals tried as deterministic seeds.
fn seed_functionals(dom: &DomainSpec) -> Vec<Functional> {
    let n = dom.dim();
    let mut out = Vec::new();
    for j in 0..n {
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        c[j] = Complex64::new(1.0, 0.0);
        out.push(Functional::Linear { coefficients: c });
    }
    if let DomainSpec::ReinhardtPower { alpha } = dom {
        out.push(Functional::Monomial { exponents: alpha.clone() });
    }
    for i in 0..n {
        for j in i..n {
            let mut e = vec![0u32; n];
            e[i] += 1;
            e[j] += 1;
            out.push(Functional::Monomial { exponents: e });
        }
    }
    out.retain(|f| CandidateMap::new(dom, f.clone(), Vec::new()).is_ok());
    out
}

fn subsets_up_to(len: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max.min(len) {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&i: &usize| i + 1);
            for i in start..len {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn better(a: &(f64, CandidateMap), b: &(f64, CandidateMap)) -> bool {
    a.0 > b.0
}

fn refine(
    dom: &DomainSpec,
    p: &WeightMap,
    z: &Point,
    start: &CandidateMap,
    budget: usize,
    step: f64,
) -> (f64, CandidateMap) {
    let (shape, x0) = encode(start);
    let degree = start.zeros.len();
    let objective = |x: &[f64]| match decode(dom, &shape, degree, x) {
        Some(c) => -c.score(p, z).unwrap_or(0.0),
        None => 0.0,
    };
    let m = minimize(objective, &x0, step, budget, 1e-15);
    let start_score = start.score(p, z).unwrap_or(0.0);
    match decode(dom, &shape, degree, &m.x) {
        Some(c) => {
            let s = c.score(p, z).unwrap_or(0.0);
            if s > start_score {
                (s, c)
            } else {
                (start_score, start.clone())
            }
        }
        None => (start_score, start.clone()),
    }
}

/// Best competitor found for `d^min_G(p, z)`; the `lower` side is a certified lower bound.
pub fn dmin_lower_bound(dom: &DomainSpec, p: &WeightMap, z: &Point, cfg: &SearchConfig) -> Result<BoundInterval> {
    check_inputs(dom, p, z, cfg)?;
    if p.is_empty() {
        return Ok(BoundInterval::exact(1.0, "empty weight"));
    }
    let functionals = seed_functionals(dom);
    if functionals.is_empty() {
        let mut out = BoundInterval::unbounded();
        out.notes.push("no bounded functional available on this domain".into());
        return Ok(out);
    }

    // deterministic seeds: Blaschke zeros at subsets of the pole images
    let mut seeds: Vec<(f64, CandidateMap)> = Vec::new();
    for f in &functionals {
        let plain = CandidateMap::new(dom, f.clone(), Vec::new())?;
        let mut images: Vec<Complex64> = Vec::new();
        for a in p.support() {
            let v = plain.inner(a.coords());
            if !images.iter().any(|w| (w - v).norm() <= EQUALITY_RADIUS) {
                images.push(v);
            }
        }
        for subset in subsets_up_to(images.len(), cfg.blaschke_degree_max) {
            let zeros: Vec<Complex64> = subset.iter().map(|&i| images[i]).collect();
            if let Ok(c) = CandidateMap::new(dom, f.clone(), zeros) {
                let s = c.score(p, z).unwrap_or(0.0);
                seeds.push((s, c));
            }
        }
    }
    // stable: ties keep enumeration order
    seeds.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = seeds[0].clone();
    for seed in seeds.iter().take(4) {
        let r = refine(dom, p, z, &seed.1, cfg.max_evals, 0.05);
        if better(&r, &best) {
            best = r;
        }
    }

    let images: Vec<Complex64> = {
        let plain = CandidateMap::new(dom, functionals[0].clone(), Vec::new())?;
        p.support().map(|a| plain.inner(a.coords())).collect()
    };
    let results: Vec<(f64, CandidateMap)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = cfg.rng(i as u64);
            let f = &functionals[rng.gen_range(0..functionals.len())];
            let (shape, mut x) = encode(&CandidateMap::new(dom, f.clone(), Vec::new()).expect("seeded functional"));
            if matches!(shape, Shape::Linear) {
                for v in x.iter_mut() {
                    *v += rng.gen_range(-0.5..0.5);
                }
            }
            let degree = rng.gen_range(0..=cfg.blaschke_degree_max);
            for _ in 0..degree {
                let base = images[rng.gen_range(0..images.len())];
                let b =
                    squash(unsquash(base * 0.99) + Complex64::new(rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2)));
                let u = unsquash(b);
                x.extend([u.re, u.im]);
            }
            match decode(dom, &shape, degree, &x) {
                Some(start) => refine(dom, p, z, &start, cfg.max_evals, 0.2),
                None => (0.0, CandidateMap::new(dom, f.clone(), Vec::new()).expect("seeded functional")),
            }
        })
        .collect();
    for r in results {
        if better(&r, &best) {
            best = r;
        }
    }

    let (value, witness) = best;
    // the reported value is the witness score, recomputed from scratch
    let lower = witness.score(p, z)?;
    debug_assert_eq!(lower, value);
    let mut out = BoundInterval::unbounded();
    out.lower = lower;
    out.lower_witness = Some(witness);
    out.notes.push(if lower > 0.0 {
        "candidate search".into()
    } else {
        "no admissible candidate with positive value".into()
    });
    Ok(out)
}

// ---------------------------------------------------------------------------
// analytic-disc upper bounds

/// `λ ↦ from + λ(to − from)/r + λ(λ − r)χ(λ)`; `chi` holds the complex
/// coefficients of `χ` coordinate by coordinate, `deg − 1` per coordinate.
fn two_point_disc(from: &Point, to: &Point, r: f64, chi: &[f64], deg: usize) -> AnalyticDisc {
    let per = deg.saturating_sub(1);
    let coefficients = from
        .coords()
        .iter()
        .zip(to.coords())
        .enumerate()
        .map(|(j, (&a, &z))| {
            let mut c = vec![Complex64::new(0.0, 0.0); deg.max(1) + 1];
            c[0] = a;
            c[1] = (z - a) / r;
            for k in 0..per {
                let x = Complex64::new(chi[2 * (j * per + k)], chi[2 * (j * per + k) + 1]);
                c[k + 2] += x;
                c[k + 1] -= x * r;
            }
            c
        })
        .collect();
    AnalyticDisc::new(coefficients)
}

fn boundary_or_inf(phi: &AnalyticDisc, dom: &DomainSpec) -> f64 {
    match phi.boundary_max(dom) {
        Ok(v) if v.is_finite() => v,
        _ => f64::INFINITY,
    }
}

/// A `χ` making the two-point disc with node `r` valid, starting from `chi0`.
fn feasible_chi(
    dom: &DomainSpec,
    from: &Point,
    to: &Point,
    r: f64,
    chi0: &[f64],
    deg: usize,
    budget: usize,
) -> Option<Vec<f64>> {
    let target = 1.0 - DEFAULT_DISC_MARGIN;
    let f = |x: &[f64]| boundary_or_inf(&two_point_disc(from, to, r, x, deg), dom);
    if f(chi0) <= target {
        return Some(chi0.to_vec());
    }
    if chi0.is_empty() {
        return None;
    }
    let m = minimize(f, chi0, 0.05, budget, 1e-12);
    (m.value <= target && disc_validity(&two_point_disc(from, to, r, &m.x, deg), dom, DEFAULT_DISC_MARGIN))
        .then_some(m.x)
}

/// Smallest certified node `r` for discs from `from` to `to`, by bisection.
fn bisect_two_point(
    dom: &DomainSpec,
    from: &Point,
    to: &Point,
    chi0: Vec<f64>,
    deg: usize,
    cfg: &SearchConfig,
) -> Option<(f64, Vec<f64>)> {
    let budget = (cfg.max_evals / 10).max(50);
    let mut hi = 1.0 - 1e-9;
    let mut chi = feasible_chi(dom, from, to, hi, &chi0, deg, budget)?;
    let mut lo = 0.0;
    for _ in 0..60 {
        if hi - lo <= 0.1 * cfg.tolerance {
            break;
        }
        let mid = 0.5 * (lo + hi);
        match feasible_chi(dom, from, to, mid, &chi, deg, budget) {
            Some(c) => {
                hi = mid;
                chi = c;
            }
            None => lo = mid,
        }
    }
    Some((hi, chi))
}

/// The optimal disc through `a` and `z` on a (scaled) polydisc.
fn polydisc_lempert_disc(radii: &[f64], a: &Point, z: &Point) -> (f64, DiscWitness) {
    const SLACK: f64 = 1e-10;
    let centers: Vec<Complex64> = a.coords().iter().zip(radii).map(|(x, r)| x / r).collect();
    let zeta: Vec<Complex64> =
        z.coords().iter().zip(radii).zip(&centers).map(|((x, r), &c)| automorphism_raw(c, 0.0, x / r)).collect();
    let m = zeta.iter().map(|w| w.norm()).fold(0.0, f64::max);
    let mu = m / (1.0 - SLACK);
    let coefficients = zeta.iter().zip(radii).map(|(w, r)| vec![Complex64::new(0.0, 0.0), w * *r / mu]).collect();
    let disc = AnalyticDisc::new(coefficients).with_chart(PolydiscChart { radii: radii.to_vec(), centers });
    let witness = DiscWitness {
        disc,
        nodes: vec![(Complex64::new(0.0, 0.0), a.clone()), (Complex64::new(mu, 0.0), z.clone())],
        // the boundary modulus of each linear coordinate is constant, so sampling is exact
        margin: 0.5 * SLACK,
    };
    (mu, witness)
}

/// Certified upper bound for `k̃*_G(a, z)`.
pub fn lempert_upper_bound(dom: &DomainSpec, a: &Point, z: &Point, cfg: &SearchConfig) -> Result<BoundInterval> {
    cfg.validate()?;
    dom.validate()?;
    dom.ensure_contains(a)?;
    dom.ensure_contains(z)?;
    let mut out = BoundInterval::unbounded();
    if a.approx_eq(z) {
        out.upper = 0.0;
        out.upper_witness = Some(DiscWitness {
            disc: AnalyticDisc::constant(a),
            nodes: vec![(Complex64::new(0.0, 0.0), a.clone())],
            margin: 0.0,
        });
        out.notes.push("constant disc".into());
        return Ok(out);
    }
    if let Some(radii) = dom.polydisc_radii() {
        let (mu, w) = polydisc_lempert_disc(&radii, a, z);
        if mu < 1.0 && w.verify(dom, 1e-12) {
            out.upper = mu;
            out.upper_witness = Some(w);
            out.notes.push("polydisc geodesic".into());
            return Ok(out);
        }
    }

    let deg = cfg.disc_degree_max.max(1);
    let nchi = 2 * dom.dim() * deg.saturating_sub(1);
    let orientations = [(a, z), (z, a)];
    let run = |from: &Point, to: &Point, chi0: Vec<f64>| {
        bisect_two_point(dom, from, to, chi0, deg, cfg).map(|(r, chi)| {
            let disc = two_point_disc(from, to, r, &chi, deg);
            let nodes = vec![(Complex64::new(0.0, 0.0), from.clone()), (Complex64::new(r, 0.0), to.clone())];
            (r, DiscWitness { disc, nodes, margin: DEFAULT_DISC_MARGIN })
        })
    };
    let mut candidates: Vec<Option<(f64, DiscWitness)>> =
        orientations.iter().map(|(f, t)| run(f, t, vec![0.0; nchi])).collect();
    let restarts: Vec<Option<(f64, DiscWitness)>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = cfg.rng(i as u64);
            let (f, t) = orientations[i % 2];
            let chi0 = (0..nchi).map(|_| rng.gen_range(-0.3..0.3)).collect();
            run(f, t, chi0)
        })
        .collect();
    candidates.extend(restarts);
    let best = candidates.into_iter().flatten().fold(None::<(f64, DiscWitness)>, |acc, c| match acc {
        Some(b) if b.0 <= c.0 => Some(b),
        _ => Some(c),
    });
    match best {
        Some((r, w)) => {
            out.upper = r;
            out.upper_witness = Some(w);
            out.notes.push("two-point disc search".into());
            Ok(out)
        }
        None => Err(Error::NoCandidate(format!("no certified disc through {a} and {z}"))),
    }
}

/// Certified upper bound for `d^max_G(p, z) = min_a k̃*_G(a, z)^{p(a)}`.
pub fn dmax_upper_bound(dom: &DomainSpec, p: &WeightMap, z: &Point, cfg: &SearchConfig) -> Result<BoundInterval> {
    check_inputs(dom, p, z, cfg)?;
    if p.is_empty() {
        return Ok(BoundInterval::exact(1.0, "empty weight"));
    }
    if let Ok(v) = dmax_eval(dom, p, z) {
        let mut out = BoundInterval::unbounded();
        out.upper = v.value;
        out.notes.push(v.formula_id);
        return Ok(out);
    }
    let mut out = BoundInterval::unbounded();
    for (a, w) in p.entries() {
        let b = lempert_upper_bound(dom, a, z, cfg)?;
        let v = b.upper.powf(*w);
        if v < out.upper || out.upper_witness.is_none() {
            out.upper = out.upper.min(v);
            out.upper_witness = b.upper_witness;
        }
    }
    out.notes.push("min over poles of disc bounds".into());
    Ok(out)
}

// ---------------------------------------------------------------------------
// Coman function

/// Degree-2 interpolation through `(0, z)`, `(μ₁, p₁)`, `(μ₂, p₂)` plus
/// `λ(λ − μ₁)(λ − μ₂)χ(λ)`.
fn three_point_disc(
    z: &Point,
    p1: &Point,
    p2: &Point,
    mu1: Complex64,
    mu2: Complex64,
    chi: &[f64],
    deg: usize,
) -> AnalyticDisc {
    let per = deg.saturating_sub(2);
    let len = deg.max(2) + 1;
    let coefficients = (0..z.dim())
        .map(|j| {
            let (w, a, b) = (z.coords()[j], p1.coords()[j], p2.coords()[j]);
            // Newton form: w + λ·d1 + λ(λ − μ₁)·d2
            let d1 = (a - w) / mu1;
            let d2 = ((b - w) / mu2 - d1) / (mu2 - mu1);
            let mut c = vec![Complex64::new(0.0, 0.0); len];
            c[0] = w;
            c[1] = d1 - mu1 * d2;
            c[2] = d2;
            // λ(λ − μ₁)(λ − μ₂) = λ³ − (μ₁ + μ₂)λ² + μ₁μ₂λ
            let s = mu1 + mu2;
            let q = mu1 * mu2;
            for k in 0..per {
                let x = Complex64::new(chi[2 * (j * per + k)], chi[2 * (j * per + k) + 1]);
                c[k + 3] += x;
                c[k + 2] -= x * s;
                c[k + 1] += x * q;
            }
            c
        })
        .collect();
    AnalyticDisc::new(coefficients)
}

fn coman_nodes_ok(mu1: Complex64, mu2: Complex64) -> bool {
    let (a, b) = (mu1.norm(), mu2.norm());
    a > 1e-12 && b > 1e-12 && a < 1.0 && b < 1.0 && (mu1 - mu2).norm() > 1e-9
}

/// Certified upper bound for the Coman function `δ_G({p₁, p₂}, z)`: the
/// smallest `|μ₁μ₂|` found over valid discs with `φ(0) = z`, `φ(μᵢ) = pᵢ`.
pub fn coman_upper_bound(dom: &DomainSpec, poles: [&Point; 2], z: &Point, cfg: &SearchConfig) -> Result<BoundInterval> {
    cfg.validate()?;
    dom.validate()?;
    let [p1, p2] = poles;
    for x in [p1, p2, z] {
        dom.ensure_contains(x)?;
    }
    if p1.approx_eq(p2) {
        return Err(Error::InvalidInput("Coman poles must be distinct".into()));
    }
    let mut out = BoundInterval::unbounded();
    if z.approx_eq(p1) || z.approx_eq(p2) {
        out.upper = 0.0;
        out.notes.push("base point is a pole".into());
        return Ok(out);
    }
    let deg = cfg.disc_degree_max.max(2);
    let nchi = 2 * dom.dim() * deg.saturating_sub(2);
    let target = 1.0 - DEFAULT_DISC_MARGIN;
    let params = |x: &[f64]| (Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3]));
    let objective = |x: &[f64]| {
        let (mu1, mu2) = params(x);
        if !coman_nodes_ok(mu1, mu2) {
            return 3.0;
        }
        let b = boundary_or_inf(&three_point_disc(z, p1, p2, mu1, mu2, &x[4..], deg), dom);
        if b <= target {
            (mu1 * mu2).norm()
        } else {
            1.0 + b.min(1e6)
        }
    };
    let certify = |x: &[f64]| -> Option<(f64, DiscWitness)> {
        let (mu1, mu2) = params(x);
        if !coman_nodes_ok(mu1, mu2) {
            return None;
        }
        let disc = three_point_disc(z, p1, p2, mu1, mu2, &x[4..], deg);
        let w = DiscWitness {
            disc,
            nodes: vec![(Complex64::new(0.0, 0.0), z.clone()), (mu1, p1.clone()), (mu2, p2.clone())],
            margin: DEFAULT_DISC_MARGIN,
        };
        w.verify(dom, 1e-9).then(|| ((mu1 * mu2).norm(), w))
    };

    // symmetric seeds μ₂ = −μ₁ on a grid of moduli and directions
    let mut seeds: Vec<Vec<f64>> = Vec::new();
    for k in 1..20 {
        let m = 0.05 * k as f64;
        for q in 0..4 {
            let u = Complex64::from_polar(m, std::f64::consts::FRAC_PI_4 * q as f64);
            let mut x = vec![u.re, u.im, -u.re, -u.im];
            x.extend(std::iter::repeat(0.0).take(nchi));
            seeds.push(x);
        }
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    let consider = |best: &mut Option<(f64, Vec<f64>)>, x: Vec<f64>| {
        if let Some((v, _)) = certify(&x) {
            if best.as_ref().map_or(true, |b| v < b.0) {
                *best = Some((v, x));
            }
        }
    };
    for x in &seeds {
        consider(&mut best, x.clone());
    }
    // shrink the best symmetric seed along its ray
    if let Some((_, x)) = best.clone() {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let y: Vec<f64> = x[..4].iter().map(|v| v * mid).chain(x[4..].iter().copied()).collect();
            if certify(&y).is_some() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let y: Vec<f64> = x[..4].iter().map(|v| v * hi).chain(x[4..].iter().copied()).collect();
        consider(&mut best, y);
    }
    if let Some((_, x)) = best.clone() {
        let m = minimize(objective, &x, 0.02, cfg.max_evals, 1e-15);
        consider(&mut best, m.x);
    }
    let restarts: Vec<Vec<f64>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = cfg.rng(i as u64);
            let mut x: Vec<f64> = (0..4).map(|_| rng.gen_range(-0.7..0.7)).collect();
            x.extend((0..nchi).map(|_| rng.gen_range(-0.1..0.1)));
            minimize(objective, &x, 0.1, cfg.max_evals, 1e-15).x
        })
        .collect();
    for x in restarts {
        consider(&mut best, x);
    }
    match best.and_then(|(_, x)| certify(&x)) {
        Some((v, w)) => {
            out.upper = v;
            out.upper_witness = Some(w);
            out.notes.push("three-point disc search".into());
            Ok(out)
        }
        None => Err(Error::NoCandidate("no certified three-point disc".into())),
    }
}

// ---------------------------------------------------------------------------
// sandwich

/// `[lower, upper] ∋ g_G(p, z)` from the variational searches alone.
///
/// Lower side: the best of the `d^min` search and `∏_a g_G(a, z)^{p(a)}`
/// with single-pole Green functions (closed form or their own `d^min`
/// search). Upper side: the `d^max` bound.
pub fn variational_interval(dom: &DomainSpec, p: &WeightMap, z: &Point, cfg: &SearchConfig) -> Result<BoundInterval> {
    check_inputs(dom, p, z, cfg)?;
    if p.is_empty() {
        return Ok(BoundInterval::exact(1.0, "empty weight"));
    }
    let mut out = dmin_lower_bound(dom, p, z, cfg)?;
    let mut product = 1.0;
    for (a, w) in p.entries() {
        let single = WeightMap::characteristic(p.dim(), [a.clone()])?;
        let g = match green_exact(dom, &single, z) {
            Ok(v) => v.value,
            Err(_) => dmin_lower_bound(dom, &single, z, cfg)?.lower,
        };
        product *= g.powf(*w);
    }
    if product > out.lower {
        out.lower = product;
        out.lower_witness = None;
        out.notes.push("product of single-pole Green functions".into());
    }
    let upper = dmax_upper_bound(dom, p, z, cfg)?;
    out.upper = upper.upper;
    out.upper_witness = upper.upper_witness;
    out.notes.extend(upper.notes);
    if out.lower > out.upper + cfg.tolerance {
        return Err(Error::IntervalInversion { lower: out.lower, upper: out.upper });
    }
    Ok(out)
}

/// Interval for `g_G(p, z)`, collapsed onto the closed form when one exists.
pub fn sandwich(dom: &DomainSpec, p: &WeightMap, z: &Point, cfg: &SearchConfig) -> Result<BoundInterval> {
    let mut out = variational_interval(dom, p, z, cfg)?;
    if let Ok(g) = green_exact(dom, p, z) {
        if !out.contains(g.value, cfg.tolerance) {
            return Err(Error::IntervalInversion { lower: out.lower.max(g.value), upper: out.upper.min(g.value) });
        }
        out.lower = g.value;
        out.upper = g.value;
        out.notes.push(format!("exact {}", g.formula_id));
    }
    Ok(out)
}
