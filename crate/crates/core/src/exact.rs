//! Closed-form evaluators.
//!
//! Each evaluator either returns an [`ExactValue`] tagged with the formula it
//! used, or refuses with [`Error::NoExactFormula`]. Nothing here approximates
//! silently.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disc::{check_disc, mobius_raw, truncated_infinite_product, weighted_product_disc, DiscPoint, TailBracket};
use crate::domains::{minkowski, DomainSpec, GaugeSpec, HoloMap};
use crate::point::EQUALITY_RADIUS;
use crate::weights::WeightMap;
use crate::{Error, Point, Result};

/// Which invariant function is requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvariantKind {
    /// Generalized Möbius function `m_G` (integer weights).
    MobiusGeneralized,
    /// Generalized pluricomplex Green function `g_G`.
    GreenGeneralized,
    DMin,
    DMax,
    /// Lempert function `k̃*_G` (single pole of weight 1).
    Lempert,
    /// Möbius pseudodistance `c*_G` (single pole of weight 1).
    CaratheodoryMobius,
    /// Coman function `δ_G` (two poles of weight 1); bounds only.
    Coman,
}

/// A closed-form value together with the formula that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactValue {
    pub value: f64,
    pub formula_id: String,
}

impl ExactValue {
    fn new(value: f64, formula_id: impl Into<String>) -> Self {
        debug_assert!((0.0..=1.0 + 1e-15).contains(&value), "value {value} out of [0, 1]");
        ExactValue { value: value.clamp(0.0, 1.0), formula_id: formula_id.into() }
    }

    fn tagged(mut self, prefix: &str) -> Self {
        self.formula_id = format!("{prefix}/{}", self.formula_id);
        self
    }
}

fn no_formula(what: impl Into<String>) -> Error {
    Error::NoExactFormula(what.into())
}

fn check_polydisc_point(z: &Point) -> Result<()> {
    z.coords().iter().try_for_each(|&c| check_disc(c))
}

/// `g_E(p, z) = m_E(p, z) = d^min_E(p, z) = ∏ m_E(a, z)^{p(a)}`.
pub fn green_disc(p: &WeightMap, z: &Point) -> Result<ExactValue> {
    z.ensure_dim(1)?;
    let w = p.to_disc_weight()?;
    let z = DiscPoint::new(z.coords()[0])?;
    Ok(ExactValue::new(weighted_product_disc(&w, z), "disc-product"))
}

/// `m_{Eⁿ}(A_1×…×A_n, z) = g_{Eⁿ}(A_1×…×A_n, z) = max_j ∏_{a∈A_j} m_E(a, z_j)`.
pub fn mobius_polydisc_product_poles(sets: &[Vec<Complex64>], z: &Point) -> Result<ExactValue> {
    z.ensure_dim(sets.len())?;
    check_polydisc_point(z)?;
    let mut best = 0.0_f64;
    for (set, &zj) in sets.iter().zip(z.coords()) {
        if set.is_empty() {
            return Err(Error::InvalidInput("empty factor pole set".into()));
        }
        for &a in set {
            check_disc(a)?;
        }
        let v: f64 = set.iter().map(|&a| mobius_raw(a, zj)).product();
        best = best.max(v);
    }
    Ok(ExactValue::new(best, "polydisc-product-poles"))
}

/// Weighted poles on the first axis of `Eⁿ`: `∏_j u_j^{k_j − k_{j+1}}`.
pub fn green_polydisc_cw(p: &WeightMap, z: &Point) -> Result<ExactValue> {
    let n = p.dim();
    z.ensure_dim(n)?;
    check_polydisc_point(z)?;
    if p.is_empty() {
        return Ok(ExactValue::new(1.0, "empty-weight"));
    }
    let mut poles: Vec<(Complex64, f64, &Point)> = Vec::with_capacity(p.len());
    for (a, w) in p.entries() {
        if a.coords()[1..].iter().any(|c| c.norm() > EQUALITY_RADIUS) {
            return Err(Error::InvalidInput(format!("pole {a} is not on the first axis")));
        }
        check_disc(a.coords()[0])?;
        poles.push((a.coords()[0], *w, a));
    }
    // descending weight, ties by lexicographic pole order
    poles.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.2.lex_cmp(y.2)));
    let tail = z.coords()[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let z1 = z.coords()[0];
    let mut partial = 1.0;
    let mut log_value = 0.0;
    for (j, &(a, k, _)) in poles.iter().enumerate() {
        partial *= mobius_raw(a, z1);
        let next = poles.get(j + 1).map_or(0.0, |x| x.1);
        let exponent = k - next;
        if exponent == 0.0 {
            continue;
        }
        let u = partial.max(tail);
        if u == 0.0 {
            return Ok(ExactValue::new(0.0, "carlehed-wiegerinck"));
        }
        log_value += exponent * u.ln();
    }
    Ok(ExactValue::new(log_value.exp(), "carlehed-wiegerinck"))
}

/// `k̃*_{Eⁿ}(a, z) = max_j m_E(a_j, z_j)`.
pub fn lempert_polydisc(a: &Point, z: &Point) -> Result<ExactValue> {
    z.ensure_dim(a.dim())?;
    check_polydisc_point(a)?;
    check_polydisc_point(z)?;
    let v = a.coords().iter().zip(z.coords()).map(|(&x, &y)| mobius_raw(x, y)).fold(0.0, f64::max);
    Ok(ExactValue::new(v, "polydisc-lempert"))
}

fn lempert_radii(radii: &[f64], a: &Point, z: &Point) -> Result<ExactValue> {
    z.ensure_dim(radii.len())?;
    a.ensure_dim(radii.len())?;
    let mut v = 0.0_f64;
    for ((&r, &x), &y) in radii.iter().zip(a.coords()).zip(z.coords()) {
        let (x, y) = (x / r, y / r);
        check_disc(x)?;
        check_disc(y)?;
        v = v.max(mobius_raw(x, y));
    }
    Ok(ExactValue::new(v, "polydisc-lempert"))
}

/// Lempert function on a convex balanced gauge ball when one argument is the origin.
pub fn lempert_balanced_convex(gauge: GaugeSpec, a: &Point, z: &Point) -> Result<ExactValue> {
    if !gauge.is_convex() {
        return Err(no_formula(format!("Lempert function on the non-convex {gauge:?} ball")));
    }
    z.ensure_dim(a.dim())?;
    let other = if a.is_origin() {
        z
    } else if z.is_origin() {
        a
    } else {
        return Err(no_formula("Lempert function between two points off the origin"));
    };
    let h = minkowski(gauge, other)?;
    if h >= 1.0 {
        return Err(Error::DomainViolation(format!("{other} is outside the {gauge:?} ball")));
    }
    Ok(ExactValue::new(h, "balanced-convex-gauge"))
}

/// `k̃*_G(a, z)` on any domain where a closed form is known.
pub fn lempert_exact(dom: &DomainSpec, a: &Point, z: &Point) -> Result<ExactValue> {
    a.ensure_dim(dom.dim())?;
    z.ensure_dim(dom.dim())?;
    if let Some(radii) = dom.polydisc_radii() {
        return lempert_radii(&radii, a, z);
    }
    if let Some((gauge, r)) = dom.scaled_gauge() {
        return lempert_balanced_convex(gauge, &a.scale(1.0 / r), &z.scale(1.0 / r));
    }
    Err(no_formula(format!("Lempert function on {dom:?}")))
}

/// `d^max_G(p, z) = min_{a∈|p|} k̃*_G(a, z)^{p(a)}`, 1 for the empty weight.
pub fn dmax_eval(dom: &DomainSpec, p: &WeightMap, z: &Point) -> Result<ExactValue> {
    z.ensure_dim(dom.dim())?;
    p.ensure_dim_of(dom)?;
    dom.ensure_contains(z)?;
    let mut best = 1.0_f64;
    for (a, w) in p.entries() {
        dom.ensure_contains(a)?;
        let k = lempert_exact(dom, a, z)?.value;
        best = best.min(k.powf(*w));
    }
    Ok(ExactValue::new(best, "dmax-inf-lempert"))
}

/// Rescale a weight and point from `r·Eⁿ` (per-coordinate radii) to `Eⁿ`.
fn unscale(radii: &[f64], p: &WeightMap, z: &Point) -> Result<(WeightMap, Point)> {
    let f = |x: &Point| Point::new(x.coords().iter().zip(radii).map(|(c, r)| c / r).collect()).expect("finite");
    let q = WeightMap::new(p.dim(), p.entries().iter().map(|(a, w)| (f(a), *w)))?;
    let q = if p.is_integer_valued() { WeightMap::integer(q.dim(), q.entries().to_vec())? } else { q };
    Ok((q, f(z)))
}

/// If the support lies on a single coordinate axis of `Eⁿ`, the index of that axis.
fn collinear_axis(p: &WeightMap) -> Option<usize> {
    let n = p.dim();
    (0..n).find(|&j| {
        p.support().all(|a| a.coords().iter().enumerate().all(|(k, c)| k == j || c.norm() <= EQUALITY_RADIUS))
    })
}

fn swap_axis(x: &Point, j: usize) -> Point {
    let mut c = x.coords().to_vec();
    c.swap(0, j);
    Point::new(c).expect("finite")
}

/// If `p = χ_{A_1×…×A_n}`, the factor sets.
fn product_structure(p: &WeightMap) -> Option<Vec<Vec<Complex64>>> {
    if p.is_empty() || p.entries().iter().any(|(_, w)| *w != 1.0) {
        return None;
    }
    let n = p.dim();
    let mut sets: Vec<Vec<Complex64>> = vec![Vec::new(); n];
    for a in p.support() {
        for (j, &c) in a.coords().iter().enumerate() {
            if !sets[j].iter().any(|&s| (s - c).norm() <= EQUALITY_RADIUS) {
                sets[j].push(c);
            }
        }
    }
    let count: usize = sets.iter().map(Vec::len).product();
    (count == p.len()).then_some(sets)
}

/// `g_{Eⁿ}(p, z)` on the unit polydisc for the structures with a closed form.
fn green_unit_polydisc(p: &WeightMap, z: &Point) -> Result<ExactValue> {
    if p.is_empty() {
        return Ok(ExactValue::new(1.0, "empty-weight"));
    }
    if p.dim() == 1 {
        return green_disc(p, z);
    }
    if p.len() == 1 {
        let (a, w) = &p.entries()[0];
        let k = lempert_polydisc(a, z)?.value;
        return Ok(ExactValue::new(k.powf(*w), "single-pole-power"));
    }
    if let Some(j) = collinear_axis(p) {
        let q = WeightMap::new(p.dim(), p.entries().iter().map(|(a, w)| (swap_axis(a, j), *w)))?;
        return green_polydisc_cw(&q, &swap_axis(z, j));
    }
    if let Some(sets) = product_structure(p) {
        return mobius_polydisc_product_poles(&sets, z);
    }
    Err(no_formula("Green function of this pole configuration on the polydisc"))
}

/// `g_G(p, z)` wherever a closed form is available.
pub fn green_exact(dom: &DomainSpec, p: &WeightMap, z: &Point) -> Result<ExactValue> {
    p.ensure_dim_of(dom)?;
    dom.ensure_contains(z)?;
    for a in p.support() {
        dom.ensure_contains(a)?;
    }
    if p.is_empty() {
        return Ok(ExactValue::new(1.0, "empty-weight"));
    }
    if let Some(radii) = dom.polydisc_radii() {
        let (q, w) = unscale(&radii, p, z)?;
        return green_unit_polydisc(&q, &w);
    }
    if let DomainSpec::ReinhardtPower { alpha } = dom {
        // every bounded holomorphic function factors through z ↦ z^α, and for
        // integer weights the Green function then agrees with d^min
        if alpha.len() == 1 {
            return green_disc(p, z);
        }
    }
    if p.len() == 1 && dom.is_convex() {
        let (a, w) = &p.entries()[0];
        let k = lempert_exact(dom, a, z)?.value;
        return Ok(ExactValue::new(k.powf(*w), "single-pole-convex"));
    }
    Err(no_formula(format!("Green function on {dom:?} with {} poles", p.len())))
}

/// `m_G(p, z)` (integer weights) wherever a closed form is available.
pub fn mobius_exact(dom: &DomainSpec, p: &WeightMap, z: &Point) -> Result<ExactValue> {
    if !p.is_integer_valued() {
        return Err(Error::InvalidWeight("the generalized Möbius function needs integer weights".into()));
    }
    if let DomainSpec::ReinhardtPower { alpha } = dom {
        return dmin_reinhardt(alpha, p, z).map(|v| v.tagged("mobius"));
    }
    // On the polydisc the Carlehed–Wiegerinck and product-pole formulas are
    // also formulas for m with integer weights; on convex domains a single pole
    // gives c*^k = k̃*^k.
    green_exact(dom, p, z).map(|v| v.tagged("mobius"))
}

/// `d^min_G(p, z)` wherever a closed form is available.
pub fn dmin_exact(dom: &DomainSpec, p: &WeightMap, z: &Point) -> Result<ExactValue> {
    p.ensure_dim_of(dom)?;
    if p.is_empty() {
        dom.ensure_contains(z)?;
        return Ok(ExactValue::new(1.0, "empty-weight"));
    }
    if let DomainSpec::ReinhardtPower { alpha } = dom {
        return dmin_reinhardt(alpha, p, z);
    }
    if let Some(radii) = dom.polydisc_radii() {
        if radii.len() == 1 {
            let (q, w) = unscale(&radii, p, z)?;
            return green_disc(&q, &w).map(|v| v.tagged("dmin"));
        }
    }
    if p.len() == 1 && dom.is_convex() {
        return green_exact(dom, p, z).map(|v| v.tagged("dmin"));
    }
    if p.entries().iter().all(|(_, w)| *w == 1.0) {
        // d^min(A, ·) = m(A, ·)
        return green_exact(dom, p, z).map(|v| v.tagged("dmin-characteristic"));
    }
    Err(no_formula(format!("d^min on {dom:?} with {} weighted poles", p.len())))
}

/// `d^min_G(p, z) = d^min_E(p′, z^α)` on `G = {|z^α| < 1}`, with `p′` the
/// fiberwise supremum of `p` under `z ↦ z^α`.
pub fn dmin_reinhardt(alpha: &[u32], p: &WeightMap, z: &Point) -> Result<ExactValue> {
    let dom = DomainSpec::ReinhardtPower { alpha: alpha.to_vec() };
    dom.validate()?;
    p.ensure_dim_of(&dom)?;
    dom.ensure_contains(z)?;
    for a in p.support() {
        dom.ensure_contains(a)?;
    }
    let phi = HoloMap::new(vec![crate::domains::MapPrimitive::Monomial(alpha.to_vec())]);
    let pushed = crate::weights::pushforward_sup(p, &phi)?;
    let image = phi.eval(z)?;
    green_disc(&pushed, &image).map(|v| v.tagged("reinhardt-power"))
}

/// `d^min_{E×ℂ^m}(p, (z, w)) = d^min_E(p′, z)` with `p′(z) = sup_w p(z, w)`.
pub fn dmin_liouville_product(p: &WeightMap, z: &Point, w: &Point) -> Result<ExactValue> {
    z.ensure_dim(1)?;
    p.ensure_dim(1 + w.dim())?;
    let proj = HoloMap::new(vec![crate::domains::MapPrimitive::Projection(vec![0])]);
    let collapsed = crate::weights::pushforward_sup(p, &proj)?;
    green_disc(&collapsed, z).map(|v| v.tagged("liouville-collapse"))
}

/// The countable weight `p(1/k, k) = 1/k²`, `k ≥ 2`, on `E×ℂ`, collapsed to
/// `∏_{k≥2} m_E(1/k, z)^{1/k²}` and evaluated to within `tol`.
pub fn liouville_countable_example(z: Complex64, tol: f64) -> Result<ExactValue> {
    check_disc(z)?;
    let r = z.norm();
    let k = (1.0 / z.re).round();
    if z.im == 0.0 && k >= 2.0 && k.is_finite() && z.re == 1.0 / k {
        return Ok(ExactValue::new(0.0, "liouville-countable"));
    }
    let factors = (2u64..).map(move |k| {
        let kf = k as f64;
        (mobius_raw(Complex64::new(1.0 / kf, 0.0), z), 1.0 / (kf * kf))
    });
    // after n factors the next index is K = n + 2
    let tail = move |n: usize| {
        let k = (n + 2) as f64;
        if r == 0.0 {
            // Σ_{j≥K} ln j / j², decreasing for j ≥ 2
            let prim = |x: f64| (x.ln() + 1.0) / x;
            TailBracket { lower: prim(k), upper: prim(k - 1.0) }
        } else if 1.0 / k <= 0.5 * r {
            // −ln m_E(1/j, z) ∈ [−ln r − c/j, −ln r + c/j], c = 2/r + 2r
            let c = 2.0 / r + 2.0 * r;
            let l = -r.ln();
            let cube = 1.0 / (2.0 * (k - 1.0) * (k - 1.0));
            TailBracket { lower: (l / k - c * cube).max(0.0), upper: l / (k - 1.0) + c * cube }
        } else {
            TailBracket::unknown()
        }
    };
    let out = truncated_infinite_product(factors, tail, tol)?;
    Ok(ExactValue::new(out.value, "liouville-countable"))
}

/// `g_D(q, F(z)) = g_G(q∘F, z)` for a proper map `F: G → D` whose Jacobian
/// does not vanish on the pole preimages.
///
/// `preimages` must list every point of `F⁻¹(|q|)`; the caller asserts
/// properness. The value is computed on `D` and transported to `G`.
pub fn green_transfer_proper(
    f: &HoloMap,
    target: &DomainSpec,
    q: &WeightMap,
    z: &Point,
    preimages: &[Point],
) -> Result<ExactValue> {
    check_transfer_jacobian(f, q, preimages)?;
    let image = f.eval(z)?;
    green_exact(target, q, &image).map(|v| v.tagged("proper-transfer"))
}

/// The Jacobian condition of the proper-map transfer on the supplied preimages.
pub fn check_transfer_jacobian(f: &HoloMap, q: &WeightMap, preimages: &[Point]) -> Result<()> {
    for a in preimages {
        if q.get(&f.eval(a)?) > 0.0 && f.jacobian_det(a)?.norm() <= 1e-14 {
            return Err(Error::JacobianVanishes(format!("{a}")));
        }
    }
    Ok(())
}

/// Dispatch on the requested invariant.
pub fn evaluate(kind: InvariantKind, dom: &DomainSpec, p: &WeightMap, z: &Point) -> Result<ExactValue> {
    dom.validate()?;
    let single = || -> Result<&Point> {
        match p.entries() {
            [(a, w)] if *w == 1.0 => Ok(a),
            _ => Err(Error::InvalidInput(format!("{kind:?} takes exactly one pole of weight 1"))),
        }
    };
    match kind {
        InvariantKind::GreenGeneralized => green_exact(dom, p, z),
        InvariantKind::MobiusGeneralized => mobius_exact(dom, p, z),
        InvariantKind::DMin => dmin_exact(dom, p, z),
        InvariantKind::DMax => dmax_eval(dom, p, z),
        InvariantKind::Lempert => {
            let a = single()?;
            dom.ensure_contains(a)?;
            dom.ensure_contains(z)?;
            lempert_exact(dom, a, z)
        }
        InvariantKind::CaratheodoryMobius => {
            single()?;
            dmin_exact(dom, p, z).map(|v| v.tagged("caratheodory"))
        }
        InvariantKind::Coman => Err(no_formula("the Coman function")),
    }
}
