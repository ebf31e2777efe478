//! Finite-support weight functions `p: G → ℝ₊` and their transfer calculus.

use serde::{Deserialize, Serialize};

use crate::disc::{DiscPoint, DiscWeight};
use crate::domains::HoloMap;
use crate::{Error, Point, Result};

/// Finite-support weight on `ℂⁿ`.
///
/// Entries are kept in canonical form: strictly positive weights, pairwise
/// distinct points (beyond the equality radius), sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeightMap", into = "RawWeightMap")]
pub struct WeightMap {
    dim: usize,
    entries: Vec<(Point, f64)>,
    integer_valued: bool,
}

#[derive(Serialize, Deserialize)]
struct RawEntry {
    point: Point,
    weight: f64,
}

#[derive(Serialize, Deserialize)]
struct RawWeightMap {
    dim: usize,
    #[serde(default)]
    integer_valued: bool,
    entries: Vec<RawEntry>,
}

impl TryFrom<RawWeightMap> for WeightMap {
    type Error = Error;
    fn try_from(raw: RawWeightMap) -> Result<Self> {
        let entries = raw.entries.into_iter().map(|e| (e.point, e.weight));
        if raw.integer_valued {
            WeightMap::integer(raw.dim, entries)
        } else {
            WeightMap::new(raw.dim, entries)
        }
    }
}

impl From<WeightMap> for RawWeightMap {
    fn from(w: WeightMap) -> Self {
        RawWeightMap {
            dim: w.dim,
            integer_valued: w.integer_valued,
            entries: w.entries.into_iter().map(|(point, weight)| RawEntry { point, weight }).collect(),
        }
    }
}

impl WeightMap {
    /// Real-valued weight. Zero weights are dropped; duplicate points are an error.
    pub fn new(dim: usize, entries: impl IntoIterator<Item = (Point, f64)>) -> Result<Self> {
        Self::build(dim, entries, false)
    }

    /// Integer-valued weight; every weight must be a nonnegative integer.
    pub fn integer(dim: usize, entries: impl IntoIterator<Item = (Point, f64)>) -> Result<Self> {
        Self::build(dim, entries, true)
    }

    /// The characteristic function `χ_A` of a finite set.
    pub fn characteristic(dim: usize, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        Self::integer(dim, points.into_iter().map(|a| (a, 1.0)))
    }

    pub fn empty(dim: usize) -> Self {
        WeightMap { dim, entries: Vec::new(), integer_valued: true }
    }

    fn build(dim: usize, entries: impl IntoIterator<Item = (Point, f64)>, integer_valued: bool) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("weight dimension must be ≥ 1".into()));
        }
        let mut out: Vec<(Point, f64)> = Vec::new();
        for (a, w) in entries {
            a.ensure_dim(dim)?;
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeight(format!("weight {w} at {a}")));
            }
            if integer_valued && w.fract() != 0.0 {
                return Err(Error::InvalidWeight(format!("non-integer weight {w} at {a}")));
            }
            if w == 0.0 {
                continue;
            }
            if out.iter().any(|(b, _)| b.approx_eq(&a)) {
                return Err(Error::InvalidWeight(format!("duplicate pole {a}")));
            }
            out.push((a, w));
        }
        out.sort_by(|x, y| x.0.lex_cmp(&y.0));
        Ok(WeightMap { dim, entries: out, integer_valued })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(Point, f64)] {
        &self.entries
    }

    /// The support `|p|`.
    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.entries.iter().map(|(a, _)| a)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_integer_valued(&self) -> bool {
        self.integer_valued
    }

    pub fn total_weight(&self) -> f64 {
        self.entries.iter().map(|(_, w)| w).sum()
    }

    pub fn max_weight(&self) -> f64 {
        self.entries.iter().map(|(_, w)| *w).fold(0.0, f64::max)
    }

    /// `p(a)`, zero off the support.
    pub fn get(&self, a: &Point) -> f64 {
        self.entries.iter().find(|(b, _)| b.approx_eq(a)).map_or(0.0, |(_, w)| *w)
    }

    /// Pointwise map of the weights, keeping the integer flag only if `f` preserves integrality.
    pub fn map_weights(&self, f: impl Fn(f64) -> f64) -> Result<WeightMap> {
        let entries = self.entries.iter().map(|(a, w)| (a.clone(), f(*w)));
        let mapped = WeightMap::new(self.dim, entries)?;
        let integer = mapped.entries.iter().all(|(_, w)| w.fract() == 0.0);
        Ok(WeightMap { integer_valued: self.integer_valued && integer, ..mapped })
    }

    /// Pointwise sum `p + q`.
    pub fn add(&self, other: &WeightMap) -> Result<WeightMap> {
        self.combine(other, |x, y| x + y)
    }

    /// Pointwise maximum.
    pub fn max(&self, other: &WeightMap) -> Result<WeightMap> {
        self.combine(other, f64::max)
    }

    fn combine(&self, other: &WeightMap, f: impl Fn(f64, f64) -> f64) -> Result<WeightMap> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let mut entries: Vec<(Point, f64)> =
            self.entries.iter().map(|(a, w)| (a.clone(), f(*w, other.get(a)))).collect();
        for (b, w) in &other.entries {
            if self.get(b) == 0.0 {
                entries.push((b.clone(), f(0.0, *w)));
            }
        }
        Self::build(self.dim, entries, false).map(|mut m| {
            m.integer_valued = self.integer_valued && other.integer_valued;
            m
        })
    }

    /// Keep only entries whose point satisfies `keep`.
    pub fn restrict(&self, keep: impl Fn(&Point) -> bool) -> WeightMap {
        WeightMap {
            dim: self.dim,
            entries: self.entries.iter().filter(|(a, _)| keep(a)).cloned().collect(),
            integer_valued: self.integer_valued,
        }
    }

    pub fn ensure_dim(&self, expected: usize) -> Result<()> {
        if self.dim == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, got: self.dim })
        }
    }

    pub(crate) fn ensure_dim_of(&self, dom: &crate::domains::DomainSpec) -> Result<()> {
        self.ensure_dim(dom.dim())
    }

    /// View a one-dimensional weight as a disc weight.
    pub fn to_disc_weight(&self) -> Result<DiscWeight> {
        if self.dim != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: self.dim });
        }
        let entries =
            self.entries.iter().map(|(a, w)| Ok((DiscPoint::new(a.coords()[0])?, *w))).collect::<Result<Vec<_>>>()?;
        DiscWeight::new(entries)
    }
}

/// `(q∘F)` restricted to `sample_set`: entries `(a, q(F(a)))` with `q(F(a)) > 0`.
pub fn pullback(q: &WeightMap, f: &HoloMap, sample_set: &[Point]) -> Result<WeightMap> {
    let mut entries = Vec::new();
    for a in sample_set {
        let image = f.eval(a)?;
        image.ensure_dim(q.dim())?;
        let w = q.get(&image);
        if w > 0.0 {
            entries.push((a.clone(), w));
        }
    }
    let dim = match sample_set.first() {
        Some(a) => a.dim(),
        None => f.source_dim().unwrap_or(q.dim()),
    };
    let mut out = WeightMap::new(dim, entries)?;
    out.integer_valued = q.is_integer_valued();
    Ok(out)
}

/// Group the support by image under `F` and keep the largest weight per fiber.
///
/// Images closer than the equality radius share a fiber.
pub fn pushforward_sup(p: &WeightMap, f: &HoloMap) -> Result<WeightMap> {
    let mut fibers: Vec<(Point, f64)> = Vec::new();
    let mut dim = None;
    for (a, w) in p.entries() {
        let image = f.eval(a)?;
        match dim {
            None => dim = Some(image.dim()),
            Some(d) => image.ensure_dim(d)?,
        }
        match fibers.iter_mut().find(|(b, _)| b.approx_eq(&image)) {
            Some((_, v)) => *v = v.max(*w),
            None => fibers.push((image, *w)),
        }
    }
    let dim = match dim {
        Some(d) => d,
        None => f.target_dim(p.dim())?,
    };
    let mut out = WeightMap::new(dim, fibers)?;
    out.integer_valued = p.is_integer_valued();
    Ok(out)
}

/// `p ≤ q` pointwise (absent points carry weight 0).
pub fn leq(p: &WeightMap, q: &WeightMap) -> bool {
    p.dim() == q.dim() && p.entries().iter().all(|(a, w)| *w <= q.get(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::MapPrimitive;
    use num_complex::Complex64;

    fn pt(xs: &[f64]) -> Point {
        Point::real(xs).unwrap()
    }

    #[test]
    fn canonical_form_drops_zeros_and_sorts() {
        let w = WeightMap::new(1, [(pt(&[0.5]), 1.0), (pt(&[-0.5]), 2.0), (pt(&[0.1]), 0.0)]).unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(w.entries()[0].0, pt(&[-0.5]));
        assert!(WeightMap::integer(1, [(pt(&[0.5]), 1.5)]).is_err());
        assert!(WeightMap::new(1, [(pt(&[0.5]), 1.0), (pt(&[0.5 + 1e-14]), 1.0)]).is_err());
        assert!(WeightMap::new(2, [(pt(&[0.5]), 1.0)]).is_err());
    }

    #[test]
    fn pullback_examples() {
        let id = HoloMap::identity(2);
        let empty = WeightMap::empty(2);
        assert!(pullback(&empty, &id, &[pt(&[0.1, 0.2])]).unwrap().is_empty());

        let q = WeightMap::new(2, [(pt(&[0.1, 0.2]), 3.0), (pt(&[0.3, 0.0]), 1.0)]).unwrap();
        let r = pullback(&q, &id, &[pt(&[0.1, 0.2]), pt(&[0.5, 0.5])]).unwrap();
        assert_eq!(r.entries(), &[(pt(&[0.1, 0.2]), 3.0)]);

        let t: f64 = 0.04;
        let f = HoloMap::new(vec![MapPrimitive::CoordinatePower(vec![1, 2])]);
        let q = WeightMap::characteristic(2, [pt(&[t, t])]).unwrap();
        let s = [pt(&[t, t.sqrt()]), pt(&[t, -t.sqrt()])];
        let r = pullback(&q, &f, &s).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.entries().iter().all(|(_, w)| *w == 1.0));
    }

    #[test]
    fn pushforward_examples() {
        let proj = HoloMap::new(vec![MapPrimitive::Projection(vec![0])]);
        let p = WeightMap::new(2, [(pt(&[-0.5, 0.0]), 2.0), (pt(&[0.5, 0.0]), 1.0)]).unwrap();
        let r = pushforward_sup(&p, &proj).unwrap();
        assert_eq!(r.entries(), &[(pt(&[-0.5]), 2.0), (pt(&[0.5]), 1.0)]);

        let t: f64 = 0.04;
        let f = HoloMap::new(vec![MapPrimitive::CoordinatePower(vec![1, 2])]);
        let p = WeightMap::characteristic(2, [pt(&[t, t.sqrt()]), pt(&[t, -t.sqrt()])]).unwrap();
        let r = pushforward_sup(&p, &f).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r.entries()[0].0.approx_eq(&pt(&[t, t])));
        assert_eq!(r.entries()[0].1, 1.0);
    }

    #[test]
    fn fiber_takes_largest_weight() {
        let f = HoloMap::new(vec![MapPrimitive::Projection(vec![1])]);
        let p = WeightMap::new(2, [(pt(&[-0.5, 0.0]), 2.0), (pt(&[0.5, 0.0]), 1.0)]).unwrap();
        let r = pushforward_sup(&p, &f).unwrap();
        assert_eq!(r.entries(), &[(pt(&[0.0]), 2.0)]);
    }

    #[test]
    fn leq_examples() {
        let a = Point::new(vec![Complex64::new(0.1, 0.1)]).unwrap();
        let p = WeightMap::new(1, [(a.clone(), 2.0)]).unwrap();
        let q = WeightMap::new(1, [(a, 1.0)]).unwrap();
        assert!(leq(&WeightMap::empty(1), &q));
        assert!(leq(&p, &p));
        assert!(!leq(&p, &q));
        assert!(leq(&q, &p));
    }

    #[test]
    fn serde_roundtrip_is_canonical() {
        let json = r#"{"dim":1,"integer_valued":true,"entries":[
            {"point":[[0.5,0.0]],"weight":1},{"point":[[-0.5,0.0]],"weight":2}]}"#;
        let w: WeightMap = serde_json::from_str(json).unwrap();
        let once = serde_json::to_string(&w).unwrap();
        let again: WeightMap = serde_json::from_str(&once).unwrap();
        assert_eq!(serde_json::to_string(&again).unwrap(), once);
        assert!(serde_json::from_str::<WeightMap>(
            r#"{"dim":1,"integer_valued":true,"entries":[{"point":[[0.5,0.0]],"weight":1.5}]}"#
        )
        .is_err());
    }
}
