use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Radius within which two coordinates are treated as the same point.
pub const EQUALITY_RADIUS: f64 = 1e-12;

/// A point of `ℂⁿ`, `n ≥ 1`, with finite coordinates.
///
/// Serialized as a list of `[re, im]` pairs.
#[derive(Clone, PartialEq)]
pub struct Point(Vec<Complex64>);

impl Point {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("point must have at least one coordinate".into()));
        }
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("point coordinates must be finite".into()));
        }
        Ok(Point(coords))
    }

    /// Point with real coordinates.
    pub fn real(coords: &[f64]) -> Result<Self> {
        Point::new(coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![Complex64::new(0.0, 0.0); dim.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Complex64> {
        self.0
    }

    pub fn ensure_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, got: self.dim() })
        }
    }

    /// Coordinates `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> Point {
        Point(self.0[start..start + len].to_vec())
    }

    pub fn concat(&self, other: &Point) -> Point {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Point(v)
    }

    pub fn scale(&self, s: f64) -> Point {
        Point(self.0.iter().map(|c| c * s).collect())
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|c| c.norm() == 0.0)
    }

    /// Sup-norm distance.
    pub fn distance(&self, other: &Point) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Same point up to [`EQUALITY_RADIUS`].
    pub fn approx_eq(&self, other: &Point) -> bool {
        self.dim() == other.dim() && self.distance(other) <= EQUALITY_RADIUS
    }

    /// Lexicographic order on `(re, im)` of each coordinate.
    pub fn lex_cmp(&self, other: &Point) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            let o = a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.dim().cmp(&other.dim())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "{}{:+}i", c.re, c.im)?;
            }
        }
        write!(f, ")")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl From<Complex64> for Point {
    fn from(c: Complex64) -> Self {
        Point(vec![c])
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.0.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Point::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()).map_err(serde::de::Error::custom)
    }
}
