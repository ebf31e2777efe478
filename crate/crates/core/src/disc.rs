//! One-variable kernel on the unit disc `E`.
//!
//! Everything else in the crate bottoms out here: the Möbius distance
//! `m_E(a, z) = |(z − a)/(1 − āz)|`, the disc automorphisms, and weighted
//! products `∏ m_E(a, z)^{p(a)}`, which on `E` are simultaneously `m_E`,
//! `g_E` and `d^min_E` of the weight `p`.

use num_complex::Complex64;

use crate::{Error, Result};

/// A point of the open unit disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint(Complex64);

impl DiscPoint {
    pub fn new(value: Complex64) -> Result<Self> {
        check_disc(value)?;
        Ok(DiscPoint(value))
    }

    pub fn real(x: f64) -> Result<Self> {
        DiscPoint::new(Complex64::new(x, 0.0))
    }

    pub fn origin() -> Self {
        DiscPoint(Complex64::new(0.0, 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

/// Reject non-finite values and moduli `≥ 1`.
pub(crate) fn check_disc(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::DomainViolation(format!("non-finite disc point {z}")));
    }
    if z.norm() >= 1.0 {
        return Err(Error::DomainViolation(format!("|{z}| = {} is not < 1", z.norm())));
    }
    Ok(())
}

/// `|(z − a)/(1 − āz)|` without domain checks.
#[inline]
pub(crate) fn mobius_raw(a: Complex64, z: Complex64) -> f64 {
    if a == z {
        return 0.0;
    }
    (z - a).norm() / (Complex64::new(1.0, 0.0) - a.conj() * z).norm()
}

/// `e^{iθ}(z − a)/(1 − āz)` without domain checks.
#[inline]
pub(crate) fn automorphism_raw(a: Complex64, theta: f64, z: Complex64) -> Complex64 {
    Complex64::from_polar(1.0, theta) * (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}

/// Möbius distance `m_E(a, z)`.
pub fn mobius_distance(a: DiscPoint, z: DiscPoint) -> f64 {
    mobius_raw(a.0, z.0)
}

/// The automorphism `z ↦ e^{iθ}(z − a)/(1 − āz)` of `E`, which sends `a` to 0.
pub fn mobius_automorphism(a: DiscPoint, theta: f64, z: DiscPoint) -> DiscPoint {
    let w = automorphism_raw(a.0, theta, z.0);
    // |w| < 1 holds mathematically; clamp the rare rounding excursion.
    let r = w.norm();
    if r >= 1.0 {
        DiscPoint(w * ((1.0 - f64::EPSILON) / r))
    } else {
        DiscPoint(w)
    }
}

/// Finite weight on the disc: distinct points with strictly positive weights.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiscWeight {
    entries: Vec<(DiscPoint, f64)>,
}

impl DiscWeight {
    /// Build from `(point, weight)` pairs. Zero weights are dropped.
    pub fn new(entries: impl IntoIterator<Item = (DiscPoint, f64)>) -> Result<Self> {
        let mut out: Vec<(DiscPoint, f64)> = Vec::new();
        for (a, w) in entries {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeight(format!("weight {w} at {}", a.0)));
            }
            if w == 0.0 {
                continue;
            }
            if out.iter().any(|(b, _)| b.0 == a.0) {
                return Err(Error::InvalidWeight(format!("duplicate pole {}", a.0)));
            }
            out.push((a, w));
        }
        Ok(DiscWeight { entries: out })
    }

    pub fn empty() -> Self {
        DiscWeight::default()
    }

    pub fn entries(&self) -> &[(DiscPoint, f64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Pointwise sum `p + q`.
    pub fn add(&self, other: &DiscWeight) -> DiscWeight {
        let mut entries = self.entries.clone();
        for &(b, w) in &other.entries {
            match entries.iter_mut().find(|(a, _)| a.0 == b.0) {
                Some((_, v)) => *v += w,
                None => entries.push((b, w)),
            }
        }
        DiscWeight { entries }
    }
}

/// `∏_a m_E(a, z)^{p(a)}`; 1 for the empty weight, 0 at a pole.
pub fn weighted_product_disc(p: &DiscWeight, z: DiscPoint) -> f64 {
    weighted_product_raw(p.entries.iter().map(|(a, w)| (a.0, *w)), z.0)
}

pub(crate) fn weighted_product_raw(poles: impl IntoIterator<Item = (Complex64, f64)>, z: Complex64) -> f64 {
    let mut log_sum = 0.0;
    for (a, w) in poles {
        let m = mobius_raw(a, z);
        if m == 0.0 {
            return 0.0;
        }
        log_sum += w * m.ln();
    }
    log_sum.exp()
}

/// Bracket `[lower, upper]` on the remaining log-mass `Σ_{k>n} e_k·(−ln m_k)`
/// of a product after its first `n` factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBracket {
    pub lower: f64,
    pub upper: f64,
}

impl TailBracket {
    pub fn exact_zero() -> Self {
        TailBracket { lower: 0.0, upper: 0.0 }
    }

    /// No information yet; the loop keeps consuming factors.
    pub fn unknown() -> Self {
        TailBracket { lower: 0.0, upper: f64::INFINITY }
    }
}

/// Result of [`truncated_infinite_product`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedProduct {
    pub value: f64,
    /// Guaranteed bound on `|value − limit|`.
    pub error_bound: f64,
    pub terms: usize,
}

/// Hard cap on the number of factors consumed.
pub const MAX_PRODUCT_TERMS: usize = 20_000_000;

/// Evaluate `∏ m_k^{e_k}` (the infimum of finite subproducts) to within `tol`.
///
/// `factors` yields `(modulus, exponent)` with moduli in `[0, 1]` and
/// exponents `≥ 0`. `tail(n)` must bracket the log-mass of the factors after
/// the first `n`. The partial products are nonincreasing, so the limit lies in
/// `[v_n·e^{−upper}, v_n·e^{−lower}]`; the midpoint is returned once the
/// half-width is at most `tol`.
pub fn truncated_infinite_product<I, T>(factors: I, tail: T, tol: f64) -> Result<TruncatedProduct>
where
    I: IntoIterator<Item = (f64, f64)>,
    T: Fn(usize) -> TailBracket,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance {tol} must be positive")));
    }
    let mut log_sum = 0.0_f64;
    let mut n = 0usize;
    let mut iter = factors.into_iter();
    loop {
        let partial = log_sum.exp();
        let TailBracket { lower, upper } = tail(n);
        if lower < 0.0 || upper < lower {
            return Err(Error::InvalidInput(format!("malformed tail bracket [{lower}, {upper}]")));
        }
        if upper.is_finite() {
            let hi = partial * (-lower).exp();
            let lo = partial * (-upper).exp();
            let half = 0.5 * (hi - lo);
            if half <= tol {
                return Ok(TruncatedProduct { value: 0.5 * (hi + lo), error_bound: half, terms: n });
            }
        }
        if n >= MAX_PRODUCT_TERMS {
            return Err(Error::TailBound { tol, terms: n });
        }
        match iter.next() {
            None => return Ok(TruncatedProduct { value: partial, error_bound: 0.0, terms: n }),
            Some((m, e)) => {
                if !(0.0..=1.0).contains(&m) || !(e >= 0.0) || !e.is_finite() {
                    return Err(Error::InvalidInput(format!("factor ({m}, {e}) out of range")));
                }
                n += 1;
                if e == 0.0 {
                    continue;
                }
                if m == 0.0 {
                    return Ok(TruncatedProduct { value: 0.0, error_bound: 0.0, terms: n });
                }
                log_sum += e * m.ln();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(x: f64) -> DiscPoint {
        DiscPoint::real(x).unwrap()
    }

    #[test]
    fn distance_examples() {
        let z = DiscPoint::new(Complex64::new(0.3, -0.4)).unwrap();
        assert!((mobius_distance(DiscPoint::origin(), z) - 0.5).abs() < 1e-15);
        assert_eq!(mobius_distance(d(0.5), DiscPoint::origin()), 0.5);
        assert_eq!(mobius_distance(z, z), 0.0);
    }

    #[test]
    fn domain_checks() {
        assert!(DiscPoint::real(1.0).is_err());
        assert!(DiscPoint::new(Complex64::new(0.6, 0.8)).is_err());
        assert!(DiscPoint::real(1.0 - 1e-12).is_ok());
        assert!(DiscPoint::new(Complex64::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn automorphism_examples() {
        let z = DiscPoint::new(Complex64::new(0.1, 0.2)).unwrap();
        assert_eq!(mobius_automorphism(DiscPoint::origin(), 0.0, z), z);
        assert_eq!(mobius_automorphism(z, 0.0, z).value(), Complex64::new(0.0, 0.0));
        assert_eq!(mobius_automorphism(d(0.5), 0.0, DiscPoint::origin()).value(), Complex64::new(-0.5, 0.0));
    }

    #[test]
    fn product_examples() {
        assert_eq!(weighted_product_disc(&DiscWeight::empty(), d(0.7)), 1.0);
        let p = DiscWeight::new([(d(0.5), 1.0)]).unwrap();
        assert!((weighted_product_disc(&p, DiscPoint::origin()) - 0.5).abs() < 1e-15);
        let p = DiscWeight::new([(d(-0.5), 2.0), (d(0.5), 1.0)]).unwrap();
        assert!((weighted_product_disc(&p, DiscPoint::origin()) - 0.125).abs() < 1e-15);
        assert_eq!(weighted_product_disc(&p, d(0.5)), 0.0);
    }

    #[test]
    fn weight_validation() {
        assert!(DiscWeight::new([(d(0.1), -1.0)]).is_err());
        assert!(DiscWeight::new([(d(0.1), 1.0), (d(0.1), 2.0)]).is_err());
        assert!(DiscWeight::new([(d(0.1), 0.0)]).unwrap().is_empty());
    }

    #[test]
    fn truncated_trivial_cases() {
        let ones = std::iter::repeat((1.0, 1.0)).take(100);
        let r = truncated_infinite_product(ones, |_| TailBracket::exact_zero(), 1e-12).unwrap();
        assert_eq!(r.value, 1.0);
        let finite = [(0.5, 1.0), (0.5, 2.0)];
        let r = truncated_infinite_product(finite, |_| TailBracket::unknown(), 1e-12).unwrap();
        assert!((r.value - 0.125).abs() < 1e-15);
        assert_eq!(r.error_bound, 0.0);
    }

    #[test]
    fn truncated_reports_uncertifiable_tail() {
        let ones = std::iter::repeat((0.9, 1e-9));
        let err = truncated_infinite_product(ones, |_| TailBracket::unknown(), 1e-9).unwrap_err();
        assert!(matches!(err, Error::TailBound { .. }));
    }
}
