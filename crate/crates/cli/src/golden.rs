//! The table of reference constants printed by `contractible reproduce`.

use contractible::domains::{minkowski, DomainSpec, GaugeSpec};
use contractible::exact::{dmax_eval, green_exact, liouville_countable_example};
use contractible::variational::{coman_upper_bound, dmin_lower_bound, SearchConfig};
use contractible::weights::WeightMap;
use contractible::{Complex64, Point, Result};
use serde::{Deserialize, Serialize};

/// `ζ′(2)`.
pub const ZETA_PRIME_2: f64 = -0.937_548_254_315_843_75;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenRow {
    pub label: String,
    pub value: f64,
    /// The expected value or inequality, as text.
    pub reference: String,
    /// Where the constant comes from.
    pub tag: String,
    pub passed: bool,
}

impl GoldenRow {
    pub fn status(&self) -> &'static str {
        if self.passed {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

fn row(label: &str, value: f64, reference: &str, tag: &str, passed: bool) -> GoldenRow {
    GoldenRow { label: label.into(), value, reference: reference.into(), tag: tag.into(), passed }
}

/// The bidisc instance `p = 2·(−1/2, 0) + 1·(1/2, 0)`, `z = (0, 1/3)`.
pub fn cw_example() -> Result<(DomainSpec, WeightMap, Point)> {
    let p = WeightMap::integer(2, [(Point::real(&[-0.5, 0.0])?, 2.0), (Point::real(&[0.5, 0.0])?, 1.0)])?;
    Ok((DomainSpec::polydisc(2), p, Point::real(&[0.0, 1.0 / 3.0])?))
}

/// Two poles `(t, ±√t)` on the ℓ¹ ball.
pub fn zwonek_instance(t: f64) -> Result<(DomainSpec, WeightMap, Point)> {
    let s = t.sqrt();
    let a = WeightMap::characteristic(2, [Point::real(&[t, s])?, Point::real(&[t, -s])?])?;
    Ok((DomainSpec::gauge_ball(GaugeSpec::AbsSum, 2), a, Point::origin(2)))
}

pub fn reproduce(seed: u64) -> Result<Vec<GoldenRow>> {
    let cfg = SearchConfig { seed, ..SearchConfig::default() };
    let mut rows = Vec::new();

    let (dom, p, z) = cw_example()?;
    let g = green_exact(&dom, &p, &z)?.value;
    rows.push(row(
        "g(p, (0, 1/3)) on the bidisc",
        g,
        "1/6",
        "Carlehed–Wiegerinck example",
        (g - 1.0 / 6.0).abs() <= 1e-12,
    ));
    let lo = dmin_lower_bound(&dom, &p, &z, &cfg)?.lower;
    rows.push(row(
        "d^min lower bound, same instance",
        lo,
        "in (0, 1/8], below 1/6",
        "strict inequality d^min < g",
        lo > 0.0 && lo <= 0.125 + 1e-9 && lo < 1.0 / 6.0 - 1e-3,
    ));

    let one = Point::real(&[1.0, 1.0])?;
    let hd = minkowski(GaugeSpec::AbsSum, &one)?;
    rows.push(row("h_D(1,1)", hd, "2", "Zwonek example, ℓ¹ ball", hd == 2.0));
    let hg = minkowski(GaugeSpec::AbsPlusSqrtAbs, &one)?;
    let want = 2.0 / (3.0 - 5f64.sqrt());
    rows.push(row("h_G(1,1)", hg, "2/(3−√5)", "Zwonek example, |z₁|+√|z₂| ball", (hg - want).abs() <= 1e-9));

    for t in [0.01, 0.04] {
        let (dom, a, o) = zwonek_instance(t)?;
        let d = dmax_eval(&dom, &a, &o)?.value;
        rows.push(row(
            &format!("d^max(A_t, 0), t = {t}"),
            d,
            &format!("t+√t = {}", t + t.sqrt()),
            "Zwonek example",
            d == t + t.sqrt(),
        ));
    }
    let t = 0.04;
    let (dom, a, o) = zwonek_instance(t)?;
    let poles: Vec<&Point> = a.support().collect();
    let c = coman_upper_bound(&dom, [poles[0], poles[1]], &o, &cfg)?.upper;
    rows.push(row(
        "Coman upper bound, t = 0.04",
        c,
        "≤ 4t = 0.16 < t+√t",
        "Zwonek example, Coman function",
        c <= 4.0 * t + 1e-9 && 4.0 * t < t + t.sqrt(),
    ));

    let v = liouville_countable_example(Complex64::new(0.0, 0.0), 1e-12)?.value;
    rows.push(row(
        "∏_{k≥2} (1/k)^{1/k²}",
        v,
        "exp(ζ′(2))",
        "countable weight on E×ℂ",
        (v - ZETA_PRIME_2.exp()).abs() <= 1e-8,
    ));
    Ok(rows)
}
