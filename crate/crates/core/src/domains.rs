//! Model domains, their gauges, structured holomorphic maps, and analytic discs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disc::{automorphism_raw, check_disc};
use crate::{Error, Point, Result};

/// Minkowski functional of a balanced domain in `ℂⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaugeSpec {
    /// `Σ|z_j|`.
    AbsSum,
    /// `h` with `h(z, w) < 1 ⇔ |z| + √|w| < 1`; two variables only.
    AbsPlusSqrtAbs,
    /// `max |z_j|` (the polydisc).
    MaxAbs,
}

impl GaugeSpec {
    pub fn is_convex(self) -> bool {
        !matches!(self, GaugeSpec::AbsPlusSqrtAbs)
    }
}

/// `h(z) = inf{t > 0 : z/t ∈ G}` for the gauge ball `G`.
///
/// For `AbsPlusSqrtAbs` the condition `|z|/t + √(|w|/t) = 1` is a quadratic in
/// `1/√t`, giving `h = ((√|w| + √(|w| + 4|z|))/2)²` with no cancellation.
pub fn minkowski(gauge: GaugeSpec, z: &Point) -> Result<f64> {
    let c = z.coords();
    match gauge {
        GaugeSpec::AbsSum => Ok(c.iter().map(|x| x.norm()).sum()),
        GaugeSpec::MaxAbs => Ok(c.iter().map(|x| x.norm()).fold(0.0, f64::max)),
        GaugeSpec::AbsPlusSqrtAbs => {
            z.ensure_dim(2)?;
            let (a, b) = (c[0].norm(), c[1].norm());
            let s = 0.5 * (b.sqrt() + (b + 4.0 * a).sqrt());
            Ok(s * s)
        }
    }
}

/// Descriptor of a model domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    UnitDisc,
    Polydisc {
        n: usize,
    },
    GaugeBall {
        gauge: GaugeSpec,
        n: usize,
    },
    /// `{z ∈ ℂⁿ : |z^α| < 1}` with `gcd(α) = 1`.
    ReinhardtPower {
        alpha: Vec<u32>,
    },
    Product {
        left: Box<DomainSpec>,
        right: Box<DomainSpec>,
    },
    /// `r·inner`.
    Scaled {
        r: f64,
        inner: Box<DomainSpec>,
    },
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl DomainSpec {
    pub fn polydisc(n: usize) -> Self {
        DomainSpec::Polydisc { n }
    }

    pub fn gauge_ball(gauge: GaugeSpec, n: usize) -> Self {
        DomainSpec::GaugeBall { gauge, n }
    }

    pub fn product(left: DomainSpec, right: DomainSpec) -> Self {
        DomainSpec::Product { left: Box::new(left), right: Box::new(right) }
    }

    pub fn scaled(r: f64, inner: DomainSpec) -> Self {
        DomainSpec::Scaled { r, inner: Box::new(inner) }
    }

    /// Check the descriptor invariants.
    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::UnitDisc => Ok(()),
            DomainSpec::Polydisc { n } if *n >= 1 => Ok(()),
            DomainSpec::Polydisc { .. } => Err(Error::InvalidInput("polydisc dimension must be ≥ 1".into())),
            DomainSpec::GaugeBall { gauge: GaugeSpec::AbsPlusSqrtAbs, n } if *n != 2 => {
                Err(Error::InvalidInput("the |z| + √|w| ball lives in ℂ²".into()))
            }
            DomainSpec::GaugeBall { n, .. } if *n == 0 => {
                Err(Error::InvalidInput("gauge ball dimension must be ≥ 1".into()))
            }
            DomainSpec::GaugeBall { .. } => Ok(()),
            DomainSpec::ReinhardtPower { alpha } => {
                if alpha.is_empty() || alpha.iter().any(|&a| a == 0) {
                    return Err(Error::InvalidInput("Reinhardt exponents must be ≥ 1".into()));
                }
                if alpha.iter().copied().fold(0, gcd) != 1 {
                    return Err(Error::InvalidInput(format!("exponents {alpha:?} are not relatively prime")));
                }
                Ok(())
            }
            DomainSpec::Product { left, right } => {
                left.validate()?;
                right.validate()
            }
            DomainSpec::Scaled { r, inner } => {
                if !(*r > 0.0 && *r <= 1.0) {
                    return Err(Error::InvalidInput(format!("scale {r} not in (0, 1]")));
                }
                inner.validate()
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::UnitDisc => 1,
            DomainSpec::Polydisc { n } | DomainSpec::GaugeBall { n, .. } => *n,
            DomainSpec::ReinhardtPower { alpha } => alpha.len(),
            DomainSpec::Product { left, right } => left.dim() + right.dim(),
            DomainSpec::Scaled { inner, .. } => inner.dim(),
        }
    }

    /// Value of the defining function `ρ` with `G = {ρ < 1}`.
    ///
    /// For balanced domains this is the Minkowski functional; for
    /// `ReinhardtPower` it is `|z^α|`. In every case `log ρ` is
    /// plurisubharmonic, so its maximum over an analytic disc is attained on
    /// the boundary circle.
    pub fn defining_value(&self, z: &Point) -> Result<f64> {
        z.ensure_dim(self.dim())?;
        Ok(self.defining_value_raw(z.coords()))
    }

    pub(crate) fn defining_value_raw(&self, c: &[Complex64]) -> f64 {
        match self {
            DomainSpec::UnitDisc => c[0].norm(),
            DomainSpec::Polydisc { .. } | DomainSpec::GaugeBall { gauge: GaugeSpec::MaxAbs, .. } => {
                c.iter().map(|x| x.norm()).fold(0.0, f64::max)
            }
            DomainSpec::GaugeBall { gauge: GaugeSpec::AbsSum, .. } => c.iter().map(|x| x.norm()).sum(),
            DomainSpec::GaugeBall { gauge: GaugeSpec::AbsPlusSqrtAbs, .. } => {
                let (a, b) = (c[0].norm(), c[1].norm());
                let s = 0.5 * (b.sqrt() + (b + 4.0 * a).sqrt());
                s * s
            }
            DomainSpec::ReinhardtPower { alpha } => {
                c.iter().zip(alpha).map(|(x, &k)| x.norm().powi(k as i32)).product()
            }
            DomainSpec::Product { left, right } => {
                let k = left.dim();
                left.defining_value_raw(&c[..k]).max(right.defining_value_raw(&c[k..]))
            }
            DomainSpec::Scaled { r, inner } => {
                let scaled: Vec<Complex64> = c.iter().map(|x| x / r).collect();
                inner.defining_value_raw(&scaled)
            }
        }
    }

    pub fn contains(&self, z: &Point) -> Result<bool> {
        Ok(self.defining_value(z)? < 1.0)
    }

    pub fn ensure_contains(&self, z: &Point) -> Result<()> {
        if self.contains(z)? {
            Ok(())
        } else {
            Err(Error::DomainViolation(format!("{z} is not in {self:?}")))
        }
    }

    /// Whether `defining_value` is absolutely homogeneous of degree one.
    pub fn is_balanced(&self) -> bool {
        match self {
            DomainSpec::ReinhardtPower { .. } => false,
            DomainSpec::Product { left, right } => left.is_balanced() && right.is_balanced(),
            DomainSpec::Scaled { inner, .. } => inner.is_balanced(),
            _ => true,
        }
    }

    pub fn is_convex(&self) -> bool {
        match self {
            DomainSpec::GaugeBall { gauge, .. } => gauge.is_convex(),
            DomainSpec::ReinhardtPower { .. } => false,
            DomainSpec::Product { left, right } => left.is_convex() && right.is_convex(),
            DomainSpec::Scaled { inner, .. } => inner.is_convex(),
            _ => true,
        }
    }

    /// Per-coordinate radii when the domain is a (scaled) product of discs.
    pub fn polydisc_radii(&self) -> Option<Vec<f64>> {
        match self {
            DomainSpec::UnitDisc => Some(vec![1.0]),
            DomainSpec::Polydisc { n } | DomainSpec::GaugeBall { gauge: GaugeSpec::MaxAbs, n } => Some(vec![1.0; *n]),
            DomainSpec::GaugeBall { n: 1, .. } => Some(vec![1.0]),
            DomainSpec::Product { left, right } => {
                let mut v = left.polydisc_radii()?;
                v.extend(right.polydisc_radii()?);
                Some(v)
            }
            DomainSpec::Scaled { r, inner } => Some(inner.polydisc_radii()?.into_iter().map(|x| x * r).collect()),
            _ => None,
        }
    }

    /// The gauge and scale when the domain is `r·{h < 1}` for a gauge ball.
    pub fn scaled_gauge(&self) -> Option<(GaugeSpec, f64)> {
        match self {
            DomainSpec::UnitDisc => Some((GaugeSpec::MaxAbs, 1.0)),
            DomainSpec::Polydisc { .. } => Some((GaugeSpec::MaxAbs, 1.0)),
            DomainSpec::GaugeBall { gauge, .. } => Some((*gauge, 1.0)),
            DomainSpec::Scaled { r, inner } => inner.scaled_gauge().map(|(g, s)| (g, s * r)),
            _ => None,
        }
    }

    /// `sup_{z∈G} |Σ c_j z_j|`, or `None` when the domain is unbounded in that direction.
    pub fn linear_sup(&self, c: &[Complex64]) -> Option<f64> {
        let norms = || c.iter().map(|x| x.norm());
        match self {
            DomainSpec::UnitDisc | DomainSpec::Polydisc { .. } => Some(norms().sum()),
            DomainSpec::GaugeBall { gauge: GaugeSpec::MaxAbs, .. } => Some(norms().sum()),
            DomainSpec::GaugeBall { .. } => Some(norms().fold(0.0, f64::max)),
            DomainSpec::ReinhardtPower { .. } => {
                if c.iter().all(|x| x.norm() == 0.0) {
                    Some(0.0)
                } else {
                    None
                }
            }
            DomainSpec::Product { left, right } => {
                let k = left.dim();
                Some(left.linear_sup(&c[..k])? + right.linear_sup(&c[k..])?)
            }
            DomainSpec::Scaled { r, inner } => inner.linear_sup(c).map(|s| s * r),
        }
    }

    /// `sup_{z∈G} |z^β|` for a nonzero multi-index `β`, or `None` if unbounded.
    pub fn monomial_sup(&self, beta: &[u32]) -> Option<f64> {
        let total: u32 = beta.iter().sum();
        if total == 0 {
            return Some(1.0);
        }
        match self {
            DomainSpec::UnitDisc | DomainSpec::Polydisc { .. } => Some(1.0),
            DomainSpec::GaugeBall { gauge: GaugeSpec::MaxAbs, .. } => Some(1.0),
            DomainSpec::GaugeBall { gauge: GaugeSpec::AbsSum, .. } => {
                let t = total as f64;
                Some(beta.iter().filter(|&&b| b > 0).map(|&b| (b as f64 / t).powi(b as i32)).product())
            }
            DomainSpec::GaugeBall { gauge: GaugeSpec::AbsPlusSqrtAbs, .. } => {
                // maximize x^{b1} y^{2 b2} on x + y = 1
                let (b1, b2) = (beta[0] as f64, 2.0 * beta[1] as f64);
                let t = b1 + b2;
                let f = |b: f64| if b == 0.0 { 1.0 } else { (b / t).powf(b) };
                Some(f(b1) * f(b2))
            }
            DomainSpec::ReinhardtPower { alpha } => {
                let k = beta[0] as f64 / alpha[0] as f64;
                let multiple = beta.iter().zip(alpha).all(|(&b, &a)| (b as f64 - k * a as f64).abs() < 1e-12);
                if multiple && k.fract() == 0.0 {
                    Some(1.0)
                } else {
                    None
                }
            }
            DomainSpec::Product { left, right } => {
                let k = left.dim();
                Some(left.monomial_sup(&beta[..k])? * right.monomial_sup(&beta[k..])?)
            }
            DomainSpec::Scaled { r, inner } => inner.monomial_sup(beta).map(|s| s * r.powi(total as i32)),
        }
    }
}

/// A primitive holomorphic map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "args", rename_all = "snake_case")]
pub enum MapPrimitive {
    /// `z ↦ (z_{i_1}, …, z_{i_k})`.
    Projection(Vec<usize>),
    /// `z ↦ (z_1^{e_1}, …, z_n^{e_n})`.
    CoordinatePower(Vec<u32>),
    /// `z_j ↦ e^{iθ_j}(z_j − a_j)/(1 − ā_j z_j)` on each coordinate.
    PerCoordinateMobius(Vec<(Complex64, f64)>),
    /// `z ↦ z^α ∈ ℂ`.
    Monomial(Vec<u32>),
    /// `z ↦ Mz + b`.
    Affine { matrix: Vec<Vec<Complex64>>, offset: Vec<Complex64> },
}

impl MapPrimitive {
    fn source_dim(&self) -> Option<usize> {
        match self {
            MapPrimitive::Projection(_) => None,
            MapPrimitive::CoordinatePower(e) | MapPrimitive::Monomial(e) => Some(e.len()),
            MapPrimitive::PerCoordinateMobius(p) => Some(p.len()),
            MapPrimitive::Affine { matrix, .. } => matrix.first().map(|r| r.len()),
        }
    }

    fn target_dim(&self, source: usize) -> usize {
        match self {
            MapPrimitive::Projection(idx) => idx.len(),
            MapPrimitive::CoordinatePower(_) | MapPrimitive::PerCoordinateMobius(_) => source,
            MapPrimitive::Monomial(_) => 1,
            MapPrimitive::Affine { matrix, .. } => matrix.len(),
        }
    }

    fn apply(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        if let Some(n) = self.source_dim() {
            if n != z.len() {
                return Err(Error::DimensionMismatch { expected: n, got: z.len() });
            }
        }
        match self {
            MapPrimitive::Projection(idx) => idx
                .iter()
                .map(|&i| z.get(i).copied().ok_or(Error::DimensionMismatch { expected: i + 1, got: z.len() }))
                .collect(),
            MapPrimitive::CoordinatePower(e) => Ok(z.iter().zip(e).map(|(x, &k)| x.powu(k)).collect()),
            MapPrimitive::PerCoordinateMobius(params) => z
                .iter()
                .zip(params)
                .map(|(x, &(a, theta))| {
                    check_disc(*x)?;
                    Ok(automorphism_raw(a, theta, *x))
                })
                .collect(),
            MapPrimitive::Monomial(alpha) => Ok(vec![z.iter().zip(alpha).map(|(x, &k)| x.powu(k)).product()]),
            MapPrimitive::Affine { matrix, offset } => {
                if offset.len() != matrix.len() {
                    return Err(Error::InvalidInput("affine offset length differs from row count".into()));
                }
                Ok(matrix
                    .iter()
                    .zip(offset)
                    .map(|(row, b)| row.iter().zip(z).map(|(m, x)| m * x).sum::<Complex64>() + b)
                    .collect())
            }
        }
    }

    fn jacobian_det(&self, z: &[Complex64]) -> Result<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        match self {
            MapPrimitive::Projection(idx) => {
                let mut seen = vec![false; z.len()];
                if idx.len() != z.len() {
                    return Err(Error::InvalidInput("jacobian of a non-square projection".into()));
                }
                for &i in idx {
                    if i >= z.len() || seen[i] {
                        return Ok(Complex64::new(0.0, 0.0));
                    }
                    seen[i] = true;
                }
                // sign of the permutation
                let mut sign = 1.0;
                let mut visited = vec![false; idx.len()];
                for s in 0..idx.len() {
                    let mut len = 0;
                    let mut j = s;
                    while !visited[j] {
                        visited[j] = true;
                        j = idx[j];
                        len += 1;
                    }
                    if len > 0 && len % 2 == 0 {
                        sign = -sign;
                    }
                }
                Ok(Complex64::new(sign, 0.0))
            }
            MapPrimitive::CoordinatePower(e) => Ok(z
                .iter()
                .zip(e)
                .map(|(x, &k)| if k == 0 { Complex64::new(0.0, 0.0) } else { x.powu(k - 1) * k as f64 })
                .product()),
            MapPrimitive::PerCoordinateMobius(params) => Ok(z
                .iter()
                .zip(params)
                .map(|(x, &(a, theta))| {
                    let d = one - a.conj() * x;
                    Complex64::from_polar(1.0, theta) * (1.0 - a.norm_sqr()) / (d * d)
                })
                .product()),
            MapPrimitive::Monomial(alpha) => {
                if alpha.len() != 1 {
                    return Err(Error::InvalidInput("jacobian of a monomial map from ℂⁿ, n > 1".into()));
                }
                let k = alpha[0];
                Ok(if k == 0 { Complex64::new(0.0, 0.0) } else { z[0].powu(k - 1) * k as f64 })
            }
            MapPrimitive::Affine { matrix, .. } => {
                if matrix.len() != z.len() {
                    return Err(Error::InvalidInput("jacobian of a non-square affine map".into()));
                }
                Ok(complex_det(matrix.clone()))
            }
        }
    }
}

fn complex_det(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm())).unwrap();
        if m[pivot][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            for k in col..n {
                let v = m[col][k];
                m[row][k] -= factor * v;
            }
        }
    }
    det
}

/// A holomorphic map given as a composition chain of primitives, applied left to right.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct HoloMap {
    pub chain: Vec<MapPrimitive>,
}

impl HoloMap {
    pub fn new(chain: Vec<MapPrimitive>) -> Self {
        HoloMap { chain }
    }

    /// The empty chain; `dim` is only used by callers for bookkeeping.
    pub fn identity(_dim: usize) -> Self {
        HoloMap::default()
    }

    pub fn then(mut self, next: MapPrimitive) -> Self {
        self.chain.push(next);
        self
    }

    pub fn source_dim(&self) -> Option<usize> {
        self.chain.first().and_then(MapPrimitive::source_dim)
    }

    pub fn target_dim(&self, source: usize) -> Result<usize> {
        let mut d = source;
        for p in &self.chain {
            if let Some(n) = p.source_dim() {
                if n != d {
                    return Err(Error::DimensionMismatch { expected: n, got: d });
                }
            }
            d = p.target_dim(d);
        }
        Ok(d)
    }

    pub fn eval(&self, z: &Point) -> Result<Point> {
        let mut v = z.coords().to_vec();
        for p in &self.chain {
            v = p.apply(&v)?;
        }
        Point::new(v)
    }

    /// Evaluate and require the image to lie in `codomain`.
    pub fn eval_into(&self, z: &Point, codomain: &DomainSpec) -> Result<Point> {
        let w = self.eval(z)?;
        codomain.ensure_contains(&w)?;
        Ok(w)
    }

    /// Complex Jacobian determinant of an equidimensional chain.
    pub fn jacobian_det(&self, z: &Point) -> Result<Complex64> {
        let mut v = z.coords().to_vec();
        let mut det = Complex64::new(1.0, 0.0);
        for p in &self.chain {
            det *= p.jacobian_det(&v)?;
            v = p.apply(&v)?;
        }
        if v.len() != z.dim() {
            return Err(Error::InvalidInput("jacobian of a map between different dimensions".into()));
        }
        Ok(det)
    }
}

/// Default validity margin for analytic discs.
pub const DEFAULT_DISC_MARGIN: f64 = 1e-6;

/// Boundary samples per unit of degree.
pub const SAMPLES_PER_DEGREE: usize = 64;

/// Per-coordinate automorphism of a scaled polydisc applied after the polynomial part.
///
/// Coordinate `j` is mapped by `w ↦ r_j·φ_j(w/r_j)` where `φ_j` is the inverse
/// of `λ ↦ (λ − a_j)/(1 − ā_j λ)`, i.e. `φ_j(λ) = (λ + a_j)/(1 + ā_j λ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolydiscChart {
    pub radii: Vec<f64>,
    pub centers: Vec<Complex64>,
}

impl PolydiscChart {
    fn apply(&self, w: &mut [Complex64]) {
        for ((x, &r), &a) in w.iter_mut().zip(&self.radii).zip(&self.centers) {
            let u = *x / r;
            *x = r * (u + a) / (Complex64::new(1.0, 0.0) + a.conj() * u);
        }
    }
}

/// Polynomial map `E → ℂⁿ`, optionally followed by a polydisc automorphism.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticDisc {
    /// Ascending-power coefficients for each output coordinate.
    pub coefficients: Vec<Vec<Complex64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<PolydiscChart>,
}

impl AnalyticDisc {
    pub fn new(coefficients: Vec<Vec<Complex64>>) -> Self {
        AnalyticDisc { coefficients, chart: None }
    }

    pub fn constant(z: &Point) -> Self {
        AnalyticDisc::new(z.coords().iter().map(|&c| vec![c]).collect())
    }

    pub fn with_chart(mut self, chart: PolydiscChart) -> Self {
        self.chart = Some(chart);
        self
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn degree(&self) -> usize {
        self.coefficients.iter().map(|c| c.len().saturating_sub(1)).max().unwrap_or(0)
    }

    fn eval_poly(&self, lambda: Complex64) -> Vec<Complex64> {
        self.coefficients
            .iter()
            .map(|c| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &k| acc * lambda + k))
            .collect()
    }

    pub fn eval(&self, lambda: Complex64) -> Point {
        let mut v = self.eval_poly(lambda);
        if let Some(chart) = &self.chart {
            chart.apply(&mut v);
        }
        Point::new(v).expect("finite coefficients give finite values")
    }

    /// Largest defining value of `dom` over the boundary samples of the polynomial part.
    pub fn boundary_max(&self, dom: &DomainSpec) -> Result<f64> {
        if self.dim() != dom.dim() {
            return Err(Error::DimensionMismatch { expected: dom.dim(), got: self.dim() });
        }
        if let Some(chart) = &self.chart {
            if dom.polydisc_radii().as_deref() != Some(&chart.radii[..]) {
                return Err(Error::InvalidInput("polydisc chart on a non-matching domain".into()));
            }
        }
        let n = SAMPLES_PER_DEGREE * (self.degree() + 1);
        let mut worst = 0.0_f64;
        for k in 0..n {
            let lambda = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64);
            let v = self.eval_poly(lambda);
            worst = worst.max(dom.defining_value_raw(&v));
        }
        Ok(worst)
    }
}

/// Whether `φ(E) ⊂ dom` is certified up to `margin`.
///
/// `log ρ∘φ` is subharmonic for each supported domain, so the supremum over
/// `E` is the boundary supremum; it is sampled at `64·(d + 1)` points and
/// required to stay below `1 − margin`. A polydisc chart is an automorphism of
/// the domain and does not affect validity.
pub fn disc_validity(phi: &AnalyticDisc, dom: &DomainSpec, margin: f64) -> bool {
    if phi.coefficients.iter().flatten().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return false;
    }
    matches!(phi.boundary_max(dom), Ok(m) if m <= 1.0 - margin)
}
