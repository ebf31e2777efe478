//! Job specifications, command dispatch and output rendering for the
//! `contractible` binary.
//!
//! A job file is JSON. Complex numbers are `[re, im]` pairs and points are
//! lists of them:
//!
//! ```json
//! {
//!   "domain": { "kind": "polydisc", "n": 2 },
//!   "weight": { "dim": 2, "integer_valued": true, "entries": [
//!     { "point": [[-0.5, 0], [0, 0]], "weight": 2 },
//!     { "point": [[0.5, 0], [0, 0]], "weight": 1 } ] },
//!   "point": [[0, 0], [0.3333333333333333, 0]],
//!   "invariant": "green_generalized"
//! }
//! ```

use std::fmt::Write as _;

use contractible::exact::{self, ExactValue, InvariantKind};
use contractible::harness::{self, PropertyReport};
use contractible::variational::{self, BoundInterval, SearchConfig};
use contractible::{domains::DomainSpec, weights::WeightMap, Complex64, Error, Point};
use serde::{Deserialize, Serialize};

pub mod golden;

/// Process exit status for each failure class.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const SPEC_ERROR: i32 = 2;
    pub const MATH_ERROR: i32 = 3;
    pub const VERIFICATION_FAILURE: i32 = 4;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Eval,
    Estimate,
    Verify,
    Reproduce,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
    /// One JSON object per line.
    Records,
}

fn default_invariant() -> InvariantKind {
    InvariantKind::GreenGeneralized
}

/// Declarative job file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<CommandKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightMap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Point>,
    #[serde(default = "default_invariant")]
    pub invariant: InvariantKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchConfig>,
    #[serde(default)]
    pub output: OutputFormat,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub properties: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
}

impl Default for JobSpec {
    fn default() -> Self {
        JobSpec {
            command: None,
            domain: None,
            weight: None,
            point: None,
            invariant: default_invariant(),
            seed: None,
            search: None,
            output: OutputFormat::Text,
            properties: Vec::new(),
            trials: None,
        }
    }
}

impl JobSpec {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::spec(format!("invalid job file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("job specs serialize")
    }

    fn problem(&self) -> Result<(&DomainSpec, &WeightMap, &Point), CliError> {
        let missing = |f: &str| CliError::spec(format!("job file needs a `{f}` field"));
        let dom = self.domain.as_ref().ok_or_else(|| missing("domain"))?;
        let p = self.weight.as_ref().ok_or_else(|| missing("weight"))?;
        let z = self.point.as_ref().ok_or_else(|| missing("point"))?;
        dom.validate().map_err(CliError::from)?;
        if p.dim() != dom.dim() || z.dim() != dom.dim() {
            return Err(CliError::spec(format!(
                "dimensions disagree: domain {}, weight {}, point {}",
                dom.dim(),
                p.dim(),
                z.dim()
            )));
        }
        Ok((dom, p, z))
    }

    /// Search settings with the mandatory seed applied.
    pub fn search_config(&self) -> Result<SearchConfig, CliError> {
        let seed = self.seed.ok_or_else(|| CliError::spec("estimate needs a seed (`seed` field or --seed)"))?;
        let cfg = SearchConfig { seed, ..self.search.unwrap_or_default() };
        cfg.validate().map_err(CliError::from)?;
        Ok(cfg)
    }
}

/// An error with its exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn spec(message: impl Into<String>) -> Self {
        CliError { code: exit::SPEC_ERROR, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_input_error() { exit::SPEC_ERROR } else { exit::MATH_ERROR };
        let mut message = e.to_string();
        if matches!(e, Error::NoExactFormula(_)) {
            message.push_str(" (`contractible estimate`)");
        }
        CliError { code, message }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// Closed-form value of the requested invariant.
pub fn cmd_eval(spec: &JobSpec) -> Result<ExactValue, CliError> {
    let (dom, p, z) = spec.problem()?;
    Ok(exact::evaluate(spec.invariant, dom, p, z)?)
}

/// Certified interval for the requested invariant.
pub fn cmd_estimate(spec: &JobSpec) -> Result<BoundInterval, CliError> {
    let (dom, p, z) = spec.problem()?;
    let cfg = spec.search_config()?;
    let single = || match p.entries() {
        [(a, w)] if *w == 1.0 => Ok(a),
        _ => Err(CliError::spec(format!("{:?} takes exactly one pole of weight 1", spec.invariant))),
    };
    let out = match spec.invariant {
        InvariantKind::GreenGeneralized => variational::sandwich(dom, p, z, &cfg)?,
        InvariantKind::MobiusGeneralized => {
            if !p.is_integer_valued() {
                return Err(CliError::spec("the generalized Möbius function needs integer weights"));
            }
            let mut lower = variational::dmin_lower_bound(dom, p, z, &cfg)?;
            let upper = variational::sandwich(dom, p, z, &cfg)?;
            lower.upper = upper.upper;
            lower.upper_witness = upper.upper_witness;
            lower.notes.extend(upper.notes);
            lower
        }
        InvariantKind::DMin => variational::dmin_lower_bound(dom, p, z, &cfg)?,
        InvariantKind::DMax => variational::dmax_upper_bound(dom, p, z, &cfg)?,
        InvariantKind::Lempert => variational::lempert_upper_bound(dom, single()?, z, &cfg)?,
        InvariantKind::CaratheodoryMobius => {
            let a = single()?;
            let mut lower = variational::dmin_lower_bound(dom, p, z, &cfg)?;
            let upper = variational::lempert_upper_bound(dom, a, z, &cfg)?;
            lower.upper = upper.upper;
            lower.upper_witness = upper.upper_witness;
            lower.notes.extend(upper.notes);
            lower
        }
        InvariantKind::Coman => {
            let poles: Vec<&Point> = p.support().collect();
            if poles.len() != 2 || p.entries().iter().any(|(_, w)| *w != 1.0) {
                return Err(CliError::spec("the Coman function takes exactly two poles of weight 1"));
            }
            variational::coman_upper_bound(dom, [poles[0], poles[1]], z, &cfg)?
        }
    };
    Ok(out)
}

/// Default trial count for each property.
pub fn default_trials(id: &str) -> usize {
    match id {
        "product_dmax" => 300,
        "product_m_oneB" | "log_psh_slices" | "inf_family" => 200,
        "monotone_convergence" => 50,
        "zwonek" => 2,
        _ => 500,
    }
}

/// Run the named properties; an empty list runs nothing.
pub fn cmd_verify(ids: &[String], seed: u64, trials: Option<usize>) -> Result<Vec<PropertyReport>, CliError> {
    for id in ids {
        if !harness::ALL_PROPERTIES.contains(&id.as_str()) {
            return Err(CliError::spec(format!("unknown property {id:?}; known: {:?}", harness::ALL_PROPERTIES)));
        }
    }
    ids.iter()
        .map(|id| harness::run(id, trials.unwrap_or_else(|| default_trials(id)), seed).map_err(CliError::from))
        .collect()
}

/// The golden table; the random searches inside use `seed`.
pub fn cmd_reproduce(seed: u64) -> Result<Vec<golden::GoldenRow>, CliError> {
    Ok(golden::reproduce(seed)?)
}

// ---------------------------------------------------------------------------
// rendering

fn csv_string(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn json_line(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string(v).expect("records serialize");
    s.push('\n');
    s
}

pub fn render_eval(v: &ExactValue, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => format!("value    {:.17}\nformula  {}\n", v.value, v.formula_id),
        OutputFormat::Csv => {
            csv_string(&["value", "formula_id"], &[vec![format!("{:.17}", v.value), v.formula_id.clone()]])
        }
        OutputFormat::Records => json_line(v),
    }
}

fn complex_str(c: Complex64) -> String {
    format!("{}{:+}i", c.re, c.im)
}

pub fn render_estimate(b: &BoundInterval, format: OutputFormat, witness: bool) -> String {
    match format {
        OutputFormat::Text => {
            let mut s = format!("lower    {:.17}\nupper    {:.17}\nwidth    {:.3e}\n", b.lower, b.upper, b.width());
            for n in &b.notes {
                let _ = writeln!(s, "note     {n}");
            }
            if witness {
                if let Some(c) = &b.lower_witness {
                    let _ = writeln!(
                        s,
                        "lower witness  {:?}, zeros [{}]",
                        c.functional,
                        c.zeros.iter().map(|&z| complex_str(z)).collect::<Vec<_>>().join(", ")
                    );
                }
                if let Some(d) = &b.upper_witness {
                    let _ = writeln!(s, "upper witness  coefficients {:?}", d.disc.coefficients);
                    for (lambda, target) in &d.nodes {
                        let _ = writeln!(s, "               φ({}) = {target}", complex_str(*lambda));
                    }
                }
            }
            s
        }
        OutputFormat::Csv => csv_string(
            &["lower", "upper", "width", "notes"],
            &[vec![
                format!("{:.17}", b.lower),
                format!("{:.17}", b.upper),
                format!("{:e}", b.width()),
                b.notes.join("; "),
            ]],
        ),
        OutputFormat::Records => {
            if witness {
                json_line(b)
            } else {
                json_line(&serde_json::json!({ "lower": b.lower, "upper": b.upper, "notes": b.notes }))
            }
        }
    }
}

pub fn render_reports(reports: &[PropertyReport], format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => {
            let mut s = String::new();
            for r in reports {
                let _ = writeln!(
                    s,
                    "{:<22} {}  trials {:>4}  checks {:>6}  violations {:>3}  max gap {:.3e}  tol {:.0e}",
                    r.property_id,
                    if r.passed() { "PASS" } else { "FAIL" },
                    r.trials,
                    r.checks,
                    r.violations.len(),
                    r.max_gap,
                    r.tolerance
                );
                for n in &r.notes {
                    let _ = writeln!(s, "    note: {n}");
                }
                if let Some(v) = r.violations.first() {
                    let _ = writeln!(
                        s,
                        "    first violation: lhs {} rhs {} gap {:e}\n    reproducer: {}",
                        v.lhs, v.rhs, v.gap, v.instance
                    );
                }
            }
            s
        }
        OutputFormat::Csv => csv_string(
            &["property_id", "passed", "seed", "trials", "checks", "violations", "max_gap", "tolerance"],
            &reports
                .iter()
                .map(|r| {
                    vec![
                        r.property_id.clone(),
                        r.passed().to_string(),
                        r.seed.to_string(),
                        r.trials.to_string(),
                        r.checks.to_string(),
                        r.violations.len().to_string(),
                        format!("{:e}", r.max_gap),
                        format!("{:e}", r.tolerance),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        OutputFormat::Records => reports.iter().map(json_line).collect(),
    }
}

pub fn render_golden(rows: &[golden::GoldenRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => {
            let mut s = String::new();
            for r in rows {
                let _ = writeln!(
                    s,
                    "{:<34} {:<6} value {:<20} reference {:<28} {}",
                    r.label,
                    r.status(),
                    format!("{:.15}", r.value),
                    r.reference,
                    r.tag
                );
            }
            s
        }
        OutputFormat::Csv => csv_string(
            &["label", "status", "value", "reference", "tag"],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        r.label.clone(),
                        r.status().to_owned(),
                        format!("{:.17}", r.value),
                        r.reference.clone(),
                        r.tag.clone(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        OutputFormat::Records => rows.iter().map(json_line).collect(),
    }
}
