//! Curve selection: catalog names on the command line and JSON spec files.

use std::collections::BTreeMap;
use std::path::Path;

use frontal_core::catalog::{self, CatalogEntry};
use frontal_core::expr::parse;
use frontal_core::legendre::{reconstruct, Closedness, CurvaturePair, LegendreCurve, PlaneMap};
use frontal_core::numerics::{Interval, SmoothMap};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// Closing order probed for spec curves.
const CLOSED_PROBE: usize = 4;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Number(f64),
    Text(String),
}

impl Scalar {
    fn text(&self) -> String {
        match self {
            Scalar::Number(x) => x.to_string(),
            Scalar::Text(s) => s.clone(),
        }
    }

    fn value(&self, what: &str) -> CliResult<f64> {
        match self {
            Scalar::Number(x) => Ok(*x),
            Scalar::Text(s) => parse(s)
                .ok()
                .and_then(|e| e.constant_value())
                .ok_or_else(|| CliError::Validation(format!("{what} must be a constant, got `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Parameters {
    Text(String),
    Map(BTreeMap<String, Scalar>),
}

impl Default for Parameters {
    fn default() -> Self {
        Parameters::Text(String::new())
    }
}

impl Parameters {
    fn text(&self) -> String {
        match self {
            Parameters::Text(s) => s.clone(),
            Parameters::Map(m) => m
                .iter()
                .map(|(k, v)| format!("{k}={}", v.text()))
                .collect::<Vec<_>>()
                .join(","),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogSpec {
    name: String,
    #[serde(default)]
    parameters: Parameters,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InlineSpec {
    gamma_x: String,
    gamma_y: String,
    nu_x: String,
    nu_y: String,
    domain: [Scalar; 2],
    closed: bool,
    #[serde(default)]
    label: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurvatureSpec {
    ell: String,
    beta: String,
    initial_point: [f64; 2],
    initial_normal: [f64; 2],
    domain: [Scalar; 2],
    #[serde(default)]
    closed: bool,
    #[serde(default)]
    label: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum CurveSpec {
    Catalog(CatalogSpec),
    Inline(InlineSpec),
    Curvature(CurvatureSpec),
}

/// A resolved curve together with where it came from.
#[derive(Debug, Clone)]
pub struct Target {
    pub name: String,
    pub curve: LegendreCurve,
    pub entry: Option<CatalogEntry>,
    /// Built by integrating a curvature pair.
    pub reconstructed: bool,
}

fn display_name(entry: &CatalogEntry, explicit: bool) -> String {
    if explicit && !entry.params.is_empty() {
        format!("{}({})", entry.name, entry.param_string())
    } else {
        entry.name.to_string()
    }
}

fn from_catalog(name: &str, params: &str) -> CliResult<Target> {
    let entry = catalog::lookup(name, params)?;
    Ok(Target {
        name: display_name(&entry, !params.trim().is_empty()),
        curve: entry.curve.clone(),
        entry: Some(entry),
        reconstructed: false,
    })
}

/// `name` or `name:key=value,...`.
pub fn from_argument(arg: &str) -> CliResult<Target> {
    let (name, params) = arg.split_once(':').unwrap_or((arg, ""));
    from_catalog(name, params)
}

fn interval(domain: &[Scalar; 2]) -> CliResult<Interval> {
    let (a, b) = (domain[0].value("domain start")?, domain[1].value("domain end")?);
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(CliError::Validation(format!("domain [{a}, {b}] is empty")));
    }
    Ok(Interval::new(a, b))
}

fn invalid(e: frontal_core::Error) -> CliError {
    CliError::Validation(format!("invalid curve spec: {e}"))
}

/// Closes the curve when asked and runs the Legendre checks.
fn checked(mut curve: LegendreCurve, closed: bool) -> CliResult<LegendreCurve> {
    if closed {
        curve.closed = Closedness::Closed(CLOSED_PROBE);
        curve.closed = match curve.detect_closed_order(CLOSED_PROBE).map_err(invalid)? {
            Closedness::Closed(n) if n >= 1 => Closedness::Closed(n),
            _ => Closedness::Closed(1),
        };
    }
    let report = curve.validate().map_err(invalid)?;
    if !report.passed {
        return Err(CliError::Validation(format!(
            "invalid curve spec: max |γ̇·ν| = {:e} at t = {} (relative {:e}); {}",
            report.legendre_residual,
            report.legendre_at,
            report.legendre_relative,
            report.failures().join("; ")
        )));
    }
    Ok(curve)
}

fn from_inline(s: InlineSpec) -> CliResult<Target> {
    let d = interval(&s.domain)?;
    let gamma = PlaneMap::parse(&s.gamma_x, &s.gamma_y, d).map_err(invalid)?;
    let nu = PlaneMap::parse(&s.nu_x, &s.nu_y, d).map_err(invalid)?;
    let name = s.label.unwrap_or_else(|| "spec".into());
    let curve = checked(LegendreCurve::new(gamma, nu, Closedness::Open, name.clone()), s.closed)?;
    Ok(Target {
        name,
        curve,
        entry: None,
        reconstructed: false,
    })
}

fn from_curvature(s: CurvatureSpec) -> CliResult<Target> {
    let d = interval(&s.domain)?;
    let ell = SmoothMap::parse(&s.ell, d).map_err(|e| invalid(e.into()))?;
    let beta = SmoothMap::parse(&s.beta, d).map_err(|e| invalid(e.into()))?;
    let [nx, ny] = s.initial_normal;
    let norm = nx.hypot(ny);
    if !(norm.is_finite() && norm > 0.0) {
        return Err(CliError::Validation("initial normal must be a nonzero vector".into()));
    }
    let name = s.label.unwrap_or_else(|| "reconstructed".into());
    let curve = reconstruct(
        &CurvaturePair::new(ell, beta),
        s.initial_point,
        [nx / norm, ny / norm],
        d,
    )
    .map_err(invalid)?
    .with_label(name.clone());
    Ok(Target {
        name,
        curve: checked(curve, s.closed)?,
        entry: None,
        reconstructed: true,
    })
}

/// Reads a spec file in any of its three forms.
pub fn from_file(path: &Path) -> CliResult<Target> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let spec: CurveSpec = serde_json::from_str(&text).map_err(|e| {
        CliError::Validation(format!(
            "{}: not a catalog, inline or curvature spec ({e})",
            path.display()
        ))
    })?;
    match spec {
        CurveSpec::Catalog(c) => from_catalog(&c.name, &c.parameters.text()),
        CurveSpec::Inline(s) => from_inline(s),
        CurveSpec::Curvature(s) => from_curvature(s),
    }
}

/// Exactly one of a positional curve and `--spec`.
pub fn resolve(curve: Option<&str>, spec: Option<&Path>) -> CliResult<Target> {
    match (curve, spec) {
        (Some(c), None) => from_argument(c),
        (None, Some(p)) => from_file(p),
        (Some(_), Some(_)) => Err(CliError::Usage("give either a curve name or --spec, not both".into())),
        (None, None) => Err(CliError::Usage(
            "no curve given; name a catalog curve or pass --spec".into(),
        )),
    }
}
