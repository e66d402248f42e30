//! Serializable results with fixed float precision.

use frontal_core::analysis::{FourVertexVerdict, SuiteCheck};
use frontal_core::events::EventReport;
use serde::Serialize;

/// Rounds to 12 significant digits; `-0` becomes `0`.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// The JSON spelling of a rounded float, shared by CSV output.
pub fn number(x: f64) -> String {
    serde_json::to_string(&sig12(x)).expect("floats serialize")
}

#[derive(Debug, Serialize)]
pub struct Singular {
    pub t: f64,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub cusp: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Convexity {
    pub convex: bool,
    /// Sign case of `(ℓ, β)`, absent when the test does not apply.
    pub case: Option<&'static str>,
}

#[derive(Debug, Serialize)]
pub struct FourVertex {
    pub fired: Vec<&'static str>,
    pub predicted: usize,
    pub measured: usize,
    pub consistent: bool,
}

#[derive(Debug, Serialize)]
pub struct Analysis {
    pub curve: String,
    pub witness_provenance: &'static str,
    pub inflections: Vec<f64>,
    pub singularities: Vec<Singular>,
    pub vertices: Vec<f64>,
    pub convexity: Option<Convexity>,
    pub simple_closed: Option<bool>,
    pub four_vertex: Option<FourVertex>,
}

impl Analysis {
    pub fn new(curve: String, events: &EventReport, verdict: Option<&FourVertexVerdict>) -> Self {
        Analysis {
            curve,
            witness_provenance: events.witness.name(),
            inflections: events.inflections.iter().map(|z| sig12(z.location)).collect(),
            singularities: events
                .singularities
                .iter()
                .map(|s| Singular {
                    t: sig12(s.zero.location),
                    n: s.nm_type.map(|t| t.n),
                    m: s.nm_type.map(|t| t.m),
                    cusp: s.cusp_name(),
                })
                .collect(),
            vertices: events.vertices.iter().map(|z| sig12(z.location)).collect(),
            convexity: verdict.map(|v| Convexity {
                convex: v.hypotheses.is_convex(),
                case: v.hypotheses.convex.map(|c| c.name()),
            }),
            simple_closed: verdict.map(|v| v.hypotheses.simple),
            four_vertex: verdict.map(|v| FourVertex {
                fired: v.fired.iter().map(|c| c.name()).collect(),
                predicted: v.predicted,
                measured: v.measured,
                consistent: v.consistent,
            }),
        }
    }

    /// One event per row: `kind,t,n,m,cusp`.
    pub fn csv(&self) -> String {
        let mut out = String::from("kind,t,n,m,cusp\n");
        for t in &self.inflections {
            out.push_str(&format!("inflection,{},,,\n", number(*t)));
        }
        for s in &self.singularities {
            let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "singularity,{},{},{},{}\n",
                number(s.t),
                opt(s.n),
                opt(s.m),
                s.cusp.as_deref().unwrap_or("")
            ));
        }
        for t in &self.vertices {
            out.push_str(&format!("vertex,{},,,\n", number(*t)));
        }
        out
    }

    pub fn text(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| number(*x)).collect::<Vec<_>>().join(", ");
        let mut out = format!("curve: {}\nwitness: {}\n", self.curve, self.witness_provenance);
        out.push_str(&format!(
            "inflections ({}): {}\n",
            self.inflections.len(),
            list(&self.inflections)
        ));
        let sing: Vec<String> = self
            .singularities
            .iter()
            .map(|s| match (s.n, s.m) {
                (Some(n), Some(m)) => format!("{} ({n}, {m})", number(s.t)),
                _ => format!("{} (untyped)", number(s.t)),
            })
            .collect();
        out.push_str(&format!("singularities ({}): {}\n", sing.len(), sing.join(", ")));
        out.push_str(&format!(
            "vertices ({}): {}\n",
            self.vertices.len(),
            list(&self.vertices)
        ));
        match self.simple_closed {
            Some(s) => out.push_str(&format!("simple closed: {}\n", if s { "yes" } else { "no" })),
            None => out.push_str("simple closed: open curve\n"),
        }
        if let Some(c) = &self.convexity {
            let case = c.case.unwrap_or("n/a");
            out.push_str(&format!(
                "convex: {} (case {case})\n",
                if c.convex { "yes" } else { "no" }
            ));
        }
        if let Some(f) = &self.four_vertex {
            out.push_str(&format!(
                "four-vertex: fired [{}], predicted >= {}, measured {}, {}\n",
                f.fired.join(", "),
                f.predicted,
                f.measured,
                if f.consistent { "consistent" } else { "INCONSISTENT" }
            ));
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub curve: String,
    pub check: String,
    pub passed: bool,
    pub skipped: bool,
    pub value: f64,
    pub tolerance: f64,
    pub detail: Option<String>,
}

impl From<&SuiteCheck> for Check {
    fn from(c: &SuiteCheck) -> Self {
        Check {
            suite: c.suite.name(),
            curve: c.curve.clone(),
            check: c.check.clone(),
            passed: c.passed,
            skipped: c.skipped,
            value: sig12(c.value),
            tolerance: sig12(c.tolerance),
            detail: c.detail.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Verification {
    pub passed: bool,
    pub failures: usize,
    pub checks: Vec<Check>,
}

impl Verification {
    pub fn text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = match (c.passed, c.skipped) {
                (_, true) => "SKIP",
                (true, _) => "PASS",
                _ => "FAIL",
            };
            out.push_str(&format!("{status} {} {}: {}", c.suite, c.curve, c.check));
            if !c.skipped {
                out.push_str(&format!(" ({} vs {})", number(c.value), number(c.tolerance)));
            }
            if let Some(d) = &c.detail {
                out.push_str(&format!(" [{d}]"));
            }
            out.push('\n');
        }
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), self.failures));
        out
    }
}
