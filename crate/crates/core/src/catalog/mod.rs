//! Built-in curves with closed-form ground truth.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::events::{default_witness, germ_curvature, germ_curve, DependencyWitness, NMType, WitnessProvenance};
use crate::expr::{parse, Expr};
use crate::legendre::{Closedness, CurvaturePair, LegendreCurve, Orientation, PlaneMap};
use crate::numerics::{Interval, SmoothMap};

/// Highest closing order probed when an entry is built.
const CLOSED_ORDER_PROBE: usize = 4;

/// Known answers for a catalog curve.
#[derive(Debug, Clone, Default)]
pub struct GroundTruth {
    pub curvature: Option<CurvaturePair>,
    pub alpha: Option<SmoothMap>,
    pub evolute: Option<PlaneMap>,
    pub vertices: Vec<f64>,
    pub inflections: Vec<f64>,
    pub singularities: Vec<(f64, NMType)>,
    pub convex: Option<bool>,
    pub simple: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    /// Parameters actually used, as `key=value` pairs.
    pub params: Vec<(String, String)>,
    pub curve: LegendreCurve,
    pub truth: GroundTruth,
    /// Witness written out for curves where none of the standard
    /// constructions applies, or where a specific one is displayed.
    pub stated_witness: Option<DependencyWitness>,
}

impl CatalogEntry {
    /// The default construction, falling back to the stated witness.
    pub fn witness(&self) -> Result<DependencyWitness> {
        match default_witness(&self.curve) {
            Ok(w) => Ok(w),
            Err(e) => self.stated_witness.clone().ok_or(e),
        }
    }

    pub fn param_string(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Name, parameter keys with defaults, and a one-line description.
#[derive(Debug, Clone, Copy)]
pub struct Family {
    pub name: &'static str,
    pub params: &'static [(&'static str, &'static str)],
    pub description: &'static str,
}

pub const FAMILIES: [Family; 8] = [
    Family {
        name: "ellipse",
        params: &[("a", "2"), ("b", "1")],
        description: "(a cos t, b sin t), a > b > 0",
    },
    Family {
        name: "ellipse_parallel",
        params: &[("a", "2"), ("b", "1"), ("lambda", "b^2/a")],
        description: "parallel curve of the ellipse at distance lambda",
    },
    Family {
        name: "nephroid",
        params: &[],
        description: "(3cos t - cos 3t, 3sin t - sin 3t)",
    },
    Family {
        name: "convex_frontal_example",
        params: &[],
        description: "(sin^2 t cos t, sin^4 t / 2) on [0, pi]",
    },
    Family {
        name: "involute_example",
        params: &[],
        description: "(sin t cos(sin t) - sin(sin t), sin t sin(sin t) + cos(sin t) - 1)",
    },
    Family {
        name: "astroid5",
        params: &[],
        description: "(cos^5 t / 5, sin^5 t / 5)",
    },
    Family {
        name: "sin3_example",
        params: &[],
        description: "(cos t, sin^3 t / 3)",
    },
    Family {
        name: "germ",
        params: &[("n", "2"), ("m", "3"), ("f", "1"), ("sign", "+")],
        description: "(±t^n, t^m f(t)) near t = 0",
    },
];

fn full() -> Interval {
    Interval::new(0.0, TAU)
}

fn map(text: &str, d: Interval) -> Result<SmoothMap> {
    Ok(SmoothMap::parse(text, d)?)
}

fn pair(ell: &str, beta: &str, d: Interval) -> Result<CurvaturePair> {
    Ok(CurvaturePair::new(map(ell, d)?, map(beta, d)?))
}

fn closed(gamma: PlaneMap, nu: PlaneMap, label: &str) -> Result<LegendreCurve> {
    let mut c = LegendreCurve::new(gamma, nu, Closedness::Closed(CLOSED_ORDER_PROBE), label);
    c.closed = c.detect_closed_order(CLOSED_ORDER_PROBE)?;
    if !matches!(c.closed, Closedness::Closed(n) if n >= 1) {
        return Err(Error::Validation(format!("{label} does not close to first order")));
    }
    Ok(c)
}

fn quarter_turns(offset: f64) -> Vec<f64> {
    (0..4).map(|i| offset + i as f64 * FRAC_PI_2).collect()
}

fn nm(n: usize, m: usize) -> NMType {
    NMType { n, m }
}

pub fn ellipse(a: f64, b: f64) -> Result<CatalogEntry> {
    if !(a > b && b > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "ellipse needs a > b > 0, got a = {a}, b = {b}"
        )));
    }
    let d = full();
    let q = format!("({a}^2*sin(t)^2 + {b}^2*cos(t)^2)");
    let curve = closed(
        PlaneMap::parse(&format!("{a}*cos(t)"), &format!("{b}*sin(t)"), d)?,
        PlaneMap::parse(&format!("-{b}*cos(t)/sqrt{q}"), &format!("-{a}*sin(t)/sqrt{q}"), d)?,
        "ellipse",
    )?;
    let e = a * a - b * b;
    Ok(CatalogEntry {
        name: "ellipse",
        params: vec![("a".into(), a.to_string()), ("b".into(), b.to_string())],
        curve,
        truth: GroundTruth {
            curvature: Some(pair(&format!("{}/{q}", a * b), &format!("-sqrt{q}"), d)?),
            alpha: Some(map(&format!("-{q}^1.5/{}", a * b), d)?),
            evolute: Some(PlaneMap::parse(
                &format!("{}*cos(t)^3", e / a),
                &format!("-{}*sin(t)^3", e / b),
                d,
            )?),
            vertices: quarter_turns(0.0),
            inflections: vec![],
            singularities: vec![],
            convex: Some(true),
            simple: Some(true),
        },
        stated_witness: None,
    })
}

/// `γ + λν` for the ellipse; `λ = b²/a` gives two `(3, 4)` points.
pub fn ellipse_parallel(a: f64, b: f64, lambda: f64) -> Result<CatalogEntry> {
    let base = ellipse(a, b)?;
    let curve = base.curve.parallel(lambda).with_label("ellipse_parallel");
    let d = full();
    let q = format!("({a}^2*sin(t)^2 + {b}^2*cos(t)^2)");
    let cusp = (lambda - b * b / a).abs() < 1e-12;
    let inside = lambda <= b * b / a + 1e-12;
    let truth = GroundTruth {
        curvature: Some(pair(
            &format!("{}/{q}", a * b),
            &format!("-sqrt{q} + {lambda}*{}/{q}", a * b),
            d,
        )?),
        alpha: base.truth.alpha.as_ref().map(|al| al.add_scalar(lambda)),
        evolute: base.truth.evolute.clone(),
        vertices: quarter_turns(0.0),
        inflections: vec![],
        singularities: if cusp {
            vec![(0.0, nm(3, 4)), (PI, nm(3, 4))]
        } else {
            vec![]
        },
        convex: inside.then_some(true),
        simple: inside.then_some(true),
    };
    Ok(CatalogEntry {
        name: "ellipse_parallel",
        params: vec![
            ("a".into(), a.to_string()),
            ("b".into(), b.to_string()),
            ("lambda".into(), lambda.to_string()),
        ],
        curve,
        truth,
        stated_witness: None,
    })
}

pub fn nephroid() -> Result<CatalogEntry> {
    let d = full();
    let curve = closed(
        PlaneMap::parse("3*cos(t) - cos(3*t)", "3*sin(t) - sin(3*t)", d)?,
        PlaneMap::parse("-sin(2*t)", "cos(2*t)", d)?,
        "nephroid",
    )?;
    Ok(CatalogEntry {
        name: "nephroid",
        params: vec![],
        curve,
        truth: GroundTruth {
            curvature: Some(pair("2", "-6*sin(t)", d)?),
            alpha: Some(map("-3*sin(t)", d)?),
            evolute: Some(PlaneMap::parse("2*cos(t)^3", "3*sin(t) - 2*sin(t)^3", d)?),
            vertices: vec![FRAC_PI_2, 3.0 * FRAC_PI_2],
            inflections: vec![],
            singularities: vec![(0.0, nm(2, 3)), (PI, nm(2, 3))],
            convex: Some(false),
            simple: Some(true),
        },
        stated_witness: None,
    })
}

/// `-10c⁸ - c⁶ - 7c⁴ + c² + 1` with `c = cos t`.
pub fn convex_frontal_g(t: f64) -> f64 {
    let x = t.cos().powi(2);
    (((-10.0 * x - 1.0) * x - 7.0) * x + 1.0) * x + 1.0
}

/// The two zeros of [`convex_frontal_g`] in `(0, π)`, by bisection.
pub fn convex_frontal_g_roots() -> [f64; 2] {
    let bisect = |mut lo: f64, mut hi: f64| {
        let s = convex_frontal_g(lo).signum();
        while hi - lo > 1e-15 {
            let mid = 0.5 * (lo + hi);
            if convex_frontal_g(mid).signum() == s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    [bisect(0.0, FRAC_PI_2), bisect(FRAC_PI_2, PI)]
}

pub fn convex_frontal_example() -> Result<CatalogEntry> {
    let d = Interval::new(0.0, PI);
    let p = "((cos(2*t) + cos(t)^2)^2 + cos(t)^2*(1 - cos(2*t))^2)";
    let r = "((cos(2*t) + cos(t)^2)^2 + 3*cos(t)^2*(1 - cos(2*t)))";
    let curve = closed(
        PlaneMap::parse("sin(t)^2*cos(t)", "sin(t)^4/2", d)?,
        PlaneMap::parse(
            &format!("-cos(t)*(1 - cos(2*t))/sqrt{p}"),
            &format!("(cos(2*t) + cos(t)^2)/sqrt{p}"),
            d,
        )?,
        "convex_frontal_example",
    )?;
    let [r1, r2] = convex_frontal_g_roots();
    Ok(CatalogEntry {
        name: "convex_frontal_example",
        params: vec![],
        curve,
        truth: GroundTruth {
            curvature: Some(pair(&format!("2*sin(t)*{r}/{p}"), &format!("-sin(t)*sqrt{p}"), d)?),
            alpha: Some(map(&format!("-{p}^1.5/(2*{r})"), d)?),
            evolute: Some(PlaneMap::parse(
                &format!("sin(2*t)*sin(t)/2 - cos(t)*(1 - cos(2*t))*{p}/(2*{r})"),
                &format!("sin(t)^2/2 - sin(2*t)^2/8 + (cos(2*t) + cos(t)^2)*{p}/(2*{r})"),
                d,
            )?),
            vertices: vec![0.0, r1, FRAC_PI_2, r2],
            inflections: vec![0.0],
            singularities: vec![(0.0, nm(2, 4))],
            convex: Some(true),
            simple: Some(true),
        },
        stated_witness: None,
    })
}

pub fn involute_example() -> Result<CatalogEntry> {
    let d = full();
    let curve = closed(
        PlaneMap::parse(
            "sin(t)*cos(sin(t)) - sin(sin(t))",
            "sin(t)*sin(sin(t)) + cos(sin(t)) - 1",
            d,
        )?,
        PlaneMap::parse("cos(sin(t))", "sin(sin(t))", d)?,
        "involute_example",
    )?;
    Ok(CatalogEntry {
        name: "involute_example",
        params: vec![],
        curve,
        truth: GroundTruth {
            curvature: Some(pair("cos(t)", "cos(t)*sin(t)", d)?),
            alpha: Some(map("sin(t)", d)?),
            evolute: Some(PlaneMap::parse("-sin(sin(t))", "cos(sin(t)) - 1", d)?),
            vertices: vec![FRAC_PI_2, 3.0 * FRAC_PI_2],
            inflections: vec![FRAC_PI_2, 3.0 * FRAC_PI_2],
            singularities: vec![
                (0.0, nm(2, 3)),
                (FRAC_PI_2, nm(2, 4)),
                (PI, nm(2, 3)),
                (3.0 * FRAC_PI_2, nm(2, 4)),
            ],
            convex: Some(false),
            simple: Some(false),
        },
        stated_witness: None,
    })
}

pub fn astroid5() -> Result<CatalogEntry> {
    let d = full();
    let s = "(cos(t)^6 + sin(t)^6)";
    let curve = closed(
        PlaneMap::parse("cos(t)^5/5", "sin(t)^5/5", d)?,
        PlaneMap::parse(&format!("-sin(t)^3/sqrt{s}"), &format!("-cos(t)^3/sqrt{s}"), d)?,
        "astroid5",
    )?;
    let witness = DependencyWitness::checked(
        &curve,
        map(&format!("-{s}^1.5"), d)?,
        map("3*cos(t)*sin(t)", d)?,
        WitnessProvenance::User,
    )?;
    Ok(CatalogEntry {
        name: "astroid5",
        params: vec![],
        curve,
        truth: GroundTruth {
            curvature: Some(pair(
                &format!("-3*cos(t)^2*sin(t)^2/{s}"),
                &format!("-cos(t)*sin(t)*sqrt{s}"),
                d,
            )?),
            alpha: None,
            evolute: None,
            vertices: quarter_turns(PI / 4.0),
            inflections: quarter_turns(0.0),
            singularities: quarter_turns(0.0).into_iter().map(|t| (t, nm(2, 5))).collect(),
            convex: Some(false),
            simple: Some(true),
        },
        stated_witness: Some(witness),
    })
}

pub fn sin3_example() -> Result<CatalogEntry> {
    let d = full();
    let q = "(cos(t)^2*sin(t)^2 + 1)";
    let curve = closed(
        PlaneMap::parse("cos(t)", "sin(t)^3/3", d)?,
        PlaneMap::parse(&format!("-cos(t)*sin(t)/sqrt{q}"), &format!("-1/sqrt{q}"), d)?,
        "sin3_example",
    )?;
    let witness = DependencyWitness::checked(
        &curve,
        map(&format!("-sin(t)*{q}^1.5"), d)?,
        map("cos(2*t)", d)?,
        WitnessProvenance::User,
    )?;
    Ok(CatalogEntry {
        name: "sin3_example",
        params: vec![],
        curve,
        truth: GroundTruth {
            curvature: Some(pair(&format!("-cos(2*t)/{q}"), &format!("-sin(t)*sqrt{q}"), d)?),
            alpha: None,
            evolute: None,
            vertices: vec![FRAC_PI_2, 3.0 * FRAC_PI_2],
            inflections: quarter_turns(PI / 4.0),
            singularities: vec![(0.0, nm(2, 3)), (PI, nm(2, 3))],
            convex: Some(false),
            simple: Some(true),
        },
        stated_witness: Some(witness),
    })
}

pub fn germ(n: usize, m: usize, f: &Expr, sign: Orientation) -> Result<CatalogEntry> {
    let curve = germ_curve(n, m, f, sign)?;
    let t = nm(n, m);
    let sign_tag = match sign {
        Orientation::Plus => "+",
        Orientation::Minus => "-",
    };
    Ok(CatalogEntry {
        name: "germ",
        params: vec![
            ("n".into(), n.to_string()),
            ("m".into(), m.to_string()),
            ("f".into(), f.to_string()),
            ("sign".into(), sign_tag.into()),
        ],
        curve,
        truth: GroundTruth {
            curvature: Some(germ_curvature(n, m, f, sign)?),
            singularities: if t.is_singular() { vec![(0.0, t)] } else { vec![] },
            ..GroundTruth::default()
        },
        stated_witness: None,
    })
}

/// Every family at its default parameters, in listing order.
pub fn entries() -> Vec<CatalogEntry> {
    FAMILIES
        .iter()
        .map(|f| lookup(f.name, "").expect("default catalog parameters are valid"))
        .collect()
}

/// Closed entries, which the global checks run over.
pub fn closed_entries() -> Vec<CatalogEntry> {
    entries().into_iter().filter(|e| e.curve.is_closed()).collect()
}

fn parse_params(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got `{item}`")))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn number(p: &BTreeMap<String, String>, key: &str, default: f64) -> Result<f64> {
    match p.get(key) {
        None => Ok(default),
        Some(v) => parse(v)?
            .constant_value()
            .ok_or_else(|| Error::InvalidParameter(format!("{key} must be a constant, got `{v}`"))),
    }
}

fn integer(p: &BTreeMap<String, String>, key: &str, default: usize) -> Result<usize> {
    match p.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("{key} must be a positive integer, got `{v}`"))),
    }
}

/// Entry by family name and `key=value,...` parameters.
pub fn lookup(name: &str, params: &str) -> Result<CatalogEntry> {
    let family = FAMILIES
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown catalog curve `{name}`")))?;
    let p = parse_params(params)?;
    if let Some(k) = p.keys().find(|k| !family.params.iter().any(|(n, _)| n == k)) {
        return Err(Error::InvalidParameter(format!("{name} has no parameter `{k}`")));
    }
    match name {
        "ellipse" => ellipse(number(&p, "a", 2.0)?, number(&p, "b", 1.0)?),
        "ellipse_parallel" => {
            let (a, b) = (number(&p, "a", 2.0)?, number(&p, "b", 1.0)?);
            ellipse_parallel(a, b, number(&p, "lambda", b * b / a)?)
        }
        "nephroid" => nephroid(),
        "convex_frontal_example" => convex_frontal_example(),
        "involute_example" => involute_example(),
        "astroid5" => astroid5(),
        "sin3_example" => sin3_example(),
        "germ" => {
            let f = parse(p.get("f").map(String::as_str).unwrap_or("1"))?;
            let sign = match p.get("sign").map(String::as_str).unwrap_or("+") {
                "+" | "plus" => Orientation::Plus,
                "-" | "minus" => Orientation::Minus,
                s => return Err(Error::InvalidParameter(format!("sign must be + or -, got `{s}`"))),
            };
            germ(integer(&p, "n", 2)?, integer(&p, "m", 3)?, &f, sign)
        }
        _ => unreachable!("family list and dispatch agree"),
    }
}
