//! `frontal`: vertices, singular points and evolutes of Legendre curves.

mod error;
mod report;
mod spec;
mod svg;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frontal_core::analysis::{four_vertex_verdict, run_suite, InvarianceConfig, Suite};
use frontal_core::catalog::{self, FAMILIES};
use frontal_core::events::{default_witness, detect_events, witness_for, DependencyWitness, WitnessProvenance};
use frontal_core::evolute::evolute_frontal;
use frontal_core::legendre::CurvatureSamples;
use frontal_core::numerics::{SmoothMap, ZeroConfig};

use error::{CliError, CliResult};
use report::{number, Analysis, Check, Verification};
use spec::Target;
use svg::{Figure, Line, MarkerKind};

/// Samples per polyline in SVG and CSV output.
const PLOT_SAMPLES: usize = 2048;

#[derive(Debug, Parser)]
#[command(
    name = "frontal",
    version,
    about = "Vertices, singular points and evolutes of plane frontals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WitnessChoice {
    Auto,
    Regular,
    Front,
    Frontal,
    Immersion,
    User,
}

#[derive(Debug, Args)]
struct Options {
    /// Print JSON instead of text.
    #[arg(long, global = true, env = "FRONTAL_JSON")]
    json: bool,
    /// Write CSV to PATH.
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Write SVG to PATH.
    #[arg(long, global = true, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// Root-finding grid intervals.
    #[arg(long, global = true, env = "FRONTAL_GRID", default_value_t = 4096, value_name = "N")]
    grid: usize,
    /// Relative zero tolerance.
    #[arg(long, global = true, env = "FRONTAL_TOL", default_value_t = 1e-8, value_name = "X")]
    tol: f64,
    /// Dependency witness used for vertices.
    #[arg(long, global = true, env = "FRONTAL_WITNESS", value_enum, default_value_t = WitnessChoice::Auto)]
    witness: WitnessChoice,
    /// First witness component, an expression in t.
    #[arg(
        long,
        global = true,
        value_name = "EXPR",
        requires = "k2",
        allow_hyphen_values = true
    )]
    k1: Option<String>,
    /// Second witness component, an expression in t.
    #[arg(
        long,
        global = true,
        value_name = "EXPR",
        requires = "k1",
        allow_hyphen_values = true
    )]
    k2: Option<String>,
    /// Curve spec file (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    spec: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the catalog families.
    List,
    /// Events, convexity and the four-vertex verdict of one curve.
    Analyze {
        /// Catalog curve, as `name` or `name:key=value,...`.
        curve: Option<String>,
    },
    /// Evolute samples and plot.
    Evolute { curve: Option<String> },
    /// Run check suites on `catalog` or one curve.
    Verify {
        /// Scope (`catalog` or a curve, omitted with --spec) followed by suite names.
        #[arg(value_name = "SCOPE [SUITE]...")]
        items: Vec<String>,
    },
    /// Rebuild a curve from its curvature pair.
    Reconstruct { curve: Option<String> },
}

impl Options {
    fn zero_config(&self, periodic: bool) -> CliResult<ZeroConfig> {
        if self.grid < 16 {
            return Err(CliError::Usage(format!(
                "--grid must be at least 16, got {}",
                self.grid
            )));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(CliError::Usage(format!("--tol must be positive, got {}", self.tol)));
        }
        Ok(ZeroConfig::periodic(periodic).with_grid(self.grid).with_tol(self.tol))
    }

    fn user_pair(&self) -> Option<(&str, &str)> {
        self.k1.as_deref().zip(self.k2.as_deref())
    }

    /// The witness was asked for explicitly rather than left to `auto`.
    fn explicit_witness(&self) -> bool {
        self.witness != WitnessChoice::Auto || self.user_pair().is_some()
    }

    fn witness(&self, target: &Target) -> CliResult<DependencyWitness> {
        let curve = &target.curve;
        if let Some((k1, k2)) = self.user_pair() {
            if !matches!(self.witness, WitnessChoice::Auto | WitnessChoice::User) {
                return Err(CliError::Usage("--k1/--k2 need --witness user or auto".into()));
            }
            let d = curve.domain();
            let k1 = SmoothMap::parse(k1, d).map_err(|e| CliError::Usage(format!("--k1: {e}")))?;
            let k2 = SmoothMap::parse(k2, d).map_err(|e| CliError::Usage(format!("--k2: {e}")))?;
            return Ok(DependencyWitness::checked(curve, k1, k2, WitnessProvenance::User)?);
        }
        let choice = match self.witness {
            WitnessChoice::Auto => {
                return Ok(match &target.entry {
                    Some(e) => e.witness()?,
                    None => default_witness(curve)?,
                })
            }
            WitnessChoice::Regular => WitnessProvenance::Regular,
            WitnessChoice::Front => WitnessProvenance::Front,
            WitnessChoice::Frontal => WitnessProvenance::Frontal,
            WitnessChoice::Immersion => WitnessProvenance::Immersion,
            WitnessChoice::User => {
                return match &target.entry.as_ref().and_then(|e| e.stated_witness.clone()) {
                    Some(w) => Ok(w.clone()),
                    None => Err(CliError::Usage("--witness user needs --k1 and --k2".into())),
                }
            }
        };
        Ok(witness_for(curve, choice)?)
    }

    fn target(&self, curve: Option<&str>) -> CliResult<Target> {
        spec::resolve(curve, self.spec.as_deref())
    }
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn list(opts: &Options) -> String {
    #[derive(serde::Serialize)]
    struct Row {
        name: &'static str,
        parameters: Vec<String>,
        description: &'static str,
    }
    let rows: Vec<Row> = FAMILIES
        .iter()
        .map(|f| Row {
            name: f.name,
            parameters: f.params.iter().map(|(k, v)| format!("{k}={v}")).collect(),
            description: f.description,
        })
        .collect();
    if opts.json {
        return json(&rows);
    }
    rows.iter()
        .map(|r| {
            let params = if r.parameters.is_empty() {
                String::new()
            } else {
                format!(" [{}]", r.parameters.join(", "))
            };
            format!("{}{params}: {}\n", r.name, r.description)
        })
        .collect()
}

fn analyze(opts: &Options, curve: Option<&str>) -> CliResult<String> {
    let target = opts.target(curve)?;
    let w = opts.witness(&target)?;
    let events = detect_events(&target.curve, &w, &opts.zero_config(target.curve.is_closed())?)?;
    let verdict = match target.curve.is_closed() {
        true => Some(four_vertex_verdict(&target.curve, &w)?),
        false => None,
    };
    let report = Analysis::new(target.name, &events, verdict.as_ref());
    if let Some(p) = &opts.csv {
        write_file(p, &report.csv())?;
    }
    Ok(if opts.json { json(&report) } else { report.text() })
}

fn evolute(opts: &Options, curve: Option<&str>) -> CliResult<String> {
    let target = opts.target(curve)?;
    let c = &target.curve;
    let ev = match evolute_frontal(c) {
        Ok(ev) => Some(ev),
        Err(e) if !opts.explicit_witness() => return Err(e.into()),
        Err(_) => None,
    };
    let w = opts.witness(&target)?;
    let events = detect_events(c, &w, &opts.zero_config(c.is_closed())?)?;

    let ts = c.domain().grid(PLOT_SAMPLES - 1);
    let gamma = ts.iter().map(|&t| c.gamma.value(t)).collect::<Result<Vec<_>, _>>()?;
    let evo = match &ev {
        Some(ev) => Some(ts.iter().map(|&t| ev.value(t)).collect::<Result<Vec<_>, _>>()?),
        None => None,
    };

    let mut csv = String::from("t,gamma_x,gamma_y,ev_x,ev_y\n");
    for (i, t) in ts.iter().enumerate() {
        let [gx, gy] = gamma[i];
        let tail = match &evo {
            Some(e) => format!("{},{}", number(e[i][0]), number(e[i][1])),
            None => ",".into(),
        };
        csv.push_str(&format!("{},{},{},{tail}\n", number(*t), number(gx), number(gy)));
    }

    if let Some(p) = &opts.svg {
        let mut fig = Figure {
            title: format!("{} and its evolute", target.name),
            ..Default::default()
        };
        fig.lines.push(Line {
            label: "curve",
            color: "#1f77b4",
            points: gamma.clone(),
        });
        if let Some(e) = &evo {
            fig.lines.push(Line {
                label: "evolute",
                color: "#2ca02c",
                points: e.clone(),
            });
        }
        let at = |t: f64| c.gamma.value(t);
        for z in &events.vertices {
            fig.markers.push((MarkerKind::Vertex, at(z.location)?));
        }
        for s in &events.singularities {
            fig.markers.push((MarkerKind::Singular, at(s.zero.location)?));
        }
        for z in &events.inflections {
            fig.markers.push((MarkerKind::Inflection, at(z.location)?));
        }
        write_file(p, &fig.render())?;
    }
    if let Some(p) = &opts.csv {
        write_file(p, &csv)?;
    }

    if opts.json {
        #[derive(serde::Serialize)]
        struct Summary<'a> {
            curve: &'a str,
            witness_provenance: &'static str,
            evolute: bool,
            samples: usize,
            vertices: Vec<f64>,
            singularities: Vec<f64>,
            inflections: Vec<f64>,
        }
        let locs = |z: &mut dyn Iterator<Item = f64>| z.map(report::sig12).collect::<Vec<_>>();
        return Ok(json(&Summary {
            curve: &target.name,
            witness_provenance: w.provenance.name(),
            evolute: evo.is_some(),
            samples: PLOT_SAMPLES,
            vertices: locs(&mut events.vertices.iter().map(|z| z.location)),
            singularities: locs(&mut events.singularities.iter().map(|s| s.zero.location)),
            inflections: locs(&mut events.inflections.iter().map(|z| z.location)),
        }));
    }
    if opts.svg.is_none() && opts.csv.is_none() {
        return Ok(csv);
    }
    Ok(format!(
        "{}: {}, {} vertices, {} singular points, {} inflections\n",
        target.name,
        if evo.is_some() { "evolute drawn" } else { "no evolute" },
        events.vertices.len(),
        events.singularities.len(),
        events.inflections.len()
    ))
}

fn verify(opts: &Options, items: &[String]) -> CliResult<(String, bool)> {
    let (targets, suite_names) = match (&opts.spec, items.split_first()) {
        (Some(p), _) => (vec![spec::from_file(p)?], items),
        (None, Some((scope, rest))) if scope == "catalog" => {
            let all = catalog::entries()
                .into_iter()
                .map(|e| Target {
                    name: e.name.to_string(),
                    curve: e.curve.clone(),
                    entry: Some(e),
                    reconstructed: false,
                })
                .collect();
            (all, rest)
        }
        (None, Some((scope, rest))) => (vec![spec::from_argument(scope)?], rest),
        (None, None) => {
            return Err(CliError::Usage(
                "verify needs a scope: `catalog` or a curve name".into(),
            ))
        }
    };
    let suites = if suite_names.is_empty() {
        Suite::ALL.to_vec()
    } else {
        suite_names
            .iter()
            .map(|s| {
                Suite::from_name(s).ok_or_else(|| {
                    let known: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                    CliError::Usage(format!("unknown suite `{s}`; expected one of {}", known.join(", ")))
                })
            })
            .collect::<CliResult<Vec<_>>>()?
    };
    let witnesses = targets.iter().map(|t| opts.witness(t)).collect::<CliResult<Vec<_>>>()?;
    let cfg = InvarianceConfig::default();

    let jobs: Vec<(usize, Suite)> = (0..targets.len())
        .flat_map(|i| suites.iter().map(move |s| (i, *s)))
        .collect();
    let results: Vec<Mutex<Vec<Check>>> = jobs.iter().map(|_| Mutex::new(Vec::new())).collect();
    let next = AtomicUsize::new(0);
    let work = || loop {
        let j = next.fetch_add(1, Ordering::Relaxed);
        let Some(&(i, suite)) = jobs.get(j) else { break };
        let mut checks: Vec<Check> = run_suite(&targets[i].curve, &witnesses[i], suite, &cfg)
            .iter()
            .map(Check::from)
            .collect();
        for c in &mut checks {
            c.curve = targets[i].name.clone();
        }
        *results[j].lock().expect("no worker panics while holding a slot") = checks;
    };
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(jobs.len());
    if workers > 1 {
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(work);
            }
        });
    } else {
        work();
    }

    let checks: Vec<Check> = results
        .into_iter()
        .flat_map(|m| m.into_inner().expect("workers finished"))
        .collect();
    let failures = checks.iter().filter(|c| !c.passed).count();
    let v = Verification {
        passed: failures == 0,
        failures,
        checks,
    };
    let out = if opts.json { json(&v) } else { v.text() };
    Ok((out, v.passed))
}

/// Relative gate for `reconstruct` against the source curve.
const RECONSTRUCT_GATE: f64 = 1e-6;

fn reconstruct(opts: &Options, curve: Option<&str>) -> CliResult<(String, bool)> {
    let target = opts.target(curve)?;
    let src = &target.curve;
    let d = src.domain();
    let rebuilt = if target.reconstructed {
        src.clone()
    } else {
        let (g0, n0) = (src.gamma.value(d.a)?, src.nu.value(d.a)?);
        CurvatureSamples::sample(&src.curvature_pair(), d)?.reconstruct(g0, n0, target.name.clone())?
    };
    let ts = d.grid(PLOT_SAMPLES - 1);
    let mut rows = String::from("t,gamma_x,gamma_y,nu_x,nu_y\n");
    let mut points = Vec::with_capacity(ts.len());
    let (mut dev, mut scale) = (0.0f64, 0.0f64);
    for &t in &ts {
        let (g, n) = (rebuilt.gamma.value(t)?, rebuilt.nu.value(t)?);
        rows.push_str(&format!(
            "{},{},{},{},{}\n",
            number(t),
            number(g[0]),
            number(g[1]),
            number(n[0]),
            number(n[1])
        ));
        points.push(g);
        if !target.reconstructed {
            let (h, m) = (src.gamma.value(t)?, src.nu.value(t)?);
            dev = dev
                .max((g[0] - h[0]).hypot(g[1] - h[1]))
                .max((n[0] - m[0]).hypot(n[1] - m[1]));
            scale = scale.max(h[0].hypot(h[1]));
        }
    }
    let deviation = (!target.reconstructed).then_some(dev / (1.0 + scale));
    let (ga, gb) = (rebuilt.gamma.value(d.a)?, rebuilt.gamma.value(d.b)?);
    let closure_gap = (ga[0] - gb[0]).hypot(ga[1] - gb[1]);
    let passed = deviation.is_none_or(|x| x <= RECONSTRUCT_GATE);

    if let Some(p) = &opts.csv {
        write_file(p, &rows)?;
    }
    if let Some(p) = &opts.svg {
        let fig = Figure {
            title: format!("{} reconstructed from (ℓ, β)", target.name),
            lines: vec![Line {
                label: "curve",
                color: "#1f77b4",
                points,
            }],
            markers: Vec::new(),
        };
        write_file(p, &fig.render())?;
    }
    #[derive(serde::Serialize)]
    struct Summary<'a> {
        curve: &'a str,
        closed: bool,
        closure_gap: f64,
        max_deviation: Option<f64>,
        passed: bool,
    }
    let summary = Summary {
        curve: &target.name,
        closed: rebuilt.is_closed(),
        closure_gap: report::sig12(closure_gap),
        max_deviation: deviation.map(report::sig12),
        passed,
    };
    let out = if opts.json {
        json(&summary)
    } else {
        let dev = deviation.map_or("n/a".to_string(), number);
        format!(
            "{}: closure gap {}, max relative deviation {dev}, {}\n",
            target.name,
            number(closure_gap),
            if passed { "ok" } else { "FAILED" }
        )
    };
    Ok((out, passed))
}

fn run(cli: &Cli) -> CliResult<(String, bool)> {
    let opts = &cli.opts;
    match &cli.command {
        Command::List => Ok((list(opts), true)),
        Command::Analyze { curve } => analyze(opts, curve.as_deref()).map(|s| (s, true)),
        Command::Evolute { curve } => evolute(opts, curve.as_deref()).map(|s| (s, true)),
        Command::Verify { items } => verify(opts, items),
        Command::Reconstruct { curve } => reconstruct(opts, curve.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((out, passed)) => {
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::from(if passed { 0 } else { 2 })
        }
        Err(e) => {
            eprintln!("frontal: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
