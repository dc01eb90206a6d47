//! Command-line surface: list and validate manifolds, build curves, compute
//! Frenet data, classify mean-curvature conditions, verify the curvature
//! characterizations and run parameter sweeps.
//!
//! Exit status: 0 when the requested condition holds / verification passes,
//! 1 when it fails (or is degenerate), 2 on usage or input errors. All
//! randomness is seeded (default 0) so identical invocations produce
//! byte-identical output.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::classifier::{
    classify_apparatus, verify_theorem_apparatus, ConditionKind, TheoremId, TheoremVerdict,
    Verdict, DEFAULT_CLASSIFY_TOL, DEFAULT_LAMBDA_FLOOR,
};
use crate::constructor::{
    build_e2_circle, build_e2_helix, build_example_1, sweep, write_sweep_csv, CurveFamily,
    SweepOptions,
};
use crate::curve::{
    contact_angle, contact_scalars, frenet, is_legendre, legendre_scalar, read_csv, write_csv,
    Curve, ManifoldRef, DEFAULT_RANK_TOL,
};
use crate::error::{Error, Result};
use crate::manifold::{
    builtin_e2, builtin_rkmn, load_manifold, sample_directions, sample_points, FrameManifold,
    StructureCheck,
};

#[derive(Parser)]
#[command(
    name = "contact-curves",
    about = "Numerical workbench for Legendre curves in contact metric manifolds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect and validate manifold definitions.
    Manifold {
        #[command(subcommand)]
        action: ManifoldAction,
    },
    /// Build curves and extract Frenet data.
    Curve {
        #[command(subcommand)]
        action: CurveAction,
    },
    /// Test one mean-curvature condition V = λξ along a curve.
    Classify(ClassifyArgs),
    /// Check the identities of one curvature characterization (T2.1…T3.6).
    Verify(VerifyArgs),
    /// Classify a (c2, θ) grid of homogeneous curve families into a CSV table.
    Sweep(SweepArgs),
}

#[derive(Subcommand)]
enum ManifoldAction {
    /// List the builtin manifolds.
    List,
    /// Run the structure self-checks on a builtin or spec-file manifold.
    Check(ManifoldCheckArgs),
}

#[derive(Args)]
struct ManifoldSource {
    /// Builtin manifold name (rkmn or e2).
    #[arg(long, conflicts_with = "spec")]
    builtin: Option<String>,
    /// Structure constant for the e2 builtin.
    #[arg(long)]
    c2: Option<f64>,
    /// Path to a manifold spec JSON file.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Spec-file parameter overrides, as name=value.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
}

impl ManifoldSource {
    fn resolve(&self) -> Result<std::sync::Arc<FrameManifold>> {
        match (&self.builtin, &self.spec) {
            (Some(name), None) => match name.as_str() {
                "rkmn" => Ok(builtin_rkmn()),
                "e2" => builtin_e2(self.c2.unwrap_or(1.0)),
                other => Err(Error::InvalidInput(format!(
                    "unknown builtin `{other}` (expected rkmn or e2)"
                ))),
            },
            (None, Some(path)) => {
                let doc = std::fs::read_to_string(path)?;
                let overrides = self
                    .params
                    .iter()
                    .map(|kv| {
                        let (k, v) = kv.split_once('=').ok_or_else(|| {
                            Error::InvalidInput(format!("bad --param `{kv}`, expected NAME=VALUE"))
                        })?;
                        let value: f64 = v
                            .parse()
                            .map_err(|_| Error::InvalidInput(format!("bad --param value `{v}`")))?;
                        Ok((k.to_string(), value))
                    })
                    .collect::<Result<Vec<_>>>()?;
                load_manifold(&doc, &overrides)
            }
            _ => Err(Error::InvalidInput(
                "exactly one of --builtin or --spec is required".into(),
            )),
        }
    }
}

#[derive(Args)]
struct ManifoldCheckArgs {
    #[command(flatten)]
    source: ManifoldSource,
    /// Number of random sample points (chart manifolds).
    #[arg(long, default_value_t = 100)]
    points: usize,
    /// Random seed for the sample points and directions.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Pointwise tolerance for the structure identities.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Step for the finite-difference bracket check.
    #[arg(long, default_value_t = 1e-4)]
    bracket_step: f64,
    /// Emit the full report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum CurveAction {
    /// Sample a reference curve and write it as CSV.
    Build(CurveBuildArgs),
    /// Read a curve CSV and print its Frenet apparatus.
    Frenet(CurveFrenetArgs),
}

#[derive(Args)]
struct CurveBuildArgs {
    /// Which curve: ex1, e2-circle or e2-helix.
    #[arg(long)]
    example: String,
    /// Structure constant for the e2 families.
    #[arg(long, default_value_t = 2.0)]
    c2: f64,
    /// Contact-plane angle θ for the e2 families (accepts forms like 3pi/4).
    #[arg(long, default_value = "3pi/4")]
    theta: String,
    /// Arc-length span A:B.
    #[arg(long, default_value = "0:1")]
    span: String,
    /// Grid step.
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CurveInput {
    /// Curve CSV path.
    #[arg(long = "in")]
    input: PathBuf,
    /// Manifold reference overriding the file's own (`rkmn`, `e2 c2=V`, or
    /// `spec PATH`).
    #[arg(long)]
    manifold: Option<String>,
}

impl CurveInput {
    fn read(&self) -> Result<Curve> {
        let file = File::open(&self.input)?;
        let mref = match &self.manifold {
            Some(text) => Some(text.parse::<ManifoldRef>()?),
            None => None,
        };
        read_csv(BufReader::new(file), mref.as_ref())
    }
}

#[derive(Args)]
struct CurveFrenetArgs {
    #[command(flatten)]
    input: CurveInput,
    /// Rank tolerance for osculating-order detection.
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    rank_tol: f64,
    /// Emit the apparatus summary as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    input: CurveInput,
    /// Condition kind: c-parallel-tangent, c-proper-tangent,
    /// c-parallel-normal or c-proper-normal.
    #[arg(long)]
    kind: String,
    /// Residual tolerance.
    #[arg(long, default_value_t = DEFAULT_CLASSIFY_TOL)]
    tol: f64,
    /// Smallest |λ| accepted as non-vanishing.
    #[arg(long, default_value_t = DEFAULT_LAMBDA_FLOOR)]
    lambda_floor: f64,
    /// Include λ samples in the JSON report.
    #[arg(long)]
    samples: bool,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Theorem id: T2.1…T2.4, T3.1…T3.6.
    #[arg(long)]
    theorem: String,
    #[command(flatten)]
    input: CurveInput,
    /// Identity tolerance.
    #[arg(long, default_value_t = DEFAULT_CLASSIFY_TOL)]
    tol: f64,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Curve family: circle or helix.
    #[arg(long)]
    family: String,
    /// Comma-separated c2 values.
    #[arg(long)]
    c2: String,
    /// Comma-separated θ values (forms like 2pi/3 accepted).
    #[arg(long)]
    theta: String,
    /// Comma-separated condition kinds, or `all`.
    #[arg(long)]
    kinds: String,
    /// Arc-length span A:B.
    #[arg(long, default_value = "0:2")]
    span: String,
    /// Grid step.
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

/// Run the CLI on an argument iterator (without the binary name). Returns
/// the process exit status.
pub fn run<I>(args: I) -> i32
where
    I: Iterator<Item = String>,
{
    let argv = std::iter::once("contact-curves".to_string()).chain(args);
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Manifold { action } => {
            match action {
                ManifoldAction::List => {
                    println!("rkmn  chart (x, y, z); frame order (ξ, X, φX); h = diag(0, e^2x/4, -e^2x/4)");
                    println!("e2    homogeneous; frame order (X, φX, ξ); parameter c2 > 0; h = diag(-c2/2, c2/2, 0)");
                    Ok(0)
                }
                ManifoldAction::Check(args) => manifold_check(args),
            }
        }
        Command::Curve { action } => match action {
            CurveAction::Build(args) => curve_build(args),
            CurveAction::Frenet(args) => curve_frenet(args),
        },
        Command::Classify(args) => classify_cmd(args),
        Command::Verify(args) => verify_cmd(args),
        Command::Sweep(args) => sweep_cmd(args),
    }
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ManifoldCheckJson<'a> {
    structure: &'a crate::manifold::StructureReport,
    grad_xi: &'a StructureCheck,
    pass: bool,
}

fn manifold_check(args: ManifoldCheckArgs) -> Result<i32> {
    let mani = args.source.resolve()?;
    let points = sample_points(&mani, args.points, args.seed, -1.0, 1.0);
    let report = mani.verify_structure(&points, args.tol, args.bracket_step)?;
    let dirs = sample_directions(
        &mani,
        &points,
        if mani.coords.is_empty() { 20 } else { 1 },
        args.seed.wrapping_add(1),
    );
    let grad_xi = mani.verify_grad_xi(&dirs, 1e-8)?;
    let pass = report.all_pass && report.h_nonzero && grad_xi.pass;

    if args.json {
        let doc = ManifoldCheckJson {
            structure: &report,
            grad_xi: &grad_xi,
            pass,
        };
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!(
            "manifold {} checked at {} point(s)",
            mani.name, report.points_checked
        );
        for c in &report.checks {
            println!(
                "  {:<24} max violation {:>12.3e}  tol {:>8.1e}  {}",
                c.name,
                c.max_violation,
                c.tol,
                if c.pass { "pass" } else { "FAIL" }
            );
        }
        println!(
            "  {:<24} max violation {:>12.3e}  tol {:>8.1e}  {}",
            grad_xi.name,
            grad_xi.max_violation,
            grad_xi.tol,
            if grad_xi.pass { "pass" } else { "FAIL" }
        );
        println!(
            "  h-nonzero certificate: min over points of max|h| = {:.3e} → {}",
            report.h_min_max_abs,
            if report.h_nonzero {
                "not Sasakian (h ≠ 0)"
            } else {
                "FAIL (h ≈ 0 somewhere)"
            }
        );
        println!("overall: {}", if pass { "pass" } else { "FAIL" });
    }
    Ok(if pass { 0 } else { 1 })
}

fn curve_build(args: CurveBuildArgs) -> Result<i32> {
    let span = parse_span(&args.span)?;
    let theta = parse_angle(&args.theta)?;
    let curve = match args.example.as_str() {
        "ex1" => build_example_1(span, args.step)?,
        "e2-circle" => build_e2_circle(args.c2, theta, span, args.step)?,
        "e2-helix" => build_e2_helix(args.c2, theta, span, args.step)?,
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown example `{other}` (expected ex1, e2-circle or e2-helix)"
            )))
        }
    };
    let mut out = BufWriter::new(File::create(&args.out)?);
    write_csv(&curve, &mut out)?;
    out.flush()?;
    println!(
        "wrote {} samples on {} to {}",
        curve.len(),
        curve.manifold.name,
        args.out.display()
    );
    Ok(0)
}

#[derive(Serialize)]
struct RangeJson {
    min: f64,
    max: f64,
}

#[derive(Serialize)]
struct FrenetJson {
    manifold: String,
    samples: usize,
    order: usize,
    legendre: bool,
    contact_angle: RangeJson,
    curvatures: Vec<RangeJson>,
    eta: Vec<RangeJson>,
    legendre_scalar: RangeJson,
}

fn range_of(values: &[f64]) -> RangeJson {
    RangeJson {
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

fn curve_frenet(args: CurveFrenetArgs) -> Result<i32> {
    let curve = args.input.read()?;
    let app = frenet(&curve, args.rank_tol)?;
    let alpha = contact_angle(&curve);
    let scalar = legendre_scalar(&curve);
    let doc = FrenetJson {
        manifold: curve.manifold.name.clone(),
        samples: curve.len(),
        order: app.order,
        legendre: is_legendre(&curve),
        contact_angle: range_of(&alpha.values),
        curvatures: app.curvatures.iter().map(|k| range_of(&k.values)).collect(),
        eta: app.eta.iter().map(|e| range_of(e)).collect(),
        legendre_scalar: range_of(&scalar.values),
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("manifold:        {}", doc.manifold);
        println!("samples:         {}", doc.samples);
        println!("osculating order {}", doc.order);
        println!("legendre:        {}", doc.legendre);
        println!(
            "contact angle:   [{:.6}, {:.6}]",
            doc.contact_angle.min, doc.contact_angle.max
        );
        for (i, k) in doc.curvatures.iter().enumerate() {
            println!("k{}:              [{:.9}, {:.9}]", i + 1, k.min, k.max);
        }
        for (i, e) in doc.eta.iter().enumerate() {
            println!("η(υ{}):           [{:.9}, {:.9}]", i + 1, e.min, e.max);
        }
        println!(
            "g(T,φhT):        [{:.9}, {:.9}]",
            doc.legendre_scalar.min, doc.legendre_scalar.max
        );
    }
    Ok(0)
}

fn classify_cmd(args: ClassifyArgs) -> Result<i32> {
    let curve = args.input.read()?;
    let kind: ConditionKind = args.kind.parse()?;
    let app = frenet(&curve, DEFAULT_RANK_TOL)?;
    let report = classify_apparatus(&app, kind, args.tol, args.lambda_floor)?;
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report.to_report(args.samples))?
        );
    } else {
        let lmin = report
            .lambda
            .values
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let lmax = report
            .lambda
            .values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        println!("condition:    {kind}");
        println!("verdict:      {}", report.verdict);
        println!(
            "max residual: {:.6e} (tol {:.1e})",
            report.max_residual, report.tol
        );
        println!("lambda:       [{lmin:.9}, {lmax:.9}]");
        println!(
            "min |lambda|: {:.6e} (floor {:.1e})",
            report.lambda_min_abs, report.lambda_floor
        );
    }
    Ok(if report.verdict == Verdict::Holds {
        0
    } else {
        1
    })
}

fn verify_cmd(args: VerifyArgs) -> Result<i32> {
    let curve = args.input.read()?;
    let id: TheoremId = args.theorem.parse()?;
    let app = frenet(&curve, DEFAULT_RANK_TOL)?;
    let scalars = contact_scalars(&curve);
    let report = verify_theorem_apparatus(&app, &scalars, id, args.tol, DEFAULT_LAMBDA_FLOOR)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report.to_report())?);
    } else {
        println!("theorem: {id}");
        println!("verdict: {}", report.verdict);
        if let Some(branch) = &report.branch {
            println!("branch:  {branch}");
        }
        println!(
            "lambda:  [{:.9}, {:.9}]",
            report.lambda_min, report.lambda_max
        );
        for c in &report.checks {
            println!(
                "  {:<40} max violation {:>12.3e}  tol {:>8.1e}  {}",
                c.name,
                c.max_violation,
                c.tol,
                if c.pass { "pass" } else { "FAIL" }
            );
        }
    }
    Ok(if report.verdict == TheoremVerdict::Pass {
        0
    } else {
        1
    })
}

fn sweep_cmd(args: SweepArgs) -> Result<i32> {
    let family: CurveFamily = args.family.parse()?;
    let c2_grid = parse_list(&args.c2, |t| {
        t.parse::<f64>()
            .map_err(|_| Error::InvalidInput(format!("bad c2 value `{t}`")))
    })?;
    let theta_grid = parse_list(&args.theta, parse_angle)?;
    let kinds: Vec<ConditionKind> = if args.kinds.trim() == "all" {
        ConditionKind::ALL.to_vec()
    } else {
        parse_list(&args.kinds, |t| t.parse())?
    };
    let opts = SweepOptions {
        span: parse_span(&args.span)?,
        step: args.step,
        ..SweepOptions::default()
    };
    let cells = sweep(family, &c2_grid, &theta_grid, &kinds, &opts);
    let mut out = BufWriter::new(File::create(&args.out)?);
    write_sweep_csv(&cells, &mut out)?;
    out.flush()?;
    let errors = cells.iter().filter(|c| c.outcome.is_err()).count();
    println!(
        "wrote {} sweep cells to {} ({} error cell(s))",
        cells.len(),
        args.out.display(),
        errors
    );
    Ok(0)
}

// ---------------------------------------------------------------------------
// Small argument parsers
// ---------------------------------------------------------------------------

fn parse_span(text: &str) -> Result<(f64, f64)> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| Error::InvalidInput(format!("bad span `{text}`, expected A:B")))?;
    let lo: f64 = a
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad span start `{a}`")))?;
    let hi: f64 = b
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad span end `{b}`")))?;
    Ok((lo, hi))
}

/// Angles accept plain radians plus the forms `pi`, `Npi`, `pi/D`, `Npi/D`
/// (e.g. `3pi/4`, `0.55pi`).
fn parse_angle(text: &str) -> Result<f64> {
    let t = text.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    if let Some(idx) = t.find("pi") {
        let (num, rest) = t.split_at(idx);
        let rest = &rest[2..];
        let factor: f64 = if num.is_empty() {
            1.0
        } else {
            num.parse()
                .map_err(|_| Error::InvalidInput(format!("bad angle `{text}`")))?
        };
        let divisor: f64 = if rest.is_empty() {
            1.0
        } else if let Some(d) = rest.strip_prefix('/') {
            d.parse()
                .map_err(|_| Error::InvalidInput(format!("bad angle `{text}`")))?
        } else {
            return Err(Error::InvalidInput(format!("bad angle `{text}`")));
        };
        return Ok(factor * std::f64::consts::PI / divisor);
    }
    Err(Error::InvalidInput(format!("bad angle `{text}`")))
}

fn parse_list<T, F>(text: &str, parse_one: F) -> Result<Vec<T>>
where
    F: Fn(&str) -> Result<T>,
{
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_one)
        .collect()
}
