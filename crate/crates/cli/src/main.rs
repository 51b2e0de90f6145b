//! `widthcurve`: build, measure, optimize and export short curves of unit width.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use widthcurve::export::{export_string, ExportFormat};
use widthcurve::family::DEFAULT_N_ARC;
use widthcurve::geom::polyline_length;
use widthcurve::optim::{default_starts, SearchBox, DEFAULT_BUDGET};
use widthcurve::report::report;
use widthcurve::width::AntipodalPair;
use widthcurve::{curve_width, minimize, CurveKind, CurveSpec, Error, Family, ObjectiveSpec};

const EXIT_INVALID: u8 = 2;
const EXIT_GEOMETRY: u8 = 3;
const EXIT_NOT_UNIT: u8 = 4;

#[derive(Parser)]
#[command(name = "widthcurve", version, about = "Short space curves of unit width")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a curve and summarize it; writes its geometry with --out.
    Build {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form and sampled lengths.
    Length {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Convex-hull width of the sampled curve.
    Width {
        #[command(flatten)]
        curve: CurveArgs,
        /// Pass tolerance: the curve passes when width >= 1 - tol.
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        /// Exit with status 4 unless the width passes.
        #[arg(long)]
        require_unit_width: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Minimize the length of an open curve family over its parameters.
    Optimize {
        #[arg(long, value_enum, ignore_case = true, default_value_t = FamilyArg::L3)]
        family: FamilyArg,
        /// Number of uniformly random starts drawn with --seed; the default is
        /// a fixed lattice of 16 starts.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        starts: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Recomputed quantities next to their published values.
    Report {
        #[arg(long, value_enum, ignore_case = true, default_value_t = CurveArg::L3)]
        curve: CurveArg,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the sampled curve as OBJ, CSV or JSON.
    Export {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_enum, default_value_t = Format::Obj)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long, value_enum, ignore_case = true)]
    curve: CurveArg,
    #[command(flatten)]
    params: ParamArgs,
    /// Samples per helix arc.
    #[arg(long, default_value_t = DEFAULT_N_ARC, value_parser = n_arc)]
    n_arc: usize,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "verbatim")]
enum CurveArg {
    L1,
    L2,
    L3,
    L4,
    L5,
}

impl From<CurveArg> for CurveKind {
    fn from(c: CurveArg) -> Self {
        match c {
            CurveArg::L1 => CurveKind::L1,
            CurveArg::L2 => CurveKind::L2,
            CurveArg::L3 => CurveKind::L3,
            CurveArg::L4 => CurveKind::L4,
            CurveArg::L5 => CurveKind::L5,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "verbatim")]
enum FamilyArg {
    L2,
    L3,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Obj,
}

impl From<Format> for ExportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ExportFormat::Json,
            Format::Csv => ExportFormat::Csv,
            Format::Obj => ExportFormat::Obj,
        }
    }
}

fn n_arc(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < 2 {
        return Err(format!("must be at least 2, got {n}"));
    }
    Ok(n)
}

enum Failure {
    Core(Error),
    Invalid(String),
    NotUnit,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<(), Failure>;

impl ParamArgs {
    fn triple(&self) -> Result<Option<[f64; 3]>, Failure> {
        match (self.a, self.b, self.c) {
            (Some(a), Some(b), Some(c)) => Ok(Some([a, b, c])),
            (None, None, None) => Ok(None),
            _ => Err(Failure::Invalid("--a, --b and --c must be given together".into())),
        }
    }
}

fn spec_for(kind: CurveKind, params: &ParamArgs) -> Result<CurveSpec, Failure> {
    let params = params.triple()?.or(kind.default_params());
    Ok(CurveSpec::new(kind, params)?)
}

impl CurveArgs {
    fn spec(&self) -> Result<CurveSpec, Failure> {
        spec_for(self.curve.into(), &self.params)
    }
}

/// Machine output only in JSON; geometry formats make no sense for records.
fn json_mode(format: Option<Format>) -> Result<bool, Failure> {
    match format {
        None => Ok(false),
        Some(Format::Json) => Ok(true),
        Some(_) => Err(Failure::Invalid("this command supports only --format json".into())),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Outcome {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Core(e.into())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn params_json(spec: &CurveSpec) -> serde_json::Value {
    spec.params.map_or(serde_json::Value::Null, |p| json!(p.as_array()))
}

fn build(curve: &CurveArgs, format: Format, out: Option<&PathBuf>) -> Outcome {
    let spec = curve.spec()?;
    let poly = spec.build(curve.n_arc)?;
    if let Some(path) = out {
        emit(&export_string(&poly, format.into()), Some(path))?;
    }
    println!("curve {}", spec.kind);
    println!("points {}", poly.len());
    println!("closed {}", poly.is_closed());
    println!("sampled length {:.6}", polyline_length(&poly));
    Ok(())
}

fn length(curve: &CurveArgs, format: Option<Format>) -> Outcome {
    let json = json_mode(format)?;
    let spec = curve.spec()?;
    let exact = spec.closed_form_length()?;
    let sampled = polyline_length(&spec.build(curve.n_arc)?);
    if json {
        emit(
            &json_text(&json!({
                "curve": spec.kind,
                "params": params_json(&spec),
                "n_arc": curve.n_arc,
                "closed_form": exact,
                "sampled": sampled,
            })),
            None,
        )
    } else {
        println!("{exact:.6}");
        println!("sampled {sampled:.6} (n_arc {})", curve.n_arc);
        Ok(())
    }
}

/// Six decimals without a sign on values that round to zero.
fn fix6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        s[1..].to_string()
    } else {
        s
    }
}

fn pair_name(p: &AntipodalPair) -> &'static str {
    match p {
        AntipodalPair::FacetVertex { .. } => "facet-vertex",
        AntipodalPair::EdgeEdge { .. } => "edge-edge",
        AntipodalPair::Degenerate => "degenerate",
    }
}

fn width(curve: &CurveArgs, tol: f64, require: bool, format: Option<Format>) -> Outcome {
    let json = json_mode(format)?;
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Failure::Invalid(format!("--tol must be finite and non-negative, got {tol}")));
    }
    let spec = curve.spec()?;
    let poly = spec.build(curve.n_arc)?;
    let r = curve_width(&poly, tol);
    if json {
        emit(
            &json_text(&json!({
                "curve": spec.kind,
                "params": params_json(&spec),
                "n_arc": curve.n_arc,
                "report": r,
            })),
            None,
        )?;
    } else {
        let d = r.direction;
        println!("curve {} (n_arc {})", spec.kind, curve.n_arc);
        println!("width {:.6}", r.width);
        println!("direction {} {} {}", fix6(d.x), fix6(d.y), fix6(d.z));
        println!("achieved by {}", pair_name(&r.achieving_pair));
        println!("unit width {} (tol {})", if r.passes_unit { "pass" } else { "fail" }, r.tol);
    }
    if require && !r.passes_unit {
        return Err(Failure::NotUnit);
    }
    Ok(())
}

fn optimize(
    family: FamilyArg,
    starts: Option<u64>,
    budget: usize,
    seed: u64,
    format: Option<Format>,
) -> Outcome {
    let json = json_mode(format)?;
    let family = match family {
        FamilyArg::L2 => Family::L2,
        FamilyArg::L3 => Family::L3,
    };
    let starts = match starts {
        None => default_starts(),
        Some(n) => SearchBox::default().sample(n as usize, seed),
    };
    let r = minimize(&ObjectiveSpec::new(family), &starts, budget, seed)?;
    if json {
        return emit(&json_text(&json!({ "family": family, "result": r })), None);
    }
    let [a, b, c] = r.argmin;
    println!("family {family}");
    println!("argmin a {a:.6} b {b:.6} c {c:.6}");
    println!("min length {:.6}", r.min_length);
    let active: Vec<String> = r.active_constraints.iter().map(|c| c.to_string()).collect();
    println!("active constraints {}", if active.is_empty() { "none".into() } else { active.join(", ") });
    println!("converged {}", r.converged);
    println!("starts {} evaluations {}", r.starts_used, r.evaluations);
    Ok(())
}

fn report_cmd(curve: CurveArg, params: &ParamArgs, format: Option<Format>, out: Option<&PathBuf>) -> Outcome {
    let json = json_mode(format)?;
    let kind: CurveKind = curve.into();
    let doc = report(kind, params.triple()?)?;
    if json {
        return emit(&json_text(&serde_json::to_value(&doc).map_err(|e| Failure::Core(e.into()))?), out);
    }
    let mut s = String::new();
    let [a, b, c] = doc.params;
    writeln!(s, "curve {} at a {a:.6} b {b:.6} c {c:.6}", doc.curve).unwrap();
    writeln!(s, "published values: {}", doc.source).unwrap();
    writeln!(s, "{:<6} {:>12} {:>12} {:>10}", "name", "computed", "published", "deviation").unwrap();
    for e in &doc.entries {
        writeln!(s, "{:<6} {:>12.6} {:>12.6} {:>10.1e}", e.name, e.computed, e.published, e.deviation).unwrap();
    }
    writeln!(s, "max deviation {:.1e}", doc.max_deviation).unwrap();
    if let Some(ang) = doc.angles {
        writeln!(
            s,
            "angle DMA {:.6} DNB {:.6} both obtuse {}",
            ang.dm_a, ang.dn_b, ang.both_obtuse
        )
        .unwrap();
    }
    emit(&s, out)
}

fn export(curve: &CurveArgs, format: Format, out: Option<&PathBuf>) -> Outcome {
    let poly = curve.spec()?.build(curve.n_arc)?;
    emit(&export_string(&poly, format.into()), out)
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Build { curve, format, out } => build(curve, *format, out.as_ref()),
        Command::Length { curve, format } => length(curve, *format),
        Command::Width {
            curve,
            tol,
            require_unit_width,
            format,
        } => width(curve, *tol, *require_unit_width, *format),
        Command::Optimize {
            family,
            starts,
            budget,
            seed,
            format,
        } => optimize(*family, *starts, *budget, *seed, *format),
        Command::Report {
            curve,
            params,
            format,
            out,
        } => report_cmd(*curve, params, *format, out.as_ref()),
        Command::Export { curve, format, out } => export(curve, *format, out.as_ref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::NotUnit) => {
            eprintln!("error: width is below 1 - tol");
            ExitCode::from(EXIT_NOT_UNIT)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            if e.is_geometric() {
                ExitCode::from(EXIT_GEOMETRY)
            } else if matches!(e, Error::Io(_)) {
                ExitCode::FAILURE
            } else {
                ExitCode::from(EXIT_INVALID)
            }
        }
    }
}
