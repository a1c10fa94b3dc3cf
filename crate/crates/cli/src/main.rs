//! `axial`: curvature analysis of corank-1 surface germs from the command line.

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use axial_core::export::{self, Table};
use axial_core::normalize::{classify_2jet, to_monge_form};
use axial_core::parabola::{asymptotic_directions, curvature_parabola, point_type};
use axial_core::parse::GermSource;
use axial_core::report::analyze;
use axial_core::{Error, MapGerm, Tolerance, DEFAULT_TOLERANCE};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "axial", version, about = "Axial curvature and contact analysis of singular surface germs")]
struct Cli {
    /// Jet order used when parsing expression text.
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Base factor of the degeneracy threshold.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Output format; reports default to json, tables to csv.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Input {
    /// Germ file (expression text or JSON document); standard input when absent or `-`.
    path: Option<PathBuf>,
    /// Germ given inline as expression text.
    #[arg(long, conflicts_with = "path")]
    expr: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveKind {
    Branches,
    Parabola,
}

#[derive(Subcommand)]
enum Command {
    /// Corank, curvature-parabola class and point type.
    Classify(Input),
    /// Full curvature report.
    Analyze {
        #[command(flatten)]
        input: Input,
        /// Treat the input as one germ per line and analyze all of them in parallel.
        #[arg(long)]
        batch: bool,
    },
    /// Intersection branches with `v_a^⊥` or the curvature parabola.
    Curves {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "branches")]
        kind: CurveKind,
        #[arg(long, default_value_t = 41)]
        samples: usize,
        /// Parameter half-range.
        #[arg(long, default_value_t = 0.1)]
        extent: f64,
    },
    /// Surface points on a square parameter grid.
    Mesh {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 21)]
        samples: usize,
        #[arg(long, default_value_t = 0.1)]
        radius: f64,
    },
    /// Gaussian curvature on the blow-up of a fold and its limit.
    Blowup {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_delimiter = ',', default_values_t = [1e-2, 1e-3, 1e-4])]
        radii: Vec<f64>,
        #[arg(long, default_value_t = 64)]
        angles: usize,
    },
    /// Apparent contour of a fold seen along `(0, cos φ, sin φ)`.
    Contour {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_negative_numbers = true)]
        phi: f64,
        #[arg(long, default_value_t = 41)]
        samples: usize,
        #[arg(long, default_value_t = 0.1)]
        extent: f64,
    },
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Core(Error),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) | Failure::Usage(_) => 2,
            Failure::Core(e) => e.exit_code() as u8,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Io(m) | Failure::Usage(m) => f.write_str(m),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn read_input(input: &Input) -> Result<String, Failure> {
    if let Some(expr) = &input.expr {
        return Ok(expr.clone());
    }
    match &input.path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).map_err(|e| Failure::Io(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Io(format!("cannot read standard input: {e}")))?;
            Ok(s)
        }
    }
}

fn load(text: &str, order: Option<usize>) -> Result<MapGerm, Failure> {
    Ok(GermSource::detect(text)?.to_germ(order)?)
}

fn classify(f: &MapGerm, tol: &Tolerance) -> Result<Value, Failure> {
    let m = to_monge_form(f, tol)?;
    let cp = curvature_parabola(&m);
    Ok(json!({
        "corank": 1,
        "parabola_class": classify_2jet(&m).name(),
        "point_type": point_type(&asymptotic_directions(&cp)).name(),
    }))
}

/// Flattens a JSON value into `path,value` rows.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_owned(), s.clone())),
        other => out.push((prefix.to_owned(), other.to_string())),
    }
}

fn render_value(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("value serializes") + "\n",
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", v, &mut rows);
            let mut out = String::from("field,value\n");
            for (k, x) in rows {
                out.push_str(&format!("{k},{x}\n"));
            }
            out
        }
    }
}

fn render_table(t: &Table, format: Format) -> String {
    match format {
        Format::Csv => t.to_csv(),
        Format::Json => t.to_json() + "\n",
    }
}

fn batch(text: &str, cli: &Cli, tol: &Tolerance) -> Result<String, Failure> {
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let results: Vec<Value> = lines
        .par_iter()
        .map(|line| {
            let report = load(line, cli.order).and_then(|f| Ok(analyze(&f, tol)?));
            match report {
                Ok(r) => serde_json::from_str(&r.to_json()).expect("report is valid json"),
                Err(e) => json!({ "input": line, "error": e.to_string(), "exit_code": e.code() }),
            }
        })
        .collect();
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => Ok(serde_json::to_string_pretty(&results).expect("batch serializes") + "\n"),
        Format::Csv => Err(Failure::Usage("batch output is json only".into())),
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let tol = Tolerance::new(cli.tolerance);
    let report_format = cli.format.unwrap_or(Format::Json);
    let table_format = cli.format.unwrap_or(Format::Csv);
    match &cli.command {
        Command::Classify(input) => {
            let f = load(&read_input(input)?, cli.order)?;
            Ok(render_value(&classify(&f, &tol)?, report_format))
        }
        Command::Analyze { input, batch: true } => batch(&read_input(input)?, cli, &tol),
        Command::Analyze { input, batch: false } => {
            let f = load(&read_input(input)?, cli.order)?;
            let report = analyze(&f, &tol)?;
            match report_format {
                Format::Json => Ok(report.to_json() + "\n"),
                Format::Csv => Ok(render_value(&serde_json::from_str(&report.to_json()).expect("valid json"), Format::Csv)),
            }
        }
        Command::Curves { input, kind, samples, extent } => {
            let f = load(&read_input(input)?, cli.order)?;
            let t = match kind {
                CurveKind::Branches => export::branches(&f, *samples, *extent, &tol)?,
                CurveKind::Parabola => export::parabola(&f, *samples, *extent, &tol)?,
            };
            Ok(render_table(&t, table_format))
        }
        Command::Mesh { input, samples, radius } => {
            let f = load(&read_input(input)?, cli.order)?;
            Ok(render_table(&export::mesh(&f, *samples, *radius, &tol)?, table_format))
        }
        Command::Blowup { input, radii, angles } => {
            let f = load(&read_input(input)?, cli.order)?;
            Ok(render_table(&export::blowup_grid(&f, radii, *angles, &tol)?, table_format))
        }
        Command::Contour { input, phi, samples, extent } => {
            let f = load(&read_input(input)?, cli.order)?;
            Ok(render_table(&export::contour(&f, *phi, *samples, *extent, &tol)?, table_format))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
