use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use thetamod::arith::PrimePowerModulus;
use thetamod::checks::{run_all, Check, CheckReport, Grid};
use thetamod::eisenstein;
use thetamod::forms::{default_precision, weight_filtration, FiltrationReport, Form, ResidueForm};
use thetamod::qseries::{CoeffRing, Rationals, SeriesJson};
use thetamod::registry::{FormExpr, Resolved};
use thetamod::Error;

#[derive(Parser)]
#[command(name = "thetamod", version)]
#[command(about = "Modular forms modulo prime powers: expansions, weight filtrations, and congruence checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the q-expansion of a named series
    Expand(ExpandArgs),
    /// Run a verification check over its parameter grid
    Verify(VerifyArgs),
    /// Compute the weight filtration of a form modulo p^m
    Filtration(FiltrationArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesKind {
    #[value(name = "G2")]
    G2,
    #[value(name = "E2")]
    E2,
    #[value(name = "G")]
    G,
    #[value(name = "E")]
    E,
    #[value(name = "Delta")]
    Delta,
    #[value(name = "Gstar")]
    Gstar,
    #[value(name = "GstarDirect")]
    GstarDirect,
    #[value(name = "theta")]
    Theta,
    #[value(name = "form")]
    Form,
}

#[derive(clap::Args)]
struct ExpandArgs {
    #[arg(long, value_enum)]
    series: SeriesKind,
    /// Weight, for G, E, Gstar and GstarDirect
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    m: Option<u32>,
    /// Exponent of the modulus p^t, for Gstar and GstarDirect
    #[arg(long)]
    t: Option<u32>,
    /// Named form, for theta and form (e.g. delta, e4*delta, theta:e6)
    #[arg(long)]
    f: Option<String>,
    /// Number of coefficients
    #[arg(long)]
    precision: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// A check name, or `all`
    check: String,
    /// Primes (comma separated)
    #[arg(long, value_delimiter = ',')]
    p: Vec<u64>,
    /// Exponents m (comma separated)
    #[arg(long, value_delimiter = ',')]
    m: Vec<u32>,
    /// Named forms (comma separated)
    #[arg(long, value_delimiter = ',')]
    f: Vec<String>,
    /// Hecke primes (comma separated)
    #[arg(long, value_delimiter = ',')]
    ell: Vec<u64>,
    /// Weights (comma separated)
    #[arg(long, value_delimiter = ',')]
    k: Vec<u32>,
    /// Exponents t (comma separated)
    #[arg(long, value_delimiter = ',')]
    t: Vec<u32>,
    #[arg(long)]
    precision: Option<usize>,
    /// TOML file pinning the grid; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Omit the timestamp so identical runs give identical output
    #[arg(long)]
    reproducible: bool,
}

#[derive(clap::Args)]
#[command(group(ArgGroup::new("input").required(true).args(["f", "coords"])))]
struct FiltrationArgs {
    /// Named form
    #[arg(long)]
    f: Option<String>,
    /// File with Miller-basis coordinates (JSON array or whitespace separated)
    #[arg(long)]
    coords: Option<PathBuf>,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Weight of the input; required with --coords
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    precision: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

/// Failure modes of a command, mapped to exit codes 1 and 2.
enum Failure {
    Check(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Expand(args) => expand(args),
        Command::Verify(args) => verify(args),
        Command::Filtration(args) => filtration(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("thetamod: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("thetamod: {msg}");
            ExitCode::from(2)
        }
    }
}

fn require<T>(value: Option<T>, flag: &str, series: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--{flag} is required for {series}")))
}

fn modulus(p: Option<u64>, m: Option<u32>, what: &str) -> Result<PrimePowerModulus, Failure> {
    let p = require(p, "p", what)?;
    Ok(PrimePowerModulus::new(p, m.unwrap_or(1))?)
}

fn expand(args: ExpandArgs) -> Outcome {
    let n = |weight: u32| args.precision.unwrap_or(default_precision(weight));
    let json = match args.series {
        SeriesKind::G2 => eisenstein::g2(n(2), &Rationals)?.to_json(),
        SeriesKind::E2 => eisenstein::e2(n(2), &Rationals).to_json(),
        SeriesKind::G | SeriesKind::E => {
            let k = require(args.k, "k", "G and E")?;
            let s = match args.series {
                SeriesKind::G => eisenstein::g(k, n(k), &Rationals)?,
                _ => eisenstein::e(k, n(k), &Rationals)?,
            };
            s.to_json()
        }
        SeriesKind::Delta => thetamod::forms::delta(n(12)).to_json(),
        SeriesKind::Gstar | SeriesKind::GstarDirect => {
            let k = require(args.k, "k", "Gstar")?;
            let p = require(args.p, "p", "Gstar")?;
            let t = require(args.t, "t", "Gstar")?;
            let weight = eisenstein::g_star_weight(k, p, t);
            let s = match args.series {
                SeriesKind::Gstar => eisenstein::g_star(k, p, t, n(weight))?,
                _ => eisenstein::g_star_direct(k, p, t, n(weight))?,
            };
            s.to_json()
        }
        SeriesKind::Theta | SeriesKind::Form => {
            let name = require(args.f.as_deref(), "f", "theta and form")?;
            let mut expr: FormExpr = name.parse()?;
            let md = if matches!(args.series, SeriesKind::Theta) {
                expr = FormExpr::Theta(Box::new(expr));
                Some(modulus(args.p, args.m, "theta")?)
            } else if args.p.is_some() {
                Some(modulus(args.p, args.m, "form")?)
            } else {
                None
            };
            let precision = args.precision.unwrap_or(0);
            match expr.resolve(md.as_ref(), precision)? {
                Resolved::Rational(f) => {
                    let n = args.precision.unwrap_or(default_precision(f.weight()));
                    match md {
                        Some(md) => f.reduce(&md)?.expansion(n)?.to_json(),
                        None => f.expansion(n)?.to_json(),
                    }
                }
                Resolved::Residue(f) => f
                    .expansion(args.precision.unwrap_or(default_precision(f.weight())))?
                    .to_json(),
                Resolved::Quasi(s) => s.to_json(),
            }
        }
    };
    match args.format {
        Format::Json => println!("{json}"),
        Format::Text => print!("{}", series_text(&json)),
    }
    Ok(true)
}

fn series_text(json: &SeriesJson) -> String {
    let mut out = String::new();
    let ring = match (json.p, json.m) {
        (Some(p), Some(m)) => format!("Z/{p}^{m}"),
        _ => json.ring.clone(),
    };
    let _ = writeln!(out, "# {} coefficients over {ring}", json.precision);
    let width = json.precision.saturating_sub(1).to_string().len();
    for (n, c) in json.coeffs.iter().enumerate() {
        let _ = writeln!(out, "{n:>width$}  {c}");
    }
    out
}

fn set<T: Clone>(slot: &mut Option<Vec<T>>, values: &[T]) {
    if !values.is_empty() {
        *slot = Some(values.to_vec());
    }
}

fn grid_from(args: &VerifyArgs) -> Result<Grid, Failure> {
    let mut grid = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            toml::from_str::<Grid>(&text).map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))?
        }
        None => Grid::default(),
    };
    set(&mut grid.primes, &args.p);
    set(&mut grid.exponents, &args.m);
    set(&mut grid.forms, &args.f);
    set(&mut grid.ells, &args.ell);
    set(&mut grid.weights, &args.k);
    set(&mut grid.t, &args.t);
    if args.precision.is_some() {
        grid.precision = args.precision;
    }
    Ok(grid)
}

fn verify(args: VerifyArgs) -> Outcome {
    let grid = grid_from(&args)?;
    let report = if args.check == "all" {
        run_all(&grid)?
    } else {
        args.check.parse::<Check>()?.run(&grid)?
    };
    match args.format {
        Format::Json => {
            let mut value = report.to_json_value();
            if !args.reproducible {
                let now = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
                value["timestamp"] = Value::String(now.to_string());
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&value).expect("plain data serializes")
            );
        }
        Format::Text => print!("{}", report_text(&report)),
    }
    Ok(report.passed())
}

fn report_text(report: &CheckReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}: {}", report.check, report.status.as_str());
    if let Some(reports) = report.details["reports"].as_array() {
        for r in reports {
            let _ = writeln!(
                out,
                "{}: {}",
                r["check"].as_str().unwrap_or("?"),
                r["status"].as_str().unwrap_or("?")
            );
            append_instances(&mut out, &r["details"]);
        }
    } else {
        append_instances(&mut out, &report.details);
    }
    out
}

fn append_instances(out: &mut String, details: &Value) {
    let Some(items) = details["instances"].as_array() else {
        return;
    };
    for item in items {
        let Some(obj) = item.as_object() else { continue };
        let fields: Vec<String> = obj
            .iter()
            .filter(|(k, _)| k.as_str() != "status")
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}={s}"),
                other => format!("{k}={other}"),
            })
            .collect();
        let status = obj.get("status").and_then(Value::as_str).unwrap_or("?");
        let _ = writeln!(out, "  {status:<18} {}", fields.join(" "));
    }
}

fn read_coords(path: &PathBuf) -> Result<Vec<String>, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    if let Ok(values) = serde_json::from_str::<Vec<Value>>(&text) {
        return values
            .into_iter()
            .map(|v| match v {
                Value::String(s) => Ok(s),
                Value::Number(n) => Ok(n.to_string()),
                other => Err(Failure::Usage(format!("bad coordinate {other}"))),
            })
            .collect();
    }
    Ok(text.split_whitespace().map(str::to_string).collect())
}

fn filtration_input(args: &FiltrationArgs, md: &PrimePowerModulus) -> Result<ResidueForm, Failure> {
    let precision = args.precision.unwrap_or(0);
    if let Some(path) = &args.coords {
        let k = require(args.k, "k", "--coords")?;
        let coords = read_coords(path)?
            .iter()
            .map(|c| Rationals.parse(c))
            .collect::<thetamod::Result<Vec<_>>>()?;
        let n = precision.max(default_precision(k));
        return Ok(Form::from_coords(Rationals, k, coords, n)?.reduce(md)?);
    }
    let name = args.f.as_deref().expect("clap enforces --f or --coords");
    let expr: FormExpr = name.parse()?;
    let form = match expr.resolve(Some(md), precision)? {
        Resolved::Rational(f) => f.reduce(md)?,
        Resolved::Residue(f) => f,
        Resolved::Quasi(_) => return Err(Failure::Usage(format!("{name} is not a modular form"))),
    };
    if let Some(k) = args.k {
        if k != form.weight() {
            return Err(Failure::Usage(format!("{name} has weight {}, not {k}", form.weight())));
        }
    }
    Ok(form)
}

fn filtration(args: FiltrationArgs) -> Outcome {
    let md = PrimePowerModulus::new(args.p, args.m)?;
    let form = filtration_input(&args, &md)?;
    let k = form.weight();
    let n = args.precision.unwrap_or(default_precision(k));
    let at = |n: usize| -> Result<FiltrationReport, Failure> { Ok(weight_filtration(&form.expansion(n)?, k)?) };
    let report = at(n)?;
    let again = at(2 * n)?;
    if again.w != report.w {
        return Err(Failure::Check(format!(
            "filtration {} below q^{n} but {} below q^{}",
            report.w,
            again.w,
            2 * n
        )));
    }
    match args.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report.to_json_value()).expect("plain data serializes")
        ),
        Format::Text => {
            println!("w_{{{}}} = {} (input weight {k})", md, report.w);
            if !report.rejected.is_empty() {
                let rejected: Vec<String> = report.rejected.iter().map(u32::to_string).collect();
                println!("refuted weights: {}", rejected.join(", "));
            }
        }
    }
    Ok(true)
}
