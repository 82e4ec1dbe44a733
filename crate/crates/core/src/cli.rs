//! Command-line front end: problem-file ingestion, solver dispatch and reports.
//!
//! Problem files are JSON objects in one of two shapes:
//!
//! ```text
//! { "potential": [0, 1], "frequencies": [0.75, 0.25] }     (or "counts": [3, 1])
//! { "X": [[1, 0, 0], [0, 1, 0]], "y": [0.2, 0.3] }
//! ```
//!
//! with an optional `"config"` object overriding solver settings. `u`/`r` are accepted
//! as aliases. Reports repeat the problem fields, so a JSON report can be fed back in
//! as a problem file. Floats are written with 17 significant digits.

use std::fmt::Write as _;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::Error;
use crate::functional::{dist, log_likelihood, mean_value, nats_to_bits, shannon_entropy};
use crate::maxprob::{default_window, most_probable_coherent_type_capped, DEFAULT_ENUMERATION_CAP};
use crate::oracle::{grid_maxent, grid_ml, SimplexGrid};
use crate::solver::{
    collinear_mean, orthogonality_check, solve_collinear, solve_inverse, solve_maxent_coherent,
    solve_ml_scalar, SolverConfig,
};
use crate::types::{ConstraintSystem, DualSolution, Pmf, Potential, Sample};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "maxent", version, about = "Maximum-entropy solutions of y = Xp and ML/MaxEnt complementarity checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Most likely member of the collinear family dist(λu) for frequencies r.
    SolveMl(FileArgs),
    /// Most entropic pmf coherent with r on u.
    SolveMaxent(FileArgs),
    /// MaxEnt solution of the inverse problem y = Xp.
    SolveInverse(FileArgs),
    /// Most probable type class of size N coherent with c on u.
    Maxprob(MaxProbArgs),
    /// Run the solvers against the brute-force oracles on a problem file.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Report entropies in bits instead of nats.
    #[arg(long)]
    pub bits: bool,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Residual tolerance (max-norm).
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FileArgs {
    /// Problem file, or `-` for standard input.
    pub file: String,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MaxProbArgs {
    /// Sample size.
    #[arg(long)]
    pub n: u64,
    /// Potential, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub u: Vec<f64>,
    /// Coherence target u·p.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["lambda", "r"])]
    pub c: Option<f64>,
    /// Take the target as u·dist(λu).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "r")]
    pub lambda: Option<f64>,
    /// Take the target as u·r.
    #[arg(long, value_delimiter = ',')]
    pub r: Option<Vec<f64>>,
    /// Window half-width; defaults to (max u − min u) / (2N).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Maximum number of type classes to enumerate.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub cap: u128,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub file: String,
    /// Simplex grid spacing for the MaxEnt oracle.
    #[arg(long, default_value_t = SimplexGrid::DEFAULT_STEP)]
    pub grid_step: f64,
    /// λ spacing for the ML oracle.
    #[arg(long, default_value_t = 1e-3)]
    pub ml_step: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// CLI failure with its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Solver(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Solver(Error::InfeasibleTarget(_)) => EXIT_INFEASIBLE,
            CliError::Solver(Error::MaxIterExceeded { .. }) => EXIT_NONCONVERGENCE,
            CliError::Solver(_) => EXIT_INPUT,
        }
    }
}

// ---------------------------------------------------------------------------
// Problem files

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    tol_residual: Option<f64>,
    max_iter: Option<usize>,
    lambda_blowup: Option<f64>,
    damping: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    #[serde(alias = "u")]
    potential: Option<Vec<f64>>,
    #[serde(alias = "r")]
    frequencies: Option<Vec<f64>>,
    counts: Option<Vec<u64>>,
    #[serde(rename = "X", alias = "x")]
    x: Option<Vec<Vec<f64>>>,
    y: Option<Vec<f64>>,
    config: Option<RawConfig>,
    // Written by reports; ignored on input.
    #[allow(dead_code)]
    task: Option<serde_json::Value>,
    #[allow(dead_code)]
    solution: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemShape {
    Scalar { potential: Potential, frequencies: Pmf },
    Inverse(ConstraintSystem),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub shape: ProblemShape,
    pub config: SolverConfig,
}

/// Line number (1-based) of the first occurrence of `"key"`, for error messages.
fn line_of_key(text: &str, key: &str) -> Option<usize> {
    let quoted = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&quoted)).map(|i| i + 1)
}

fn at_key(text: &str, key: &str, msg: impl std::fmt::Display) -> CliError {
    match line_of_key(text, key) {
        Some(line) => CliError::Input(format!("line {line}: `{key}`: {msg}")),
        None => CliError::Input(format!("`{key}`: {msg}")),
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawProblem = serde_json::from_str(text).map_err(|e| {
            CliError::Input(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;

        let mut config = SolverConfig::default();
        if let Some(c) = raw.config {
            config.tol_residual = c.tol_residual.unwrap_or(config.tol_residual);
            config.max_iter = c.max_iter.unwrap_or(config.max_iter);
            config.lambda_blowup = c.lambda_blowup.unwrap_or(config.lambda_blowup);
            config.damping = c.damping.unwrap_or(config.damping);
            config.validate().map_err(|e| at_key(text, "config", e))?;
        }

        let scalar = raw.potential.is_some() || raw.frequencies.is_some() || raw.counts.is_some();
        let inverse = raw.x.is_some() || raw.y.is_some();
        let shape = match (scalar, inverse) {
            (true, true) => {
                return Err(CliError::Input(
                    "problem file mixes the scalar {potential, frequencies} and matrix {X, y} shapes".into(),
                ))
            }
            (false, false) => {
                return Err(CliError::Input(
                    "problem file needs either {potential, frequencies} or {X, y}".into(),
                ))
            }
            (true, false) => {
                let u = raw
                    .potential
                    .ok_or_else(|| CliError::Input("missing `potential`".into()))?;
                let potential = Potential::new(u).map_err(|e| at_key(text, "potential", e))?;
                let frequencies = match (raw.frequencies, raw.counts) {
                    (Some(r), None) => Pmf::new(r).map_err(|e| at_key(text, "frequencies", e))?,
                    (None, Some(c)) => Sample::new(c)
                        .map_err(|e| at_key(text, "counts", e))?
                        .frequencies(),
                    (Some(_), Some(_)) => {
                        return Err(CliError::Input("give either `frequencies` or `counts`, not both".into()))
                    }
                    (None, None) => return Err(CliError::Input("missing `frequencies`".into())),
                };
                if frequencies.len() != potential.len() {
                    return Err(at_key(
                        text,
                        "frequencies",
                        format!("has {} entries but the potential has {}", frequencies.len(), potential.len()),
                    ));
                }
                ProblemShape::Scalar { potential, frequencies }
            }
            (false, true) => {
                let x = raw.x.ok_or_else(|| CliError::Input("missing `X`".into()))?;
                let y = raw.y.ok_or_else(|| CliError::Input("missing `y`".into()))?;
                ProblemShape::Inverse(ConstraintSystem::new(x, y).map_err(|e| at_key(text, "X", e))?)
            }
        };
        Ok(Self { shape, config })
    }

    fn scalar(&self) -> Result<(&Potential, &Pmf), CliError> {
        match &self.shape {
            ProblemShape::Scalar { potential, frequencies } => Ok((potential, frequencies)),
            ProblemShape::Inverse(_) => Err(CliError::Input(
                "this command needs a {potential, frequencies} problem file".into(),
            )),
        }
    }
}

// ---------------------------------------------------------------------------
// Reports

/// A report value. Reports are ordered key/value trees rendered as JSON, CSV or text.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(u64),
    Bool(bool),
    Str(String),
    Vector(Vec<f64>),
    Counts(Vec<u64>),
    Matrix(Vec<Vec<f64>>),
    Section(Report),
    List(Vec<Report>),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report(pub Vec<(String, Field)>);

impl Report {
    fn with(mut self, key: &str, value: Field) -> Self {
        self.0.push((key.to_string(), value));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

/// `%.17g`-equivalent: 17 significant digits, always round-trips.
fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Shortest round-trip form, switching to exponent notation for very small or large magnitudes.
fn fmt_short(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-4..1e9).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

struct Num17(f64);

impl Serialize for Num17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        RawValue::from_string(fmt17(self.0))
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }
}

struct Seq<'a, T>(&'a [T]);

impl Serialize for Seq<'_, f64> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for &v in self.0 {
            seq.serialize_element(&Num17(v))?;
        }
        seq.end()
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Field::Num(v) => Num17(*v).serialize(s),
            Field::Int(v) => s.serialize_u64(*v),
            Field::Bool(v) => s.serialize_bool(*v),
            Field::Str(v) => s.serialize_str(v),
            Field::Vector(v) => Seq(v).serialize(s),
            Field::Counts(v) => v.serialize(s),
            Field::Matrix(rows) => {
                let mut seq = s.serialize_seq(Some(rows.len()))?;
                for row in rows {
                    seq.serialize_element(&Seq(row))?;
                }
                seq.end()
            }
            Field::Section(r) => r.serialize(s),
            Field::List(items) => items.serialize(s),
        }
    }
}

impl Serialize for Report {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serialization is infallible");
        out.push('\n');
        out
    }

    /// `key,index,value` rows; nested keys are dotted, matrix indices are `row:col`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("key,index,value\n");
        self.csv_rows("", &mut out);
        out
    }

    fn csv_rows(&self, prefix: &str, out: &mut String) {
        for (k, v) in &self.0 {
            let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
            match v {
                Field::Num(x) => writeln!(out, "{key},,{}", fmt17(*x)),
                Field::Int(x) => writeln!(out, "{key},,{x}"),
                Field::Bool(x) => writeln!(out, "{key},,{x}"),
                Field::Str(x) => writeln!(out, "{key},,{x}"),
                Field::Vector(xs) => xs
                    .iter()
                    .enumerate()
                    .try_for_each(|(i, x)| writeln!(out, "{key},{i},{}", fmt17(*x))),
                Field::Counts(xs) => xs
                    .iter()
                    .enumerate()
                    .try_for_each(|(i, x)| writeln!(out, "{key},{i},{x}")),
                Field::Matrix(rows) => rows.iter().enumerate().try_for_each(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .try_for_each(|(j, x)| writeln!(out, "{key},{i}:{j},{}", fmt17(*x)))
                }),
                Field::Section(r) => {
                    r.csv_rows(&key, out);
                    Ok(())
                }
                Field::List(items) => {
                    for (i, r) in items.iter().enumerate() {
                        r.csv_rows(&format!("{key}.{i}"), out);
                    }
                    Ok(())
                }
            }
            .expect("writing to a String cannot fail");
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.text_lines(0, &mut out);
        out
    }

    fn text_lines(&self, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        let vec = |xs: &[f64]| xs.iter().map(|&x| fmt_short(x)).collect::<Vec<_>>().join(", ");
        for (k, v) in &self.0 {
            let line = match v {
                Field::Num(x) => format!("{pad}{k}: {}", fmt_short(*x)),
                Field::Int(x) => format!("{pad}{k}: {x}"),
                Field::Bool(x) => format!("{pad}{k}: {x}"),
                Field::Str(x) => format!("{pad}{k}: {x}"),
                Field::Vector(xs) => format!("{pad}{k}: [{}]", vec(xs)),
                Field::Counts(xs) => format!("{pad}{k}: {xs:?}"),
                Field::Matrix(rows) => {
                    let rows: Vec<String> = rows.iter().map(|r| format!("[{}]", vec(r))).collect();
                    format!("{pad}{k}: [{}]", rows.join(", "))
                }
                Field::Section(r) => {
                    out.push_str(&format!("{pad}{k}:\n"));
                    r.text_lines(depth + 1, out);
                    continue;
                }
                Field::List(items) => {
                    out.push_str(&format!("{pad}{k}:\n"));
                    for r in items {
                        out.push_str(&format!("{pad}  -\n"));
                        r.text_lines(depth + 2, out);
                    }
                    continue;
                }
            };
            out.push_str(&line);
            out.push('\n');
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => self.to_text(),
        }
    }
}

fn config_section(cfg: &SolverConfig) -> Field {
    Field::Section(
        Report::default()
            .with("tol_residual", Field::Num(cfg.tol_residual))
            .with("max_iter", Field::Int(cfg.max_iter as u64))
            .with("lambda_blowup", Field::Num(cfg.lambda_blowup))
            .with("damping", Field::Num(cfg.damping)),
    )
}

fn entropy_field(nats: f64, bits: bool) -> Field {
    Field::Num(if bits { nats_to_bits(nats) } else { nats })
}

fn unit(bits: bool) -> Field {
    Field::Str(if bits { "bits" } else { "nats" }.into())
}

fn scalar_report(
    task: &str,
    u: &Potential,
    r: &Pmf,
    cfg: &SolverConfig,
    sol: &DualSolution,
    bits: bool,
) -> Result<Report, CliError> {
    let solution = Report::default()
        .with("lambda", Field::Vector(sol.lambda.clone()))
        .with("pmf", Field::Vector(sol.pmf.probs().to_vec()))
        .with("coherence_residual", Field::Num(sol.residual_inf))
        .with("orthogonality", Field::Num(orthogonality_check(u, r, sol)?))
        .with("log_likelihood", Field::Num(log_likelihood(r, &sol.pmf)?))
        .with("shannon_entropy", entropy_field(shannon_entropy(&sol.pmf), bits))
        .with("entropy_unit", unit(bits))
        .with("iterations", Field::Int(sol.iterations as u64))
        .with("converged", Field::Bool(sol.converged))
        .with("degenerate", Field::Bool(sol.degenerate));
    Ok(Report::default()
        .with("task", Field::Str(task.into()))
        .with("potential", Field::Vector(u.values().to_vec()))
        .with("frequencies", Field::Vector(r.probs().to_vec()))
        .with("config", config_section(cfg))
        .with("solution", Field::Section(solution)))
}

fn inverse_report(sys: &ConstraintSystem, cfg: &SolverConfig, sol: &DualSolution, bits: bool) -> Report {
    let solution = Report::default()
        .with("lambda", Field::Vector(sol.lambda.clone()))
        .with("pmf", Field::Vector(sol.pmf.probs().to_vec()))
        .with("residual_inf", Field::Num(sol.residual_inf))
        .with("shannon_entropy", entropy_field(shannon_entropy(&sol.pmf), bits))
        .with("entropy_unit", unit(bits))
        .with("iterations", Field::Int(sol.iterations as u64))
        .with("converged", Field::Bool(sol.converged))
        .with("degenerate", Field::Bool(sol.degenerate));
    Report::default()
        .with("task", Field::Str("solve-inverse".into()))
        .with("X", Field::Matrix(sys.rows()))
        .with("y", Field::Vector(sys.target().as_slice().to_vec()))
        .with("config", config_section(cfg))
        .with("solution", Field::Section(solution))
}

// ---------------------------------------------------------------------------
// Commands

/// Outcome of a command: the report (if any) and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub report: Option<Report>,
    pub exit_code: i32,
    pub error: Option<String>,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Self { report: Some(report), exit_code: EXIT_OK, error: None }
    }

    fn failed(err: CliError) -> Self {
        Self { report: None, exit_code: err.exit_code(), error: Some(err.to_string()) }
    }
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<String, CliError> {
    let mut text = String::new();
    if path == "-" {
        stdin
            .read_to_string(&mut text)
            .map_err(|e| CliError::Input(format!("reading standard input: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn apply_overrides(mut cfg: SolverConfig, args: &SolverArgs) -> Result<SolverConfig, CliError> {
    if let Some(t) = args.tol {
        cfg.tol_residual = t;
    }
    if let Some(m) = args.max_iter {
        cfg.max_iter = m;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn load(args: &FileArgs, stdin: &mut dyn Read) -> Result<(ProblemFile, SolverConfig), CliError> {
    let problem = ProblemFile::parse(&read_input(&args.file, stdin)?)?;
    let cfg = apply_overrides(problem.config, &args.solver)?;
    Ok((problem, cfg))
}

/// Runs a scalar solve. A non-converged best iterate is still reported, with exit code 3.
fn scalar_command(
    task: &str,
    args: &FileArgs,
    stdin: &mut dyn Read,
    solve: fn(&Potential, &Pmf, &SolverConfig) -> crate::Result<DualSolution>,
) -> Outcome {
    let mut run = || -> Result<Outcome, CliError> {
        let (problem, cfg) = load(args, stdin)?;
        let (u, r) = problem.scalar()?;
        match solve(u, r, &cfg) {
            Ok(sol) => Ok(Outcome::ok(scalar_report(task, u, r, &cfg, &sol, args.output.bits)?)),
            Err(Error::MaxIterExceeded { best }) => {
                let report = scalar_report(task, u, r, &cfg, &best, args.output.bits)?;
                let err = CliError::Solver(Error::MaxIterExceeded { best });
                Ok(Outcome { report: Some(report), exit_code: err.exit_code(), error: Some(err.to_string()) })
            }
            Err(e) => Err(e.into()),
        }
    };
    run().unwrap_or_else(Outcome::failed)
}

pub fn cmd_solve_ml(args: &FileArgs, stdin: &mut dyn Read) -> Outcome {
    scalar_command("solve-ml", args, stdin, solve_ml_scalar)
}

pub fn cmd_solve_maxent(args: &FileArgs, stdin: &mut dyn Read) -> Outcome {
    scalar_command("solve-maxent", args, stdin, solve_maxent_coherent)
}

pub fn cmd_solve_inverse(args: &FileArgs, stdin: &mut dyn Read) -> Outcome {
    let mut run = || -> Result<Outcome, CliError> {
        let (problem, cfg) = load(args, stdin)?;
        let sys = match &problem.shape {
            ProblemShape::Inverse(sys) => sys.clone(),
            ProblemShape::Scalar { potential, frequencies } => {
                ConstraintSystem::from_potential(potential, mean_value(potential, frequencies)?)?
            }
        };
        match solve_inverse(&sys, &cfg) {
            Ok(sol) => Ok(Outcome::ok(inverse_report(&sys, &cfg, &sol, args.output.bits))),
            Err(Error::MaxIterExceeded { best }) => {
                let report = inverse_report(&sys, &cfg, &best, args.output.bits);
                let err = CliError::Solver(Error::MaxIterExceeded { best });
                Ok(Outcome { report: Some(report), exit_code: err.exit_code(), error: Some(err.to_string()) })
            }
            Err(e) => Err(e.into()),
        }
    };
    run().unwrap_or_else(Outcome::failed)
}

pub fn cmd_maxprob(args: &MaxProbArgs) -> Outcome {
    let run = || -> Result<Outcome, CliError> {
        let u = Potential::new(args.u.clone())?;
        let cfg = apply_overrides(SolverConfig::default(), &args.solver)?;
        let c = match (args.c, args.lambda, &args.r) {
            (Some(c), None, None) => c,
            (None, Some(l), None) => collinear_mean(&u, l),
            (None, None, Some(r)) => mean_value(&u, &Pmf::new(r.clone())?)?,
            _ => return Err(CliError::Input("give exactly one of --c, --lambda, --r".into())),
        };
        let delta = args.delta.unwrap_or_else(|| default_window(&u, args.n));
        let t = most_probable_coherent_type_capped(args.n, &u, c, Some(delta), args.cap)?;
        let mut report = Report::default()
            .with("task", Field::Str("maxprob".into()))
            .with("n", Field::Int(args.n))
            .with("potential", Field::Vector(u.values().to_vec()))
            .with("c", Field::Num(c))
            .with("delta", Field::Num(delta))
            .with("type", Field::Counts(t.counts.clone()))
            .with("log_multiplicity", Field::Num(t.log_multiplicity))
            .with("pmf", Field::Vector(t.pmf().probs().to_vec()));
        match solve_collinear(&u, c, &cfg) {
            Ok(sol) => {
                report = report
                    .with("solver_lambda", Field::Num(sol.lambda[0]))
                    .with("solver_pmf", Field::Vector(sol.pmf.probs().to_vec()))
                    .with("l1_distance", Field::Num(t.pmf().l1_distance(&sol.pmf)?));
            }
            Err(e) => report = report.with("solver_error", Field::Str(e.to_string())),
        }
        Ok(Outcome::ok(report))
    };
    run().unwrap_or_else(Outcome::failed)
}

struct Check {
    name: &'static str,
    value: f64,
    limit: f64,
    skipped: Option<String>,
}

impl Check {
    fn new(name: &'static str, value: f64, limit: f64) -> Self {
        Self { name, value, limit, skipped: None }
    }

    fn skip(name: &'static str, why: impl Into<String>) -> Self {
        Self { name, value: f64::NAN, limit: f64::NAN, skipped: Some(why.into()) }
    }

    fn passed(&self) -> bool {
        self.skipped.is_some() || self.value <= self.limit
    }

    fn report(&self) -> Report {
        let r = Report::default().with("name", Field::Str(self.name.into()));
        match &self.skipped {
            Some(why) => r.with("status", Field::Str("skipped".into())).with("reason", Field::Str(why.clone())),
            None => r
                .with("status", Field::Str(if self.passed() { "pass" } else { "fail" }.into()))
                .with("value", Field::Num(self.value))
                .with("limit", Field::Num(self.limit)),
        }
    }
}

fn scalar_checks(u: &Potential, r: &Pmf, cfg: &SolverConfig, args: &CheckArgs) -> Result<Vec<Check>, CliError> {
    let ml = solve_ml_scalar(u, r, cfg)?;
    let me = solve_maxent_coherent(u, r, cfg)?;
    let lambda0 = ml.lambda[0];
    let mut checks = vec![
        Check::new("complementarity_pmf_linf", ml.pmf.linf_distance(&me.pmf)?, 1e-8),
        Check::new("complementarity_lambda", (lambda0 - me.lambda[0]).abs(), 1e-8),
        Check::new("orthogonality", orthogonality_check(u, r, &ml)?.abs(), cfg.tol_residual),
    ];
    if u.is_constant() {
        checks.push(Check::skip("grid_ml", "constant potential: likelihood is flat"));
    } else {
        let scan = grid_ml(u, r, (lambda0 - 2.0).floor(), (lambda0 + 2.0).ceil(), args.ml_step)?;
        checks.push(Check::new("grid_ml", (scan - lambda0).abs(), args.ml_step * (1.0 + 1e-9)));
    }
    if u.len() <= 3 && u.len() >= 2 {
        let grid = SimplexGrid::new(u.len(), args.grid_step)?;
        let q = grid_maxent(u, mean_value(u, r)?, &grid)?;
        checks.push(Check::new("grid_maxent_l1", q.l1_distance(&me.pmf)?, 5.0 * args.grid_step));
    } else {
        checks.push(Check::skip("grid_maxent_l1", "simplex grid oracle needs m = 2 or 3"));
    }
    Ok(checks)
}

fn inverse_checks(sys: &ConstraintSystem, cfg: &SolverConfig, args: &CheckArgs) -> Result<Vec<Check>, CliError> {
    let sol = solve_inverse(sys, cfg)?;
    let scores: Vec<f64> = (0..sys.n_outcomes())
        .map(|i| (0..sys.n_constraints()).map(|j| sol.lambda[j] * sys.matrix()[(j, i)]).sum())
        .collect();
    let again = dist(&Potential::new(scores)?);
    let mut checks = vec![
        Check::new("residual_inf", sol.residual_inf, cfg.tol_residual),
        Check::new("pmf_is_dist_of_lambda_x", again.linf_distance(&sol.pmf)?, 1e-14),
    ];
    if sys.n_constraints() == 1 {
        let u = Potential::new(sys.row(0))?;
        let y = sys.target()[0];
        let scalar = solve_collinear(&u, y, cfg)?;
        checks.push(Check::new("scalar_embedding_linf", scalar.pmf.linf_distance(&sol.pmf)?, 1e-9));
        if (2..=3).contains(&u.len()) {
            let q = grid_maxent(&u, y, &SimplexGrid::new(u.len(), args.grid_step)?)?;
            checks.push(Check::new("grid_maxent_l1", q.l1_distance(&sol.pmf)?, 5.0 * args.grid_step));
        }
    } else {
        checks.push(Check::skip("scalar_embedding_linf", "needs a single constraint row"));
    }
    Ok(checks)
}

/// Exit 0 when every check passes, 3 otherwise.
pub fn cmd_check(args: &CheckArgs, stdin: &mut dyn Read) -> Outcome {
    let mut run = || -> Result<Outcome, CliError> {
        let problem = ProblemFile::parse(&read_input(&args.file, stdin)?)?;
        let cfg = apply_overrides(problem.config, &args.solver)?;
        let checks = match &problem.shape {
            ProblemShape::Scalar { potential, frequencies } => scalar_checks(potential, frequencies, &cfg, args)?,
            ProblemShape::Inverse(sys) => inverse_checks(sys, &cfg, args)?,
        };
        let all = checks.iter().all(Check::passed);
        let report = Report::default()
            .with("task", Field::Str("check".into()))
            .with("passed", Field::Bool(all))
            .with("checks", Field::List(checks.iter().map(Check::report).collect()));
        Ok(Outcome {
            report: Some(report),
            exit_code: if all { EXIT_OK } else { EXIT_NONCONVERGENCE },
            error: (!all).then(|| "one or more oracle checks failed".to_string()),
        })
    };
    run().unwrap_or_else(Outcome::failed)
}

pub fn execute(cli: &Cli, stdin: &mut dyn Read) -> (Outcome, Format) {
    match &cli.command {
        Command::SolveMl(a) => (cmd_solve_ml(a, stdin), a.output.format),
        Command::SolveMaxent(a) => (cmd_solve_maxent(a, stdin), a.output.format),
        Command::SolveInverse(a) => (cmd_solve_inverse(a, stdin), a.output.format),
        Command::Maxprob(a) => (cmd_maxprob(a), a.output.format),
        Command::Check(a) => (cmd_check(a, stdin), a.output.format),
    }
}

/// Parses `args` (including the program name), runs the command and writes the
/// report to `stdout` and diagnostics to `stderr`. Returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let (outcome, format) = execute(&cli, stdin);
    if let Some(report) = &outcome.report {
        let _ = stdout.write_all(report.render(format).as_bytes());
    }
    if let Some(err) = &outcome.error {
        let _ = writeln!(stderr, "error: {err}");
    }
    outcome.exit_code
}
