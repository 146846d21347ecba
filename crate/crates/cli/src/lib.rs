//! The `psiflow` command line: list presets, sample fields, extract
//! contours, write frame sequences and run the verification suites.
//!
//! Exit status: 0 ok, 1 verification failure, 2 configuration error,
//! 3 domain error (including a grid on which every node is singular).

pub mod io;
pub mod solution;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use psiflow_core::{
    default_levels, extract_contours, run_suites, sample_grid, ContourSet, Error, FdScheme, Field, Grid, Quantity,
    SampleDomain, StencilOrder, SuiteConfig, SuiteOutcome, PRESETS,
};

use crate::io::{decode_field, encode_contours, encode_field, read_text, write_or_print, Format, LevelSpec, RunConfig};
use crate::solution::{known_presets, Resolved, SolutionArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error("every node of the grid is singular or masked")]
    AllMasked,
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::AllMasked => 3,
            CliError::Core(e) => match e {
                Error::Domain { .. }
                | Error::SingularArgument { .. }
                | Error::Singular { .. }
                | Error::StencilPlacement { .. }
                | Error::Clearance { .. }
                | Error::PathFailure { .. } => 3,
                Error::DegenerateWave
                | Error::NoPropagation
                | Error::NotApplicable(_)
                | Error::InvalidParameter(_) => 2,
            },
            CliError::UnknownPreset(_) | CliError::Config(_) | CliError::Io(_) | CliError::Json(_) => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "psiflow", version, about = "Exact stream-function solutions: sampling, contours, verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the preset catalog.
    List {
        #[arg(long, value_enum, default_value_t = ListFormat::Text)]
        format: ListFormat,
    },
    /// Sample one quantity on a grid.
    #[command(allow_negative_numbers = true)]
    Sample(SampleArgs),
    /// Extract iso-lines of a sampled quantity.
    #[command(allow_negative_numbers = true)]
    Contour(ContourArgs),
    /// Write one sampled field per time value into a directory.
    #[command(allow_negative_numbers = true)]
    Frames(FramesArgs),
    /// Run the residual suites.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ListFormat {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    #[command(flatten)]
    pub solution: SolutionArgs,
    /// `min:max:NxM` or `xmin:xmax:ymin:ymax:NxM`; defaults to the preset's
    /// window at 101x101.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(long, value_enum, default_value = "psi")]
    pub quantity: QuantityArg,
    /// Finest finite-difference step for quantities without a closed form.
    #[arg(long, default_value_t = 1e-2)]
    pub h: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum QuantityArg {
    Psi,
    U,
    V,
    Vorticity,
    Pressure,
}

impl From<QuantityArg> for Quantity {
    fn from(q: QuantityArg) -> Quantity {
        match q {
            QuantityArg::Psi => Quantity::Psi,
            QuantityArg::U => Quantity::U,
            QuantityArg::V => Quantity::V,
            QuantityArg::Vorticity => Quantity::Vorticity,
            QuantityArg::Pressure => Quantity::Pressure,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SampleArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Defaults to the preset's time.
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct LevelArgs {
    /// Number of levels between the 5th and 95th percentile.
    #[arg(long, default_value_t = 9)]
    pub levels: usize,
    /// Explicit level; repeatable, overrides `--levels`.
    #[arg(long = "level")]
    pub level: Vec<f64>,
}

impl LevelArgs {
    fn spec(&self) -> LevelSpec {
        if self.level.is_empty() {
            LevelSpec::Count(self.levels)
        } else {
            LevelSpec::Values(self.level.clone())
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct ContourArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub t: Option<f64>,
    #[command(flatten)]
    pub levels: LevelArgs,
    /// Contour a field previously written by `sample` instead of a solution.
    #[arg(long, conflicts_with_all = ["preset", "family"])]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct FramesArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Frame times; repeatable or comma separated.
    #[arg(long, required = true, value_delimiter = ',')]
    pub t: Vec<f64>,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write `frame_NNNN_contours.*` next to each frame.
    #[arg(long)]
    pub contours: bool,
    #[command(flatten)]
    pub levels: LevelArgs,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub solution: SolutionArgs,
    /// Verify every preset in the catalog.
    #[arg(long, conflicts_with_all = ["preset", "family"])]
    pub all: bool,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    #[arg(long, default_value_t = psiflow_core::verify::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-2)]
    pub h: f64,
    /// Number of step levels used for extrapolation and the order estimate.
    #[arg(long, default_value_t = 3)]
    pub fd_levels: usize,
    #[arg(long, value_enum, default_value_t = OrderArg::Second)]
    pub order: OrderArg,
    #[arg(long, default_value_t = 1e-2)]
    pub pde_tol: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub laplace_tol: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    #[value(name = "2")]
    Second,
    #[value(name = "4")]
    Fourth,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("psiflow: {e}");
            if matches!(e, CliError::UnknownPreset(_)) {
                eprintln!("known presets: {}", known_presets());
            }
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::List { format } => list(*format),
        Command::Sample(a) => sample(a),
        Command::Contour(a) => contour(a),
        Command::Frames(a) => frames(a),
        Command::Verify(a) => verify(a),
    }
}

fn list(format: ListFormat) -> Result<(), CliError> {
    let text = match format {
        ListFormat::Text => {
            let mut s = String::new();
            for p in PRESETS {
                s.push_str(&format!("{:<8} {}\n", p.name, p.summary));
            }
            s
        }
        ListFormat::Json => {
            let v: Vec<_> = PRESETS
                .iter()
                .map(|p| {
                    serde_json::json!({
                        "name": p.name,
                        "summary": p.summary,
                        "extent": p.extent,
                        "default_time": p.default_time,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&v)? + "\n"
        }
    };
    write_or_print(None, &text)
}

/// A resolved solution with its grid, scheme and quantity.
struct Sampler {
    resolved: Resolved,
    grid: Grid,
    scheme: FdScheme,
    quantity: Quantity,
}

impl Sampler {
    fn new(a: &FieldArgs) -> Result<Sampler, CliError> {
        let resolved = a.solution.resolve()?;
        let grid = match &a.grid {
            Some(g) => g.parse()?,
            None => Grid::square(resolved.info.extent, 101)?,
        };
        let scheme = FdScheme::default().with_h(a.h);
        scheme.validate(1.0)?;
        Ok(Sampler {
            resolved,
            grid,
            scheme,
            quantity: a.quantity.into(),
        })
    }

    fn time(&self, t: Option<f64>) -> Result<f64, CliError> {
        let t = t.unwrap_or(self.resolved.info.default_time);
        self.check_time(t)?;
        Ok(t)
    }

    fn check_time(&self, t: f64) -> Result<(), CliError> {
        let min = self.resolved.solution.min_time();
        if !t.is_finite() || t < min {
            return Err(CliError::Config(format!(
                "t = {t} is outside the solution's validity (t ≥ {min})"
            )));
        }
        Ok(())
    }

    fn sample(&self, t: f64) -> Result<Field, CliError> {
        let f = sample_grid(&self.resolved.solution, &self.grid, t, self.quantity, &self.scheme)?;
        if f.masked_count() == f.grid.len() {
            return Err(CliError::AllMasked);
        }
        Ok(f)
    }

    fn config(&self, command: &str, times: Vec<f64>, levels: Option<LevelSpec>, format: Format) -> RunConfig {
        RunConfig {
            command: command.into(),
            solution: Some(self.resolved.spec.clone()),
            input: None,
            grid: Some(self.grid),
            times,
            quantity: self.quantity,
            levels,
            format,
            seed: None,
        }
    }
}

fn sample(a: &SampleArgs) -> Result<(), CliError> {
    let s = Sampler::new(&a.field)?;
    let t = s.time(a.t)?;
    let field = s.sample(t)?;
    let config = s.config("sample", vec![t], None, a.field.format);
    write_or_print(a.out.as_deref(), &encode_field(&field, &config, a.field.format)?)
}

fn contours_of(field: &Field, spec: &LevelSpec) -> Vec<ContourSet> {
    let levels = match spec {
        LevelSpec::Count(n) => default_levels(field, *n),
        LevelSpec::Values(v) => v.clone(),
    };
    extract_contours(field, &levels)
}

fn contour(a: &ContourArgs) -> Result<(), CliError> {
    let spec = a.levels.spec();
    let (field, config) = match &a.input {
        Some(path) => {
            let (_, field) = decode_field(&read_text(path)?)?;
            if field.masked_count() == field.grid.len() {
                return Err(CliError::AllMasked);
            }
            let config = RunConfig {
                command: "contour".into(),
                solution: None,
                input: Some(path.display().to_string()),
                grid: Some(field.grid),
                times: vec![field.t],
                quantity: field.quantity,
                levels: Some(spec.clone()),
                format: a.field.format,
                seed: None,
            };
            (field, config)
        }
        None => {
            let s = Sampler::new(&a.field)?;
            let t = s.time(a.t)?;
            let field = s.sample(t)?;
            let config = s.config("contour", vec![t], Some(spec.clone()), a.field.format);
            (field, config)
        }
    };
    let sets = contours_of(&field, &spec);
    write_or_print(a.out.as_deref(), &encode_contours(&sets, field.t, &config, a.field.format)?)
}

fn frames(a: &FramesArgs) -> Result<(), CliError> {
    let s = Sampler::new(&a.field)?;
    for &t in &a.t {
        s.check_time(t)?;
    }
    std::fs::create_dir_all(&a.out).map_err(|e| CliError::Io(format!("{}: {e}", a.out.display())))?;
    let fmt = a.field.format;
    let spec = a.levels.spec();
    let written: Vec<Vec<PathBuf>> = a
        .t
        .par_iter()
        .enumerate()
        .map(|(k, &t)| -> Result<Vec<PathBuf>, CliError> {
            let field = s.sample(t)?;
            let stem = format!("frame_{k:04}");
            let config = s.config("frames", vec![t], a.contours.then(|| spec.clone()), fmt);
            let path = a.out.join(format!("{stem}.{}", fmt.extension()));
            write_or_print(Some(&path), &encode_field(&field, &config, fmt)?)?;
            let mut out = vec![path];
            if a.contours {
                let sets = contours_of(&field, &spec);
                let path = a.out.join(format!("{stem}_contours.{}", fmt.extension()));
                write_or_print(Some(&path), &encode_contours(&sets, t, &config, fmt)?)?;
                out.push(path);
            }
            Ok(out)
        })
        .collect::<Result<_, _>>()?;
    let list: String = written
        .iter()
        .flatten()
        .map(|p| format!("{}\n", p.display()))
        .collect();
    write_or_print(None, &list)
}

#[derive(Serialize)]
struct VerifyEntry {
    solution: String,
    passed: bool,
    suites: Vec<SuiteOutcome>,
}

#[derive(Serialize)]
struct VerifyDoc<'a> {
    config: &'a SuiteConfig,
    passed: bool,
    results: &'a [VerifyEntry],
}

fn verify(a: &VerifyArgs) -> Result<(), CliError> {
    let order = match a.order {
        OrderArg::Second => StencilOrder::Second,
        OrderArg::Fourth => StencilOrder::Fourth,
    };
    let scheme = FdScheme::new(a.h, 2.0, a.fd_levels, order)?;
    let cfg = SuiteConfig {
        points: a.points,
        domain: SampleDomain {
            seed: a.seed,
            ..SampleDomain::default()
        },
        scheme,
        pde_tol: a.pde_tol,
        laplace_tol: a.laplace_tol,
    };
    let targets: Vec<(String, Resolved)> = if a.all {
        PRESETS
            .iter()
            .map(|p| {
                let args = SolutionArgs {
                    preset: Some(p.name.to_string()),
                    ..Default::default()
                };
                Ok((p.name.to_string(), args.resolve()?))
            })
            .collect::<Result<_, CliError>>()?
    } else {
        let r = a.solution.resolve()?;
        let mut label = r.spec.preset.clone();
        for g in &r.spec.groups {
            label.push_str(&format!("+{g}"));
        }
        vec![(label, r)]
    };
    let results: Vec<VerifyEntry> = targets
        .par_iter()
        .map(|(name, r)| {
            let suites = run_suites(&r.solution, &cfg)?;
            Ok(VerifyEntry {
                solution: name.clone(),
                passed: suites.iter().all(|s| s.passed),
                suites,
            })
        })
        .collect::<Result<_, CliError>>()?;
    let passed = results.iter().all(|r| r.passed);
    let text = match a.format {
        ReportFormat::Json => {
            serde_json::to_string_pretty(&VerifyDoc {
                config: &cfg,
                passed,
                results: &results,
            })? + "\n"
        }
        ReportFormat::Text => report_text(&results),
    };
    write_or_print(a.out.as_deref(), &text)?;
    if passed {
        Ok(())
    } else {
        let failed: Vec<&str> = results
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.solution.as_str())
            .collect();
        Err(CliError::Verification(failed.join(", ")))
    }
}

fn report_text(results: &[VerifyEntry]) -> String {
    let mut s = String::new();
    for r in results {
        for o in &r.suites {
            let rep = &o.report;
            let order = rep
                .order_estimate
                .map_or_else(|| "-".to_string(), |o| format!("{o:.3}"));
            let levels: Vec<String> = rep.per_level.iter().map(|v| format!("{v:.3e}")).collect();
            s.push_str(&format!(
                "{:<10} {:<8} max_abs={:.3e} rms={:.3e} tol={:.0e} order={} convergence={:?} levels=[{}] {}\n",
                r.solution,
                o.name,
                rep.max_abs,
                rep.rms,
                o.tolerance,
                order,
                rep.convergence,
                levels.join(" "),
                if o.passed { "PASS" } else { "FAIL" }
            ));
        }
    }
    s
}

/// Reads a field file written by `sample` or `frames`.
pub fn read_field(path: &Path) -> Result<Field, CliError> {
    Ok(decode_field(&read_text(path)?)?.1)
}
