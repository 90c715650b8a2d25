//! Command-line front end: `list`, `gen`, `verify`, `sample`, `congruence`.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 sampling
//! exhausted.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use crate::constructions::{Construction, Family, FamilySpec, Kind, CATALOG};
use crate::exactpoly::{Polynomial, VariableNaming};
use crate::scalarfield::ScalarField;
use crate::verify::{
    self, sample_zero_set, verify_cone_symbolic, verify_congruence_numeric, verify_field_numeric,
    Check, SamplerConfig, Subject, VerificationReport, VerifyError,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "minicone", version, about = "Build and verify algebraic minimal cones and generalized helicoids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List every family in the catalog.
    List {
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Write a family's defining polynomial or height function.
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Verify minimality symbolically or numerically.
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        /// Polynomial JSON file to verify instead of a family.
        #[arg(long, conflicts_with = "family")]
        poly: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Residual tolerance for numeric mode.
        #[arg(long, default_value_t = verify::RESIDUAL_TOL)]
        tol: f64,
        /// Numeric checks; defaults depend on the subject.
        #[arg(long = "check", value_enum)]
        checks: Vec<CheckArg>,
        /// Exponents for the p_harmonic check.
        #[arg(long, value_delimiter = ',', default_value = "1.5,3,7")]
        p_exponents: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample points on the surface.
    Sample {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, conflicts_with = "family")]
        poly: Option<PathBuf>,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check P(Mz) = scale·Q(z) numerically.
    Congruence {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        /// JSON file with a `matrix` field and optionally `scale`.
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        scale: Option<f64>,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long, default_value_t = verify::FIRST_ORDER_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Option<Family>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long = "N")]
    pub order: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub mu: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct SamplingArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    /// Half-width of the sampling box.
    #[arg(long, default_value_t = 1.0)]
    pub range: f64,
}

impl SamplingArgs {
    fn config(&self) -> SamplerConfig {
        SamplerConfig::default()
            .with_seed(self.seed)
            .with_count(self.count)
            .with_range(self.range)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Human,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Symbolic,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum CheckArg {
    Harmonic,
    InfHarmonic,
    PHarmonic,
    GraphMinimal,
    LevelsetMinimal,
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::from_tag(s).ok_or_else(|| {
        let tags: Vec<&str> = CATALOG.iter().map(|i| i.family.tag()).collect();
        format!("unknown family {s:?}; expected one of {}", tags.join(", "))
    })
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Exhausted(String),
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::SamplingExhausted { .. } => CliError::Exhausted(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl FamilyArgs {
    fn spec(&self) -> Result<Option<FamilySpec>, CliError> {
        let Some(family) = self.family else {
            let stray = self.n.is_some()
                || self.order.is_some()
                || self.k.is_some()
                || self.mu.is_some()
                || self.lambda.is_some();
            return if stray {
                Err(usage("family parameters given without --family"))
            } else {
                Ok(None)
            };
        };
        let spec = FamilySpec {
            family,
            n: self.n,
            order: self.order,
            k: self.k.clone(),
            mu: self.mu.clone(),
            lambda: self.lambda,
        };
        let unused = spec.unused_fields();
        if !unused.is_empty() {
            return Err(usage(format!(
                "family {family} does not take --{}",
                unused.join(", --")
            )));
        }
        Ok(Some(spec))
    }
}

/// A resolved verification subject.
struct Target {
    subject: Subject,
    construction: Construction,
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn read_poly(path: &Path) -> Result<Polynomial, CliError> {
    Polynomial::from_json(&read_file(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn resolve(family: &FamilyArgs, poly: Option<&Path>) -> Result<Target, CliError> {
    match (family.spec()?, poly) {
        (Some(spec), None) => {
            let construction = spec.build().map_err(|e| usage(e.to_string()))?;
            Ok(Target { subject: Subject::Family(spec), construction })
        }
        (None, Some(path)) => {
            let p = read_poly(path)?;
            if p.is_zero() {
                return Err(usage("the zero polynomial has no zero set to verify"));
            }
            Ok(Target { subject: Subject::polynomial(&p), construction: Construction::Cone(p) })
        }
        (None, None) => Err(usage("give either --family or --poly")),
        (Some(_), Some(_)) => Err(usage("--family and --poly are exclusive")),
    }
}

/// Writes via a temporary sibling file and a rename, or to stdout.
fn emit(out: Option<&Path>, content: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        None => stdout
            .write_all(content.as_bytes())
            .map_err(|e| usage(format!("cannot write output: {e}"))),
        Some(path) => {
            let mut tmp = path.as_os_str().to_owned();
            tmp.push(format!(".tmp{}", std::process::id()));
            let tmp = PathBuf::from(tmp);
            std::fs::write(&tmp, content)
                .and_then(|_| std::fs::rename(&tmp, path))
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
        }
    }
}

fn with_newline(mut s: String) -> String {
    s.push('\n');
    s
}

fn cmd_list(format: Format, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let content = match format {
        Format::Json => {
            let entries: Vec<_> = CATALOG
                .iter()
                .map(|i| {
                    json!({
                        "family": i.family.tag(),
                        "source": i.source,
                        "kind": match i.kind {
                            Kind::Height => "height",
                            Kind::Cone => "cone",
                            Kind::Level => "level",
                        },
                        "params": i.params.iter().map(|p| p.flag()).collect::<Vec<_>>(),
                        "ambient_dim": i.ambient_dim,
                        "summary": i.summary,
                    })
                })
                .collect();
            with_newline(serde_json::to_string_pretty(&entries).expect("serializable"))
        }
        Format::Human | Format::Csv => CATALOG
            .iter()
            .map(|i| {
                let params: Vec<String> = i.params.iter().map(|p| format!("--{}", p.flag())).collect();
                format!(
                    "{} ({}), ambient dim {}, params [{}]: {}\n",
                    i.family.tag(),
                    i.source,
                    i.ambient_dim,
                    params.join(" "),
                    i.summary
                )
            })
            .collect(),
    };
    emit(None, &content, stdout)?;
    Ok(EXIT_PASS)
}

fn field_json(spec: &FamilySpec, f: &ScalarField) -> String {
    let v = json!({
        "family": spec,
        "nvars": f.nvars(),
        "names": VariableNaming::interleaved(f.nvars()).names(),
        "expression": f.describe(),
    });
    serde_json::to_string_pretty(&v).expect("serializable")
}

fn cmd_gen(family: &FamilyArgs, out: Option<&Path>, format: Format, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let spec = family.spec()?.ok_or_else(|| usage("gen requires --family"))?;
    let built = spec.build().map_err(|e| usage(e.to_string()))?;
    let content = match (&built, format) {
        (Construction::Cone(p), Format::Json) => p.to_json(),
        (Construction::Cone(p), _) => p.to_string(),
        (Construction::Height(f) | Construction::Level(f), Format::Json) => field_json(&spec, f),
        (Construction::Height(f) | Construction::Level(f), _) => f.describe(),
    };
    emit(out, &with_newline(content), stdout)?;
    Ok(EXIT_PASS)
}

fn default_checks(construction: &Construction) -> Vec<CheckArg> {
    match construction {
        Construction::Height(_) => vec![CheckArg::Harmonic, CheckArg::InfHarmonic, CheckArg::GraphMinimal],
        Construction::Level(_) => vec![CheckArg::Harmonic, CheckArg::InfHarmonic, CheckArg::LevelsetMinimal],
        Construction::Cone(_) => vec![CheckArg::LevelsetMinimal],
    }
}

fn report_exit(report: &VerificationReport) -> i32 {
    if report.passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    family: &FamilyArgs,
    poly: Option<&Path>,
    mode: Option<Mode>,
    sampling: &SamplingArgs,
    tol: f64,
    checks: &[CheckArg],
    p_exponents: &[f64],
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let target = resolve(family, poly)?;
    let mode = mode.unwrap_or(match target.construction {
        Construction::Cone(_) => Mode::Symbolic,
        _ => Mode::Numeric,
    });
    let report = match (mode, &target.construction) {
        (Mode::Symbolic, Construction::Cone(p)) => verify_cone_symbolic(p)?,
        (Mode::Symbolic, _) => {
            return Err(usage("symbolic mode needs a polynomial subject; use --mode numeric"))
        }
        (Mode::Numeric, construction) => {
            let field = match construction {
                Construction::Height(f) | Construction::Level(f) => f.clone(),
                Construction::Cone(p) => ScalarField::from_poly(p),
            };
            let requested = if checks.is_empty() { default_checks(construction) } else { checks.to_vec() };
            let checks: Vec<Check> = requested
                .iter()
                .map(|c| match c {
                    CheckArg::Harmonic => Check::Harmonic,
                    CheckArg::InfHarmonic => Check::InfHarmonic,
                    CheckArg::PHarmonic => Check::PHarmonic(p_exponents.to_vec()),
                    CheckArg::GraphMinimal => Check::GraphMinimal,
                    CheckArg::LevelsetMinimal => Check::LevelsetMinimal,
                })
                .collect();
            verify_field_numeric(&field, &checks, &sampling.config(), tol)?
        }
    };
    let report = report.with_subject(target.subject);
    emit(out, &with_newline(report.to_json()), stdout)?;
    Ok(report_exit(&report))
}

fn cmd_sample(
    family: &FamilyArgs,
    poly: Option<&Path>,
    sampling: &SamplingArgs,
    out: Option<&Path>,
    format: Format,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let target = resolve(family, poly)?;
    let u = target.construction.surface_function();
    let cfg = sampling.config();
    let points = sample_zero_set(&u, &cfg)?;
    let naming = VariableNaming::interleaved(u.nvars());
    let content = match format {
        Format::Csv => {
            let mut s = naming.names().join(",");
            s.push('\n');
            for p in &points {
                let row: Vec<String> = p.iter().map(|x| format!("{x:.16e}")).collect();
                s.push_str(&row.join(","));
                s.push('\n');
            }
            s
        }
        Format::Json | Format::Human => with_newline(
            serde_json::to_string_pretty(&json!({
                "subject": target.subject,
                "names": naming.names(),
                "seed": cfg.seed,
                "points": points,
            }))
            .expect("serializable"),
        ),
    };
    emit(out, &content, stdout)?;
    Ok(EXIT_PASS)
}

#[derive(Deserialize)]
struct MatrixFile {
    matrix: Vec<Vec<f64>>,
    scale: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_congruence(
    p: &Path,
    q: &Path,
    matrix: &Path,
    scale: Option<f64>,
    sampling: &SamplingArgs,
    tol: f64,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let (p, q) = (read_poly(p)?, read_poly(q)?);
    let mf: MatrixFile = serde_json::from_str(&read_file(matrix)?)
        .map_err(|e| usage(format!("{}: {e}", matrix.display())))?;
    let scale = scale.or(mf.scale).unwrap_or(1.0);
    let report = verify_congruence_numeric(&p, &q, &mf.matrix, scale, &sampling.config(), tol)?;
    emit(out, &with_newline(report.to_json()), stdout)?;
    Ok(report_exit(&report))
}

/// Parses arguments and runs one subcommand, returning the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else {
                let _ = write!(stdout, "{e}");
                EXIT_PASS
            };
        }
    };
    let result = match &cli.command {
        Command::List { format } => cmd_list(*format, stdout),
        Command::Gen { family, out, format } => cmd_gen(family, out.as_deref(), *format, stdout),
        Command::Verify { family, poly, mode, sampling, tol, checks, p_exponents, out } => cmd_verify(
            family,
            poly.as_deref(),
            *mode,
            sampling,
            *tol,
            checks,
            p_exponents,
            out.as_deref(),
            stdout,
        ),
        Command::Sample { family, poly, sampling, out, format } => {
            cmd_sample(family, poly.as_deref(), sampling, out.as_deref(), *format, stdout)
        }
        Command::Congruence { p, q, matrix, scale, sampling, tol, out } => {
            cmd_congruence(p, q, matrix, *scale, sampling, *tol, out.as_deref(), stdout)
        }
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Exhausted(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_EXHAUSTED
        }
    }
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
