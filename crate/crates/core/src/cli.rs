//! Batch driver behind the `hardylog` binary.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::factor::{factorize, factorize_boundary};
use crate::grid::{HalfPlaneField, SampledFunction};
use crate::hankel::{boundedness_study, Symbol};
use crate::library;
use crate::spaces::{
    bmo_norm, bmo_plus_norm, bmoa_log_seminorm, carleson_ratio, hlog_norm, hp_norm, luxemburg_norm, Attaining,
    MusielakWeight, NormReport,
};
use crate::transforms::{boundary_value, poisson_extend, szego_project};
use crate::verify::run_suite;

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit code for a failed suite assertion.
pub const EXIT_ASSERTION: i32 = 1;
/// Exit code for unparsable input or configuration.
pub const EXIT_PARSE: i32 = 2;
/// Exit code for a violated precondition, including an empty test family.
pub const EXIT_PRECONDITION: i32 = 3;
/// Exit code for a factorization residual above tolerance.
pub const EXIT_RESIDUAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "hardylog", version, about = "Norms, factorizations and inequality sweeps for Hardy-type spaces")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Flat key=value configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Half-width L of the window.
    #[arg(long = "grid-L", global = true)]
    pub grid_l: Option<f64>,
    /// Number of samples, a power of two.
    #[arg(long = "grid-n", global = true)]
    pub grid_n: Option<usize>,
    #[arg(long = "y-min", global = true)]
    pub y_min: Option<f64>,
    #[arg(long = "y-max", global = true)]
    pub y_max: Option<f64>,
    /// Number of ladder levels.
    #[arg(long, global = true)]
    pub levels: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute one norm of a boundary function or field.
    Norm {
        #[arg(long, value_enum)]
        norm: NormKind,
        /// `function:<name>`, `field:<name>` or a columnar file.
        #[arg(long)]
        input: Option<String>,
    },
    /// Factor h = f·g and write the factors.
    Factorize {
        #[arg(long)]
        input: Option<String>,
    },
    /// Run an inequality sweep.
    Verify {
        /// One of lemma31, prop31, thm21, thm11, cr, hankel.
        suite: String,
    },
    /// Seeded Hankel-form study of a bounded symbol.
    Hankel {
        /// A bounded closed-form field, e.g. `expiz`.
        #[arg(long, default_value = "expiz")]
        symbol: String,
        #[arg(long)]
        trials: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    L1,
    Llog,
    Bmo,
    Bmoplus,
    H1,
    Hlog,
    Bmoalog,
    Carleson,
}

impl NormKind {
    fn name(self) -> &'static str {
        match self {
            NormKind::L1 => "l1",
            NormKind::Llog => "llog",
            NormKind::Bmo => "bmo",
            NormKind::Bmoplus => "bmoplus",
            NormKind::H1 => "h1",
            NormKind::Hlog => "hlog",
            NormKind::Bmoalog => "bmoalog",
            NormKind::Carleson => "carleson",
        }
    }
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        Error::Io(_) => EXIT_ASSERTION,
        _ => EXIT_PRECONDITION,
    }
}

/// Builds the configuration: defaults, then the file, then `env`, then the
/// flags.
pub fn resolve_config(common: &CommonArgs, env: impl IntoIterator<Item = (String, String)>) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &common.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read config {}: {e}", path.display())))?;
        cfg.apply_file_text(&text)?;
    }
    cfg.apply_env(env)?;
    if let Some(v) = common.grid_l {
        cfg.grid_l = v;
    }
    if let Some(v) = common.grid_n {
        cfg.grid_n = v;
    }
    if let Some(v) = common.y_min {
        cfg.y_min = v;
    }
    if let Some(v) = common.y_max {
        cfg.y_max = v;
    }
    if let Some(v) = common.levels {
        cfg.levels = v;
    }
    if let Some(v) = common.seed {
        cfg.seed = v;
    }
    if let Some(v) = &common.out {
        cfg.out = v.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Writes `contents` to a temporary file next to `path` and renames it.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// A resolved input.
pub enum Input {
    Boundary(SampledFunction),
    Field(HalfPlaneField),
}

/// Resolves `function:<name>`, `field:<name>` or a columnar file path.
pub fn load_input(spec: &str, cfg: &RunConfig) -> Result<Input> {
    if spec.is_empty() {
        return Err(Error::InvalidArgument(
            "no input given (use --input function:<name>, field:<name> or a file)".into(),
        ));
    }
    if let Some(name) = spec.strip_prefix("function:") {
        return Ok(Input::Boundary(library::boundary(name, cfg.grid()?)?));
    }
    if let Some(name) = spec.strip_prefix("field:") {
        return Ok(Input::Field(library::field(name, cfg.grid()?, &cfg.ladder()?)?));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::Parse(format!("cannot read input {spec}: {e}")))?;
    Ok(Input::Boundary(SampledFunction::from_columnar(&text)?))
}

impl Input {
    fn boundary(&self) -> Result<SampledFunction> {
        match self {
            Input::Boundary(f) => Ok(f.clone()),
            Input::Field(h) => Ok(boundary_value(h)?.function),
        }
    }

    /// The field itself, or the Poisson extension of the boundary data,
    /// projected onto non-negative frequencies first when `analytic`.
    fn field(&self, cfg: &RunConfig, analytic: bool) -> Result<HalfPlaneField> {
        match self {
            Input::Field(h) => Ok(h.clone()),
            Input::Boundary(f) if analytic => poisson_extend(&szego_project(f)?, &cfg.ladder()?),
            Input::Boundary(f) => poisson_extend(f, &cfg.ladder()?),
        }
    }
}

/// Computes the requested norm.
pub fn compute_norm(kind: NormKind, input: &Input, cfg: &RunConfig) -> Result<NormReport> {
    match kind {
        NormKind::L1 => {
            let value = input.boundary()?.integrate_abs()?;
            Ok(NormReport {
                value,
                attaining_parameter: Attaining::None,
                iterations: 0,
                tolerance: 0.0,
                bracket: None,
            })
        }
        NormKind::Llog => luxemburg_norm(&input.boundary()?, MusielakWeight::Theta),
        NormKind::Bmo => bmo_norm(&input.boundary()?),
        NormKind::Bmoplus => bmo_plus_norm(&input.boundary()?),
        NormKind::H1 => hp_norm(&input.field(cfg, false)?, 1.0),
        NormKind::Hlog => hlog_norm(&input.field(cfg, false)?),
        NormKind::Bmoalog => bmoa_log_seminorm(&input.field(cfg, true)?),
        NormKind::Carleson => carleson_ratio(&input.field(cfg, true)?),
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    #[serde(flatten)]
    body: &'a T,
    input: &'a str,
    config_hash: String,
    version: &'static str,
}

fn envelope_json<T: Serialize>(body: &T, cfg: &RunConfig) -> String {
    let mut s = serde_json::to_string_pretty(&Envelope {
        body,
        input: &cfg.input,
        config_hash: cfg.hash(),
        version: VERSION,
    })
    .expect("report serializes");
    s.push('\n');
    s
}

/// Outcome of one command: the files written and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub written: Vec<PathBuf>,
    pub code: i32,
    pub message: String,
}

pub fn cmd_norm(kind: NormKind, cfg: &RunConfig) -> Result<Outcome> {
    let input = load_input(&cfg.input, cfg)?;
    let report = compute_norm(kind, &input, cfg)?;
    let path = cfg.out.join(format!("norm_{}.json", kind.name()));
    write_atomic(&path, envelope_json(&report, cfg).as_bytes())?;
    Ok(Outcome {
        message: format!("{} = {}", kind.name(), report.value),
        written: vec![path],
        code: 0,
    })
}

pub fn cmd_factorize(cfg: &RunConfig) -> Result<Outcome> {
    let input = load_input(&cfg.input, cfg)?;
    let result = match &input {
        Input::Field(h) => factorize(h)?,
        Input::Boundary(h0) => factorize_boundary(h0, &cfg.ladder()?)?,
    };
    let summary = result.summary();
    let mut written = Vec::new();
    let report = cfg.out.join("factorization.json");
    write_atomic(&report, envelope_json(&summary, cfg).as_bytes())?;
    written.push(report);
    for (name, f) in [("f0", &result.f0), ("g0", &result.g0), ("b", &result.b)] {
        let path = cfg.out.join(format!("{name}.dat"));
        write_atomic(&path, f.to_columnar().as_bytes())?;
        written.push(path);
    }
    let ok = summary.residual <= cfg.residual_tol;
    Ok(Outcome {
        written,
        code: if ok { 0 } else { EXIT_RESIDUAL },
        message: if ok {
            format!("residual {:e}", summary.residual)
        } else {
            format!(
                "residual {:e} exceeds {:e} (min |g0| {:e}, boundary gap {:e})",
                summary.residual, cfg.residual_tol, summary.min_abs_g0, summary.boundary_gap
            )
        },
    })
}

pub fn cmd_verify(suite: &str, cfg: &RunConfig) -> Result<Outcome> {
    let report = run_suite(suite, cfg)?;
    let csv = cfg.out.join(format!("{suite}.csv"));
    let json = cfg.out.join(format!("{suite}.json"));
    write_atomic(&csv, report.to_csv().as_bytes())?;
    write_atomic(&json, report.to_json().as_bytes())?;
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.ok).map(|c| c.name.as_str()).collect();
    Ok(Outcome {
        written: vec![csv, json],
        code: if report.pass { 0 } else { EXIT_ASSERTION },
        message: if report.pass {
            format!("{suite}: pass, max ratio {:e}", report.max_ratio)
        } else {
            format!(
                "{suite}: FAIL, max ratio {:e}, limit {:?}, failed checks [{}]",
                report.max_ratio,
                report.limit,
                failed.join(", ")
            )
        },
    })
}

pub fn cmd_hankel(symbol: &str, trials: Option<usize>, cfg: &RunConfig) -> Result<Outcome> {
    let (grid, ladder) = (cfg.grid()?, cfg.ladder()?);
    let sym = Symbol {
        id: symbol.to_string(),
        b0: library::closed_form_boundary(symbol, grid)?,
        b_field: library::field(symbol, grid, &ladder)?,
    };
    let report = boundedness_study(&sym, trials.unwrap_or(cfg.trials), cfg.seed)?;
    let path = cfg.out.join(format!("hankel_{symbol}.json"));
    write_atomic(&path, envelope_json(&report, cfg).as_bytes())?;
    Ok(Outcome {
        message: match report.ratio {
            Some(r) => format!("{symbol}: ratio {r:e} over {} trials", report.trials),
            None => format!("{symbol}: degenerate symbol, ratio not defined"),
        },
        written: vec![path],
        code: 0,
    })
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, env: impl IntoIterator<Item = (String, String)>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARSE } else { 0 };
        }
    };
    let outcome = resolve_config(&cli.common, env).and_then(|mut cfg| match &cli.command {
        Command::Norm { norm, input } => {
            if let Some(i) = input {
                cfg.input = i.clone();
            }
            cmd_norm(*norm, &cfg)
        }
        Command::Factorize { input } => {
            if let Some(i) = input {
                cfg.input = i.clone();
            }
            cmd_factorize(&cfg)
        }
        Command::Verify { suite } => cmd_verify(suite, &cfg),
        Command::Hankel { symbol, trials } => cmd_hankel(symbol, *trials, &cfg),
    });
    match outcome {
        Ok(o) => {
            if o.code == 0 {
                println!("{}", o.message);
            } else {
                eprintln!("{}", o.message);
            }
            for p in &o.written {
                println!("wrote {}", p.display());
            }
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
