//! Command-line front end for `landau_rel`.
//!
//! [`execute`] runs one invocation in-process and returns what would be
//! written to stdout/stderr together with the exit code; the binary is a thin
//! wrapper around it.

pub mod commands;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use error::CliError;
pub use output::{Cell, Format, Report, RunManifest, Table};

#[derive(Debug, Parser)]
#[command(
    name = "landau-rel",
    version,
    about = "Relativistic corrections to Landau levels in a parallel linear electric field"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy of one level, broken down by order.
    Energy(EnergyArgs),
    /// Compare every closed form with the truncated Fock-space oracle.
    Verify(VerifyArgs),
    /// Sample E(w) for every level in a box.
    Spectrum(SpectrumArgs),
    /// Pairwise crossings of the spectral lines, with clusters.
    Crossings(CrossingsArgs),
    /// First-order splitting of the w = 1 shell N, as exact rationals.
    Split(SplitArgs),
    /// Exact degeneracy groups of the unperturbed spectrum at rational w.
    Degeneracy(DegeneracyArgs),
    /// Regenerate an output from its manifest and check its checksum.
    Rerun(RerunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to FILE (plus FILE.manifest.json) instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

/// SI inputs. ε is derived from ω_z; w defaults to ω_c/ω_z.
#[derive(Debug, Clone, Default, Args)]
pub struct PhysicalArgs {
    /// Magnetic field in tesla.
    #[arg(long = "B-tesla", value_name = "B", conflicts_with = "eps")]
    pub b_tesla: Option<f64>,
    /// Field gradient k in V/m².
    #[arg(long, requires = "b_tesla", conflicts_with_all = ["omega_z", "omega_z_from_b"])]
    pub k_grad: Option<f64>,
    /// Axial angular frequency in rad/s.
    #[arg(long, requires = "b_tesla", conflicts_with = "omega_z_from_b")]
    pub omega_z: Option<f64>,
    /// Take ω_z = ω_c.
    #[arg(long = "omega-z-from-B", requires = "b_tesla")]
    pub omega_z_from_b: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    /// Multiples of ħω_z.
    Natural,
    Mev,
}

fn parse_order(s: &str) -> Result<landau_rel::Order, String> {
    let v: u8 = s.parse().map_err(|_| format!("{s:?} is not 0, 1 or 2"))?;
    landau_rel::Order::try_from(v).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct EnergyArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub nz: u32,
    /// ω_c/ω_z as a rational ("3/2", "0.5", "1e-3").
    #[arg(long)]
    pub w: Option<String>,
    /// ħω_z/(m_e c²) as a rational.
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long, default_value = "2", value_parser = parse_order)]
    pub order: landau_rel::Order,
    #[arg(long, value_enum, default_value_t = Units::Natural)]
    pub units: Units,
    /// Add the rest energy 1/ε to e0.
    #[arg(long)]
    pub rest_mass: bool,
    #[command(flatten)]
    pub physical: PhysicalArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 6)]
    pub n_max: u32,
    #[arg(long, default_value_t = 6)]
    pub nz_max: u32,
    /// Comma-separated rational frequency ratios.
    #[arg(long, value_delimiter = ',', default_value = "1/2,1,2")]
    pub w: Vec<String>,
    /// Fixed truncation dimension.
    #[arg(long, default_value_t = 16, conflicts_with = "dim_extra")]
    pub dim: usize,
    /// Per-level truncation `dim = n_z + EXTRA` instead of a fixed one.
    #[arg(long, value_name = "EXTRA")]
    pub dim_extra: Option<usize>,
    #[arg(long, default_value_t = landau_rel::OracleConfig::DEFAULT_GUARD_BAND)]
    pub guard_band: usize,
    /// Relative tolerance for e1 and e2.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub case_tol: f64,
    #[arg(long, default_value_t = 1e-14)]
    pub selection_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub moment_tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub w_lo: f64,
    #[arg(long)]
    pub w_hi: f64,
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    #[arg(long, default_value_t = 4)]
    pub n_max: u32,
    #[arg(long, default_value_t = 4)]
    pub nz_max: u32,
    #[arg(long, default_value = "1", value_parser = parse_order)]
    pub order: landau_rel::Order,
    #[arg(long)]
    pub eps: Option<String>,
    #[command(flatten)]
    pub physical: PhysicalArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CrossingsArgs {
    #[arg(long)]
    pub w_lo: f64,
    #[arg(long)]
    pub w_hi: f64,
    #[arg(long, default_value_t = 4)]
    pub n_max: u32,
    #[arg(long, default_value_t = 4)]
    pub nz_max: u32,
    #[arg(long, default_value = "1", value_parser = parse_order)]
    pub order: landau_rel::Order,
    #[arg(long)]
    pub eps: Option<String>,
    /// Clustering distance in units of ε.
    #[arg(long, default_value_t = 1e-3)]
    pub cluster_tol: f64,
    #[command(flatten)]
    pub physical: PhysicalArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SplitArgs {
    /// Shell index N = n + n_z.
    #[arg(long = "N", alias = "shell", value_name = "N")]
    pub shell: u32,
    #[arg(long, default_value = "1")]
    pub eps: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DegeneracyArgs {
    /// Rational frequency ratio "p/q".
    #[arg(long)]
    pub w: String,
    /// Drop levels above this energy.
    #[arg(long)]
    pub e_max: Option<String>,
    #[arg(long, default_value_t = 10)]
    pub n_max: u32,
    #[arg(long, default_value_t = 10)]
    pub nz_max: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RerunArgs {
    /// Manifest written next to an earlier output.
    pub manifest: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

/// What one invocation produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// `args` without any occurrence of the valued option `flag`.
fn strip_option(args: &[String], flag: &str) -> Vec<String> {
    let inline = format!("{flag}=");
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == flag {
            it.next();
        } else if !a.starts_with(&inline) {
            out.push(a.clone());
        }
    }
    out
}

/// Arguments with the program name and `--out` removed, for the manifest.
fn canonical_argv(args: &[String]) -> Vec<String> {
    strip_option(args.get(1..).unwrap_or_default(), "--out")
}

/// Runs one invocation. `args[0]` is the program name.
pub fn execute<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<String> = args
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Execution {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Execution {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            };
        }
    };
    match run(cli, &canonical_argv(&args)) {
        Ok(ex) => ex,
        Err(e) => Execution {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}

fn run(cli: Cli, argv: &[String]) -> Result<Execution, CliError> {
    let (outcome, output) = match cli.command {
        Command::Energy(a) => (commands::energy(&a)?, a.output),
        Command::Verify(a) => (commands::verify(&a)?, a.output),
        Command::Spectrum(a) => (commands::spectrum(&a)?, a.output),
        Command::Crossings(a) => (commands::crossings(&a)?, a.output),
        Command::Split(a) => (commands::split(&a)?, a.output),
        Command::Degeneracy(a) => (commands::degeneracy(&a)?, a.output),
        Command::Rerun(a) => return rerun(&a),
    };
    let manifest = outcome.report.manifest(argv, output.format)?;
    let body = outcome.report.render(&manifest)?;
    let stdout = match &output.out {
        Some(path) => {
            write_with_manifest(path, &body, &manifest)?;
            String::new()
        }
        None => body,
    };
    Ok(match outcome.failure {
        Some(msg) => Execution {
            stdout,
            stderr: msg,
            code: 1,
        },
        None => Execution {
            stdout,
            stderr: String::new(),
            code: 0,
        },
    })
}

pub fn manifest_path(path: &std::path::Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn write_with_manifest(path: &std::path::Path, body: &str, manifest: &RunManifest) -> Result<(), CliError> {
    std::fs::write(path, body)?;
    let mut m = serde_json::to_string_pretty(manifest)?;
    m.push('\n');
    std::fs::write(manifest_path(path), m)?;
    Ok(())
}

fn rerun(a: &RerunArgs) -> Result<Execution, CliError> {
    let text = std::fs::read_to_string(&a.manifest)?;
    let manifest: RunManifest =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad manifest: {e}")))?;
    if manifest.argv.first().map(String::as_str) == Some("rerun") {
        return Err(CliError::Usage("manifest refers to another rerun".into()));
    }
    let mut args = vec!["landau-rel".to_string()];
    args.extend(manifest.argv.iter().cloned());
    if let Some(out) = &a.out {
        args.push("--out".into());
        args.push(out.to_string_lossy().into_owned());
    }
    let mut ex = execute(&args);
    if ex.code == 2 {
        return Ok(ex);
    }
    let replayed = match &a.out {
        Some(out) => serde_json::from_str::<RunManifest>(&std::fs::read_to_string(manifest_path(out))?)?,
        None => {
            // Recompute the checksum from a CSV rendering of the same command.
            let mut csv_args = strip_option(&args, "--format");
            csv_args.extend(["--format".to_string(), "csv".to_string()]);
            let csv = execute(&csv_args);
            RunManifest {
                csv_sha256: output::sha256_hex(csv.stdout.as_bytes()),
                ..manifest.clone()
            }
        }
    };
    if replayed.csv_sha256 != manifest.csv_sha256 {
        ex.stderr.push_str(&format!(
            "checksum mismatch: manifest {} vs replay {}\n",
            manifest.csv_sha256, replayed.csv_sha256
        ));
        ex.code = 1;
    }
    if manifest.version != landau_rel::VERSION {
        ex.stderr.push_str(&format!(
            "note: manifest written by version {}, replayed with {}\n",
            manifest.version,
            landau_rel::VERSION
        ));
    }
    Ok(ex)
}
