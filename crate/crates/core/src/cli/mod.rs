mod commands;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wormhole_dirac::geometry::{Family, MeshFormat};
use wormhole_dirac::nu::SqrtBranch;
use wormhole_dirac::spectra::{LsvCoupling, TauSector};
use wormhole_dirac::verify::Suite;
use wormhole_dirac::{Error, C64};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_COMPUTATION: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "wormhole-dirac", version, about = "Dirac spectra on constant-curvature wormhole surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Surface mesh of a meridian profile as OBJ or CSV.
    Mesh(MeshArgs),
    /// Table of energy pairs over a range of quantum numbers.
    Spectrum(SpectrumArgs),
    /// Sampled upper and lower spinor components.
    Wavefunction(WavefunctionArgs),
    /// Run a verification suite and print a JSON report.
    Verify(VerifyArgs),
    /// Derived parameters and quantization residual of a Nikiforov-Uvarov problem.
    Nu(NuArgs),
}

#[derive(Args, Debug)]
struct ProfileArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    r: f64,
    /// b2, b1, b or d depending on the family.
    #[arg(long, required_unless_present = "phi")]
    scale: Option<f64>,
    /// Elliptic only: sets scale = r cos(phi).
    #[arg(long, conflicts_with = "scale", allow_hyphen_values = true)]
    phi: Option<f64>,
    /// Spherical only: phase shift of the cosine profile.
    #[arg(long, allow_hyphen_values = true)]
    phase: Option<f64>,
}

#[derive(Args, Debug)]
struct CouplingArgs {
    /// Coupling parameter, e.g. -0.5 or 0.5.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "lambda", conflicts_with_all = ["lambda", "kdb21", "b0"])]
    tau: Option<C64>,
    /// Alternative to --tau: tau = -i lambda kdb21 b0.
    #[arg(long, allow_hyphen_values = true, requires_all = ["kdb21", "b0"])]
    lambda: Option<C64>,
    #[arg(long, allow_hyphen_values = true, requires_all = ["lambda", "b0"])]
    kdb21: Option<C64>,
    #[arg(long, allow_hyphen_values = true, requires_all = ["lambda", "kdb21"])]
    b0: Option<C64>,
}

impl CouplingArgs {
    fn tau(&self) -> C64 {
        match (self.tau, self.lambda, self.kdb21, self.b0) {
            (Some(t), ..) => t,
            (None, Some(lambda), Some(kdb21), Some(b0)) => LsvCoupling { lambda, kdb21, b0 }.tau(),
            _ => unreachable!("clap enforces one coupling form"),
        }
    }

    fn sector(&self) -> Result<TauSector, Error> {
        TauSector::from_tau(self.tau())
    }
}

#[derive(Args, Debug)]
struct MeshArgs {
    #[command(flatten)]
    profile: ProfileArgs,
    #[arg(long)]
    nu: usize,
    #[arg(long)]
    nv: usize,
    #[arg(long, default_value = "obj")]
    format: MeshFormat,
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
    /// Omit the OBJ comment header.
    #[arg(long)]
    no_meta: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    profile: ProfileArgs,
    #[command(flatten)]
    coupling: CouplingArgs,
    /// 1..4 or all (hyperbolic, elliptic); paper, nu or all (beltrami).
    #[arg(long, default_value = "all")]
    class: String,
    #[arg(long)]
    n_max: usize,
    /// Comma-separated list of ell values, e.g. -1,0,1.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    ell_list: Vec<i64>,
    #[arg(long = "M", allow_hyphen_values = true)]
    mass: f64,
    #[arg(long, default_value = "csv")]
    format: TableFormat,
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EnergySign {
    Plus,
    Minus,
}

#[derive(Args, Debug)]
struct WavefunctionArgs {
    #[command(flatten)]
    profile: ProfileArgs,
    #[command(flatten)]
    coupling: CouplingArgs,
    /// 1..4 (hyperbolic, elliptic); paper or nu (beltrami, default nu).
    #[arg(long)]
    class: Option<String>,
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    ell: i64,
    #[arg(long = "M", allow_hyphen_values = true)]
    mass: f64,
    #[arg(long)]
    samples: usize,
    /// Which energy of the +- pair to use.
    #[arg(long, default_value = "plus")]
    sign: EnergySign,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    c1: C64,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    c2: C64,
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: Suite,
    /// Overrides every per-check tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Report only failing checks (counts stay complete).
    #[arg(long)]
    failures_only: bool,
}

#[derive(Args, Debug)]
struct NuArgs {
    #[arg(long, allow_hyphen_values = true)]
    d1: C64,
    #[arg(long, allow_hyphen_values = true)]
    d2: C64,
    #[arg(long, allow_hyphen_values = true)]
    d3: C64,
    #[arg(long, allow_hyphen_values = true)]
    z1: C64,
    #[arg(long, allow_hyphen_values = true)]
    z2: C64,
    #[arg(long, allow_hyphen_values = true)]
    z3: C64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "principal")]
    branch: SqrtBranch,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_)
            | Error::TauOutOfSector(_)
            | Error::UnsupportedFamily(_)
            | Error::EmptyDomain(_)
            | Error::OutOfDomain { .. } => EXIT_VALIDATION,
            _ => EXIT_COMPUTATION,
        };
        Failure { code, message: e.to_string() }
    }
}

impl Failure {
    fn validation(msg: impl Into<String>) -> Self {
        Failure { code: EXIT_VALIDATION, message: msg.into() }
    }

    fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        Failure { code: EXIT_COMPUTATION, message: format!("cannot write {}: {e}", path.display()) }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("WORMHOLE_DIRAC_THREADS") else { return Ok(()) };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::validation(format!("WORMHOLE_DIRAC_THREADS must be a positive integer, got '{raw}'"))
    })?;
    // a second initialisation in the same process is harmless
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Mesh(a) => commands::mesh(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Wavefunction(a) => commands::wavefunction(a),
        Command::Verify(a) => commands::verify(a),
        Command::Nu(a) => commands::nu(a),
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
