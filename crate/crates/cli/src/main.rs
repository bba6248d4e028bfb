//! `barrierclock` command-line front end.
//!
//! Exit codes: 0 success, 1 failed verification, 2 invalid input.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod parse;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

const AFTER_HELP: &str = "\
Units: hbar = m = 1 unless --hbar/--mass are given.
Floats are written with 17 significant digits; CSV uses ',' and LF.
Undefined channel times are empty CSV cells (null in JSON) with a code in
the `reason` column: tau_R:reflection_vanishes or tau_T:transmission_vanishes.
BARRIERCLOCK_THREADS caps the number of worker threads.
Exit codes: 0 ok, 1 verification failure, 2 invalid input.";

#[derive(Parser, Debug)]
#[command(name = "barrierclock", version, about = "Complex traversal times and clock simulations for 1D barriers", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Amplitudes, tau_T, tau_R, tau_d, tau_g and opaque-limit references at
    /// one energy, as JSON.
    Times(TimesArgs),
    /// Times over a grid of energies, widths or heights. Columns: the swept
    /// parameter, energy, transmission, t_re, t_im, tau_T_re, tau_T_im,
    /// tau_R_re, tau_R_im, tau_d, tau_g, w_T, w_R, reason.
    Sweep(SweepArgs),
    /// Pointwise channel density. Columns: x, re, im, reason.
    Density(DensityArgs),
    /// Larmor clock. Columns: omega_L or width, tau_y_re, tau_z,
    /// in_plane_angle, out_of_plane, norm.
    Clock(ClockArgs),
    /// Gaussian von Neumann pointer. Columns: g0 or sigma, dQ, dP,
    /// dQ_over_g0, dP_2sigma2_over_g0, norm.
    Pointer(PointerArgs),
    /// Seeded invariant and oracle suite, one JSON report per line with
    /// fields quantity, primary, oracle, abs_error, rel_error, tolerance,
    /// relative, pass.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ProfileArgs {
    /// Rectangular barrier of height V0 on [-d/2, d/2].
    #[arg(long, value_name = "V0,d", conflicts_with = "profile")]
    pub barrier: Option<String>,
    /// JSON file: an array of {"x_left","x_right","V"} or {"V0","d"}.
    #[arg(long, value_name = "FILE")]
    pub profile: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
}

#[derive(Args, Debug, Clone)]
pub struct EnergyArgs {
    /// Incident energy.
    #[arg(long, conflicts_with = "energy_frac")]
    pub energy: Option<f64>,
    /// Incident energy as a fraction of the highest potential.
    #[arg(long)]
    pub energy_frac: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct RegionArg {
    /// Region `x1:x2`; defaults to the support of the profile.
    #[arg(long, value_name = "X1:X2", allow_hyphen_values = true)]
    pub region: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to FILE instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Also write a whitespace-separated plot-data file.
    #[arg(long, value_name = "FILE")]
    pub plot_data: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TimesArgs {
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[command(flatten)]
    pub energy: EnergyArgs,
    #[command(flatten)]
    pub region: RegionArg,
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    Energy,
    EnergyFrac,
    /// Barrier width; needs --barrier.
    D,
    /// Barrier height; needs --barrier.
    #[value(name = "V0")]
    V0,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[command(flatten)]
    pub energy: EnergyArgs,
    #[command(flatten)]
    pub region: RegionArg,
    #[arg(long, value_enum)]
    pub param: SweepParam,
    /// `start:stop:count`.
    #[arg(long, value_name = "START:STOP:COUNT", allow_hyphen_values = true)]
    pub range: String,
    /// Geometric spacing.
    #[arg(long)]
    pub log: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[command(flatten)]
    pub energy: EnergyArgs,
    /// T, R or d (dwell).
    #[arg(long, default_value = "T")]
    pub channel: String,
    #[arg(long, value_name = "START:STOP:COUNT", allow_hyphen_values = true)]
    pub xrange: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ClockArgs {
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[command(flatten)]
    pub energy: EnergyArgs,
    #[command(flatten)]
    pub region: RegionArg,
    /// Post-selected channel, T or R.
    #[arg(long, default_value = "T")]
    pub channel: String,
    /// Spin quantum number (half-integer).
    #[arg(long, default_value_t = 0.5)]
    pub spin: f64,
    /// Larmor frequency.
    #[arg(long, default_value_t = 1e-4, conflicts_with = "omega_sweep")]
    pub omega: f64,
    #[arg(long, value_name = "START:STOP:COUNT")]
    pub omega_sweep: Option<String>,
    /// Squeezed initial state with this Delta S_z.
    #[arg(long, conflicts_with = "squeeze_sweep")]
    pub squeeze: Option<f64>,
    #[arg(long, value_name = "START:STOP:COUNT", conflicts_with = "omega_sweep")]
    pub squeeze_sweep: Option<String>,
    #[arg(long)]
    pub log: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct PointerArgs {
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[command(flatten)]
    pub energy: EnergyArgs,
    #[command(flatten)]
    pub region: RegionArg,
    #[arg(long, default_value = "T")]
    pub channel: String,
    /// Coupling strength.
    #[arg(long, default_value_t = 1e-4, conflicts_with = "g0_sweep")]
    pub g0: f64,
    #[arg(long, value_name = "START:STOP:COUNT")]
    pub g0_sweep: Option<String>,
    /// Initial pointer position spread.
    #[arg(long, default_value_t = 1.0, conflicts_with = "sigma_sweep")]
    pub sigma: f64,
    #[arg(long, value_name = "START:STOP:COUNT", conflicts_with = "g0_sweep")]
    pub sigma_sweep: Option<String>,
    #[arg(long)]
    pub log: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = barrierclock::verify::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = barrierclock::verify::DEFAULT_CASES)]
    pub cases: usize,
    /// Replace every tolerance by this value.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Multiply every tolerance by this factor.
    #[arg(long, default_value_t = 1.0)]
    pub tolerance_scale: f64,
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

/// Failure of a command, mapped onto the exit code.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Verification(String),
}

impl From<barrierclock::Error> for CliError {
    fn from(e: barrierclock::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("BARRIERCLOCK_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Input(format!("BARRIERCLOCK_THREADS must be a positive integer, got '{v}'")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Input(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = thread_pool().and_then(|pool| {
        pool.install(|| match cli.command {
            Command::Times(a) => commands::times(a),
            Command::Sweep(a) => commands::sweep(a),
            Command::Density(a) => commands::density(a),
            Command::Clock(a) => commands::clock(a),
            Command::Pointer(a) => commands::pointer(a),
            Command::Verify(a) => commands::verify(a),
        })
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verification(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
