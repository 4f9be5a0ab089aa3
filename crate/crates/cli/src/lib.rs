//! Command-line front end for `rician-lowsnr`: SNR sweeps, single-point
//! reports and the self-check suite.
//!
//! Exit codes: 0 success, 2 validation failure, 3 numeric failure, 4 usage error.

pub mod error;
pub mod output;
pub mod reports;
pub mod sweep;
pub mod validate;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use rician_lowsnr::onoff::ThresholdSource;
use rician_lowsnr::{ChannelSpec64, NumericConfig64};

pub use error::{CliError, CliResult, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION};
pub use output::Format;
pub use reports::LambdaMethod;
pub use sweep::{Preset, SweepMethod, SweepRequest, SweepRow};
pub use validate::{Level, ValidateOptions, ValidationReport};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "RICIAN_LOWSNR_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "rician-lowsnr",
    version,
    about = "Low-SNR capacity of MRC Rician fading channels with CSI at both ends"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Capacity and rate curves over an SNR grid.
    Sweep(SweepArgs),
    /// Water level for one SNR, with its power-constraint residual.
    SolveLambda(SolveArgs),
    /// On-off scheme at one SNR.
    Onoff(OnOffArgs),
    /// Energy per nat over an SNR grid.
    Energy(EnergyArgs),
    /// Run the built-in checks and emit a JSON report.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    /// Rician factor K >= 0.
    #[arg(long = "K", value_name = "K")]
    pub k: Option<f64>,
    /// Number of receive branches L >= 1.
    #[arg(long = "L", value_name = "L")]
    pub l: Option<u32>,
    /// Mean gain per branch.
    #[arg(long)]
    pub omega: Option<f64>,
}

impl ChannelArgs {
    fn resolve(&self, fallback: (f64, u32, f64)) -> CliResult<ChannelSpec64> {
        let k = self.k.unwrap_or(fallback.0);
        let l = self.l.unwrap_or(fallback.1);
        let omega = self.omega.unwrap_or(fallback.2);
        ChannelSpec64::new(k, l, omega).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db_stop: Option<f64>,
    #[arg(long)]
    pub snr_db_step: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SnrArgs {
    /// Average SNR in dB.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "snr")]
    pub snr_db: Option<f64>,
    /// Average SNR, linear.
    #[arg(long)]
    pub snr: Option<f64>,
}

impl SnrArgs {
    fn linear(&self) -> CliResult<f64> {
        match (self.snr, self.snr_db) {
            (Some(x), None) => Ok(x),
            (None, Some(db)) => Ok(10f64.powf(db / 10.0)),
            _ => Err(CliError::Usage(
                "give exactly one of --snr or --snr-db".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Comma-separated methods; defaults to the preset's or exact,asymptotic-simple.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub methods: Option<Vec<SweepMethod>>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub mc_samples: usize,
    /// Report capacities in bits rather than nats.
    #[arg(long)]
    pub bits: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub snr: SnrArgs,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: LambdaMethod,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ThresholdArg {
    Exact,
    Asymptotic,
}

#[derive(Debug, Clone, Args)]
pub struct OnOffArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub snr: SnrArgs,
    #[arg(long, value_enum, default_value = "exact")]
    pub threshold: ThresholdArg,
    /// Also simulate this many fading blocks (>= 10000).
    #[arg(long)]
    pub mc_samples: Option<usize>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EnergyArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value = "fast")]
    pub level: Level,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Debug hook: multiply Omega by this factor in the moment check.
    #[arg(long, hide = true, default_value_t = 1.0)]
    pub debug_omega_scale: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

const DEFAULT_CHANNEL: (f64, u32, f64) = (1.0, 3, 1.0);
const DEFAULT_GRID: (f64, f64, f64) = (-30.0, 0.0, 1.0);

fn grid_of(args: &GridArgs) -> (f64, f64, f64) {
    (
        args.snr_db_start.unwrap_or(DEFAULT_GRID.0),
        args.snr_db_stop.unwrap_or(DEFAULT_GRID.1),
        args.snr_db_step.unwrap_or(DEFAULT_GRID.2),
    )
}

/// Builds the sweep request; preset values are overridden by explicit flags.
pub fn sweep_request(args: &SweepArgs) -> CliResult<SweepRequest> {
    let (fallback, preset_methods) = match args.preset {
        Some(p) => {
            let (k, l, omega, methods) = p.parameters();
            ((k, l, omega), methods)
        }
        None => (
            DEFAULT_CHANNEL,
            vec![SweepMethod::Exact, SweepMethod::AsymptoticSimple],
        ),
    };
    let (start, stop, step) = grid_of(&args.grid);
    let mut methods = args.methods.clone().unwrap_or(preset_methods);
    methods.sort();
    methods.dedup();
    let req = SweepRequest {
        spec: args.channel.resolve(fallback)?,
        snr_db_start: start,
        snr_db_stop: stop,
        snr_db_step: step,
        methods,
        seed: args.seed,
        mc_samples: args.mc_samples,
        bits: args.bits,
    };
    req.validate()?;
    Ok(req)
}

fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Usage(format!("{THREADS_ENV}={v:?} must be a positive integer"))
        })?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Usage(e.to_string()))
}

/// Executes a parsed command, writing results to `stdout` and notes to `stderr`.
pub fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let cfg = NumericConfig64::default();
    let pool = thread_pool()?;
    match cli.command {
        Command::Sweep(args) => {
            let req = sweep_request(&args)?;
            if let Some(p) = args.preset {
                writeln!(stderr, "{}", p.metadata())?;
            }
            let rows = pool.install(|| sweep::run_sweep(&req, &cfg))?;
            let out = output::sink(args.output.out.as_deref(), stdout)?;
            output::write_rows(&rows, args.output.format, out)?;
        }
        Command::SolveLambda(args) => {
            let spec = args.channel.resolve(DEFAULT_CHANNEL)?;
            let report = reports::lambda_report(&spec, args.snr.linear()?, args.method, &cfg)?;
            let out = output::sink(args.output.out.as_deref(), stdout)?;
            output::write_rows(&[report], args.output.format, out)?;
        }
        Command::Onoff(args) => {
            let spec = args.channel.resolve(DEFAULT_CHANNEL)?;
            let source = match args.threshold {
                ThresholdArg::Exact => ThresholdSource::ExactLambda,
                ThresholdArg::Asymptotic => ThresholdSource::AsymptoticLambda,
            };
            let mc = args.mc_samples.map(|n| (args.seed, n));
            let report = reports::onoff_report(&spec, args.snr.linear()?, source, mc, &cfg)?;
            let out = output::sink(args.output.out.as_deref(), stdout)?;
            output::write_rows(&[report], args.output.format, out)?;
        }
        Command::Energy(args) => {
            let spec = args.channel.resolve(DEFAULT_CHANNEL)?;
            let (start, stop, step) = grid_of(&args.grid);
            let grid_req = SweepRequest {
                spec,
                snr_db_start: start,
                snr_db_stop: stop,
                snr_db_step: step,
                methods: vec![SweepMethod::Energy],
                seed: 0,
                mc_samples: 0,
                bits: false,
            };
            grid_req.validate()?;
            let rows = pool.install(|| reports::energy_rows(&spec, &grid_req.grid_db(), &cfg))?;
            let out = output::sink(args.output.out.as_deref(), stdout)?;
            output::write_rows(&rows, args.output.format, out)?;
        }
        Command::Validate(args) => {
            let opts = ValidateOptions {
                level: args.level,
                seed: args.seed,
                omega_scale: args.debug_omega_scale,
            };
            let report = pool.install(|| validate::run_validation(&opts, &cfg))?;
            let mut out = output::sink(args.out.as_deref(), stdout)?;
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
            out.flush()?;
            if !report.passed {
                let names: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.name.as_str())
                    .collect();
                return Err(CliError::Validation(names.join(", ")));
            }
        }
    }
    Ok(())
}

/// Parses `args` and runs; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
